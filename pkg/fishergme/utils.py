import logging
import os
from functools import reduce

import numpy as np

logger = logging.getLogger(__name__)

utils_settings = {
    'EIG_METHOD': os.getenv('FISHERGME_EIG_METHOD', 'jacobi'),  # 'jacobi' or 'lapack'
    'JACOBI_MAX_SWEEPS': 100,
    'JACOBI_TOL': 1.e-13,  # off-diagonal Frobenius norm at convergence
    'HERMITIAN_TOL': 1.e-12,
    'TRACE_TOL': 1.e-12,
    'PSD_TOL': 1.e-10,
    'NORM_TOL': 1.e-10,
    'SUPPORT_EPS': 1.e-12,  # cutoff on lambda_k + lambda_l in the spectral QFI
}


class DimensionMismatchError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class InvalidStateError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    pass


def prod(values):
    return reduce(lambda v1, v2: v1 * v2, values, 1)


def as_matrix(obj):
    """
    Returns the dense complex array behind `obj`: numpy arrays are converted, objects
    exposing `matrix` (density matrices) or `total` (collective observables) are unwrapped.
    """
    if hasattr(obj, 'total'):
        obj = obj.total
    elif hasattr(obj, 'matrix'):
        obj = obj.matrix
    m = np.asarray(obj, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError('expected a square matrix, got shape %s' % (m.shape,))
    return m


def as_unit_vector(psi, tol=None):
    """
    Converts `psi` to a flat complex vector and checks its normalization.

    :param psi: array-like state vector
    :param tol: (default `NORM_TOL`) admitted deviation of the norm from 1
    :return: 1-d complex numpy array
    """
    tol = utils_settings['NORM_TOL'] if tol is None else tol
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(v)
    if abs(norm - 1.) > tol:
        raise InvalidStateError('state vector is not normalized: |psi| = %.3e' % norm)
    return v


def clamp_nonnegative(value, tol, what='value'):
    """
    Clamps round-off negatives within `tol` to zero; larger negatives are errors.
    """
    if value >= 0.:
        return value
    if value >= -tol:
        logger.debug('clamping %s %.3e to zero', what, value)
        return 0.
    raise ArithmeticError('%s is negative beyond round-off: %.3e' % (what, value))


def bisect_crossing(fn, lo, hi, tol=1.e-6, max_iter=200):
    """
    Bisection on a function that is non-positive at `lo` and positive at `hi`.
    A zero value counts as non-positive, so ties end up on the `lo` side.

    :param fn: callable float -> float
    :param lo: left end of the bracket, fn(lo) <= 0
    :param hi: right end of the bracket, fn(hi) > 0
    :param tol: final bracket width
    :param max_iter: iteration cap
    :return: a tuple (lo, hi, iterations) with hi - lo <= tol
    """
    iterations = 0
    while hi - lo > tol and iterations < max_iter:
        mid = .5 * (lo + hi)
        if fn(mid) > 0.:
            hi = mid
        else:
            lo = mid
        iterations += 1
    return lo, hi, iterations
