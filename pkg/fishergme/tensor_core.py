"""
Dense complex linear algebra used by the rest of the package: Kronecker products, partial traces over
tripartite (or generic multipartite) systems, Hermitian eigendecomposition and singular values.

All matrices are `numpy.ndarray` of dtype complex128; functions never modify their inputs.
"""
import logging
from collections import namedtuple
from itertools import combinations

import numpy as np

from fishergme.utils import utils_settings, prod, as_matrix, DimensionMismatchError, NotHermitianError, \
    ConvergenceError

logger = logging.getLogger(__name__)

SUBSYSTEMS = ('a', 'b', 'c')


class DimensionSpec(namedtuple('DimensionSpec', ['d_a', 'd_b', 'd_c'])):
    """
    Local dimensions of the three subsystems a, b and c.
    """
    __slots__ = ()

    def __new__(cls, d_a, d_b=None, d_c=None):
        if d_b is None and d_c is None:
            d_b = d_c = d_a  # DimensionSpec(d) is the uniform d x d x d system
        if d_b is None or d_c is None:
            raise ValueError('either one or three local dimensions must be given')
        dims = [int(d) for d in (d_a, d_b, d_c)]
        if any(d < 2 for d in dims):
            raise ValueError('local dimensions must be >= 2, got %s' % dims)
        return super().__new__(cls, *dims)

    @property
    def total(self):
        return self.d_a * self.d_b * self.d_c

    @property
    def is_uniform(self):
        return self.d_a == self.d_b == self.d_c

    def local(self, keep):
        return [self[SUBSYSTEMS.index(s)] for s in keep]

    def __str__(self):
        return '%dx%dx%d' % self


Spectrum = namedtuple('Spectrum', ['eigenvalues', 'eigenvectors'])
Spectrum.__doc__ = 'Eigenvalues in descending order and the matching orthonormal eigenvectors (columns).'


def kron(*matrices):
    """
    Kronecker product of one or more matrices (associative, left to right).
    """
    res = np.ones((1, 1), dtype=np.complex128)
    for m in matrices:
        res = np.kron(res, np.asarray(m, dtype=np.complex128))
    return res


def is_hermitian(m, tol=None):
    tol = utils_settings['HERMITIAN_TOL'] if tol is None else tol
    m = np.asarray(m)
    return np.max(np.abs(m - m.conj().T), initial=0.) <= tol


def ptrace(rho, local_dims, keep):
    """
    Partial trace on a multipartite system.

    :param rho: square matrix of size prod(local_dims)
    :param local_dims: list of local dimensions
    :param keep: indices of the subsystems that are kept (any order, result follows the original order)
    :return: reduced matrix over the kept subsystems
    """
    rho = as_matrix(rho)
    local_dims = [int(d) for d in local_dims]
    n = len(local_dims)
    if rho.shape[0] != prod(local_dims):
        raise DimensionMismatchError('matrix of size %d does not match local dimensions %s'
                                     % (rho.shape[0], local_dims))
    keep = sorted(set(keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError('subsystem indices %s out of range for %d parties' % (keep, n))

    letters = 'abcdefghijklmnopqrstuvwxyz'
    rows = letters[:n]
    cols = ''.join(rows[i] if i not in keep else letters[n + i] for i in range(n))
    out = ''.join(rows[i] for i in keep) + ''.join(cols[i] for i in keep)
    reduced = np.einsum('%s%s->%s' % (rows, cols, out), rho.reshape(local_dims + local_dims))
    d_keep = prod([local_dims[i] for i in keep])
    return reduced.reshape(d_keep, d_keep)


def partial_trace(rho, dims, keep):
    """
    Reduced state of a tripartite matrix.

    :param rho: matrix (or `DensityMatrix`) of size `dims.total`
    :param dims: `DimensionSpec`
    :param keep: subsystems to keep, as an iterable of labels among 'a', 'b', 'c' (e.g. 'ab' or ['a'])
    :return: reduced matrix
    """
    unknown = set(keep) - set(SUBSYSTEMS)
    if unknown:
        raise ValueError('unknown subsystem labels %s' % sorted(unknown))
    return ptrace(rho, list(dims), [SUBSYSTEMS.index(s) for s in keep])


def permute_subsystems(rho, local_dims, order):
    """
    Reorders the tensor factors of `rho`.

    :param rho: matrix over the factors with dimensions `local_dims` (in this order)
    :param local_dims: list of local dimensions of the factors of `rho`
    :param order: `order[i]` is the index (in `rho`) of the factor that goes to position i
    :return: the permuted matrix
    """
    rho = as_matrix(rho)
    n = len(local_dims)
    if sorted(order) != list(range(n)):
        raise ValueError('%s is not a permutation of %d factors' % (order, n))
    axes = list(order) + [n + i for i in order]
    total = prod(local_dims)
    return rho.reshape(list(local_dims) * 2).transpose(axes).reshape(total, total)


def _off_norm(a):
    return np.linalg.norm(a - np.diag(np.diag(a)))


def _jacobi(m, max_sweeps, tol):
    """
    Cyclic Jacobi method for complex Hermitian matrices. Each rotation first removes the phase of the
    pivot a_pq and then applies the real symmetric rotation that annihilates it.
    """
    a = m.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1., np.linalg.norm(a))
    threshold = tol * scale
    skip = 1.e-3 * threshold / n

    for sweep in range(max_sweeps):
        if _off_norm(a) <= threshold:
            logger.debug('jacobi converged after %d sweeps (n=%d)', sweep, n)
            return a.diagonal().real.copy(), v
        for p, q in combinations(range(n), 2):
            apq = a[p, q]
            abs_apq = abs(apq)
            if abs_apq <= skip:
                continue
            phase = apq.conjugate() / abs_apq  # e^{-i phi}
            theta = (a[q, q].real - a[p, p].real) / (2. * abs_apq)
            t = (1. if theta >= 0. else -1.) / (abs(theta) + np.sqrt(theta * theta + 1.))
            c = 1. / np.sqrt(t * t + 1.)
            s = t * c
            g = np.array([[c, s], [-s * phase, c * phase]])
            idx = [p, q]
            a[:, idx] = a[:, idx] @ g
            a[idx, :] = g.conj().T @ a[idx, :]
            v[:, idx] = v[:, idx] @ g
            a[p, q] = a[q, p] = 0.
            a[p, p], a[q, q] = a[p, p].real, a[q, q].real

    if _off_norm(a) <= threshold:
        return a.diagonal().real.copy(), v
    raise ConvergenceError('jacobi did not converge in %d sweeps (off-diagonal norm %.3e)'
                           % (max_sweeps, _off_norm(a)))


def hermitian_eig(m, method=None):
    """
    Eigendecomposition of a Hermitian matrix.

    :param m: square Hermitian matrix (or object with `matrix`/`total`)
    :param method: (default `utils_settings['EIG_METHOD']`) 'jacobi' or 'lapack'
    :return: `Spectrum` with eigenvalues in descending order
    """
    m = as_matrix(m)
    deviation = np.max(np.abs(m - m.conj().T), initial=0.)
    if deviation > utils_settings['HERMITIAN_TOL'] * max(1., np.max(np.abs(m), initial=0.)):
        raise NotHermitianError('matrix is not Hermitian: max |M - M^dagger| = %.3e' % deviation)
    method = method or utils_settings['EIG_METHOD']
    if method == 'jacobi':
        values, vectors = _jacobi(m, utils_settings['JACOBI_MAX_SWEEPS'], utils_settings['JACOBI_TOL'])
    elif method == 'lapack':
        values, vectors = np.linalg.eigh(m)
    else:
        raise ValueError('unknown eigensolver %s' % method)
    order = np.argsort(values)[::-1]
    return Spectrum(values[order], vectors[:, order])


def reconstruct(spectrum):
    v = spectrum.eigenvectors
    return (v * spectrum.eigenvalues) @ v.conj().T


def singular_values(m):
    """
    Singular values of a (possibly rectangular) complex matrix, in decreasing order.
    """
    return np.linalg.svd(np.asarray(m, dtype=np.complex128), compute_uv=False)
