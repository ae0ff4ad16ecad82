"""
Quantum Fisher information of a state with respect to a fixed observable, in the normalization
F(rho, A) = (1/4) tr(rho L^2), so that for pure states F equals the variance of A.
"""
import logging
from collections import namedtuple
from enum import Enum

import numpy as np

from fishergme.tensor_core import hermitian_eig, is_hermitian
from fishergme.utils import utils_settings, as_matrix, as_unit_vector, clamp_nonnegative, \
    DimensionMismatchError, NotHermitianError, InvalidStateError

logger = logging.getLogger(__name__)


class QfiMethod(Enum):
    SPECTRAL = 'spectral'
    PURE_VARIANCE = 'pure-variance'
    WHITE_NOISE = 'white-noise-closed-form'


class QfiValue(namedtuple('QfiValue', ['value', 'method'])):
    __slots__ = ()

    def __float__(self):
        return float(self.value)


class SldOperator(namedtuple('SldOperator', ['L'])):
    """
    Symmetric logarithmic derivative, i[rho, A] = (L rho + rho L) / 2 on the support of rho.
    """
    __slots__ = ()

    def fisher(self, rho):
        """
        :return: (1/4) tr(rho L^2)
        """
        rho = as_matrix(rho)
        return .25 * np.trace(rho @ self.L @ self.L).real

    def residual(self, rho, a):
        """
        Max-norm of i[rho, A] - (L rho + rho L) / 2.
        """
        rho, a = as_matrix(rho), as_matrix(a)
        lhs = 1.j * (rho @ a - a @ rho)
        rhs = .5 * (self.L @ rho + rho @ self.L)
        return np.max(np.abs(lhs - rhs))


def _check_observable(rho, a):
    if a.shape != rho.shape:
        raise DimensionMismatchError('observable of size %d for a state of size %d' % (a.shape[0], rho.shape[0]))
    if not is_hermitian(a, utils_settings['HERMITIAN_TOL'] * max(1., np.max(np.abs(a), initial=0.))):
        raise NotHermitianError('observable is not Hermitian: max |A - A^dagger| = %.3e'
                                % np.max(np.abs(a - a.conj().T)))


def state_spectrum(rho, spectrum=None):
    trace = np.trace(rho)
    if abs(trace - 1.) > utils_settings['PSD_TOL']:
        raise InvalidStateError('trace must be 1: |tr(rho) - 1| = %.3e' % abs(trace - 1.))
    if spectrum is None:
        spectrum = hermitian_eig(rho)
    if spectrum.eigenvalues[-1] < -utils_settings['PSD_TOL']:
        raise InvalidStateError('state is not positive semidefinite: min eigenvalue %.3e'
                                % spectrum.eigenvalues[-1])
    return spectrum


def _spectral_weights(eigenvalues, eps):
    lk, ll = eigenvalues[:, None], eigenvalues[None, :]
    total = lk + ll
    support = total > eps
    return lk, ll, total, support


def qfi_spectral(rho, a, spectrum=None):
    """
    Spectral formula F = sum_{k,l: lambda_k + lambda_l > eps} (lambda_k - lambda_l)^2 / (2 (lambda_k + lambda_l))
    |<k|A|l>|^2.

    :param rho: density matrix (`DensityMatrix` or array)
    :param a: observable (`CollectiveObservable` or array)
    :param spectrum: (optional) precomputed `Spectrum` of `rho`
    :return: `QfiValue`
    """
    rho, a = as_matrix(rho), as_matrix(a)
    _check_observable(rho, a)
    spectrum = state_spectrum(rho, spectrum)
    lam, v = spectrum.eigenvalues, spectrum.eigenvectors
    lk, ll, total, support = _spectral_weights(lam, utils_settings['SUPPORT_EPS'])
    weights = np.zeros_like(total)
    weights[support] = (lk - ll)[support] ** 2 / (2. * total[support])
    a_eig = v.conj().T @ a @ v
    value = float(np.sum(weights * np.abs(a_eig) ** 2))
    value = clamp_nonnegative(value, utils_settings['SUPPORT_EPS'], 'QFI')
    return QfiValue(value, QfiMethod.SPECTRAL)


def variance(state, a):
    """
    <A^2> - <A>^2 on a state vector or a density matrix.
    """
    a = as_matrix(a)
    state = np.asarray(getattr(state, 'matrix', state), dtype=np.complex128)
    if state.ndim == 1 or 1 in state.shape:
        psi = state.reshape(-1)
        if psi.shape[0] != a.shape[0]:
            raise DimensionMismatchError('vector of size %d for an observable of size %d'
                                         % (psi.shape[0], a.shape[0]))
        a_psi = a @ psi
        return (np.vdot(a_psi, a_psi) - np.vdot(psi, a_psi) ** 2).real
    rho = as_matrix(state)
    if rho.shape != a.shape:
        raise DimensionMismatchError('observable of size %d for a state of size %d' % (a.shape[0], rho.shape[0]))
    mean = np.trace(rho @ a).real
    return np.trace(rho @ a @ a).real - mean ** 2


def qfi_pure(psi, a):
    """
    For a pure state the QFI is the variance of the observable.

    :param psi: unit vector
    :param a: observable
    :return: `QfiValue`
    """
    psi = as_unit_vector(psi)
    value = clamp_nonnegative(variance(psi, a), utils_settings['SUPPORT_EPS'], 'variance')
    return QfiValue(value, QfiMethod.PURE_VARIANCE)


def sld(rho, a, spectrum=None):
    """
    Symmetric logarithmic derivative restricted to the support of `rho` (zero off the support).

    :return: `SldOperator`
    """
    rho, a = as_matrix(rho), as_matrix(a)
    _check_observable(rho, a)
    spectrum = state_spectrum(rho, spectrum)
    lam, v = spectrum.eigenvalues, spectrum.eigenvectors
    lk, ll, total, support = _spectral_weights(lam, utils_settings['SUPPORT_EPS'])
    coefficients = np.zeros(total.shape, dtype=np.complex128)
    coefficients[support] = 2.j * (lk - ll)[support] / total[support]
    l_eig = coefficients * (v.conj().T @ a @ v)
    return SldOperator(v @ l_eig @ v.conj().T)


def qfi_white_noise(psi, a, p, d, n):
    """
    QFI of p |psi><psi| + (1 - p) I / d^n, from the value on the pure state:
    F = p^2 / (p + 2 (1 - p) d^{-n}) F(psi, A).

    :param psi: unit vector
    :param a: observable of size d^n
    :param p: visibility in [0, 1]
    :param d: local dimension
    :param n: number of parties
    :return: `QfiValue`
    """
    if not 0. <= p <= 1.:
        raise ValueError('p must be in [0, 1], got %s' % p)
    a = as_matrix(a)
    if a.shape[0] != d ** n:
        raise DimensionMismatchError('observable of size %d, expected d^N = %d' % (a.shape[0], d ** n))
    pure = qfi_pure(psi, a).value
    return QfiValue(p ** 2 / (p + 2. * (1. - p) / d ** n) * pure, QfiMethod.WHITE_NOISE)


def fisher_terms(rho, family, spectrum=None):
    """
    Spectral QFI of every member of `family`, computed on one eigendecomposition of `rho`.

    :return: list of `QfiValue`
    """
    rho = as_matrix(rho)
    spectrum = state_spectrum(rho, spectrum)
    return [qfi_spectral(rho, a, spectrum) for a in family]


def fisher_sum(rho, family, spectrum=None):
    return sum(t.value for t in fisher_terms(rho, family, spectrum))
