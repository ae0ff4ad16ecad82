"""
Reference states (GHZ, W and their noisy mixtures), seeded random states and biseparable ensembles.

Random states are reproducible: `RandomSource` wraps a PCG64 generator, draws Gaussian pairs with the
Box-Muller transform and Dirichlet(1, ..., 1) weights as normalized exponentials. Ensemble members get
the seed `seed + index`.
"""
import logging
from collections import namedtuple

import numpy as np

from fishergme.tensor_core import DimensionSpec, kron, partial_trace, permute_subsystems, \
    hermitian_eig, is_hermitian
from fishergme.utils import utils_settings, as_matrix, as_unit_vector, InvalidStateError, NotHermitianError, \
    DimensionMismatchError

logger = logging.getLogger(__name__)

CUTS = ('a|bc', 'b|ac', 'ab|c')

EnsembleConfig = namedtuple('EnsembleConfig', ['count', 'seed', 'kind', 'dims', 'terms'], defaults=(1,))
EnsembleConfig.__doc__ = 'Ensemble of `count` states of the given kind (pure, mixed or biseparable).'


def as_dims(dims):
    """
    Accepts a `DimensionSpec`, a single local dimension or a sequence of three.
    """
    if isinstance(dims, DimensionSpec):
        return dims
    if isinstance(dims, (list, tuple)):
        return DimensionSpec(*dims)
    return DimensionSpec(dims)


def _infer_dims(size):
    d = int(round(size ** (1. / 3)))
    if d ** 3 != size:
        raise DimensionMismatchError('cannot infer three equal local dimensions for size %d' % size)
    return DimensionSpec(d)


class DensityMatrix:
    """
    Tripartite density matrix: `matrix` is a dense complex array of size `dims.total`.
    """

    def __init__(self, dims, matrix, validate=False):
        self.dims = as_dims(dims)
        self.matrix = as_matrix(matrix)
        if self.matrix.shape[0] != self.dims.total:
            raise DimensionMismatchError('matrix of size %d for dimensions %s' % (self.matrix.shape[0], self.dims))
        if validate:
            self.validate()

    def validate(self, check_positivity=True):
        """
        Checks Hermiticity, unit trace and (optionally) positivity.

        :return: self
        """
        m = self.matrix
        if not is_hermitian(m):
            raise NotHermitianError('density matrix is not Hermitian: max |rho - rho^dagger| = %.3e'
                                    % np.max(np.abs(m - m.conj().T)))
        trace = np.trace(m).real
        if abs(trace - 1.) > utils_settings['TRACE_TOL']:
            raise InvalidStateError('trace must be 1: |tr(rho) - 1| = %.3e' % abs(trace - 1.))
        if check_positivity:
            min_eig = hermitian_eig(m).eigenvalues[-1]
            if min_eig < -utils_settings['PSD_TOL']:
                raise InvalidStateError('state is not positive semidefinite: min eigenvalue %.3e' % min_eig)
        return self

    def reduced(self, keep):
        """
        :param keep: subsystem labels, e.g. 'a' or 'bc'
        :return: the reduced matrix (numpy array)
        """
        return partial_trace(self.matrix, self.dims, keep)

    def __repr__(self):
        return 'DensityMatrix(%s)' % self.dims


def as_density(rho):
    """
    Wraps a plain matrix as a `DensityMatrix` with three equal local dimensions.
    """
    if isinstance(rho, DensityMatrix):
        return rho
    m = as_matrix(rho)
    return DensityMatrix(_infer_dims(m.shape[0]), m)


class RandomSource:
    """
    Seeded source of uniforms, Gaussians, Dirichlet weights and Haar states.
    """

    def __init__(self, seed=0):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def split(self, index):
        return RandomSource(self.seed + index)

    def uniform(self, n):
        """
        :return: n uniforms in (0, 1]
        """
        return 1. - self._gen.random(n)

    def gaussian(self, n):
        """
        Standard normals from Box-Muller pairs.
        """
        pairs = (n + 1) // 2
        u1, u2 = self.uniform(pairs), self.uniform(pairs)
        radius = np.sqrt(-2. * np.log(u1))
        angle = 2. * np.pi * u2
        return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:n]

    def dirichlet(self, n):
        """
        Flat Dirichlet weights (normalized exponentials).
        """
        e = -np.log(self.uniform(n))
        return e / np.sum(e)

    def haar_vector(self, n):
        """
        Haar-distributed unit vector in C^n (normalized complex Gaussian vector).
        """
        g = self.gaussian(2 * n)
        v = g[:n] + 1.j * g[n:]
        return v / np.linalg.norm(v)

    def mixed_matrix(self, n, rank=None):
        """
        Sum of `rank` (default n) Haar projectors with Dirichlet weights.
        """
        rank = n if rank is None else rank
        if not 1 <= rank <= n:
            raise ValueError('rank must be in [1, %d], got %s' % (n, rank))
        weights = self.dirichlet(rank)
        vectors = np.stack([self.haar_vector(n) for _ in range(rank)], axis=1)
        return (vectors * weights) @ vectors.conj().T

    def hermitian_matrix(self, n):
        """
        Random Hermitian matrix with complex Gaussian entries (used as a random observable).
        """
        g = self.gaussian(2 * n * n).reshape(2, n, n)
        m = g[0] + 1.j * g[1]
        return .5 * (m + m.conj().T)

    def unitary(self, n):
        """
        Unitary from the eigenvectors of a random Hermitian matrix.
        """
        return np.linalg.eigh(self.hermitian_matrix(n))[1]


def ghz(d):
    """
    (1/sqrt(d)) sum_j |jjj>
    """
    if d < 2:
        raise ValueError('GHZ state needs d >= 2, got %s' % d)
    psi = np.zeros(d ** 3, dtype=np.complex128)
    psi[[j * (d * d + d + 1) for j in range(d)]] = 1. / np.sqrt(d)
    return psi


def w3():
    psi = np.zeros(8, dtype=np.complex128)
    psi[[4, 2, 1]] = 1. / np.sqrt(3.)  # |100>, |010>, |001>
    return psi


def projector(psi, dims=None):
    psi = as_unit_vector(psi)
    dims = _infer_dims(psi.shape[0]) if dims is None else as_dims(dims)
    return DensityMatrix(dims, np.outer(psi, psi.conj()))


def maximally_mixed(dims):
    dims = as_dims(dims)
    return DensityMatrix(dims, np.eye(dims.total, dtype=np.complex128) / dims.total)


def maximally_entangled(d):
    """
    Two-qudit state sum_m |mm> / sqrt(d).
    """
    psi = np.zeros(d * d, dtype=np.complex128)
    psi[[m * (d + 1) for m in range(d)]] = 1. / np.sqrt(d)
    return psi


def ghz_w_mix(x, y):
    """
    ((1 - x - y) / 8) I + x |GHZ><GHZ| + y |W><W| on three qubits.
    """
    if x < 0. or y < 0. or x + y > 1. + 1.e-12:
        raise ValueError('(x, y) = (%s, %s) is outside the simplex x, y >= 0, x + y <= 1' % (x, y))
    g, w = ghz(2), w3()
    m = (1. - x - y) / 8. * np.eye(8) + x * np.outer(g, g.conj()) + y * np.outer(w, w.conj())
    return DensityMatrix(DimensionSpec(2), m)


def white_noise_mix(psi, p, dim, dims=None):
    """
    p |psi><psi| + (1 - p) I / dim.

    :param psi: unit vector of size `dim`
    :param p: visibility in [0, 1]
    :param dim: total dimension
    :param dims: (optional) local dimensions, inferred as a cube root of `dim` when omitted
    :return: `DensityMatrix`
    """
    if not 0. <= p <= 1.:
        raise ValueError('p must be in [0, 1], got %s' % p)
    psi = as_unit_vector(psi)
    if psi.shape[0] != dim:
        raise DimensionMismatchError('vector of size %d, expected %d' % (psi.shape[0], dim))
    dims = _infer_dims(dim) if dims is None else as_dims(dims)
    m = p * np.outer(psi, psi.conj()) + (1. - p) / dim * np.eye(dim)
    return DensityMatrix(dims, m)


def random_pure(dims, seed):
    dims = as_dims(dims)
    return RandomSource(seed).haar_vector(dims.total)


def random_mixed(dims, seed, rank=None):
    dims = as_dims(dims)
    return DensityMatrix(dims, RandomSource(seed).mixed_matrix(dims.total, rank))


_CUT_PARTIES = {'a|bc': ('a', 'bc'), 'b|ac': ('b', 'ac'), 'ab|c': ('c', 'ab')}


def _cut_state(source, dims, cut, entangled_pairs):
    single, pair = _CUT_PARTIES[cut]
    d_single = dims.local(single)[0]
    d_pair = dims.local(pair)
    rho_single = source.mixed_matrix(d_single)
    if entangled_pairs:
        v = source.haar_vector(d_pair[0] * d_pair[1])
        rho_pair = np.outer(v, v.conj())
    else:
        rho_pair = kron(source.mixed_matrix(d_pair[0]), source.mixed_matrix(d_pair[1]))
    if cut == 'a|bc':
        return kron(rho_single, rho_pair)
    if cut == 'ab|c':
        return kron(rho_pair, rho_single)
    # b (x) ac, then b and a swapped back in place
    return permute_subsystems(kron(rho_single, rho_pair), [dims.d_b, dims.d_a, dims.d_c], [1, 0, 2])


def biseparable_sample(dims, seed, terms=1, cuts=CUTS, entangled_pairs=True):
    """
    Random convex mixture of product states across the bipartitions in `cuts`:
    sum_i p_i rho_i^a (x) rho_i^bc + sum_j q_j rho_j^b (x) rho_j^ac + sum_l r_l rho_l^ab (x) rho_l^c.

    :param dims: local dimensions
    :param seed: integer seed
    :param terms: number of product terms per cut
    :param cuts: bipartitions used (all three by default, with Dirichlet cut weights)
    :param entangled_pairs: when True the two-party factors are Haar pure states, otherwise products
    :return: `DensityMatrix`
    """
    if terms < 1:
        raise ValueError('terms must be >= 1, got %s' % terms)
    unknown = set(cuts) - set(CUTS)
    if unknown or not cuts:
        raise ValueError('cuts must be a non-empty subset of %s' % (CUTS,))
    dims = as_dims(dims)
    source = RandomSource(seed)
    cut_weights = source.dirichlet(len(cuts))
    m = np.zeros((dims.total, dims.total), dtype=np.complex128)
    for cut, w in zip(cuts, cut_weights):
        for tw in source.dirichlet(terms):
            m += w * tw * _cut_state(source, dims, cut, entangled_pairs)
    return DensityMatrix(dims, m)


def generate_ensemble(config):
    """
    Yields the `config.count` members of an ensemble, member i drawn with seed `config.seed + i`.
    """
    if config.count < 1:
        raise ValueError('ensemble count must be >= 1, got %s' % config.count)
    dims = as_dims(config.dims)
    for index in range(config.count):
        seed = RandomSource(config.seed).split(index).seed
        yield ensemble_member(config.kind, dims, seed, config.terms)


def ensemble_member(kind, dims, seed, terms=1):
    if kind == 'pure':
        return projector(random_pure(dims, seed), dims)
    if kind == 'mixed':
        return random_mixed(dims, seed)
    if kind == 'biseparable':
        return biseparable_sample(dims, seed, terms)
    raise ValueError('unknown ensemble kind %s' % kind)

