"""
Local observable families (Pauli and generalized Gell-Mann matrices) and their embedding as collective
observables A (x) I (x) I + I (x) B (x) I + I (x) I (x) C on a tripartite system.
"""
from functools import lru_cache
from itertools import product

import numpy as np

from fishergme.tensor_core import DimensionSpec, kron
from fishergme.utils import as_matrix, DimensionMismatchError

PLUS_SIGNS = (1, 1, 1)

# sign classes (s_a, s_b, s_c) modulo a global sign flip, which leaves the QFI unchanged
SIGN_CLASSES = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1))

# sigma_1 and sigma_2 with all plus signs, sigma_3 with the sign of subsystem c flipped
EXAMPLE_SIGNS = ((1, 1, 1), (1, 1, 1), (1, 1, -1))


def label_name(label):
    """
    Printable name of a Gell-Mann label: ('t', j, k) -> 't01', ('s', j, k) -> 's01', ('diag', l) -> 'd1'.
    """
    if label[0] == 'diag':
        return 'd%d' % label[1]
    return '%s%d%d' % label


class LocalBasis:
    """
    Ordered family of the d^2 - 1 generalized Gell-Mann matrices of dimension d: all the symmetric
    sigma_t^{jk}, then the antisymmetric sigma_s^{jk} (both with (j, k) in lexicographic order, j < k),
    then the diagonal sigma^l, l = 1 .. d-1. Each matrix is traceless, Hermitian and satisfies
    tr(lambda_a lambda_b) = 2 delta_ab.
    """

    def __init__(self, d, matrices, labels):
        self.d = d
        self.matrices = matrices
        self.labels = labels

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, item):
        return self.matrices[item]

    @property
    def names(self):
        return [label_name(lb) for lb in self.labels]

    def stacked(self):
        """
        :return: an array of shape (d^2 - 1, d, d)
        """
        return np.stack(self.matrices)


def _frozen(m):
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def gell_mann_basis(d):
    """
    Generalized Gell-Mann matrices of dimension `d`, with indices j, k running in 0 .. d-1.

    :param d: local dimension (>= 2)
    :return: `LocalBasis`
    """
    if d < 2:
        raise ValueError('Gell-Mann matrices need d >= 2, got %s' % d)
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    matrices, labels = [], []
    for j, k in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[j, k] = m[k, j] = 1.
        matrices.append(_frozen(m))
        labels.append(('t', j, k))
    for j, k in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[j, k] = -1.j
        m[k, j] = 1.j
        matrices.append(_frozen(m))
        labels.append(('s', j, k))
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.
        diag[l] = -l
        matrices.append(_frozen(np.diag(np.sqrt(2. / (l * (l + 1))) * diag).astype(np.complex128)))
        labels.append(('diag', l))
    return LocalBasis(d, tuple(matrices), tuple(labels))


def pauli_basis():
    """
    (sigma_x, sigma_y, sigma_z) as the d = 2 Gell-Mann basis.
    """
    return gell_mann_basis(2)


def local_sum(matrices, local_dims, signs=None):
    """
    Sum of local observables, each embedded with identities on the other subsystems.

    :param matrices: one square matrix per subsystem
    :param local_dims: local dimensions
    :param signs: (optional) a sign (or any real weight) per subsystem
    :return: matrix of size prod(local_dims)
    """
    if len(matrices) != len(local_dims):
        raise DimensionMismatchError('%d local observables for %d subsystems' % (len(matrices), len(local_dims)))
    signs = signs or [1] * len(matrices)
    total = None
    for i, (m, s) in enumerate(zip(matrices, signs)):
        m = as_matrix(m)
        if m.shape[0] != local_dims[i]:
            raise DimensionMismatchError('observable %d has dimension %d, subsystem has %d'
                                         % (i, m.shape[0], local_dims[i]))
        factors = [np.eye(d) for d in local_dims]
        factors[i] = s * m
        term = kron(*factors)
        total = term if total is None else total + term
    return total


class CollectiveObservable:
    """
    s_a A (x) I (x) I + s_b I (x) B (x) I + s_c I (x) I (x) C. `parts` keeps the unsigned local matrices.
    """

    def __init__(self, dims, parts, signs=PLUS_SIGNS, label=None):
        self.dims = dims
        self.parts = tuple(as_matrix(p) for p in parts)
        self.signs = tuple(signs)
        self.label = label
        self.total = local_sum(self.parts, list(dims), self.signs)

    def __neg__(self):
        return CollectiveObservable(self.dims, self.parts, tuple(-s for s in self.signs), self.label)

    def __repr__(self):
        return 'CollectiveObservable(%s, signs=%s, label=%s)' % (self.dims, self.signs, self.label)


def collective(a, b, c, dims=None, signs=PLUS_SIGNS, label=None):
    """
    Builds the collective observable A (x) I^bc + I^a (x) B (x) I^c + I^ab (x) C.

    :param a: observable on subsystem a
    :param b: observable on subsystem b
    :param c: observable on subsystem c
    :param dims: (optional) `DimensionSpec`, inferred from the local observables when omitted
    :param signs: signs (s_a, s_b, s_c) applied to the three parts
    :param label: optional tag (kept in criterion reports)
    :return: `CollectiveObservable`
    """
    parts = [as_matrix(m) for m in (a, b, c)]
    if dims is None:
        dims = DimensionSpec(*[p.shape[0] for p in parts])
    return CollectiveObservable(dims, parts, signs, label)


def signed_pauli_families():
    """
    :return: the 4 sign classes (s_a, s_b, s_c) modulo global sign
    """
    return SIGN_CLASSES


def gell_mann_family(d, signs=PLUS_SIGNS):
    """
    Collective observables built from the full Gell-Mann basis of dimension d on the d x d x d system.
    """
    basis = gell_mann_basis(d)
    dims = DimensionSpec(d)
    return [CollectiveObservable(dims, (m, m, m), signs, label_name(lb)) for m, lb in zip(basis, basis.labels)]


def pauli_family(signs_per_operator=PLUS_SIGNS):
    """
    Three-qubit collective Pauli observables.

    :param signs_per_operator: either one sign pattern (s_a, s_b, s_c) used for sigma_1, sigma_2, sigma_3,
                                or three patterns, one per Pauli matrix
    :return: list of 3 `CollectiveObservable`
    """
    signs_per_operator = _expand_signs(signs_per_operator)
    dims = DimensionSpec(2)
    basis = pauli_basis()
    return [CollectiveObservable(dims, (m, m, m), s, label_name(lb))
            for m, lb, s in zip(basis, basis.labels, signs_per_operator)]


def _expand_signs(signs_per_operator):
    if len(signs_per_operator) == 3 and all(np.isscalar(s) for s in signs_per_operator):
        return (tuple(signs_per_operator),) * 3
    if len(signs_per_operator) != 3:
        raise ValueError('expected one sign pattern or three, got %s' % (signs_per_operator,))
    return tuple(tuple(s) for s in signs_per_operator)


def pair_bound_preserved(signs_per_operator):
    """
    True when, for each pair of subsystems, the relative signs of the three Pauli operators multiply to +1.
    These assignments are local unitary images of the all-plus family, for which the pair bound of 8
    on sum_i F(rho^XY, sigma_i (x) I + I (x) sigma_i) holds; a product of -1 corresponds to a reflection
    and the pair sum can reach 12.
    """
    signs = _expand_signs(signs_per_operator)
    for x, y in ((0, 1), (0, 2), (1, 2)):
        if np.prod([s[x] * s[y] for s in signs]) != 1:
            return False
    return True


def certified_sign_assignments():
    """
    :return: the per-operator sign assignments (one class per Pauli matrix) that preserve the pair bound
    """
    return [combo for combo in product(SIGN_CLASSES, repeat=3) if pair_bound_preserved(combo)]
