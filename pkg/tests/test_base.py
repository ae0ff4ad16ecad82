import numpy as np

from fishergme.operators import gell_mann_basis, local_sum
from fishergme.states import RandomSource

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1.j], [1.j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def basis_vector(index, size):
    v = np.zeros(size, dtype=np.complex128)
    v[index] = 1.
    return v


def pure_density(psi):
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def random_source(seed=1234):
    return RandomSource(seed)


def pair_family(d, relative_signs=None):
    """
    Two-party sums lambda (x) I + s I (x) lambda over the Gell-Mann basis of dimension d.
    """
    basis = gell_mann_basis(d)
    relative_signs = relative_signs or [1] * len(basis)
    return [local_sum([m, m], [d, d], [1, s]) for m, s in zip(basis, relative_signs)]


def assert_array_lists_same(lst1, lst2, atol=0., msg='', test_case=None):
    for (k, (e1, e2)) in enumerate(zip(lst1, lst2)):
        same = np.allclose(e1, e2, rtol=0., atol=atol) if atol else np.array_equal(e1, e2)
        if test_case:
            test_case.assertTrue(same, msg + 'difference found at %d' % k)
        else:
            assert same, msg + 'difference found at %d' % k
    return None
