import unittest

import numpy as np

from fishergme.operators import pauli_basis, gell_mann_basis, collective, signed_pauli_families, local_sum, \
    pauli_family, gell_mann_family, pair_bound_preserved, certified_sign_assignments, EXAMPLE_SIGNS
from fishergme.tensor_core import DimensionSpec, kron
from fishergme.utils import DimensionMismatchError
from tests.test_base import SIGMA_X, SIGMA_Y, SIGMA_Z, basis_vector, random_source


class TestLocalBasis(unittest.TestCase):

    def test_pauli(self):
        basis = pauli_basis()
        np.testing.assert_array_equal(basis[0], SIGMA_X)
        np.testing.assert_array_equal(basis[1], SIGMA_Y)
        np.testing.assert_array_equal(basis[2], SIGMA_Z)
        self.assertListEqual(basis.names, ['t01', 's01', 'd1'])

    def test_gram_matrix(self):
        for d in (2, 3, 4, 5):
            basis = gell_mann_basis(d)
            self.assertEqual(len(basis), d * d - 1)
            stacked = basis.stacked()
            gram = np.einsum('aij,bji->ab', stacked, stacked)
            np.testing.assert_allclose(gram, 2. * np.eye(d * d - 1), atol=1.e-10)
            for m in basis:
                self.assertAlmostEqual(abs(np.trace(m)), 0., delta=1.e-12)
                np.testing.assert_allclose(m, m.conj().T, atol=1.e-12)

    def test_qutrit_order(self):
        basis = gell_mann_basis(3)
        self.assertListEqual(basis.names, ['t01', 't02', 't12', 's01', 's02', 's12', 'd1', 'd2'])
        np.testing.assert_allclose(basis[6], np.diag([1., -1., 0.]), atol=1.e-15)
        np.testing.assert_allclose(basis[7], np.diag([1., 1., -2.]) / np.sqrt(3.), atol=1.e-15)
        self.assertEqual(basis[4][0, 2], -1.j)
        self.assertEqual(basis[4][2, 0], 1.j)

    def test_read_only(self):
        with self.assertRaises(ValueError):
            gell_mann_basis(3)[0][0, 1] = 5.

    def test_invalid(self):
        self.assertRaises(ValueError, gell_mann_basis, 1)


class TestCollective(unittest.TestCase):

    def test_all_plus_on_000(self):
        a = collective(SIGMA_Z, SIGMA_Z, SIGMA_Z)
        np.testing.assert_allclose(a.total @ basis_vector(0, 8), 3. * basis_vector(0, 8))

    def test_example_signs_on_001(self):
        e = basis_vector(1, 8)
        np.testing.assert_allclose(collective(SIGMA_Z, SIGMA_Z, -SIGMA_Z).total @ e, 3. * e)
        np.testing.assert_allclose(collective(SIGMA_Z, SIGMA_Z, SIGMA_Z, signs=(1, 1, -1)).total @ e, 3. * e)

    def test_identity_embedding(self):
        c = random_source().hermitian_matrix(3)
        a = collective(np.zeros((2, 2)), np.zeros((2, 2)), c)
        np.testing.assert_allclose(a.total, kron(np.eye(2), np.eye(2), c), atol=1.e-15)
        self.assertEqual(a.dims, DimensionSpec(2, 2, 3))

    def test_exact_sum(self):
        source = random_source(2)
        a, b, c = source.hermitian_matrix(2), source.hermitian_matrix(3), source.hermitian_matrix(2)
        obs = collective(a, b, c)
        expected = kron(a, np.eye(3), np.eye(2)) + kron(np.eye(2), b, np.eye(2)) + kron(np.eye(2), np.eye(3), c)
        np.testing.assert_allclose(obs.total, expected, atol=1.e-14)
        np.testing.assert_allclose(obs.total, obs.total.conj().T, atol=1.e-14)

    def test_dimension_mismatch(self):
        self.assertRaises(DimensionMismatchError, collective, SIGMA_X, SIGMA_X, SIGMA_X, DimensionSpec(3))
        self.assertRaises(DimensionMismatchError, local_sum, [SIGMA_X], [2, 2])

    def test_local_sum_two_parties(self):
        res = local_sum([SIGMA_X, SIGMA_Y], [2, 2], [1, -1])
        np.testing.assert_allclose(res, kron(SIGMA_X, np.eye(2)) - kron(np.eye(2), SIGMA_Y))

    def test_negation(self):
        a = collective(SIGMA_X, SIGMA_Y, SIGMA_Z)
        np.testing.assert_allclose((-a).total, -a.total)


class TestFamilies(unittest.TestCase):

    def test_sign_classes(self):
        classes = signed_pauli_families()
        self.assertEqual(len(classes), 4)
        self.assertIn((1, 1, -1), classes)
        self.assertNotIn((-1, -1, -1), classes)

    def test_pauli_family(self):
        family = pauli_family(EXAMPLE_SIGNS)
        self.assertListEqual([a.signs for a in family], [(1, 1, 1), (1, 1, 1), (1, 1, -1)])
        self.assertListEqual([a.label for a in family], ['t01', 's01', 'd1'])
        self.assertEqual(len(pauli_family((1, -1, 1))), 3)
        self.assertRaises(ValueError, pauli_family, ((1, 1, 1), (1, 1, 1)))

    def test_gell_mann_family(self):
        family = gell_mann_family(3)
        self.assertEqual(len(family), 8)
        self.assertEqual(family[0].total.shape, (27, 27))

    def test_pair_bound_preserved(self):
        self.assertTrue(pair_bound_preserved((1, 1, 1)))
        self.assertFalse(pair_bound_preserved(EXAMPLE_SIGNS))
        self.assertFalse(pair_bound_preserved((1, 1, -1)))
        self.assertFalse(pair_bound_preserved(((1, 1, -1),) * 3))
        self.assertTrue(pair_bound_preserved(((1, 1, -1), (1, 1, -1), (1, 1, 1))))
        certified = certified_sign_assignments()
        self.assertEqual(len(certified), 16)
        self.assertIn(((1, 1, 1),) * 3, certified)
        self.assertNotIn(EXAMPLE_SIGNS, certified)


if __name__ == '__main__':
    unittest.main()
