"""
Genuine tripartite entanglement criteria.

Fisher-information criteria: a biseparable state satisfies
sum_mu F(rho, A_mu (x) I + I (x) B_mu (x) I + I (x) C_mu) <= F_1 + F_2, where F_1 bounds the single-party sums
and F_2 the two-party sums of the same family. For Gell-Mann families F_1 = 2(d-1) and F_2 = 4(d-1)(d+2)/d.
A positive margin (statistic - threshold) certifies genuine entanglement; zero is inconclusive.

Baselines: the correlation-tensor k-norm criterion and the lower bound on the GME concurrence built from the
Frobenius norm of the correlation tensor t_{abc} = (d^3 / 8) tr(rho lambda_a (x) lambda_b (x) lambda_c).
"""
import logging
from enum import Enum

import numpy as np
from scipy import optimize

from fishergme.operators import gell_mann_basis, gell_mann_family, pauli_family, SIGN_CLASSES, EXAMPLE_SIGNS, \
    PLUS_SIGNS, pair_bound_preserved, certified_sign_assignments
from fishergme.qfi import fisher_terms, state_spectrum
from fishergme.states import as_density
from fishergme.tensor_core import singular_values
from fishergme.utils import DimensionMismatchError, InvalidStateError

logger = logging.getLogger(__name__)

CRITERIA = ('corollary1', 'corollary2', 'theorem1-custom', 'theorem2', 'tensor-knorm', 'concurrence-bound')

COROLLARY2_MODES = ('per-operator', 'fixed-pattern', 'example', 'certified')

LITERATURE_TAG = 'quoted from paper'

# thresholds of other criteria on the same families, annotations only
LITERATURE_THRESHOLDS = {
    'w-noise': [('positive-map', 0.90), ('correlation-tensor', 0.738549)],
    'ghz-noise:d=2': [('positive-map', 11. / 15.)],
}


class Verdict(Enum):
    DETECTED = 'GME-detected'
    INCONCLUSIVE = 'inconclusive'


class CriterionReport:
    """
    Outcome of a criterion: the statistic, its threshold, margin = statistic - threshold and the verdict
    (GME-detected iff margin > 0). `details` holds per-operator contributions and criterion specific data.
    """

    def __init__(self, criterion, statistic, threshold, details=None):
        self.criterion = criterion
        self.statistic = float(statistic)
        self.threshold = float(threshold)
        self.margin = self.statistic - self.threshold
        if not np.isfinite(self.margin):
            raise ArithmeticError('%s margin is not finite (%s)' % (criterion, self.margin))
        self.verdict = Verdict.DETECTED if self.margin > 0. else Verdict.INCONCLUSIVE
        self.details = details or {}

    @property
    def detected(self):
        return self.verdict is Verdict.DETECTED

    def to_dict(self):
        return {
            'criterion': self.criterion,
            'statistic': self.statistic,
            'threshold': self.threshold,
            'margin': self.margin,
            'verdict': self.verdict.value,
            'details': self.details,
        }

    def __repr__(self):
        return 'CriterionReport(%s, statistic=%.6g, threshold=%.6g, margin=%.6g, %s)' % (
            self.criterion, self.statistic, self.threshold, self.margin, self.verdict.value)


class CorrelationTensor:
    """
    Real tensor of shape (d^2 - 1,) * 3 over the Gell-Mann basis.
    """

    def __init__(self, d, entries):
        self.d = d
        self.entries = entries

    @property
    def size(self):
        return self.d * self.d - 1

    def unfold(self, mode):
        """
        Mode-`mode` unfolding: a (d^2 - 1) x (d^2 - 1)^2 matrix whose rows are indexed by the given subsystem.
        """
        n = self.size
        return np.moveaxis(self.entries, mode, 0).reshape(n, n * n)

    def frobenius(self):
        return np.sqrt(np.sum(self.entries ** 2))


def lemma_bounds(d):
    """
    Bounds on the Gell-Mann QFI sums of a single qudit and of a pair of qudits.

    :param d: local dimension
    :return: (F1, F2) = (2(d - 1), 4(d - 1)(d + 2) / d)
    """
    if d < 2:
        raise ValueError('d must be >= 2, got %s' % d)
    return 2. * (d - 1), 4. * (d - 1) * (d + 2) / d


def corollary1_threshold(d):
    return 2. * (d - 1) * (3 * d + 4) / d


def _uniform_d(rho, criterion):
    if not rho.dims.is_uniform:
        raise DimensionMismatchError('%s needs equal local dimensions, got %s' % (criterion, rho.dims))
    return rho.dims.d_a


def _term_details(family, terms):
    return {a.label: t.value for a, t in zip(family, terms)}


def corollary1(rho, spectrum=None):
    """
    QFI sum over the collective observables of the full Gell-Mann basis against 2(d - 1)(3d + 4)/d.
    """
    rho = as_density(rho)
    d = _uniform_d(rho, 'corollary1')
    family = gell_mann_family(d)
    terms = fisher_terms(rho, family, spectrum)
    return CriterionReport('corollary1', sum(t.value for t in terms), corollary1_threshold(d),
                           {'terms': _term_details(family, terms), 'd': d})


def _sign_table(rho, spectrum):
    """
    QFI of sigma_i with every sign class: table[i][c].
    """
    table = np.zeros((3, len(SIGN_CLASSES)))
    for c, signs in enumerate(SIGN_CLASSES):
        terms = fisher_terms(rho, pauli_family(signs), spectrum)
        table[:, c] = [t.value for t in terms]
    return table


def _assignment_value(table, assignment):
    return sum(table[i, SIGN_CLASSES.index(tuple(s))] for i, s in enumerate(assignment))


def corollary2(rho, mode='per-operator', signs=None, spectrum=None):
    """
    Three-qubit criterion with the signed Pauli family +-sigma_i (x) I +- I (x) sigma_i (x) I +- I (x) sigma_i
    against the threshold 10.

    Modes: 'per-operator' maximizes the sign class of each sigma_i independently, 'fixed-pattern' uses one
    class for all three, 'example' uses `EXAMPLE_SIGNS` and 'certified' maximizes over the assignments for
    which every two-party bound of 8 stays valid (see `pair_bound_preserved`). Explicit `signs` (one pattern
    or three) override the mode. Only certified assignments guarantee the absence of false positives.

    :return: `CriterionReport` whose details carry both search results, the chosen signs and `certified`
    """
    rho = as_density(rho)
    if rho.dims != (2, 2, 2):
        raise DimensionMismatchError('corollary2 applies to three qubits, got %s' % (rho.dims,))
    if mode not in COROLLARY2_MODES:
        raise ValueError('unknown corollary2 mode %s, expected one of %s' % (mode, COROLLARY2_MODES))
    spectrum = state_spectrum(rho.matrix, spectrum)
    table = _sign_table(rho, spectrum)

    fixed_class = int(np.argmax(table.sum(axis=0)))
    fixed_signs = (SIGN_CLASSES[fixed_class],) * 3
    per_operator_signs = tuple(SIGN_CLASSES[int(c)] for c in np.argmax(table, axis=1))
    certified_signs = max(certified_sign_assignments(), key=lambda a: _assignment_value(table, a))
    candidates = {
        'fixed-pattern': fixed_signs,
        'per-operator': per_operator_signs,
        'example': EXAMPLE_SIGNS,
        'certified': certified_signs,
    }

    if signs is not None:
        family = pauli_family(signs)
        chosen = tuple(a.signs for a in family)
        mode = 'explicit'
    else:
        chosen = candidates[mode]
        family = pauli_family(chosen)
    terms = fisher_terms(rho, family, spectrum)
    certified = pair_bound_preserved(chosen)
    report = CriterionReport('corollary2', sum(t.value for t in terms), 10., {
        'mode': mode,
        'signs': [list(s) for s in chosen],
        'certified': certified,
        'terms': _term_details(family, terms),
        'fixed_pattern_best': _assignment_value(table, fixed_signs),
        'fixed_pattern_signs': list(fixed_signs[0]),
        'per_operator_best': _assignment_value(table, per_operator_signs),
        'per_operator_signs': [list(s) for s in per_operator_signs],
    })
    if report.detected and not certified:
        logger.warning('corollary2 margin %.6g comes from the uncertified sign assignment %s; '
                       'a biseparable state can exceed 10 with these signs', report.margin, chosen)
    return report


def theorem1_margin(rho, family, f1, f2, spectrum=None):
    """
    :param family: collective observables
    :param f1: bound on the single-party QFI sums of the family
    :param f2: bound on the two-party QFI sums of the family
    """
    rho = as_density(rho)
    terms = fisher_terms(rho, family, spectrum)
    return CriterionReport('theorem1-custom', sum(t.value for t in terms), f1 + f2,
                           {'terms': _term_details(family, terms), 'F1': f1, 'F2': f2})


def theorem2_margin(rho, family, f_locals=None, f_pairs=None, spectrum=None):
    """
    Biseparability bound for possibly different local dimensions:
    threshold = max(F_a, F_b, F_c) + max(F_ab, F_ac, F_bc).

    :param f_locals: (F_a, F_b, F_c), defaults to the Gell-Mann bounds only when all dimensions are equal
    :param f_pairs: (F_ab, F_ac, F_bc), same default rule
    """
    rho = as_density(rho)
    if f_locals is None or f_pairs is None:
        if not rho.dims.is_uniform:
            raise ValueError('theorem2 with unequal local dimensions %s needs explicit F_locals and F_pairs'
                             % (rho.dims,))
        f1, f2 = lemma_bounds(rho.dims.d_a)
        f_locals = (f1,) * 3 if f_locals is None else f_locals
        f_pairs = (f2,) * 3 if f_pairs is None else f_pairs
    if len(f_locals) != 3 or len(f_pairs) != 3:
        raise ValueError('theorem2 needs three local and three pair bounds')
    terms = fisher_terms(rho, family, spectrum)
    return CriterionReport('theorem2', sum(t.value for t in terms), max(f_locals) + max(f_pairs),
                           {'terms': _term_details(family, terms),
                            'F_locals': list(f_locals), 'F_pairs': list(f_pairs)})


def _ratio(num, den):
    return 0. if num == 0. else num / den


def closed_form_f(x, y):
    """
    Margin of the three-qubit criterion with `EXAMPLE_SIGNS` on the GHZ/W mixture:
    f(x, y) = 16x^2 / (1 + 3x - y) + 524y^2 / (9(1 + 3y - x)) + 12(x - y)^2 / (1 + 3x + 3y) - 10.
    Terms with a vanishing numerator are zero at the corners of the simplex.
    """
    if x < 0. or y < 0. or x + y > 1. + 1.e-12:
        raise ValueError('(x, y) = (%s, %s) is outside the simplex' % (x, y))
    return (_ratio(16. * x ** 2, 1. + 3. * x - y)
            + _ratio(524. * y ** 2, 9. * (1. + 3. * y - x))
            + _ratio(12. * (x - y) ** 2, 1. + 3. * x + 3. * y)
            - 10.)


def closed_form_g(d, p):
    """
    Margin of the Gell-Mann criterion on the noisy GHZ state of three qudits:
    g(d, p) = 6p^2 d^2 (d - 1)(d + 3) / (2 + (d^3 - 2)p) - 2(d - 1)(3d + 4)/d.
    """
    if d < 2:
        raise ValueError('d must be >= 2, got %s' % d)
    if not 0. <= p <= 1.:
        raise ValueError('p must be in [0, 1], got %s' % p)
    return 6. * p ** 2 * d ** 2 * (d - 1) * (d + 3) / (2. + (d ** 3 - 2) * p) - corollary1_threshold(d)


def closed_form_g_threshold(d, tol=1.e-12):
    """
    :return: the root of g(d, .) in [0, 1]
    """
    return optimize.bisect(lambda p: closed_form_g(d, p), 0., 1., xtol=tol)


def closed_form_f_threshold(x, tol=1.e-12):
    """
    :return: the root in y of f(x, .) on [0, 1 - x], or None if f does not change sign there
    """
    if not 0. <= x <= 1.:
        raise ValueError('x must be in [0, 1], got %s' % x)
    hi = 1. - x
    if closed_form_f(x, 0.) > 0. or closed_form_f(x, hi) <= 0.:
        return None
    return optimize.bisect(lambda y: closed_form_f(x, y), 0., hi, xtol=tol)


def correlation_tensor(rho, d=None):
    """
    t_{abc} = (d^3 / 8) tr(rho lambda_a (x) lambda_b (x) lambda_c) over the Gell-Mann basis.

    :return: `CorrelationTensor`
    """
    rho = as_density(rho)
    d_rho = _uniform_d(rho, 'correlation tensor')
    if d is not None and d != d_rho:
        raise DimensionMismatchError('state has local dimension %d, requested %d' % (d_rho, d))
    lam = gell_mann_basis(d_rho).stacked()
    r = rho.matrix.reshape((d_rho,) * 6)
    t = np.einsum('ijklmo,ali,bmj,cok->abc', r, lam, lam, lam) * d_rho ** 3 / 8.
    imag = np.max(np.abs(t.imag))
    if imag > 1.e-10:
        raise InvalidStateError('correlation tensor is not real: max imaginary part %.3e' % imag)
    return CorrelationTensor(d_rho, t.real)


def concurrence_bound(rho, d=None):
    """
    Lower bound on the GME concurrence: ||T||_F / (2 sqrt(2)) against (d - 1) / d.
    """
    tensor = correlation_tensor(rho, d)
    statistic = tensor.frobenius() / (2. * np.sqrt(2.))
    return CriterionReport('concurrence-bound', statistic, (tensor.d - 1.) / tensor.d,
                           {'frobenius': tensor.frobenius(), 'd': tensor.d})


def ky_fan_norm(m, k):
    """
    Sum of the k largest singular values.
    """
    sv = singular_values(m)
    if not 1 <= k <= len(sv):
        raise ValueError('k must be in [1, %d], got %s' % (len(sv), k))
    return float(np.sum(sv[:k]))


def knorm_threshold(d, k):
    return 2. * np.sqrt(2.) / 3. * (2. * np.sqrt(k) + 1.) * (d - 1.) / d * np.sqrt((d + 1.) / d)


def knorm_criterion(rho, d, k, tensor=None):
    """
    Mean Ky Fan k-norm of the three unfoldings of the correlation tensor.
    The threshold depends on the tensor normalization.

    :param d: local dimension, inferred from `rho` when None
    :param k: number of singular values, 1 <= k <= d^2 - 1
    :param tensor: (optional) precomputed `CorrelationTensor` of `rho`
    """
    tensor = tensor or correlation_tensor(rho, d)
    if not 1 <= k <= tensor.size:
        raise ValueError('k must be in [1, %d], got %s' % (tensor.size, k))
    norms = [ky_fan_norm(tensor.unfold(mode), k) for mode in range(3)]
    return CriterionReport('tensor-knorm', np.mean(norms), knorm_threshold(tensor.d, k),
                           {'k': k, 'unfolding_norms': norms, 'd': tensor.d})


def knorm_best(rho, d=None):
    """
    :return: the k-norm report with the largest margin over k = 1 .. d^2 - 1
    """
    tensor = correlation_tensor(rho, d)
    return max((knorm_criterion(rho, tensor.d, k, tensor) for k in range(1, tensor.size + 1)),
               key=lambda r: r.margin)


def evaluate(name, rho, **options):
    """
    Runs the criterion `name` (one of `CRITERIA`) on `rho`.

    :param options: mode / signs (corollary2), bounds=(F1, F2) (theorem1-custom), f_locals / f_pairs (theorem2),
                    k (tensor-knorm, best k when omitted), family (theorem1-custom, theorem2)
    """
    rho = as_density(rho)
    if name == 'corollary1':
        return corollary1(rho)
    if name == 'corollary2':
        return corollary2(rho, mode=options.get('mode') or 'per-operator', signs=options.get('signs'))
    if name in ('theorem1-custom', 'theorem2'):
        family = options.get('family') or _default_family(rho)
        if name == 'theorem2':
            return theorem2_margin(rho, family, options.get('f_locals'), options.get('f_pairs'))
        bounds = options.get('bounds')
        if bounds is None:
            if not rho.dims.is_uniform:
                raise ValueError('theorem1-custom needs bounds for unequal local dimensions')
            bounds = lemma_bounds(rho.dims.d_a)
        return theorem1_margin(rho, family, *bounds)
    if name == 'tensor-knorm':
        k = options.get('k')
        return knorm_best(rho) if k is None else knorm_criterion(rho, None, k)
    if name == 'concurrence-bound':
        return concurrence_bound(rho)
    raise ValueError('unknown criterion %s, expected one of %s' % (name, CRITERIA))


def _default_family(rho):
    if not rho.dims.is_uniform:
        raise ValueError('no default observable family for unequal local dimensions %s' % (rho.dims,))
    return gell_mann_family(rho.dims.d_a, PLUS_SIGNS)
