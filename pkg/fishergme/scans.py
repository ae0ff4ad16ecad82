"""
Detection thresholds along one-parameter families of states, closed-form grids and ensemble evaluation.
"""
import logging
from collections import namedtuple, OrderedDict
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

import numpy as np

from fishergme.criteria import evaluate, closed_form_f, closed_form_f_threshold, corollary2, LITERATURE_THRESHOLDS, \
    LITERATURE_TAG
from fishergme.states import ghz, ghz_w_mix, white_noise_mix, maximally_mixed, ensemble_member, as_dims
from fishergme.utils import bisect_crossing

logger = logging.getLogger(__name__)

_CRITERIA_LOGGER = logging.getLogger('fishergme.criteria')


class _FirstWarningOnly(logging.Filter):
    def __init__(self):
        super().__init__()
        self.seen = False

    def filter(self, record):
        if record.levelno < logging.WARNING:
            return True
        if self.seen:
            return False
        self.seen = True
        return True


@contextmanager
def _first_warning_only(target):
    """
    Repeated evaluations along a scan or grid report the same warning; only the first one is kept.
    """
    once = _FirstWarningOnly()
    target.addFilter(once)
    try:
        yield
    finally:
        target.removeFilter(once)


NoiseFamily = namedtuple('NoiseFamily', ['name', 'parameter', 'lo', 'hi', 'builder', 'criteria'])
NoiseFamily.__doc__ = """
One-parameter family of states: `builder(t)` returns the `DensityMatrix` at parameter t in [lo, hi];
`criteria` are the criteria compared by default on the family.
"""


class ScanResult(namedtuple('ScanResult', ['parameter', 'lo', 'hi', 'threshold', 'iterations', 'margins'])):
    """
    Outcome of a threshold scan: the final bracket [lo, hi] with margin(lo) <= 0 < margin(hi), its midpoint as
    threshold and the sampled (parameter, margin) pairs. `threshold` is None when the margin never crosses
    zero in the scanned range.
    """
    __slots__ = ()

    @property
    def crossed(self):
        return self.threshold is not None


def _parse_options(spec):
    name, _, rest = spec.partition(':')
    options = {}
    for item in filter(None, rest.split(',')):
        key, sep, value = item.partition('=')
        if not sep:
            raise ValueError('malformed family option %r in %r (expected key=value)' % (item, spec))
        options[key.strip()] = value.strip()
    return name, options


def noise_family(spec):
    """
    Parses a family specification: `w-noise`, `ghz-noise:d=D`, `ghz-w-mix:x=X` or `maximally-mixed:d=D`.

    :return: `NoiseFamily`
    """
    name, options = _parse_options(spec)
    if name == 'w-noise':
        return NoiseFamily(spec, 'y', 0., 1., lambda y: ghz_w_mix(0., y),
                           ('corollary2', 'concurrence-bound', 'tensor-knorm'))
    if name == 'ghz-noise':
        d = int(options.get('d', 2))
        psi = ghz(d)
        return NoiseFamily(spec, 'p', 0., 1., lambda p: white_noise_mix(psi, p, d ** 3),
                           ('corollary1', 'concurrence-bound', 'tensor-knorm'))
    if name == 'ghz-w-mix':
        x = float(options.get('x', 0.))
        if not 0. <= x <= 1.:
            raise ValueError('x must be in [0, 1], got %s' % x)
        return NoiseFamily(spec, 'y', 0., 1. - x, lambda y: ghz_w_mix(x, min(y, 1. - x)),
                           ('corollary2', 'concurrence-bound', 'tensor-knorm'))
    if name == 'maximally-mixed':
        dims = as_dims(int(options.get('d', 2)))
        return NoiseFamily(spec, 't', 0., 1., lambda t: maximally_mixed(dims),
                           ('corollary1', 'concurrence-bound', 'tensor-knorm'))
    raise ValueError('unknown state family %r' % spec)


def scan_threshold(family, criterion, lo=None, hi=None, tol=1.e-6, samples=11, **options):
    """
    Samples the margin of `criterion` on a uniform grid over [lo, hi], takes the first interval where it goes
    from non-positive to positive and bisects it down to width `tol`.

    :param family: `NoiseFamily` or a family specification string
    :param criterion: criterion name (see `criteria.CRITERIA`)
    :param samples: number of grid points (>= 2)
    :param options: forwarded to `criteria.evaluate`
    :return: `ScanResult`
    """
    if isinstance(family, str):
        family = noise_family(family)
    lo = family.lo if lo is None else lo
    hi = family.hi if hi is None else hi
    if not lo < hi:
        raise ValueError('empty scan range [%s, %s]' % (lo, hi))
    if samples < 2:
        raise ValueError('at least 2 samples are needed, got %s' % samples)

    def margin(t):
        return evaluate(criterion, family.builder(t), **options).margin

    grid = np.linspace(lo, hi, samples)
    with _first_warning_only(_CRITERIA_LOGGER):
        margins = [(float(t), margin(t)) for t in grid]
        for (t0, m0), (t1, m1) in zip(margins, margins[1:]):
            if m0 <= 0. < m1:
                b_lo, b_hi, iterations = bisect_crossing(margin, t0, t1, tol)
                logger.info('%s on %s: crossing in [%.8f, %.8f] after %d bisections',
                            criterion, family.name, b_lo, b_hi, iterations)
                return ScanResult(family.parameter, b_lo, b_hi, .5 * (b_lo + b_hi), iterations, margins)
    logger.info('%s on %s: no crossing in [%s, %s]', criterion, family.name, lo, hi)
    return ScanResult(family.parameter, lo, hi, None, 0, margins)


def compare_thresholds(family, criteria=None, tol=1.e-6, samples=11):
    """
    One row per criterion with its computed threshold on the family, followed by the literature values known
    for the family (annotations, never recomputed).

    :return: list of `OrderedDict` rows (family, criterion, parameter, threshold, source)
    """
    if isinstance(family, str):
        family = noise_family(family)
    rows = []
    for criterion in criteria or family.criteria:
        result = scan_threshold(family, criterion, tol=tol, samples=samples)
        rows.append(OrderedDict([
            ('family', family.name), ('criterion', criterion), ('parameter', family.parameter),
            ('threshold', result.threshold if result.crossed else 'no crossing'), ('source', 'computed'),
        ]))
    for criterion, value in LITERATURE_THRESHOLDS.get(family.name, []):
        rows.append(OrderedDict([
            ('family', family.name), ('criterion', criterion), ('parameter', family.parameter),
            ('threshold', value), ('source', LITERATURE_TAG),
        ]))
    return rows


def closed_form_grid(xs, ys):
    """
    Closed-form f(x, y) against the margin computed on the GHZ/W mixture with the same signs.
    Points outside the simplex are skipped. For every x where f(x, .) changes sign on the simplex, a row of
    kind 'crossing' at the root y is added after the grid rows of that x.

    :return: (rows, skipped) with rows of (kind, x, y, f, engine margin, |difference|)
    """
    rows, skipped = [], 0

    def _row(kind, x, y):
        f = closed_form_f(x, y)
        engine = corollary2(ghz_w_mix(x, y), mode='example').margin
        return OrderedDict([('kind', kind), ('x', float(x)), ('y', float(y)), ('f', f), ('engine_margin', engine),
                            ('delta', abs(f - engine))])

    with _first_warning_only(_CRITERIA_LOGGER):
        for x in xs:
            for y in ys:
                if x < 0. or y < 0. or x + y > 1. + 1.e-12:
                    skipped += 1
                    continue
                rows.append(_row('grid', x, y))
            root = closed_form_f_threshold(x) if 0. <= x <= 1. else None
            if root is not None:
                rows.append(_row('crossing', x, root))
    if skipped:
        logger.info('skipped %d grid points outside the simplex', skipped)
    return rows, skipped


def _ensemble_row(task):
    index, kind, dims, seed, terms, criterion, options = task
    report = evaluate(criterion, ensemble_member(kind, dims, seed, terms), **options)
    return OrderedDict([('index', index), ('seed', seed), ('statistic', report.statistic),
                        ('margin', report.margin), ('verdict', report.verdict.value)])


def evaluate_ensemble(config, criterion, jobs=1, **options):
    """
    Evaluates `criterion` on every member of the ensemble described by `config` (`states.EnsembleConfig`).
    With `jobs` > 1 members are evaluated in a process pool; rows are always ordered by index.

    :return: list of `OrderedDict` rows (index, seed, statistic, margin, verdict)
    """
    if config.count < 1:
        raise ValueError('ensemble count must be >= 1, got %s' % config.count)
    dims = as_dims(config.dims)
    tasks = [(i, config.kind, dims, config.seed + i, config.terms, criterion, options) for i in range(config.count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(_ensemble_row, tasks))
    return [_ensemble_row(t) for t in tasks]
