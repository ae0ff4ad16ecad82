"""
Command line front end.

Exit codes: 0 = GME detected (or crossing found / command completed), 1 = inconclusive or no crossing,
2 = error (invalid input, invalid state file, dimension mismatch).
"""
import argparse
import logging
import os
import sys
from collections import OrderedDict

import numpy as np

from fishergme.criteria import CRITERIA, COROLLARY2_MODES, evaluate, lemma_bounds, corollary1_threshold
from fishergme.save_and_load import Saver, Timer, FORMATS, load_state_file
from fishergme.scans import noise_family, scan_threshold, compare_thresholds, closed_form_grid, evaluate_ensemble
from fishergme.states import ghz, w3, ghz_w_mix, white_noise_mix, maximally_mixed, projector, EnsembleConfig, \
    as_dims

logger = logging.getLogger(__name__)

EXIT_DETECTED, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2

GRID_TOL = 1.e-8


def load_state(spec):
    """
    Builds the state named by `spec`: `ghz:d`, `w3`, `ghz-w-mix:x,y`, `white-noise:ghz:d:p`, `white-noise:w3:p`,
    `maximally-mixed:d`, or the path of a state file.

    :return: `DensityMatrix`
    """
    if os.path.exists(spec):
        return load_state_file(spec)
    name, _, rest = spec.partition(':')
    try:
        if name == 'ghz':
            return projector(ghz(int(rest)))
        if name == 'w3' and not rest:
            return projector(w3())
        if name == 'ghz-w-mix':
            x, y = (float(v) for v in rest.split(','))
            return ghz_w_mix(x, y)
        if name == 'white-noise':
            parts = rest.split(':')
            if parts[0] == 'ghz' and len(parts) == 3:
                d, p = int(parts[1]), float(parts[2])
                return white_noise_mix(ghz(d), p, d ** 3)
            if parts[0] == 'w3' and len(parts) == 2:
                return white_noise_mix(w3(), float(parts[1]), 8)
        if name == 'maximally-mixed':
            return maximally_mixed(int(rest))
    except ValueError as e:
        raise ValueError('malformed state specification %r: %s' % (spec, e))
    raise ValueError('unknown state %r: not a builtin and no such file' % spec)


def parse_signs(text):
    """
    '+,+,-' (one pattern for all Pauli operators) or '+,+,+;+,+,+;+,+,-' (one pattern per operator).
    """
    if text is None:
        return None

    def _pattern(p):
        signs = [{'+': 1, '-': -1, '+1': 1, '-1': -1}.get(s.strip()) for s in p.split(',')]
        if len(signs) != 3 or None in signs:
            raise ValueError('malformed sign pattern %r' % p)
        return tuple(signs)

    patterns = [_pattern(p) for p in text.split(';')]
    if len(patterns) == 1:
        return patterns[0]
    if len(patterns) != 3:
        raise ValueError('expected one or three sign patterns, got %d' % len(patterns))
    return tuple(patterns)


def parse_floats(text, count=None):
    if text is None:
        return None
    values = [float(v) for v in text.split(',')]
    if count is not None and len(values) != count:
        raise ValueError('expected %d comma separated values, got %r' % (count, text))
    return values


def parse_range(text):
    """
    'lo:hi:n' -> n evenly spaced values in [lo, hi]
    """
    try:
        lo, hi, n = text.split(':')
        return np.linspace(float(lo), float(hi), int(n))
    except ValueError:
        raise ValueError('malformed range %r, expected lo:hi:n' % text)


def _criterion_options(args):
    return {
        'mode': getattr(args, 'mode', None),
        'signs': parse_signs(getattr(args, 'signs', None)),
        'k': getattr(args, 'k', None),
        'bounds': parse_floats(getattr(args, 'bounds', None), 2),
        'f_locals': parse_floats(getattr(args, 'f_locals', None), 3),
        'f_pairs': parse_floats(getattr(args, 'f_pairs', None), 3),
    }


def cmd_eval(args):
    rho = load_state(args.state)
    report = evaluate(args.criterion, rho, **_criterion_options(args))
    row = OrderedDict(report.to_dict())
    row['dims'] = list(rho.dims)
    row['state-spec'] = args.state
    Saver(args.format, args.out).add(row).write()
    return EXIT_DETECTED if report.detected else EXIT_INCONCLUSIVE


def cmd_scan(args):
    family = noise_family(args.family)
    result = scan_threshold(family, args.criterion, args.lo, args.hi, args.tol, args.samples,
                            **_criterion_options(args))
    saver = Saver(args.format, args.out)
    for value, margin in result.margins:
        saver.add(OrderedDict([('kind', 'sample'), ('parameter', result.parameter), ('value', value),
                               ('margin', margin)]))
    if result.crossed:
        for kind, value in (('lo', result.lo), ('hi', result.hi), ('threshold', result.threshold)):
            saver.add(OrderedDict([('kind', kind), ('parameter', result.parameter), ('value', value),
                                   ('margin', '')]))
        saver.annotate('iterations', result.iterations)
    else:
        saver.add(OrderedDict([('kind', 'threshold'), ('parameter', result.parameter), ('value', 'no crossing'),
                               ('margin', '')]))
    saver.write()
    return EXIT_DETECTED if result.crossed else EXIT_INCONCLUSIVE


def cmd_grid(args):
    if args.xs or args.ys:
        xs = parse_range(args.xs or '0:1:%d' % args.resolution)
        ys = parse_range(args.ys or '0:1:%d' % args.resolution)
    else:
        xs = ys = np.linspace(0., 1., args.resolution)
    rows, skipped = closed_form_grid(xs, ys)
    max_delta = max((r['delta'] for r in rows), default=0.)
    Saver(args.format, args.out).extend(rows).annotate('skipped', skipped).annotate('max_delta', max_delta).write()
    if max_delta > GRID_TOL:
        logger.error('closed form and computed margins differ by %.3e', max_delta)
        return EXIT_INCONCLUSIVE
    return EXIT_DETECTED


def cmd_bounds(args):
    f1, f2 = lemma_bounds(args.d)
    threshold = corollary1_threshold(args.d)
    row = OrderedDict([('d', args.d), ('F1', f1), ('F2', f2), ('threshold', threshold),
                       ('F1+F2=threshold', bool(np.isclose(f1 + f2, threshold, rtol=0., atol=1.e-12)))])
    Saver(args.format, args.out).add(row).write()
    return EXIT_DETECTED


def cmd_compare(args):
    criteria = args.criteria.split(',') if args.criteria else None
    rows = compare_thresholds(args.family, criteria, args.tol, args.samples)
    Saver(args.format, args.out).extend(rows).write()
    return EXIT_DETECTED


def cmd_ensemble(args):
    dims = as_dims([int(v) for v in args.dims.split(',')] if ',' in args.dims else int(args.dims))
    config = EnsembleConfig(args.count, args.seed, args.kind, dims, args.terms)
    rows = evaluate_ensemble(config, args.criterion, args.jobs, **_criterion_options(args))
    detected = sum(r['verdict'] == 'GME-detected' for r in rows)
    Saver(args.format, args.out).extend(rows).annotate('detected', detected).write()
    return EXIT_DETECTED if detected else EXIT_INCONCLUSIVE


def _add_criterion_options(parser):
    parser.add_argument('--criterion', choices=CRITERIA, default='corollary2')
    parser.add_argument('--mode', choices=COROLLARY2_MODES, default=None,
                        help='sign search of corollary2 (default per-operator)')
    parser.add_argument('--signs', default=None, help="explicit corollary2 signs, '+,+,-' or '+,+,+;+,+,+;+,+,-'")
    parser.add_argument('--k', type=int, default=None, help='Ky Fan k of tensor-knorm (default: best k)')
    parser.add_argument('--bounds', default=None, help='F1,F2 for theorem1-custom')
    parser.add_argument('--f-locals', default=None, help='F_a,F_b,F_c for theorem2')
    parser.add_argument('--f-pairs', default=None, help='F_ab,F_ac,F_bc for theorem2')


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--tol', type=float, default=1.e-6, help='bisection tolerance (default 1e-6)')
    common.add_argument('--seed', type=int, default=0)
    common.add_argument('--format', choices=FORMATS, default='text')
    common.add_argument('--out', default=None, help='output file (relative to FISHERGME_EXP_FOLDER)')
    common.add_argument('--jobs', type=int, default=1)
    common.add_argument('-v', '--verbose', action='count', default=0)

    parser = argparse.ArgumentParser(prog='fishergme', description='Fisher-information criteria for genuine '
                                                                    'tripartite entanglement')
    sub = parser.add_subparsers(dest='command', required=True)

    p_eval = sub.add_parser('eval', parents=[common], help='evaluate a criterion on a state',
                            description='columns: criterion, statistic, threshold, margin, verdict, details, '
                                        'dims, state-spec')
    p_eval.add_argument('state', help='ghz:d | w3 | ghz-w-mix:x,y | white-noise:ghz:d:p | white-noise:w3:p | '
                                      'maximally-mixed:d | path of a state file')
    _add_criterion_options(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_scan = sub.add_parser('scan', parents=[common], help='bisect the detection threshold along a family',
                            description='columns: kind (sample|lo|hi|threshold), parameter, value, margin')
    p_scan.add_argument('family', help='w-noise | ghz-noise:d=D | ghz-w-mix:x=X | maximally-mixed:d=D')
    p_scan.add_argument('--lo', type=float, default=None)
    p_scan.add_argument('--hi', type=float, default=None)
    p_scan.add_argument('--samples', type=int, default=11)
    _add_criterion_options(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_grid = sub.add_parser('grid', parents=[common], help='closed form f(x, y) against computed margins',
                            description='columns: kind (grid|crossing), x, y, f, engine_margin, delta')
    p_grid.add_argument('--xs', default=None, help='lo:hi:n')
    p_grid.add_argument('--ys', default=None, help='lo:hi:n')
    p_grid.add_argument('--resolution', type=int, default=50)
    p_grid.set_defaults(func=cmd_grid)

    p_bounds = sub.add_parser('bounds', parents=[common], help='single and two-party bounds for dimension d',
                              description='columns: d, F1, F2, threshold, F1+F2=threshold')
    p_bounds.add_argument('--d', type=int, default=2)
    p_bounds.set_defaults(func=cmd_bounds)

    p_compare = sub.add_parser('compare', parents=[common], help='thresholds of several criteria on a family',
                               description='columns: family, criterion, parameter, threshold, source')
    p_compare.add_argument('family')
    p_compare.add_argument('--criteria', default=None, help='comma separated (default depends on the family)')
    p_compare.add_argument('--samples', type=int, default=11)
    p_compare.set_defaults(func=cmd_compare)

    p_ensemble = sub.add_parser('ensemble', parents=[common], help='evaluate a criterion on random states',
                                description='columns: index, seed, statistic, margin, verdict')
    p_ensemble.add_argument('--kind', choices=('pure', 'mixed', 'biseparable'), default='biseparable')
    p_ensemble.add_argument('--count', type=int, default=100)
    p_ensemble.add_argument('--dims', default='2', help='d or da,db,dc')
    p_ensemble.add_argument('--terms', type=int, default=1)
    _add_criterion_options(p_ensemble)
    p_ensemble.set_defaults(func=cmd_ensemble)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')
    try:
        with Timer():
            return args.func(args)
    except (ValueError, ArithmeticError, OSError) as e:
        print('fishergme: error: %s' % e, file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
