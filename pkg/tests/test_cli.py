import contextlib
import io
import json
import os
import tempfile
import unittest

import numpy as np

from fishergme.cli import main, load_state, parse_signs, parse_range, EXIT_DETECTED, EXIT_INCONCLUSIVE, EXIT_ERROR
from fishergme.save_and_load import save_state_file
from fishergme.states import maximally_mixed, DensityMatrix
from fishergme.tensor_core import DimensionSpec


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestParsers(unittest.TestCase):

    def test_load_state(self):
        self.assertEqual(load_state('ghz:3').dims, DimensionSpec(3))
        self.assertEqual(load_state('white-noise:w3:0.5').dims, DimensionSpec(2))
        np.testing.assert_allclose(load_state('maximally-mixed:2').matrix, np.eye(8) / 8.)
        self.assertRaises(ValueError, load_state, 'ghz-w-mix:0.5')
        self.assertRaises(ValueError, load_state, 'thermal:2')

    def test_parse_signs(self):
        self.assertEqual(parse_signs('+,+,-'), (1, 1, -1))
        self.assertEqual(parse_signs('+,+,+;+,+,+;+,+,-'), ((1, 1, 1), (1, 1, 1), (1, 1, -1)))
        self.assertIsNone(parse_signs(None))
        self.assertRaises(ValueError, parse_signs, '+,+')
        self.assertRaises(ValueError, parse_signs, '+,+,+;+,+,+')

    def test_parse_range(self):
        np.testing.assert_allclose(parse_range('0:1:3'), [0., .5, 1.])
        self.assertRaises(ValueError, parse_range, '0:1')


class TestEval(unittest.TestCase):

    def test_w_state(self):
        code, out, _ = run('eval', 'w3', '--criterion', 'corollary2', '--format', 'json')
        self.assertEqual(code, EXIT_DETECTED)
        row = json.loads(out)
        self.assertAlmostEqual(row['margin'], 7.5556, delta=1.e-3)
        self.assertEqual(row['verdict'], 'GME-detected')
        self.assertEqual(row['dims'], [2, 2, 2])
        self.assertEqual(row['state-spec'], 'w3')

    def test_noisy_ghz(self):
        code, _, _ = run('eval', 'white-noise:ghz:2:0.5', '--criterion', 'corollary1')
        self.assertEqual(code, EXIT_INCONCLUSIVE)

    def test_state_file(self):
        with tempfile.TemporaryDirectory() as folder:
            path = save_state_file(os.path.join(folder, 'mixed.json'), maximally_mixed(2))
            code, out, _ = run('eval', path, '--format', 'json')
            self.assertEqual(code, EXIT_INCONCLUSIVE)
            self.assertAlmostEqual(json.loads(out)['margin'], -10., delta=1.e-12)

    def test_errors(self):
        code, _, err = run('eval', 'thermal:2')
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn('fishergme: error', err)
        with tempfile.TemporaryDirectory() as folder:
            path = save_state_file(os.path.join(folder, 'bad.json'), DensityMatrix(2, np.eye(8) / 4.))
            code, _, err = run('eval', path)
            self.assertEqual(code, EXIT_ERROR)
            self.assertIn('trace', err)
        code, _, _ = run('eval', 'ghz:3', '--criterion', 'corollary2')
        self.assertEqual(code, EXIT_ERROR)
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(['eval', 'w3', '--criterion', 'entropy'])
        self.assertEqual(ctx.exception.code, 2)


class TestCommands(unittest.TestCase):

    def test_bounds(self):
        code, out, _ = run('bounds', '--d', '3', '--format', 'json')
        self.assertEqual(code, EXIT_DETECTED)
        row = json.loads(out)
        self.assertAlmostEqual(row['F1'], 4., delta=1.e-12)
        self.assertAlmostEqual(row['F2'], 40. / 3., delta=1.e-12)
        self.assertAlmostEqual(row['threshold'], 52. / 3., delta=1.e-12)
        self.assertTrue(row['F1+F2=threshold'])

    def test_scan(self):
        code, out, _ = run('scan', 'w-noise', '--format', 'json')
        self.assertEqual(code, EXIT_DETECTED)
        rows = json.loads(out)['rows']
        threshold = [r for r in rows if r['kind'] == 'threshold'][0]
        self.assertAlmostEqual(threshold['value'], .647236, delta=1.e-4)

    def test_scan_no_crossing(self):
        code, out, _ = run('scan', 'maximally-mixed:d=2', '--criterion', 'corollary1', '--samples', '3',
                           '--format', 'csv')
        self.assertEqual(code, EXIT_INCONCLUSIVE)
        self.assertIn('no crossing', out)

    def test_grid(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'grid.json')
            code, out, _ = run('grid', '--resolution', '6', '--format', 'json', '--out', path)
            self.assertEqual(code, EXIT_DETECTED)
            self.assertEqual(out, '')
            with open(path) as f:
                doc = json.load(f)
        grid = [r for r in doc['rows'] if r['kind'] == 'grid']
        self.assertEqual(len(grid), 21)
        crossing = [r for r in doc['rows'] if r['kind'] == 'crossing' and r['x'] == 0.][0]
        self.assertTrue(.6472 <= crossing['y'] <= .6473)
        self.assertAlmostEqual(crossing['f'], 0., delta=1.e-8)
        self.assertEqual(doc['skipped'], 15)
        self.assertLessEqual(doc['max_delta'], 1.e-8)

    def test_compare(self):
        code, out, _ = run('compare', 'ghz-noise:d=2', '--criteria', 'corollary1', '--format', 'csv')
        self.assertEqual(code, EXIT_DETECTED)
        lines = out.splitlines()
        self.assertEqual(lines[0], 'family,criterion,parameter,threshold,source')
        self.assertEqual(len(lines), 3)

    def test_ensemble(self):
        code, out, _ = run('ensemble', '--count', '5', '--criterion', 'corollary1', '--terms', '2',
                           '--format', 'json')
        self.assertEqual(code, EXIT_INCONCLUSIVE)
        doc = json.loads(out)
        self.assertEqual(len(doc['rows']), 5)
        self.assertEqual(doc['detected'], 0)

    def test_ensemble_pure(self):
        code, _, _ = run('ensemble', '--kind', 'pure', '--count', '3', '--dims', '2,2,2', '--criterion',
                         'corollary2', '--signs', '+,+,+')
        self.assertIn(code, (EXIT_DETECTED, EXIT_INCONCLUSIVE))


if __name__ == '__main__':
    unittest.main()
