import json
import os
import tempfile
import unittest
from collections import OrderedDict

import numpy as np

from fishergme.save_and_load import Timer, Saver, load_state_file, save_state_file, resolve_output_path
from fishergme.states import ghz_w_mix, random_mixed
from fishergme.utils import InvalidStateError, NotHermitianError, DimensionMismatchError


class TestTimer(unittest.TestCase):

    def test_elapsed(self):
        timer = Timer('ms')
        with timer:
            sum(range(1000))
        first = timer.elapsed_time()
        self.assertGreaterEqual(first, 0.)
        self.assertEqual(timer.elapsed_time(), first)
        timer.reset()
        self.assertEqual(timer.elapsed_time(), 0.)

    def test_unit(self):
        self.assertRaises(ValueError, Timer, 'days')


class TestSaver(unittest.TestCase):

    def _rows(self):
        return [OrderedDict([('criterion', 'corollary2'), ('margin', .1), ('signs', [1, 1, -1])]),
                OrderedDict([('criterion', 'corollary1'), ('margin', -2.5), ('signs', [])])]

    def test_csv(self):
        text = Saver('csv').extend(self._rows()).render()
        lines = text.splitlines()
        self.assertEqual(lines[0], 'criterion,margin,signs')
        self.assertEqual(lines[1], 'corollary2,0.1,"[1, 1, -1]"')
        self.assertEqual(lines[2], 'corollary1,-2.5,[]')

    def test_json(self):
        single = json.loads(Saver('json').add(self._rows()[0]).render())
        self.assertEqual(single['margin'], .1)
        self.assertEqual(single['signs'], [1, 1, -1])
        doc = json.loads(Saver('json').extend(self._rows()).annotate('skipped', 3).render())
        self.assertEqual(len(doc['rows']), 2)
        self.assertEqual(doc['skipped'], 3)

    def test_json_numpy_values(self):
        doc = json.loads(Saver('json').add({'value': np.float64(.5), 'vector': np.arange(2)}).render())
        self.assertEqual(doc, {'value': .5, 'vector': [0, 1]})

    def test_text(self):
        text = Saver('text').extend(self._rows()).annotate('max_delta', 0.).render()
        self.assertIn('criterion', text)
        self.assertIn('corollary1', text)
        self.assertIn('max_delta: 0.0', text)

    def test_write_file(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'sub', 'rows.csv')
            text = Saver('csv', path).extend(self._rows()).write()
            with open(path) as f:
                self.assertEqual(f.read(), text)

    def test_invalid_format(self):
        self.assertRaises(ValueError, Saver, 'xml')

    def test_absolute_path(self):
        path = os.path.abspath('rows.json')
        self.assertEqual(resolve_output_path(path), path)


class TestStateFile(unittest.TestCase):

    def setUp(self):
        self.folder = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.folder.cleanup()

    def _write(self, doc):
        path = os.path.join(self.folder.name, 'state.json')
        with open(path, 'w') as f:
            json.dump(doc, f)
        return path

    def _doc(self, m, dims=(2, 2, 2)):
        return {'dims': list(dims), 'entries': np.stack([m.real, m.imag], axis=-1).tolist()}

    def test_save_and_load(self):
        for rho in (ghz_w_mix(.3, .4), random_mixed((2, 3, 2), 5)):
            path = save_state_file(os.path.join(self.folder.name, 'rho.json'), rho)
            loaded = load_state_file(path)
            self.assertEqual(loaded.dims, rho.dims)
            np.testing.assert_array_equal(loaded.matrix, rho.matrix)

    def test_not_hermitian(self):
        m = np.eye(8, dtype=complex) / 8.
        m[0, 1] = .1
        with self.assertRaises(NotHermitianError) as ctx:
            load_state_file(self._write(self._doc(m)))
        self.assertIn('Hermitian', str(ctx.exception))

    def test_trace(self):
        with self.assertRaises(InvalidStateError) as ctx:
            load_state_file(self._write(self._doc(np.eye(8, dtype=complex) / 4.)))
        self.assertIn('trace', str(ctx.exception))

    def test_not_positive(self):
        m = np.eye(8, dtype=complex) / 4.
        m[0, 0] = m[1, 1] = -.25
        with self.assertRaises(InvalidStateError) as ctx:
            load_state_file(self._write(self._doc(m)))
        self.assertIn('positive', str(ctx.exception))

    def test_malformed(self):
        self.assertRaises(InvalidStateError, load_state_file, self._write({'dims': [2, 2, 2]}))
        self.assertRaises(DimensionMismatchError, load_state_file,
                          self._write({'dims': [2, 2, 2], 'entries': [[1., 0.]]}))
        self.assertRaises(DimensionMismatchError, load_state_file,
                          self._write(self._doc(np.eye(8, dtype=complex) / 8., dims=(2, 2, 3))))
        path = os.path.join(self.folder.name, 'broken.json')
        with open(path, 'w') as f:
            f.write('{"dims": [2, 2')
        self.assertRaises(InvalidStateError, load_state_file, path)


if __name__ == '__main__':
    unittest.main()
