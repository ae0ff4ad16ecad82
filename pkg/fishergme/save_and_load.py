import csv
import io
import json
import logging
import os
import sys
import time
from collections import OrderedDict
from functools import reduce

import numpy as np

from fishergme.states import DensityMatrix
from fishergme.utils import InvalidStateError, DimensionMismatchError

try:
    from tabulate import tabulate
except ImportError:
    tabulate = None

logger = logging.getLogger(__name__)

if tabulate is None:
    logger.debug('library "tabulate" not found, text output falls back to "key: value" lines')


def join_paths(*paths):
    return reduce(lambda acc, new_path: os.path.join(acc, new_path), paths)


_EXP_ROOT_FOLDER = os.getenv('FISHERGME_EXP_FOLDER') or os.getcwd()

FORMATS = ('csv', 'json', 'text')


def resolve_output_path(path):
    """
    Relative output paths are taken relative to FISHERGME_EXP_FOLDER (default: current directory).
    """
    return path if os.path.isabs(path) else join_paths(_EXP_ROOT_FOLDER, path)


class Timer:
    """
    Stopwatch class for timing the experiments. Uses `time` module.
    """

    _div_unit = {'ms': 1. / 1000,
                 'sec': 1.,
                 'min': 60.,
                 'hr': 3600.}

    def __init__(self, unit='sec', round_off=False):
        if unit not in Timer._div_unit:
            raise ValueError('unknown time unit %s, expected one of %s' % (unit, list(Timer._div_unit)))
        self._starting_times = []
        self._stopping_times = []
        self._running = False
        self.round_off = round_off
        self.unit = unit

    def reset(self):
        self._starting_times = []
        self._stopping_times = []
        self._running = False

    def start(self):
        if not self._running:
            self._starting_times.append(time.perf_counter())
            self._running = True
        return self

    def stop(self):
        if self._running:
            self._stopping_times.append(time.perf_counter())
            self._running = False
        return self

    def raw_elapsed_time_list(self):
        def _maybe_add_last():
            t2 = self._stopping_times if len(self._starting_times) == len(self._stopping_times) else \
                self._stopping_times + [time.perf_counter()]
            return zip(self._starting_times, t2)

        return [t2 - t1 for t1, t2 in _maybe_add_last()]

    def elapsed_time(self):
        res = sum(self.raw_elapsed_time_list()) / Timer._div_unit[self.unit]
        return res if not self.round_off else int(res)

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()
        logger.info('elapsed time: %s %s', self.elapsed_time(), self.unit)


def _csv_value(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, default=_json_default)
    return v


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError('%s is not JSON serializable' % type(obj).__name__)


class Saver:
    """
    Collects result rows (dictionaries with the same keys) and writes them as csv, json or a text table.
    """

    def __init__(self, fmt='csv', out=None, timer=None):
        """
        :param fmt: one of 'csv', 'json', 'text'
        :param out: (optional) output file; relative paths are resolved with `resolve_output_path`.
                    Rows go to stdout when omitted.
        :param timer: (optional) `Timer`; its elapsed time is logged when the rows are written
        """
        if fmt not in FORMATS:
            raise ValueError('unknown output format %s, expected one of %s' % (fmt, FORMATS))
        self.fmt = fmt
        self.out = resolve_output_path(out) if out else None
        self.timer = timer
        self.rows = []
        self.annotations = OrderedDict()

    def add(self, row):
        self.rows.append(OrderedDict(row))
        return self

    def extend(self, rows):
        for r in rows:
            self.add(r)
        return self

    def annotate(self, key, value):
        """
        Extra information printed after the rows (text) or stored next to them (json). Not part of csv output.
        """
        self.annotations[key] = value
        return self

    def render(self):
        if self.fmt == 'json':
            payload = self.rows[0] if len(self.rows) == 1 and not self.annotations else \
                OrderedDict([('rows', self.rows)] + list(self.annotations.items()))
            return json.dumps(payload, indent=2, default=_json_default) + '\n'
        if self.fmt == 'csv':
            buffer = io.StringIO()
            if self.rows:
                writer = csv.DictWriter(buffer, fieldnames=list(self.rows[0]), lineterminator='\n')
                writer.writeheader()
                for r in self.rows:
                    writer.writerow({k: _csv_value(v) for k, v in r.items()})
            return buffer.getvalue()
        return self._render_text()

    def _render_text(self):
        lines = []
        if tabulate:
            if self.rows:
                lines.append(tabulate([list(r.values()) for r in self.rows], headers=list(self.rows[0]),
                                      floatfmt='.6f'))
        else:
            for r in self.rows:
                lines.extend('%s: %s' % (k, v) for k, v in r.items())
                lines.append('')
        lines.extend('%s: %s' % (k, v) for k, v in self.annotations.items())
        return '\n'.join(lines) + '\n'

    def write(self, stream=None):
        """
        Writes the rendered rows to `out` (if set) or to `stream` (default stdout).

        :return: the rendered text
        """
        text = self.render()
        if self.out:
            directory = os.path.dirname(self.out)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.out, 'w', newline='') as f:
                f.write(text)
            logger.info('%d rows written to %s', len(self.rows), self.out)
        else:
            (stream or sys.stdout).write(text)
        if self.timer:
            logger.info('elapsed time: %s %s', self.timer.elapsed_time(), self.timer.unit)
        return text


def load_state_file(path):
    """
    Reads a state file: a JSON document {"dims": [da, db, dc], "entries": [[[re, im], ...], ...]}.
    The state is fully validated (Hermiticity, trace, positivity).

    :return: `DensityMatrix`
    """
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidStateError('state file %s is not valid JSON: %s' % (path, e))
    if not isinstance(doc, dict) or 'dims' not in doc or 'entries' not in doc:
        raise InvalidStateError('state file %s needs the keys "dims" and "entries"' % path)
    try:
        entries = np.asarray(doc['entries'], dtype=float)
    except (TypeError, ValueError) as e:
        raise InvalidStateError('state file %s: entries must be nested [re, im] pairs (%s)' % (path, e))
    if entries.ndim != 3 or entries.shape[2] != 2 or entries.shape[0] != entries.shape[1]:
        raise DimensionMismatchError('state file %s: entries must be a square matrix of [re, im] pairs, '
                                     'got shape %s' % (path, entries.shape))
    if len(doc['dims']) != 3:
        raise DimensionMismatchError('state file %s: dims must list three local dimensions' % path)
    return DensityMatrix(doc['dims'], entries[..., 0] + 1.j * entries[..., 1], validate=True)


def save_state_file(path, rho):
    """
    Writes `rho` (`DensityMatrix`) in the format read by `load_state_file`.
    """
    m = rho.matrix
    doc = {'dims': list(rho.dims), 'entries': np.stack([m.real, m.imag], axis=-1).tolist()}
    with open(path, 'w') as f:
        json.dump(doc, f)
    return path
