import argparse
import json
import os

import numpy as np
import pytest

from quadprop.utils.utils import cache_json, cache_table, format_float, str2bool


@pytest.mark.parametrize('value, text', [
    (0.1, '0.1'),
    (1.0 / 3.0, '0.3333333333333333'),
    (np.float64(2.5e-17), '2.5e-17'),
    (3, '3'),
    (np.int64(7), '7'),
    (True, '1'),
    ('ok', 'ok'),
    (None, ''),
    (float('nan'), 'nan'),
])
def test_format_float(value, text):
    assert format_float(value) == text


def test_csv_table(tmp_path):
    path = tmp_path / 'table.csv'
    cache_table(['t', 'x'], [[0.0, 1.0 / 3.0], [0.5, -2.0]], str(path))
    raw = path.read_bytes()
    assert b'\r' not in raw
    lines = raw.decode().splitlines()
    assert lines == ['t,x', '0.0,0.3333333333333333', '0.5,-2.0']
    assert float(lines[1].split(',')[1]) == 1.0 / 3.0


def test_json_table(tmp_path):
    path = tmp_path / 'table.json'
    cache_table(['a', 'stable'], [[np.float64(0.25), np.int64(1)], [np.nan, 2]], str(path),
                fmt='json')
    records = json.loads(path.read_text())
    assert records == [{'a': 0.25, 'stable': 1}, {'a': 'nan', 'stable': 2}]


def test_failed_write_leaves_nothing(tmp_path):

    def rows():
        yield [1.0]
        raise RuntimeError('interrupted')

    path = tmp_path / 'table.csv'
    with pytest.raises(RuntimeError):
        cache_table(['x'], rows(), str(path))
    assert os.listdir(tmp_path) == []


def test_existing_file_survives_failed_write(tmp_path):
    path = tmp_path / 'table.csv'
    path.write_text('old\n')
    with pytest.raises(ValueError):
        cache_table(['x'], [[1.0]], str(path), fmt='parquet')
    assert path.read_text() == 'old\n'


def test_summary_json(tmp_path):
    path = tmp_path / 'run.summary.json'
    cache_json({'rows': np.int64(3), 'min_zeta': np.float64(0.5), 'caustics': [1.0]}, str(path))
    assert json.loads(path.read_text()) == {'rows': 3, 'min_zeta': 0.5, 'caustics': [1.0]}


def test_str2bool():
    assert str2bool('Yes') is True
    assert str2bool(' 0 ') is False
    assert str2bool(False) is False
    with pytest.raises(argparse.ArgumentTypeError):
        str2bool('maybe')
