import argparse
import binascii
import json
import logging
import os
import os.path as osp

import numpy as np

__all__ = ['str2bool', 'rand_name', 'format_float', 'cache_table', 'cache_json']


def rand_name(length=8, suffix=''):
    name = binascii.b2a_hex(os.urandom(length)).decode('utf-8')
    if suffix:
        if not suffix.startswith('.'):
            suffix = '.' + suffix
        name += suffix
    return name


def format_float(value):
    """Shortest decimal that round-trips to the same double."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    if value is None:
        return ''
    return repr(float(value))


def _to_json(value):
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else repr(value)
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    return value


def _commit(tmp_file, save_file, write):
    try:
        with open(tmp_file, 'w', newline='\n', encoding='utf-8') as f:
            write(f)
        os.replace(tmp_file, save_file)
    except BaseException:
        if osp.exists(tmp_file):
            os.remove(tmp_file)
        raise


def cache_table(columns, rows, save_file, fmt='csv'):
    """
    Write ``rows`` under the header ``columns`` to ``save_file`` atomically.

    The table goes to a temporary sibling first and is renamed into place, so a failure
    never leaves a partial file behind.

    Args:
        columns (`list[str]`):
            Column names.
        rows (`Iterable[Sequence]`):
            One sequence per row, in column order.
        save_file (`str`):
            Destination path.
        fmt (`str`, defaults to 'csv'):
            'csv' (comma separated, LF line endings, shortest round-trip floats) or 'json'
            (a list of objects keyed by column).
    """
    if fmt not in ('csv', 'json'):
        raise ValueError(f"unsupported output format '{fmt}'")
    folder = osp.dirname(osp.abspath(save_file))
    tmp_file = osp.join(folder, '.' + rand_name(suffix='.tmp'))

    def write_csv(f):
        f.write(','.join(columns) + '\n')
        for row in rows:
            f.write(','.join(format_float(v) for v in row) + '\n')

    def write_json(f):
        records = [{k: _to_json(v) for k, v in zip(columns, row)} for row in rows]
        json.dump(records, f, indent=1)
        f.write('\n')

    _commit(tmp_file, save_file, write_csv if fmt == 'csv' else write_json)
    logging.info(f"wrote {save_file}")
    return save_file


def cache_json(payload, save_file):
    folder = osp.dirname(osp.abspath(save_file))
    tmp_file = osp.join(folder, '.' + rand_name(suffix='.tmp'))

    def write(f):
        json.dump({k: _to_json(v) for k, v in payload.items()}, f, indent=2, sort_keys=True)
        f.write('\n')

    _commit(tmp_file, save_file, write)
    return save_file


def str2bool(v):
    """
    Convert a string to a boolean.

    Supported true values: 'yes', 'true', 't', 'y', '1'
    Supported false values: 'no', 'false', 'f', 'n', '0'

    Raises:
        argparse.ArgumentTypeError: If the value cannot be converted to boolean.
    """
    if isinstance(v, bool):
        return v
    v_lower = v.strip().lower()
    if v_lower in ('yes', 'true', 't', 'y', '1'):
        return True
    elif v_lower in ('no', 'false', 'f', 'n', '0'):
        return False
    else:
        raise argparse.ArgumentTypeError(f"Boolean value expected, got '{v}'")
