import csv
import json
import math
import os

import pytest

import propagate
from quadprop.configs.run_config import load_config, resolve_columns
from quadprop.utils.errors import ConfigError

HARMONIC = """
[system]
omega = 1

[potential]
family = harmonic

[integration]
t_max = 1
step = 0.1
"""


def read_csv(path):
    with open(path, newline='') as f:
        rows = list(csv.reader(f))
    return rows[0], rows[1:]


def test_simulate_harmonic(write_config, tmp_path, capsys):
    config = write_config(HARMONIC)
    out = str(tmp_path / 'harmonic.csv')
    assert propagate.main(['simulate', config, '--output', out]) == 0
    header, rows = read_csv(out)
    assert header == ['t', 'u', 'alpha', 'beta', 'lambda_phase', 'zeta', 'energy',
                      'P0', 'P1', 'P2', 'P3', 'P4', 'P5', 'P6']
    assert len(rows) == 11
    assert float(rows[-1][0]) == 1.0
    assert float(rows[-1][2]) == pytest.approx(math.cos(1.0), abs=1e-9)
    assert float(rows[-1][6]) == pytest.approx(0.5, abs=1e-9)
    # the matched ground state is never excited
    assert [float(v) for v in rows[-1][7:]] == [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]

    with open(out + '.summary.json') as f:
        summary = json.load(f)
    assert summary['rows'] == 11
    assert summary['family'] == 'harmonic'
    assert summary['wronskian_drift'] < 1e-9
    assert summary['min_zeta'] == pytest.approx(1.0, abs=1e-8)
    assert capsys.readouterr().err == ''


def test_simulate_driven_defaults(write_config, tmp_path):
    config = write_config("""
[system]
omega = 1
[potential]
family = driven-harmonic
drive = e0*sin(Omega*t)
[parameters]
e0 = 0.2
Omega = 1.3
[integration]
t_max = 2
step = 0.5
[outputs]
n_max = 3
format = json
""")
    out = str(tmp_path / 'driven.json')
    assert propagate.main(['simulate', config, '--output', out]) == 0
    with open(out) as f:
        records = json.load(f)
    assert len(records) == 5
    assert list(records[0])[-4:] == ['P0', 'P1', 'P2', 'P3']
    assert records[0]['P0'] == 1.0
    assert sum(records[-1][f'P{n}'] for n in range(4)) <= 1.0
    assert records[-1]['t1'] == pytest.approx(0.0, abs=1e-12)


def test_simulate_paul_trap_levels(write_config, tmp_path):
    config = write_config("""
[potential]
family = paul-trap
[integration]
u_max = 2
step = 0.5
[outputs]
columns = u, zeta, energy_ratio, purity, P0, P1, P2
""")
    out = str(tmp_path / 'trap.csv')
    assert propagate.main(['simulate', config, '--output', out, '--rtol', '1e-9']) == 0
    header, rows = read_csv(out)
    assert header == ['u', 'zeta', 'energy_ratio', 'purity', 'P0', 'P1', 'P2']
    assert [float(r[0]) for r in rows] == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert float(rows[0][2]) == pytest.approx(0.75)
    for row in rows:
        assert float(row[3]) == pytest.approx(1.0, abs=1e-9)
        assert float(row[5]) == 0.0


def test_general_lagrangian_config(write_config, tmp_path):
    config = write_config("""
[potential]
a1 = 0.1*sin(t)
a2 = -1
a4 = f0*exp(-t/tau)
[parameters]
f0 = 0.2
tau = 3
[initial]
width = 1
[integration]
t_max = 1
step = 0.25
""")
    out = str(tmp_path / 'lagrangian.csv')
    assert propagate.main(['simulate', config, '--output', out]) == 0
    with open(out + '.summary.json') as f:
        summary = json.load(f)
    assert 'tau' in summary['e']


def test_kernel_free(write_config, tmp_path):
    config = write_config("""
[potential]
family = free
[initial]
width = 1
[kernel]
t = 0.5
x_points = 3
xp_points = 4
""")
    out = str(tmp_path / 'kernel.csv')
    assert propagate.main(['kernel', config, '--output', out]) == 0
    header, rows = read_csv(out)
    assert header == ['x', 'x_prime', 're', 'im', 'abs']
    assert len(rows) == 12
    for row in rows:
        assert float(row[4]) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-9)
    assert not os.path.exists(out + '.summary.json')


def test_kernel_at_caustic_exits_3(write_config, tmp_path, capsys):
    config = write_config(HARMONIC + """
[kernel]
t = 0
""")
    code = propagate.main(['kernel', config, '--output', str(tmp_path / 'k.csv')])
    assert code == 3
    assert 'CausticError' in capsys.readouterr().err
    assert os.listdir(tmp_path) == ['run.ini']


def test_wigner_json(write_config, tmp_path):
    config = write_config(HARMONIC + """
[wigner]
t = 0.5
x_points = 5
p_points = 3
""")
    out = str(tmp_path / 'w.json')
    assert propagate.main(['wigner', config, '--output', out, '--format', 'json']) == 0
    with open(out) as f:
        records = json.load(f)
    assert len(records) == 15
    peak = [r for r in records if r['x'] == 0.0 and r['p'] == 0.0]
    assert peak[0]['w'] == pytest.approx(2.0, rel=1e-8)


def test_scan(write_config, tmp_path):
    config = write_config("""
[potential]
family = paul-trap
[scan]
a_min = -0.5
a_max = 1.5
a_points = 3
q_min = 0
q_max = 0.5
q_points = 2
""")
    out = str(tmp_path / 'scan.csv')
    assert propagate.main(['scan', config, '--output', out]) == 0
    header, rows = read_csv(out)
    assert header == ['a', 'q', 'abs_trace', 'stable', 'error']
    assert len(rows) == 6
    assert rows[0][3] == '0' and rows[4][3] == '1'
    assert all(r[4] == '' for r in rows)


@pytest.mark.parametrize('body, line, fragment', [
    (HARMONIC + "bogus = 1\n", 11, "unknown key 'bogus'"),
    ("[system]\nmass = -1\n", 2, 'system.mass'),
    ("[potential]\nfamily = custom\nc_expr = 1 + * t\n", 3, 'offset 4'),
    ("[potential]\nfamily = custom\nc_expr = k*t\n[initial]\nwidth = 1\n", 2, "'k'"),
    ("[nonsense]\nx = 1\n", 1, 'unknown section'),
    ("[parameters]\nt = 1\n", 2, "invalid parameter name 't'"),
    ("x = 1\n", 1, 'outside of any section'),
    ("[system]\nomega = 1\n[potential]\nfamily = harmonic\ndrive = 0.1*t\n", 5,
     "key 'drive' is not used by family 'harmonic'"),
    ("[potential]\nfamily = paul-trap\nc_expr = t\n", 3, "key 'c_expr' is not used"),
])
def test_config_errors_name_the_line(write_config, body, line, fragment):
    path = write_config(body)
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.line == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"{path}:{line}: ")


def test_config_error_exit_code(write_config, tmp_path, capsys):
    config = write_config("[potential]\nfamily = custom\nc_expr = sin(\n")
    assert propagate.main(['simulate', config, '--output', str(tmp_path / 'x.csv')]) == 2
    err = capsys.readouterr().err
    assert err.startswith('error: ConfigError: ')
    assert 'offset' in err


def test_missing_config_and_bad_tolerance(tmp_path, capsys):
    assert propagate.main(['simulate', str(tmp_path / 'nope.ini')]) == 4
    assert capsys.readouterr().err.startswith('error: FileNotFoundError: ')
    assert propagate.main(['simulate', str(tmp_path / 'nope.ini'), '--rtol', '-1']) == 2


def test_missing_output_path(write_config):
    assert propagate.main(['simulate', write_config(HARMONIC)]) == 2


def test_unwritable_output_exits_4(write_config, tmp_path):
    out = str(tmp_path / 'missing' / 'dir' / 'out.csv')
    assert propagate.main(['simulate', write_config(HARMONIC), '--output', out]) == 4


def test_unknown_command():
    with pytest.raises(SystemExit) as info:
        propagate.main(['explode', 'run.ini'])
    assert info.value.code == 2


def test_overrides_and_columns(write_config):
    cfg = load_config(write_config(HARMONIC), overrides={'integration.rtol': 1e-6,
                                                         'outputs.path': 'x.csv'})
    assert cfg.integration.rtol == 1e-6
    assert cfg.outputs.path == 'x.csv'
    assert cfg.potential.family == 'harmonic'

    cfg = load_config(write_config("[potential]\nfamily = driven-harmonic\ndrive = 0.1\n"
                                   "[outputs]\nn_max = 2\n"))
    columns = resolve_columns(cfg)
    assert columns[-3:] == ['P0', 'P1', 'P2']
    cfg.outputs.columns = ['zeta', 'nope']
    with pytest.raises(ValueError):
        resolve_columns(cfg)


def test_driven_columns_need_driven_family(write_config):
    with pytest.raises(ConfigError):
        load_config(write_config("[potential]\nfamily = free\n[initial]\nwidth = 1\n"
                                 "[outputs]\ncolumns = t, com_energy\n"))
