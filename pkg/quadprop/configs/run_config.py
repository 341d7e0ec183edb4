"""
Run configurations: INI files merged over the family defaults of ``FAMILY_CONFIGS``.

    [system]
    mass = 1
    omega = 1

    [potential]
    family = paul-trap
    q = 0.25

Every error names the file and, when it comes from a key, the line of that key.
"""
import argparse
import configparser
import copy
import errno
import logging
import os.path as osp
import re

from ..modules.potentials import FAMILIES, PotentialFamily, lagrangian_family, make_spec
from ..utils.errors import ConfigError, ExpressionError
from ..utils.expr_parser import parse_expression
from ..utils.utils import str2bool
from . import DEFAULT_COLUMNS, FAMILY_CONFIGS

__all__ = [
    'load_config', 'build_family', 'build_spec', 'initial_width', 'resolve_columns',
    'COLUMN_NAMES'
]

EXPRESSION_KEYS = ('drive', 'c_expr', 'e_expr', 'a1', 'a2', 'a3', 'a4')

# columns any family can emit
COMMON_COLUMNS = ('t', 'alpha', 'alpha_dot', 'beta', 'beta_dot', 'gamma', 'gamma_dot',
                  'lambda_phase', 'lambda_rate', 'zeta', 'precision', 'chirp', 'mean_x',
                  'mean_p', 'var_x', 'var_p', 'cov_xp', 'purity', 'energy', 'wronskian')
OMEGA_COLUMNS = ('u', 'beta_u', 'energy_ratio')
DRIVEN_COLUMNS = ('com_energy', 'mean_quanta', 'du_dt', 't1', 't2', 'chi', 'work_source',
                  'work_tr', 'heat_def', 'heat_tr')
COLUMN_NAMES = COMMON_COLUMNS + OMEGA_COLUMNS + DRIVEN_COLUMNS
LEVEL_COLUMN = re.compile(r'^P(\d+)$')

# [potential] keys each family reads besides `family`
FAMILY_KEYS = {
    'free': (),
    'harmonic': (),
    'driven-harmonic': ('drive',),
    'paul-trap': ('a', 'q', 'r'),
    'custom': ('c_expr', 'e_expr', 'a1', 'a2', 'a3', 'a4'),
}

_SECTION = re.compile(r'^\s*\[([^\]]+)\]')
_KEY = re.compile(r'^\s*([^=:#;\s\[][^=:]*?)\s*[=:]')


def _float(value):
    return float(value)


def _positive(value):
    value = float(value)
    if not value > 0:
        raise ValueError(f"must be positive, got {value}")
    return value


def _count(value):
    value = int(value)
    if value < 1:
        raise ValueError(f"must be at least 1, got {value}")
    return value


def _non_negative_int(value):
    value = int(value)
    if value < 0:
        raise ValueError(f"must be non-negative, got {value}")
    return value


def _family(value):
    value = value.strip().lower()
    if value not in FAMILIES:
        raise ValueError(f"unknown family '{value}', expected one of {', '.join(FAMILIES)}")
    return value


def _width(value):
    if value.strip().lower() == 'matched':
        return 'matched'
    return _positive(value)


def _columns(value):
    columns = [c.strip() for c in value.split(',') if c.strip()]
    if not columns:
        raise ValueError("empty column list")
    return columns


def _format(value):
    value = value.strip().lower()
    if value not in ('csv', 'json'):
        raise ValueError(f"format must be csv or json, got '{value}'")
    return value


def _text(value):
    return value.strip()


_GRID = {'t': _float}
for _axis in ('x', 'xp', 'p'):
    _GRID.update({f'{_axis}_min': _float, f'{_axis}_max': _float, f'{_axis}_points': _count})

SCHEMA = {
    'system': {'mass': _positive, 'hbar': _positive, 'omega': _positive},
    'potential': {'family': _family, 'a': _float, 'q': _float, 'r': _positive,
                  **{k: _text for k in EXPRESSION_KEYS}},
    'initial': {'width': _width},
    'integration': {'t_max': _positive, 'u_max': _positive, 'step': _positive,
                    'rtol': _positive, 'atol': _positive},
    'outputs': {'columns': _columns, 'n_max': _non_negative_int, 'path': _text,
                'format': _format, 'summary': str2bool},
    'kernel': {k: v for k, v in _GRID.items() if not k.startswith('p_')},
    'wigner': {k: v for k, v in _GRID.items() if not k.startswith('xp_')},
    'scan': {'a_min': _float, 'a_max': _float, 'a_points': _count, 'q_min': _float,
             'q_max': _float, 'q_points': _count, 'r': _positive},
}


def _line_index(text):
    sections, keys = {}, {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        match = _SECTION.match(line)
        if match:
            section = match.group(1).strip()
            sections.setdefault(section, lineno)
            continue
        match = _KEY.match(line)
        if match and section is not None:
            keys.setdefault((section, match.group(1).strip()), lineno)
    return sections, keys


def _read(path):
    if not osp.isfile(path):
        raise FileNotFoundError(errno.ENOENT, "no such config file", path)
    with open(path, encoding='utf-8') as f:
        text = f.read()
    parser = configparser.ConfigParser(inline_comment_prefixes=('#', ';'),
                                       interpolation=None,
                                       default_section='__defaults__')
    # parameter names are case sensitive
    parser.optionxform = str
    try:
        parser.read_string(text, source=path)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError("key outside of any section", path, e.lineno) from e
    except configparser.ParsingError as e:
        lineno = e.errors[0][0] if e.errors else None
        raise ConfigError("malformed line", path, lineno) from e
    except configparser.DuplicateOptionError as e:
        raise ConfigError(f"duplicate key '{e.option}' in [{e.section}]", path, e.lineno) from e
    except configparser.DuplicateSectionError as e:
        raise ConfigError(f"duplicate section [{e.section}]", path, e.lineno) from e
    return parser, text


def _parse_expressions(cfg, lines, path):
    for key in EXPRESSION_KEYS:
        src = cfg.potential[key]
        if not isinstance(src, str):
            continue
        try:
            cfg.potential[key] = parse_expression(src)
        except ExpressionError as e:
            raise ConfigError(f"{key}: {e}", path, lines.get(('potential', key))) from e


def load_config(path, overrides=None):
    """
    Parse and validate the run configuration at ``path``.

    Args:
        path (`str`):
            INI file.
        overrides (`dict`, *optional*):
            Dotted keys such as ``'integration.rtol'`` applied after the file.

    Returns:
        `EasyDict` with one entry per section.

    Raises:
        FileNotFoundError: ``path`` is not a file.
        ConfigError: syntax errors, unknown keys or invalid values.
    """
    parser, text = _read(path)
    sections, lines = _line_index(text)

    for section in parser.sections():
        if section not in SCHEMA and section != 'parameters':
            raise ConfigError(f"unknown section [{section}]", path, sections.get(section))

    family = 'custom'
    if parser.has_option('potential', 'family'):
        try:
            family = _family(parser.get('potential', 'family'))
        except ValueError as e:
            raise ConfigError(f"potential.family: {e}", path,
                              lines.get(('potential', 'family'))) from e
    cfg = copy.deepcopy(FAMILY_CONFIGS[family])
    cfg.source = osp.abspath(path)

    for section in parser.sections():
        for key, raw in parser.items(section):
            line = lines.get((section, key))
            if section == 'parameters':
                if not re.match(r'^[A-Za-z_][A-Za-z0-9_]*$', key) or key == 't':
                    raise ConfigError(f"invalid parameter name '{key}'", path, line)
                convert = _float
            elif key not in SCHEMA[section]:
                raise ConfigError(f"unknown key '{key}' in [{section}]", path, line)
            else:
                convert = SCHEMA[section][key]
            try:
                cfg[section][key] = convert(raw)
            except (ValueError, TypeError, argparse.ArgumentTypeError) as e:
                raise ConfigError(f"{section}.{key}: {e}", path, line) from e

    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        section, key = dotted.split('.', 1)
        cfg[section][key] = value

    _parse_expressions(cfg, lines, path)
    _validate(cfg, lines, path)
    logging.info(f"loaded {cfg.__name__} from {path}")
    return cfg


def _validate(cfg, lines, path):
    family = cfg.potential.family
    for (section, key), line in lines.items():
        if section == 'potential' and key != 'family' and key not in FAMILY_KEYS[family]:
            raise ConfigError(f"key '{key}' is not used by family '{family}'", path, line)

    try:
        build_spec(cfg)
    except ExpressionError as e:
        raise ConfigError(str(e), path, lines.get(('potential', 'family'))) from e
    except ValueError as e:
        raise ConfigError(str(e), path, lines.get(('potential', 'family'))) from e

    if cfg.initial.width == 'matched' and cfg.system.omega is None:
        raise ConfigError("matched width needs system.omega", path,
                          lines.get(('initial', 'width')))
    if cfg.integration.u_max is not None and cfg.system.omega is None:
        raise ConfigError("u_max needs system.omega", path,
                          lines.get(('integration', 'u_max')))
    if cfg.outputs.columns is not None:
        try:
            resolve_columns(cfg)
        except ValueError as e:
            raise ConfigError(str(e), path, lines.get(('outputs', 'columns'))) from e


def build_family(cfg):
    pot = cfg.potential
    return PotentialFamily(tag=pot.family,
                           mass=cfg.system.mass,
                           hbar=cfg.system.hbar,
                           omega=cfg.system.omega,
                           a=pot.a,
                           q=pot.q,
                           r=pot.r,
                           drive=pot.drive,
                           c_expr=pot.c_expr,
                           e_expr=pot.e_expr,
                           bindings=dict(cfg.parameters))


def build_spec(cfg):
    """CoefficientSpec of the configured system; a1..a4 select the general quadratic Lagrangian."""
    pot = cfg.potential
    general = [pot[k] for k in ('a1', 'a2', 'a3', 'a4')]
    if any(expr is not None for expr in general):
        if pot.family != 'custom':
            raise ValueError("a1..a4 are only allowed with family = custom")
        if pot.c_expr is not None or pot.e_expr is not None:
            raise ValueError("give either c_expr/e_expr or a1..a4, not both")
        zero = parse_expression('0')
        a1, a2, a3, a4 = (zero if expr is None else expr for expr in general)
        return lagrangian_family(a1, a2, a3, a4, cfg.system.mass, cfg.system.hbar,
                                 bindings=dict(cfg.parameters), omega_ref=cfg.system.omega)
    return make_spec(build_family(cfg))


def initial_width(cfg):
    if cfg.initial.width == 'matched':
        return cfg.system.mass * cfg.system.omega / cfg.system.hbar
    return float(cfg.initial.width)


def resolve_columns(cfg):
    """Requested columns, or the family defaults; raises ValueError on unknown or unavailable ones."""
    family = cfg.potential.family
    driven = family in ('driven-harmonic', 'harmonic')
    if cfg.outputs.columns is None:
        columns = list(DEFAULT_COLUMNS[family])
        if driven:
            columns += [f'P{n}' for n in range(cfg.outputs.n_max + 1)]
        return columns

    for name in cfg.outputs.columns:
        level = LEVEL_COLUMN.match(name)
        if level:
            if not (driven or family == 'paul-trap'):
                raise ValueError(f"column '{name}' needs a harmonic, driven-harmonic or "
                                 f"paul-trap family")
        elif name not in COLUMN_NAMES:
            raise ValueError(f"unknown column '{name}'")
        elif name in OMEGA_COLUMNS and cfg.system.omega is None:
            raise ValueError(f"column '{name}' needs system.omega")
        elif name in DRIVEN_COLUMNS and not driven:
            raise ValueError(f"column '{name}' needs the driven-harmonic family")
    return list(cfg.outputs.columns)
