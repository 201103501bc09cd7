"""Run configuration: ``key = value`` text with optional ``[section]`` headers.

Keys may appear before any section header; each key name belongs to
exactly one section, so a bare ``e = 0.1`` is understood as ``[orbit] e``.
Unknown sections and keys are errors.
"""
from __future__ import annotations

import configparser
import dataclasses
import hashlib
import re
from dataclasses import dataclass, field

from .kernel import SystemConfig, UnitSystem

__all__ = [
    "ConfigError",
    "SystemBlock",
    "OrbitBlock",
    "NumericBlock",
    "GridBlock",
    "OutputBlock",
    "RunConfig",
    "parse_config",
    "serialize_config",
    "config_hash",
    "load_config",
]

_TOP = "__top__"


class ConfigError(ValueError):
    def __init__(self, msg, key=None, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + msg)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class SystemBlock:
    units: str = "normalized"
    gamma: float = 1.0
    M: float = 1.0
    m: float = 1e-3
    r: float = 1.0


@dataclass(frozen=True)
class OrbitBlock:
    a: float | None = None
    ratio: float | None = None
    e: float = 0.0
    phi: float = 0.0


@dataclass(frozen=True)
class NumericBlock:
    pmax: int = 16
    n_quad: int = 4096
    floquet_tol: float = 1e-10
    rtbp_tol: float = 1e-11
    c_e: float = 0.75
    alpha: float = 0.0
    eq23_c4: float = 0.75
    eq23_c8: float = 0.375
    b_ref: float = 0.1
    potential: str = "heliocentric"


@dataclass(frozen=True)
class GridBlock:
    ratio_min: float = 1.4
    ratio_max: float = 3.2
    ratio_count: int = 361
    n_min: int = 3
    n_max: int = 30
    e_min: float = 0.0
    e_max: float = 0.5
    e_count: int = 11
    fig1_n: int = 13
    periods: float = 10.0


@dataclass(frozen=True)
class OutputBlock:
    samples: int = 1001
    path: str = "-"


_SECTIONS = {
    "system": SystemBlock,
    "orbit": OrbitBlock,
    "numeric": NumericBlock,
    "grid": GridBlock,
    "output": OutputBlock,
}
_OWNER = {f.name: sec for sec, cls in _SECTIONS.items() for f in dataclasses.fields(cls)}


@dataclass(frozen=True)
class RunConfig:
    system: SystemBlock = field(default_factory=SystemBlock)
    orbit: OrbitBlock = field(default_factory=OrbitBlock)
    numeric: NumericBlock = field(default_factory=NumericBlock)
    grid: GridBlock = field(default_factory=GridBlock)
    output: OutputBlock = field(default_factory=OutputBlock)

    def system_config(self) -> SystemConfig:
        s = self.system
        return SystemConfig(s.gamma, s.M, s.m, s.r, UnitSystem(s.units))

    @property
    def ratio(self) -> float | None:
        if self.orbit.a is None and self.orbit.ratio is None:
            return 3.0
        return self.orbit.ratio


def _line_of(text: str, key: str) -> int | None:
    pat = re.compile(rf"^\s*{re.escape(key)}\s*=")
    for i, line in enumerate(text.splitlines(), 1):
        if pat.match(line):
            return i
    return None


def _convert(typ, raw: str, key: str, line):
    raw = raw.strip()
    try:
        if typ in (float, "float", "float | None"):
            return float(raw)
        if typ in (int, "int"):
            return int(raw)
        if typ in (str, "str"):
            return raw
    except ValueError:
        raise ConfigError(f"invalid value {raw!r} for {key!r}", key, line) from None
    raise TypeError(typ)


def _validate(cfg: RunConfig, text: str):
    def bad(key, msg):
        raise ConfigError(f"{key!r} {msg}", key, _line_of(text, key))

    s, o, n, g, out = cfg.system, cfg.orbit, cfg.numeric, cfg.grid, cfg.output
    if s.units not in ("normalized", "physical"):
        bad("units", "must be 'normalized' or 'physical'")
    if s.units == "normalized":
        for k in ("gamma", "M", "r"):
            if getattr(s, k) != 1.0:
                bad(k, "must be 1 in normalized units")
    for k in ("gamma", "M", "r"):
        if not getattr(s, k) > 0:
            bad(k, "must be positive")
    if not 0 <= s.m < s.M:
        bad("m", "must satisfy 0 <= m < M")
    if o.a is not None and o.ratio is not None:
        bad("ratio", "cannot be given together with 'a'")
    if o.a is not None and not o.a > 0:
        bad("a", "must be positive")
    if o.ratio is not None and not o.ratio > 1:
        bad("ratio", "must exceed 1")
    if not 0 <= o.e < 1:
        bad("e", "must lie in [0, 1)")
    if n.pmax < 2:
        bad("pmax", "must be at least 2")
    if n.n_quad <= 2 * n.pmax:
        bad("n_quad", "must exceed 2 * pmax")
    for k in ("floquet_tol", "rtbp_tol"):
        if not getattr(n, k) > 0:
            bad(k, "must be positive")
    if n.potential not in ("heliocentric", "literal"):
        bad("potential", "must be 'heliocentric' or 'literal'")
    if not n.b_ref > 0:
        bad("b_ref", "must be positive")
    if not 1 < g.ratio_min < g.ratio_max:
        bad("ratio_min", "must satisfy 1 < ratio_min < ratio_max")
    if g.ratio_count < 2:
        bad("ratio_count", "must be at least 2")
    if not 3 <= g.n_min <= g.n_max:
        bad("n_min", "must satisfy 3 <= n_min <= n_max")
    if not 0 <= g.e_min <= g.e_max <= 0.9:
        bad("e_max", "must satisfy 0 <= e_min <= e_max <= 0.9")
    if g.e_count < 1:
        bad("e_count", "must be at least 1")
    if g.fig1_n < 3:
        bad("fig1_n", "must be at least 3")
    if not g.periods > 0:
        bad("periods", "must be positive")
    if out.samples < 2:
        bad("samples", "must be at least 2")


def parse_config(text: str) -> RunConfig:
    """Parse configuration text into a validated :class:`RunConfig`.

    Raises
    ------
    ConfigError
        Syntax errors carry the line number; constraint violations name
        the offending key.
    """
    parser = configparser.ConfigParser(
        interpolation=None, delimiters=("=",), comment_prefixes=("#",),
        inline_comment_prefixes=("#",), strict=True, default_section="__defaults__",
    )
    parser.optionxform = str
    try:
        parser.read_string(f"[{_TOP}]\n" + text)
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigError(f"cannot parse {line.strip()!r}", line=lineno - 1) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ConfigError(str(exc).split(":")[-1].strip(), line=exc.lineno - 1) from None
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    values: dict[str, dict] = {sec: {} for sec in _SECTIONS}
    for sec in parser.sections():
        if sec != _TOP and sec not in _SECTIONS:
            raise ConfigError(f"unknown section [{sec}]")
        for key, raw in parser.items(sec):
            line = _line_of(text, key)
            owner = _OWNER.get(key)
            if owner is None:
                raise ConfigError(f"unknown key {key!r}", key, line)
            if sec != _TOP and sec != owner:
                raise ConfigError(f"key {key!r} belongs in [{owner}], not [{sec}]", key, line)
            if key in values[owner]:
                raise ConfigError(f"key {key!r} given twice", key, line)
            ftype = {f.name: f.type for f in dataclasses.fields(_SECTIONS[owner])}[key]
            values[owner][key] = _convert(ftype, raw, key, line)

    cfg = RunConfig(**{sec: cls(**values[sec]) for sec, cls in _SECTIONS.items()})
    _validate(cfg, text)
    return cfg


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; ``parse_config(serialize_config(c)) == c``."""
    lines = []
    for sec in _SECTIONS:
        lines.append(f"[{sec}]")
        block = getattr(cfg, sec)
        for f in dataclasses.fields(block):
            v = getattr(block, f.name)
            if v is None:
                continue
            lines.append(f"{f.name} = {v!r}" if isinstance(v, float) else f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(serialize_config(cfg).encode()).hexdigest()


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
