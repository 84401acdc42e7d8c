"""Experiment recipes: INI files with sections, parsed into :class:`ExperimentConfig`.

A recipe looks like::

    [input]
    fixture = a-defect
    a = 0.41421356237309515

    [experiment]
    kind = fourier_bohr
    family = alternating
    n = 10000
    freqs = 1

    [output]
    dir = out
    figures = yes

Every value error is reported with the line it came from.
"""

import configparser
import re
from dataclasses import dataclass, field

from .errors import ConfigError
from .windows import VanHoveFamily

KINDS = (
    "mean", "besicovitch", "weyl", "fourier_bohr", "fourier_bohr_uniform",
    "autocorrelation", "pair_correlation", "cpp", "parseval", "peak_scan",
    "density", "bragg", "mean_ap", "classify_besicovitch", "classify_weyl",
)

_SECTIONS = {
    "input": {"fixture", "file", "a", "region"},
    "experiment": {"kind", "family", "families", "n", "freqs", "p", "tent", "shifts",
                   "random_shifts", "z", "z_max", "k_range", "k_step", "threshold",
                   "eps", "t_scan", "t_step", "u_radius", "k_max", "intensity_floor",
                   "require_verdict", "freq_budget"},
    "tolerances": {"q", "tol", "match_tol", "cluster_tol", "cpp_tol", "deficit_tol"},
    "output": {"dir", "prefix", "figures"},
    "rng": {"seed"},
}


@dataclass
class ExperimentConfig:
    """A parsed recipe. ``lines`` maps ``(section, key)`` to its line number."""

    fixture: str = None
    file: str = None
    params: dict = field(default_factory=dict)
    region: tuple = None
    kind: str = "mean"
    families: list = field(default_factory=lambda: [VanHoveFamily.symmetric()])
    n: int = 1000
    freqs: list = field(default_factory=list)
    p: float = 1.0
    tent: float = 0.5
    shifts: list = field(default_factory=list)
    random_shifts: int = 0
    z: list = field(default_factory=list)
    z_max: float = 50.0
    k_range: tuple = (0.0, 2.5)
    k_step: float = None
    threshold: float = 0.5
    eps: float = 0.05
    t_scan: tuple = (0.0, 20.0)
    t_step: float = 0.25
    u_radius: float = None
    k_max: float = 3.0
    intensity_floor: float = 1e-4
    freq_budget: int = 64
    require_verdict: bool = False
    q: int = 5
    tol: float = 1e-3
    match_tol: float = 1e-9
    cluster_tol: float = 1e-6
    cpp_tol: float = 1e-2
    deficit_tol: float = 1e-2
    out_dir: str = "out"
    prefix: str = None
    figures: bool = False
    seed: int = None
    path: str = None
    lines: dict = field(default_factory=dict)

    @property
    def family(self):
        return self.families[0]

    @property
    def name(self):
        return self.prefix or self.kind

    def echo(self):
        """Header lines written at the top of every export."""
        src = self.fixture or self.file
        fams = ", ".join(str(f) for f in self.families)
        return [f"kind={self.kind}", f"input={src}", f"families={fams}", f"n={self.n}",
                f"seed={self.seed}", f"q={self.q}", f"tol={self.tol:g}"]


def _key_lines(text):
    lines, section = {}, None
    for i, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip().lower()
            continue
        m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", s)
        if section and m:
            lines.setdefault((section, m.group(1).strip().lower()), i)
    return lines


def _floats(text):
    return [float(v) for v in re.split(r"[,\s]+", text.strip()) if v]


def parse_config(text, path=None):
    """Parse recipe text; raise :class:`ConfigError` with a line number on bad input."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=path or "<config>")
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError(f"cannot parse line: {exc.errors[0][1].strip()!r}"
                          if exc.errors else str(exc), lineno, path) from None
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], getattr(exc, "lineno", None),
                          path) from None
    lines = _key_lines(text)
    cfg = ExperimentConfig(path=path, lines=lines)

    def fail(section, key, message):
        raise ConfigError(f"[{section}] {key}: {message}", lines.get((section, key)), path)

    for section in parser.sections():
        if section not in _SECTIONS:
            m = re.search(rf"^\s*\[{re.escape(section)}\]", text, re.M)
            lineno = text[:m.start()].count("\n") + 1 if m else None
            raise ConfigError(f"unknown section [{section}]", lineno, path)
        for key in parser[section]:
            if key not in _SECTIONS[section]:
                fail(section, key, "unknown key")

    def get(section, key, conv, attr=None):
        if not parser.has_option(section, key):
            return
        raw = parser.get(section, key)
        try:
            value = conv(raw)
        except (ValueError, TypeError) as exc:
            fail(section, key, f"bad value {raw!r} ({exc})")
        setattr(cfg, attr or key, value)

    def boolean(text):
        t = text.strip().lower()
        if t in ("1", "yes", "true", "on"):
            return True
        if t in ("0", "no", "false", "off"):
            return False
        raise ValueError("expected yes or no")

    def pair(text):
        v = _floats(text)
        if len(v) != 2 or not v[0] < v[1]:
            raise ValueError("expected two increasing numbers")
        return tuple(v)

    def families(text):
        return [VanHoveFamily.parse(t) for t in re.split(r"[,;]", text) if t.strip()]

    get("input", "fixture", str.strip)
    get("input", "file", str.strip)
    get("input", "region", pair)
    if parser.has_option("input", "a"):
        try:
            cfg.params["a"] = float(parser.get("input", "a"))
        except ValueError:
            fail("input", "a", f"bad value {parser.get('input', 'a')!r}")
    if (cfg.fixture is None) == (cfg.file is None):
        raise ConfigError("[input] needs exactly one of 'fixture' or 'file'",
                          lines.get(("input", "fixture"), lines.get(("input", "file"))), path)

    get("experiment", "kind", lambda t: t.strip().lower())
    if cfg.kind not in KINDS:
        fail("experiment", "kind", f"unknown kind {cfg.kind!r}; known: {', '.join(KINDS)}")
    get("experiment", "family", families, "families")
    get("experiment", "families", families)
    get("experiment", "n", int)
    get("experiment", "freqs", _floats)
    get("experiment", "p", float)
    get("experiment", "tent", float)
    get("experiment", "shifts", _floats)
    get("experiment", "random_shifts", int)
    get("experiment", "z", _floats)
    get("experiment", "z_max", float)
    get("experiment", "k_range", pair)
    get("experiment", "k_step", float)
    get("experiment", "threshold", float)
    get("experiment", "eps", float)
    get("experiment", "t_scan", pair)
    get("experiment", "t_step", float)
    get("experiment", "u_radius", float)
    get("experiment", "k_max", float)
    get("experiment", "intensity_floor", float)
    get("experiment", "freq_budget", int)
    get("experiment", "require_verdict", boolean)
    for key in ("q",):
        get("tolerances", key, int)
    for key in ("tol", "match_tol", "cluster_tol", "cpp_tol", "deficit_tol"):
        get("tolerances", key, float)
    get("output", "dir", str.strip, "out_dir")
    get("output", "prefix", str.strip)
    get("output", "figures", boolean)
    get("rng", "seed", int)

    if cfg.n < 1:
        fail("experiment", "n", "must be a positive integer")
    if cfg.q < 2:
        fail("tolerances", "q", "must be at least 2")
    for key in ("tol", "match_tol", "cluster_tol", "cpp_tol", "deficit_tol"):
        if not getattr(cfg, key) > 0:
            fail("tolerances", key, "tolerances must be positive")
    for key in ("tent", "z_max", "p"):
        if not getattr(cfg, key) > 0:
            fail("experiment", key, "must be positive")
    if cfg.p < 1:
        fail("experiment", "p", "must be >= 1")
    if cfg.random_shifts < 0:
        fail("experiment", "random_shifts", "must be >= 0")
    if cfg.random_shifts and cfg.seed is None:
        raise ConfigError("random shifts need [rng] seed",
                          lines.get(("experiment", "random_shifts")), path)
    if cfg.kind in ("fourier_bohr", "fourier_bohr_uniform", "cpp") and not cfg.freqs:
        fail("experiment", "freqs", f"kind {cfg.kind} needs at least one frequency")
    if cfg.kind == "pair_correlation" and not cfg.z:
        fail("experiment", "z", "pair_correlation needs at least one z")
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, str(path)) from None
    return parse_config(text, str(path))
