"""Run configuration: an INI file with [grid], [grid.<n>], [alphas], [tolerances], [output]."""

import configparser
from dataclasses import dataclass, field
from importlib import resources
import math

from .fields import Grid
from .spectral import PADS
from .verify import BACKENDS, Tolerances

# delta lists may reach 0 and alpha lists may reach 1 where the check allows it
_CLOSED_LISTS = {"continuity_deltas": (0.0, 0.5), "limit_one": (0.0, 1.0)}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    dims: tuple = (1, 2)
    grids: dict = field(default_factory=lambda: {1: (12.0, 1024), 2: (6.0, 128)})
    pad: int = 4
    backend: str = "spectral"
    alphas: dict = field(default_factory=dict)
    tolerances: Tolerances = Tolerances()
    output_dir: str = "fraclab-report"

    def grid(self, n):
        if n not in self.grids:
            raise ConfigError(f"no [grid.{n}] section configured")
        L, N = self.grids[n]
        return Grid(n, L, N)

    def alpha_list(self, name):
        if name not in self.alphas:
            raise ConfigError(f"missing alpha list '{name}' in [alphas]")
        return list(self.alphas[name])


def _floats(raw, what):
    try:
        vals = [float(x) for x in raw.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{what}: cannot parse '{raw}' as a list of numbers") from None
    if not vals:
        raise ConfigError(f"{what}: empty list")
    return vals


def _check_list(name, vals):
    lo, hi = _CLOSED_LISTS.get(name, (None, None))
    for v in vals:
        if lo is None:
            ok = 0.0 < v < 1.0
        else:
            ok = lo <= v <= hi
        if not ok or not math.isfinite(v):
            raise ConfigError(f"[alphas] {name}: value {v} outside the admissible range")


def parse(text, source="<string>", base=None):
    """Parse INI text; keys it leaves out are taken from ``base`` text when given."""
    cp = configparser.ConfigParser()
    try:
        if base is not None:
            cp.read_string(base, source="default.cfg")
        cp.read_string(text, source=source)
    except configparser.Error as e:
        raise ConfigError(f"{source}: {e}") from None
    try:
        g = cp["grid"]
        dims = tuple(int(x) for x in g.get("dims", "1, 2").split(","))
        grids = {}
        for n in dims:
            sec = cp[f"grid.{n}"]
            grids[n] = (float(sec["L"]), int(sec["N"]))
            Grid(n, *grids[n])
        pad = g.getint("pad", 4)
        backend = g.get("backend", "spectral")
    except KeyError as e:
        raise ConfigError(f"{source}: missing section or key {e}") from None
    except ValueError as e:
        raise ConfigError(f"{source}: {e}") from None
    if pad not in PADS:
        raise ConfigError(f"{source}: pad must be one of {PADS}")
    if backend not in BACKENDS:
        raise ConfigError(f"{source}: backend must be one of {BACKENDS}")
    alphas = {}
    if cp.has_section("alphas"):
        for name, raw in cp["alphas"].items():
            vals = _floats(raw, f"[alphas] {name}")
            _check_list(name, vals)
            alphas[name] = tuple(vals)
    tol_kw = {}
    if cp.has_section("tolerances"):
        known = set(Tolerances.names())
        for name, raw in cp["tolerances"].items():
            if name not in known:
                raise ConfigError(f"{source}: unknown tolerance '{name}'")
            try:
                tol_kw[name] = float(raw)
            except ValueError:
                raise ConfigError(f"{source}: tolerance '{name}' is not a number") from None
    try:
        tol = Tolerances(**tol_kw)
    except ValueError as e:
        raise ConfigError(f"{source}: {e}") from None
    out = cp.get("output", "dir", fallback="fraclab-report")
    return RunConfig(dims, grids, pad, backend, alphas, tol, out)


def default_text():
    return resources.files("fraclab").joinpath("default.cfg").read_text()


def load(path=None):
    """Read a config file layered over the packaged default (or the default alone)."""
    if path is None:
        return parse(default_text(), "default.cfg")
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config '{path}': {e.strerror}") from None
    return parse(text, str(path), base=default_text())
