"""Run configuration, run records and plot-data files.

Config and record files are plain ``key = value`` text. Blank lines and
lines starting with ``#`` are ignored; lists are comma separated. Floats
are written with ``repr`` so they read back bit for bit.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import benchmarks
from .antenna import YAGI_DESIGN1, YAGI_DESIGN2, YagiCoefficients
from .cfo import CfoParams
from .errors import ConfigError, ParseError

ANTENNA_OBJECTIVES = ("bowtie", "yagi")
SERIES_NAMES = ("best_fitness", "davg", "best_probe")

# decision vector layouts for the antenna objectives
BOWTIE_VARS = ("arm_len_m", "half_angle_deg", "load_seg", "r_load_ohm", "z0_ohm")
BOWTIE_LOWER = (0.01, 10.0, 1.0, 1.0, 50.0)
BOWTIE_UPPER = (0.08, 80.0, 9.0, 1000.0, 1000.0)
YAGI_VARS = tuple(f"L{i}" for i in range(1, 7)) + tuple(f"S{i}" for i in range(1, 7)) + ("z0_ohm",)
YAGI_LOWER = (0.2,) * 6 + (0.0,) + (0.1,) * 5 + (5.0,)
YAGI_UPPER = (0.6,) * 6 + (0.0,) + (0.5,) * 5 + (600.0,)

_CFO_KEYS = {f.name: f.type for f in fields(CfoParams)}


def parse_kv(text):
    """``key = value`` pairs in file order; duplicate keys are an error."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ParseError("empty key", lineno)
        if key in out:
            raise ParseError(f"duplicate key {key!r}", lineno)
        out[key] = value
    return out


def _floats(value, key, n=None):
    try:
        vals = tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"{key}: expected numbers, got {value!r}") from None
    if n is not None and len(vals) != n:
        raise ConfigError(f"{key}: expected {n} values, got {len(vals)}")
    return vals


def _cfo_value(key, value):
    if key == "retrieval_order":
        return value
    kind = _CFO_KEYS[key]
    try:
        return int(value) if kind in (int, "int") else float(value)
    except ValueError:
        raise ConfigError(f"{key}: bad value {value!r}") from None


@dataclass
class RunConfig:
    """Everything needed to reproduce one optimize run."""

    objective: str
    lower: tuple = ()
    upper: tuple = ()
    cfo: dict = field(default_factory=dict)
    dims: int | None = None
    yagi_coeffs: YagiCoefficients = YAGI_DESIGN1
    band_mhz: tuple = (275.0, 300.0, 325.0)
    freq: tuple | None = None
    window_mhz: tuple = (800.0, 12000.0)
    engine: str | None = None
    timeout_s: float = 300.0
    output_dir: str = "vzopt_out"

    def __post_init__(self):
        name = self.objective.strip()
        if name.lower() in ANTENNA_OBJECTIVES:
            self.objective = name.lower()
            lo, hi = (BOWTIE_LOWER, BOWTIE_UPPER) if self.objective == "bowtie" else (YAGI_LOWER, YAGI_UPPER)
            if self.dims not in (None, len(lo)):
                raise ConfigError(f"{self.objective} has {len(lo)} decision variables")
        else:
            spec = benchmarks.get(name)
            self.objective = spec.name
            lo, hi = spec.bounds(self.dims)
        if not self.lower:
            self.lower = tuple(float(v) for v in lo)
        if not self.upper:
            self.upper = tuple(float(v) for v in hi)
        if len(self.lower) != len(lo) or len(self.upper) != len(lo):
            raise ConfigError(f"{self.objective}: bounds need {len(lo)} values each")
        fl, fc, fu = self.band_mhz
        if not fl < fc < fu:
            raise ConfigError("band must be f_L < f_C < f_U")
        self.params()  # validate overrides now

    @property
    def is_antenna(self):
        return self.objective in ANTENNA_OBJECTIVES

    def params(self):
        unknown = set(self.cfo) - set(_CFO_KEYS)
        if unknown:
            raise ConfigError(f"unknown optimizer keys {sorted(unknown)}")
        return CfoParams(**self.cfo)

    def to_kv(self):
        out = {"objective": self.objective}
        if self.dims is not None:
            out["dims"] = str(self.dims)
        out["lower"] = ", ".join(repr(v) for v in self.lower)
        out["upper"] = ", ".join(repr(v) for v in self.upper)
        for k, v in sorted(self.params().to_dict().items()):
            out[k] = repr(v) if isinstance(v, float) else str(v)
        if self.is_antenna:
            out["yagi_coeffs"] = ", ".join(repr(v) for v in self.yagi_coeffs.as_tuple())
            out["band_mhz"] = ", ".join(repr(v) for v in self.band_mhz)
            out["window_mhz"] = ", ".join(repr(v) for v in self.window_mhz)
            if self.freq is not None:
                out["freq"] = ", ".join(repr(v) for v in self.freq)
            out["timeout_s"] = repr(self.timeout_s)
            if self.engine:
                out["engine"] = self.engine
        out["output_dir"] = self.output_dir
        return out


def config_from_kv(kv):
    """Build a RunConfig from parsed ``key = value`` pairs."""
    kv = dict(kv)
    if "objective" not in kv:
        raise ConfigError("config needs an 'objective' key")
    args = {"objective": kv.pop("objective")}
    cfo = {}
    for key, value in kv.items():
        if key in _CFO_KEYS:
            cfo[key] = _cfo_value(key, value)
        elif key == "dims":
            args["dims"] = int(value)
        elif key in ("lower", "upper"):
            args[key] = _floats(value, key)
        elif key == "yagi_design":
            if value not in ("1", "2"):
                raise ConfigError("yagi_design must be 1 or 2")
            args["yagi_coeffs"] = YAGI_DESIGN1 if value == "1" else YAGI_DESIGN2
        elif key == "yagi_coeffs":
            args["yagi_coeffs"] = YagiCoefficients(*_floats(value, key, 6))
        elif key in ("band_mhz", "window_mhz"):
            args[key] = _floats(value, key, 3 if key == "band_mhz" else 2)
        elif key == "freq":
            start, step, count = _floats(value, key, 3)
            args["freq"] = (start, step, int(count))
        elif key == "engine":
            args["engine"] = value or None
        elif key == "timeout_s":
            args["timeout_s"] = float(value)
        elif key == "output_dir":
            args["output_dir"] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    if "yagi_coeffs" in kv and "yagi_design" in kv:
        raise ConfigError("give yagi_design or yagi_coeffs, not both")
    return RunConfig(cfo=cfo, **args)


def read_config(path):
    return config_from_kv(parse_kv(Path(path).read_text(encoding="utf-8")))


def make_run_id(now=None):
    """Sortable run token, e.g. 2011-07-02T22-17-47."""
    return time.strftime("%Y-%m-%dT%H-%M-%S", time.localtime(now))


@dataclass
class RunRecord:
    run_id: str
    config: RunConfig
    best: object
    evaluations: int
    runs: int
    wall_time_s: float
    series: dict = field(default_factory=dict)

    def to_text(self):
        lines = ["# vzopt run record", f"run_id = {self.run_id}"]
        lines += [f"config.{k} = {v}" for k, v in self.config.to_kv().items()]
        b = self.best.to_dict()
        for k in ("fitness", "probe", "step", "np_per_dim", "gamma", "last_step"):
            v = b[k]
            lines.append(f"best.{k} = {repr(v) if isinstance(v, float) else v}")
        lines.append("best.positions = " + ", ".join(repr(v) for v in b["best_positions"]))
        lines += [f"evaluations = {self.evaluations}", f"runs = {self.runs}",
                  f"wall_time_s = {self.wall_time_s:.3f}"]
        lines += [f"series.{k} = {v}" for k, v in self.series.items()]
        return "\n".join(lines) + "\n"


def read_record(path):
    """Flat key/value view of a record file."""
    return parse_kv(Path(path).read_text(encoding="utf-8"))


def config_from_record(kv):
    """The RunConfig stored in a record's ``config.*`` keys."""
    return config_from_kv({k[len("config."):]: v for k, v in kv.items() if k.startswith("config.")})


def series_text(values, integer=False):
    """Two-column ``step value`` text, one row per executed step."""
    buf = io.StringIO()
    for j, v in enumerate(values):
        buf.write(f"{j} {int(v)}\n" if integer else f"{j} {float(v)!r}\n")
    return buf.getvalue()


def write_series(history, out_dir, prefix=""):
    """Write the three per-step series files; returns {name: filename}."""
    out = Path(out_dir)
    names = {}
    for name in SERIES_NAMES:
        fname = f"{prefix}{name}.dat"
        (out / fname).write_text(series_text(getattr(history, name), integer=(name == "best_probe")))
        names[name] = fname
    return names


def read_series(path):
    data = np.loadtxt(path, ndmin=2)
    return data[:, 0].astype(int), data[:, 1]


def bands_csv(bands):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["f_lo_mhz", "f_hi_mhz", "width_mhz", "fc_mhz", "frac_pct"])
    for b in bands:
        w.writerow([_num(b.f_lo), _num(b.f_hi), _num(b.width), _num(b.fc), f"{b.frac_pct:.1f}"])
    return buf.getvalue()


def summary_csv(summary):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["parameter", "min", "max"])
    for key in ("vswr", "rin", "xin", "eff", "gmax", "gfwd"):
        w.writerow([key, f"{getattr(summary, 'min_' + key):.2f}", f"{getattr(summary, 'max_' + key):.2f}"])
    return buf.getvalue()


def _num(v):
    return str(int(v)) if float(v).is_integer() else repr(float(v))
