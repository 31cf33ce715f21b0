"""VSWR relative to an arbitrary Z0, sweep summaries, bands and fitness."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import DegenerateSummaryError, EmptyWindowError, ParseError, ValidationError

# fitness returned for a model whose efficiency came back negative
INVALID_MODEL_FITNESS = -98765.0


def vswr(z0, rin, xin):
    """Standing wave ratio of ``rin + j*xin`` on a purely resistive ``z0`` line."""
    if not z0 > 0:
        raise ValidationError(f"z0 must be positive, got {z0}")
    if rin < 0:
        raise ValidationError(f"rin must be non-negative, got {rin}")
    z = complex(rin, xin)
    gamma = abs((z - z0) / (z + z0))
    if gamma >= 1.0:
        return math.inf
    return (1.0 + gamma) / (1.0 - gamma)


def vswr_array(z0, rin, xin):
    """Vectorized :func:`vswr`; same validation, inf where |gamma| is 1."""
    if not z0 > 0:
        raise ValidationError(f"z0 must be positive, got {z0}")
    rin = np.asarray(rin, dtype=float)
    xin = np.asarray(xin, dtype=float)
    if np.any(rin < 0):
        raise ValidationError("rin must be non-negative")
    z = rin + 1j * xin
    g = np.abs((z - z0) / (z + z0))
    with np.errstate(divide="ignore"):
        out = np.where(g >= 1.0, np.inf, (1.0 + g) / (1.0 - g))
    return out


@dataclass(frozen=True)
class FrequencySample:
    """One row of a frequency sweep.

    ``vswr`` holds a tabulated value when the row came from a file; it is
    only meaningful together with the table's ``source_z0``.
    """

    f_mhz: float
    eff_pct: float
    gmax_dbi: float
    gmin_dbi: float
    gfwd_dbi: float
    rin_ohm: float
    xin_ohm: float
    vswr: float | None = None
    avg_gain: float | None = None

    def __post_init__(self):
        if not self.f_mhz > 0:
            raise ValidationError(f"frequency must be positive, got {self.f_mhz}")


class SweepTable:
    """Ordered frequency samples plus the Z0 the VSWR column refers to.

    When ``z0_ohm`` equals ``source_z0`` and every row carries a tabulated
    VSWR, that column is used as-is. Otherwise VSWR is computed from
    Rin/Xin against ``z0_ohm``.
    """

    def __init__(self, rows, z0_ohm, source_z0=None):
        rows = tuple(rows)
        if not z0_ohm > 0:
            raise ValidationError(f"z0 must be positive, got {z0_ohm}")
        f = np.array([r.f_mhz for r in rows], dtype=float)
        if f.size > 1 and np.any(np.diff(f) <= 0):
            raise ValidationError("frequencies must be strictly increasing")
        self.rows = rows
        self.z0_ohm = float(z0_ohm)
        self.source_z0 = None if source_z0 is None else float(source_z0)
        self.f = f
        self.eff = np.array([r.eff_pct for r in rows], dtype=float)
        self.gmax = np.array([r.gmax_dbi for r in rows], dtype=float)
        self.gmin = np.array([r.gmin_dbi for r in rows], dtype=float)
        self.gfwd = np.array([r.gfwd_dbi for r in rows], dtype=float)
        self.rin = np.array([r.rin_ohm for r in rows], dtype=float)
        self.xin = np.array([r.xin_ohm for r in rows], dtype=float)
        self.avg_gain = np.array([np.nan if r.avg_gain is None else r.avg_gain for r in rows], dtype=float)
        self.vswr = self._vswr_column()

    def _vswr_column(self):
        tab = [r.vswr for r in self.rows]
        if self.source_z0 == self.z0_ohm and all(v is not None for v in tab):
            return np.array(tab, dtype=float)
        return vswr_array(self.z0_ohm, self.rin, self.xin)

    def __len__(self):
        return len(self.rows)

    @property
    def uses_tabulated_vswr(self):
        return self.source_z0 == self.z0_ohm and all(r.vswr is not None for r in self.rows)

    def with_z0(self, z0_ohm):
        """Same rows, VSWR relative to another Z0."""
        return SweepTable(self.rows, z0_ohm, self.source_z0)

    def computed_vswr(self):
        return vswr_array(self.z0_ohm, self.rin, self.xin)


@dataclass(frozen=True)
class PerformanceSummary:
    f_lo: float
    f_hi: float
    n_rows: int
    min_vswr: float
    max_vswr: float
    min_rin: float
    max_rin: float
    min_xin: float
    max_xin: float
    min_eff: float
    max_eff: float
    min_gmax: float
    max_gmax: float
    min_gfwd: float
    max_gfwd: float

    def to_dict(self):
        return dict(self.__dict__)


def summarize(table, f_lo, f_hi):
    """Componentwise min/max over rows with ``f_lo <= f <= f_hi``."""
    sel = (table.f >= f_lo) & (table.f <= f_hi)
    if not sel.any():
        raise EmptyWindowError(f"no rows in [{f_lo}, {f_hi}] MHz")

    def mm(col):
        v = col[sel]
        return float(v.min()), float(v.max())

    vs, rn, xn, ef, gm, gf = (mm(c) for c in (table.vswr, table.rin, table.xin, table.eff, table.gmax, table.gfwd))
    return PerformanceSummary(
        f_lo=float(f_lo), f_hi=float(f_hi), n_rows=int(sel.sum()),
        min_vswr=vs[0], max_vswr=vs[1], min_rin=rn[0], max_rin=rn[1],
        min_xin=xn[0], max_xin=xn[1], min_eff=ef[0], max_eff=ef[1],
        min_gmax=gm[0], max_gmax=gm[1], min_gfwd=gf[0], max_gfwd=gf[1],
    )


@dataclass(frozen=True)
class Band:
    f_lo: float
    f_hi: float
    width: float = field(init=False)
    fc: float = field(init=False)
    frac_pct: float = field(init=False)

    def __post_init__(self):
        if not self.f_lo < self.f_hi:
            raise ValidationError(f"band needs f_lo < f_hi, got {self.f_lo}, {self.f_hi}")
        object.__setattr__(self, "width", self.f_hi - self.f_lo)
        object.__setattr__(self, "fc", (self.f_lo + self.f_hi) / 2.0)
        object.__setattr__(self, "frac_pct", 100.0 * self.width / self.fc)


def qualifying_runs(ok):
    """Index pairs ``(first, last)`` of maximal runs of True in ``ok``."""
    runs = []
    start = None
    for i, flag in enumerate(ok):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(ok) - 1))
    return runs


def extract_bands(table, threshold):
    """Maximal runs of rows with VSWR <= threshold, edges at row frequencies.

    A run of a single row has zero width and cannot form a Band; such
    runs are dropped.
    """
    if not threshold >= 1:
        raise ValidationError(f"threshold must be >= 1, got {threshold}")
    ok = table.vswr <= threshold
    bands = []
    for i, k in qualifying_runs(ok):
        if k > i:
            bands.append(Band(float(table.f[i]), float(table.f[k])))
    return bands


def bowtie_fitness(summary, z0):
    """Gain and efficiency over the product of Rin, VSWR and Xin spreads."""
    if summary.min_eff < 0:
        return INVALID_MODEL_FITNESS
    d_rin = abs(summary.max_rin - z0)
    d_vswr = summary.max_vswr - summary.min_vswr
    d_xin = summary.max_xin - summary.min_xin
    if d_rin == 0 or d_vswr == 0 or d_xin == 0:
        raise DegenerateSummaryError(
            f"zero denominator factor: |Rin-Z0|={d_rin}, VSWR span={d_vswr}, Xin span={d_xin}"
        )
    return (5.0 * summary.min_gmax + summary.min_eff) / (d_rin * d_vswr * d_xin)


@dataclass(frozen=True)
class YagiCoefficients:
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float

    def __post_init__(self):
        for name, v in zip(("c1", "c2", "c3", "c4", "c5", "c6"), self.as_tuple()):
            if not math.isfinite(v) or v < 0:
                raise ValidationError(f"{name} must be finite and non-negative, got {v}")

    def as_tuple(self):
        return (self.c1, self.c2, self.c3, self.c4, self.c5, self.c6)


YAGI_DESIGN1 = YagiCoefficients(0.2, 2.0, 1.0, 4.0, 1.0, 0.4)
YAGI_DESIGN2 = YagiCoefficients(0.2, 4.0, 1.0, 8.0, 1.0, 0.8)


def yagi_fitness(gfwd_at, vswr_at, coeffs):
    """Weighted forward gain minus weighted VSWR at f_L, f_C and f_U."""
    gl, gc, gu = gfwd_at
    vl, vc, vu = vswr_at
    c = coeffs
    return c.c1 * gl - c.c2 * vl + c.c3 * gc - c.c4 * vc + c.c5 * gu - c.c6 * vu


# column orders of the two tabulated sweep layouts
LAYOUTS = {
    "max-min-fwd": ("f", "eff", "gmax", "gmin", "gfwd", "rin", "xin", "vswr"),
    "fwd-max-min": ("f", "eff", "gfwd", "gmax", "gmin", "rin", "xin", "vswr", "avg_gain"),
}

_Z0_HEADER = re.compile(r"VSWR\s*//\s*([0-9.]+)", re.IGNORECASE)


def parse_table(text, z0=None, layout="max-min-fwd"):
    """Parse a whitespace/tab-delimited sweep listing into a SweepTable.

    Lines that do not start with a number are skipped, except that a
    ``VSWR//<z0>`` header sets the Z0 of the tabulated column. ``z0``
    defaults to that header value.
    """
    if layout not in LAYOUTS:
        raise ValidationError(f"unknown layout {layout!r}; choose from {sorted(LAYOUTS)}")
    cols = LAYOUTS[layout]
    source_z0 = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        m = _Z0_HEADER.search(line)
        if m and source_z0 is None:
            source_z0 = float(m.group(1))
        parts = line.split()
        if not parts:
            continue
        try:
            float(parts[0])
        except ValueError:
            continue
        # trailing VSWR and average-gain columns are optional
        need = cols.index("vswr")
        if len(parts) < need:
            raise ParseError(f"expected at least {need} columns, got {len(parts)}", lineno)
        try:
            vals = [float(p) for p in parts[: len(cols)]]
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        rec = dict(zip(cols, vals))
        rows.append(
            FrequencySample(
                f_mhz=rec["f"], eff_pct=rec["eff"], gmax_dbi=rec["gmax"], gmin_dbi=rec["gmin"],
                gfwd_dbi=rec["gfwd"], rin_ohm=rec["rin"], xin_ohm=rec["xin"], vswr=rec.get("vswr"),
                avg_gain=rec.get("avg_gain"),
            )
        )
    if z0 is None:
        if source_z0 is None:
            raise ValidationError("no z0 given and no VSWR//<z0> header found")
        z0 = source_z0
    return SweepTable(rows, z0, source_z0)


def read_table(path, z0=None, layout="max-min-fwd"):
    with open(path, encoding="utf-8") as fh:
        return parse_table(fh.read(), z0=z0, layout=layout)


REFERENCE_TABLES = {
    "bowtie-loaded": ("bowtie_loaded.tsv", "max-min-fwd"),
    "bowtie-unloaded": ("bowtie_unloaded.tsv", "fwd-max-min"),
}


def load_reference_table(name="bowtie-loaded", z0=None):
    """One of the bundled 715-ohm bowtie sweeps (200 to 15200 MHz)."""
    if name not in REFERENCE_TABLES:
        raise ValidationError(f"unknown reference table {name!r}; choose from {sorted(REFERENCE_TABLES)}")
    fname, layout = REFERENCE_TABLES[name]
    text = resources.files("vzopt.data").joinpath(fname).read_text(encoding="utf-8")
    return parse_table(text, z0=z0, layout=layout)
