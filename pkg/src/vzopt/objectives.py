"""Antenna objectives: decision vector -> deck -> engine -> fitness."""

from __future__ import annotations

import math
from pathlib import Path

from .antenna import bowtie_fitness, summarize, yagi_fitness
from .errors import ConfigError
from .nec import BowtieDesign, YagiDesign, gen_bowtie_deck, gen_yagi_deck, run_engine


def bowtie_design(x):
    """Decision vector (L_arm, alpha, load fraction, R_load, Z0) to a design.

    The load position is the integer part of the third variable, clipped
    to 1..9. Lengths are rounded to 3 decimals, ohms to 2.
    """
    seg = min(max(int(math.floor(x[2])), 1), 9)
    return BowtieDesign(
        arm_len_m=round(float(x[0]), 3),
        half_angle_deg=float(x[1]),
        load_seg=seg,
        r_load_ohm=round(float(x[3]), 2),
        z0_ohm=round(float(x[4]), 2),
    )


def yagi_design(x):
    """Decision vector (L1..L6, S1..S6, Z0) to a design; S1 is the reflector's 0."""
    lengths = tuple(round(float(v), 3) for v in x[0:6])
    spacings = (0.0,) + tuple(round(float(v), 3) for v in x[7:12])
    return YagiDesign(lengths, spacings, round(float(x[12]), 2))


class _EngineObjective:
    def __init__(self, engine, workdir, timeout_s=300.0, freq=None):
        if not engine:
            raise ConfigError("antenna objectives need a modeling engine path")
        self.engine = engine
        self.workdir = Path(workdir)
        self.timeout_s = timeout_s
        self.freq = freq
        self.calls = 0

    def _run(self, deck, z0, forward=None):
        self.calls += 1
        out = run_engine(deck, self.engine, self.workdir, z0, timeout=self.timeout_s, forward=forward)
        return out.table


class BowtieObjective(_EngineObjective):
    """Bowtie fitness over a frequency window (800 to 12000 MHz by default)."""

    def __init__(self, engine, workdir, timeout_s=300.0, freq=None, window_mhz=(800.0, 12000.0)):
        lo, hi = window_mhz
        if freq is None:
            freq = (lo, 100.0, int(round((hi - lo) / 100.0)) + 1)
        super().__init__(engine, workdir, timeout_s, freq)
        self.window_mhz = window_mhz

    def __call__(self, x):
        d = bowtie_design(x)
        table = self._run(gen_bowtie_deck(d, freq=self.freq), d.z0_ohm)
        return bowtie_fitness(summarize(table, *self.window_mhz), d.z0_ohm)


class YagiObjective(_EngineObjective):
    """Yagi fitness from forward gain and VSWR at f_L, f_C and f_U."""

    def __init__(self, engine, workdir, coeffs, band_mhz=(275.0, 300.0, 325.0), timeout_s=300.0):
        fl, fc, fu = band_mhz
        if not math.isclose(fc - fl, fu - fc):
            raise ConfigError("f_C must be the center of [f_L, f_U]")
        super().__init__(engine, workdir, timeout_s, (fl, fc - fl, 3))
        self.coeffs = coeffs
        self.band_mhz = band_mhz

    def __call__(self, x):
        d = yagi_design(x)
        table = self._run(gen_yagi_deck(d, freq=self.freq, coeffs=self.coeffs), d.z0_ohm, forward=(90.0, 0.0))
        return yagi_fitness(tuple(table.gfwd[:3]), tuple(table.vswr[:3]), self.coeffs)
