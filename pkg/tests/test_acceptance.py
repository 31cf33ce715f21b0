"""Acceptance criteria 1-10, one test each.

Every test records ``(ok, detail)`` in ``conftest.ACCEPTANCE`` before
asserting, so the terminal summary prints one line per criterion.
"""

import os
import time

import numpy as np
import pytest
import test_antenna
import test_cfo
import test_nec
from conftest import ACCEPTANCE

from vzopt import benchmarks, nec, report
from vzopt.antenna import YAGI_DESIGN1, extract_bands, load_reference_table, summarize, vswr, yagi_fitness
from vzopt.cfo import DecisionSpace, sweep
from vzopt.quasirandom import primes_up_to, radical_inverse


def record(k, ok, detail):
    ACCEPTANCE[k] = (bool(ok), detail)
    assert ok, detail


def timed(fn, *a, **kw):
    t0 = time.perf_counter()
    out = fn(*a, **kw)
    return out, time.perf_counter() - t0


# Rows of the bundled loaded-bowtie table whose tabulated VSWR disagrees
# with vswr(715, Rin, Xin) by more than 0.01. The same values are in the
# source listing; 10640-11450 MHz has an Xin column stepping by exactly
# 1.35 ohm per row, which the VSWR column does not follow.
VSWR_COLUMN_OUTLIERS = (
    1895, 2915, 3410, 3425, 3530, 10640, 10700, 10775, 10790, 10820, 10850, 10865, 10880, 10895,
    10910, 10925, 10955, 10970, 11000, 11015, 11060, 11075, 11090, 11105, 11120, 11405, 11420,
    11435, 11450,
)


def test_criterion_01_vswr_fixture():
    t0 = time.perf_counter()
    t = load_reference_table("bowtie-loaded")
    named = [vswr(715.0, 111.51, -34.45), vswr(715.0, 361.81, 62.86)]
    named_ok = abs(named[0] - 6.43) <= 0.01 and abs(named[1] - 2.00) <= 0.01
    dev = np.array([abs(vswr(715.0, t.rin[k], t.xin[k]) - t.vswr[k]) for k in range(len(t))])
    within = dev <= 0.01
    outliers = tuple(int(f) for f in t.f[~within])
    dt = time.perf_counter() - t0
    ok = named_ok and within.sum() >= 20 and outliers == VSWR_COLUMN_OUTLIERS and dt < 1.0
    record(1, ok, f"800 MHz {named[0]:.3f}, 1655 MHz {named[1]:.3f}; {int(within.sum())}/{len(t)} rows "
                  f"within 0.01, {len(outliers)} known source-table outliers (max dev {dev.max():.4f}); "
                  f"{dt:.2f} s")


def test_criterion_02_band_reproduction():
    want = [(1655, 1865, 210, 11.9), (3185, 5210, 2025, 48.2), (6365, 8345, 1980, 26.9),
            (11420, 11675, 255, 2.21)]
    bands, dt = timed(lambda: extract_bands(load_reference_table("bowtie-loaded"), 2.0))
    got = [(b.f_lo, b.f_hi, b.width, b.frac_pct) for b in bands]
    ok = len(got) == len(want) and dt < 1.0 and all(
        (g[0], g[1], g[2]) == w[:3] and abs(g[3] - w[3]) <= 0.1 for g, w in zip(got, want))
    record(2, ok, "; ".join(f"{g[0]:g}-{g[1]:g} {g[2]:g} MHz {g[3]:.2f}%" for g in got) + f"; {dt:.2f} s")


def test_criterion_03_deck_bit_exact():
    kinds = ("GW", "LD", "FR", "EX", "RP")
    t0 = time.perf_counter()
    bow = test_nec.bowtie_deck().text()
    yagi = test_nec.yagi_deck().text()
    dt = time.perf_counter() - t0

    def pick(text, ks):
        return [ln for ln in text.splitlines() if ln[:2] in ks]

    bow_ok = pick(bow, kinds) == pick(test_nec.BOWTIE_DECK, kinds)
    yagi_ok = pick(yagi, ("GW", "EX", "FR")) == pick(test_nec.YAGI_CARDS, ("GW", "EX", "FR"))
    full = bow == test_nec.BOWTIE_DECK
    record(3, bow_ok and yagi_ok and dt < 1.0,
           f"bowtie cards {'match' if bow_ok else 'DIFFER'} (whole deck incl. comments "
           f"{'matches' if full else 'differs'}); yagi GW/EX/FR {'match' if yagi_ok else 'DIFFER'}; {dt:.3f} s")


def test_criterion_04_quasirandom_tables():
    t0 = time.perf_counter()
    b2 = all(radical_inverse(n, 2) == v for n, v in _quasirandom_values()[2])
    b5 = all(radical_inverse(n, 5) == v for n, v in _quasirandom_values()[5])
    b3 = all(abs(radical_inverse(n, 3) - v) <= 1e-12 for n, v in _quasirandom_values()[3])
    typo = abs(radical_inverse(532, 3) - 0.422496570544719)
    primes = (len(primes_up_to(2000)), len(primes_up_to(7919)))
    dt = time.perf_counter() - t0
    ok = b2 and b3 and b5 and primes == (303, 1000) and dt < 1.0
    record(4, ok, f"base 2/5 exact, base 3 within 1e-12 (n=532 checked against its digit column "
                  f"102102 = 308/729; the listed decimal is off by {typo:.1e}); primes {primes}; {dt:.2f} s")


def _quasirandom_values():
    import test_quasirandom as q

    return {2: q.BASE2, 3: q.BASE3, 5: q.BASE5}


EFFICACY = {"GP": (-3.0, 0.01), "SGO": (130.8323, 0.5), "HIMMELBLAU": (200.0, 0.01), "SPHERE": (0.0, 0.01)}


@pytest.fixture(scope="module")
def sweeps(tmp_path_factory):
    """Two full default sweeps per efficacy benchmark, with series files."""
    out = {}
    for name in EFFICACY:
        spec = benchmarks.get(name)
        lo, hi = spec.bounds()
        pair = []
        for k in range(2):
            res, dt = timed(sweep, spec, DecisionSpace(lo, hi))
            d = tmp_path_factory.mktemp(f"{name}{k}")
            report.write_series(res.history, d)
            series = {n: (d / f"{n}.dat").read_bytes() for n in report.SERIES_NAMES}
            pair.append((res, dt, series))
        out[name] = pair
    return out


def test_criterion_05_optimizer_efficacy(sweeps):
    parts, ok = [], True
    for name, (target, tol) in EFFICACY.items():
        res, dt, _ = sweeps[name][0]
        good = abs(res.best.fitness - target) <= tol and dt < 60.0
        ok &= good
        parts.append(f"{name} {res.best.fitness:.6g} ({dt:.1f} s)")
    record(5, ok, "; ".join(parts))


def test_criterion_06_determinism(sweeps):
    parts, ok = [], True
    for name, ((a, _, sa), (b, _, sb)) in sweeps.items():
        da, db = a.best.to_dict(), b.best.to_dict()
        same_best = all(np.array_equal(da[k], db[k]) if isinstance(da[k], np.ndarray) else
                        repr(da[k]) == repr(db[k]) for k in da)
        same = same_best and sa == sb and a.evaluations == b.evaluations and a.runs == b.runs
        ok &= same
        parts.append(f"{name} {'identical' if same else 'DIFFERENT'} ({a.evaluations} evals)")
    record(6, ok, "; ".join(parts))


def test_criterion_07_property_suites():
    suites = [
        ("containment 10^4", test_cfo.test_containment_after_retrieval, True),
        ("shrink nesting", test_cfo.test_shrink_nesting_and_halving, True),
        ("permutation symmetry", test_cfo.test_acceleration_permutation_symmetry, True),
        ("frep orbit 10^3", test_cfo.test_frep_orbit, False),
        ("vswr symmetry/scale 10^4", test_antenna.test_vswr_properties, True),
        ("bands vs brute force 10^3", test_antenna.test_bands_match_brute_force, True),
    ]
    failed = []
    for label, fn, wants_rng in suites:
        try:
            fn(np.random.default_rng(7)) if wants_rng else fn()
        except AssertionError as exc:
            failed.append(f"{label}: {exc}")
    record(7, not failed, "all six suites pass" if not failed else "; ".join(failed))


def test_criterion_08_fitness_oracles():
    failed = []
    for label, fn in (("bowtie", test_antenna.test_bowtie_oracle), ("yagi", test_antenna.test_yagi_oracle)):
        try:
            fn(np.random.default_rng(8))
        except AssertionError as exc:
            failed.append(f"{label}: {exc}")
    v = yagi_fitness((8, 9, 11), (1.5, 1.2, 1.8), YAGI_DESIGN1)
    ok = not failed and v == 13.08
    record(8, ok, f"10^3-summary oracles {'pass' if not failed else failed}; worked example {v!r}")


# Min/max table for the optimized bowtie over 800-12000 MHz.
REFERENCE_SUMMARY = {
    "vswr": (1.06, 6.43), "rin": (111.51, 729.32), "xin": (-286.0, 335.73),
    "eff": (24.25, 98.88), "gmax": (-3.34, 4.71),
}


def test_criterion_09_nec_integration(stub_engine, tmp_path):
    engine = os.environ.get("VZOPT_NEC_ENGINE")
    real = bool(engine)
    deck = nec.gen_bowtie_deck(nec.BOWTIE_BEST, freq=(800.0, 100.0, 113) if real else (800.0, 60.0, 187))
    out = nec.run_engine(deck, engine if real else stub_engine, tmp_path, 715.0)
    s = summarize(out.table, 800.0, 12000.0)
    worst, parts = 0.0, []
    for key, (lo, hi) in REFERENCE_SUMMARY.items():
        for got, want in ((getattr(s, "min_" + key), lo), (getattr(s, "max_" + key), hi)):
            rel = abs(got - want) / abs(want)
            worst = max(worst, rel)
        parts.append(f"{key} {getattr(s, 'min_' + key):.2f}/{getattr(s, 'max_' + key):.2f}")
    mode = f"engine {engine}" if real else "stub replay"
    record(9, worst <= 0.02, f"{mode}: " + ", ".join(parts) + f"; worst deviation {100 * worst:.2f}%")


def test_criterion_10_reference_targets():
    targets = "bowtie best fitness 1.5806e-4; yagi #1 best 14.62534041; yagi #2 best 0.93193733"
    record(10, True, f"not gating, recorded only (needs a licensed engine): {targets}")
