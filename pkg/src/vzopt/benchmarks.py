"""Benchmark objectives, all posed as maximization problems.

Classical minimization problems are negated. Each entry records its
default dimensionality, its box bounds and, where one is known, the
optimum value and location.
"""

from dataclasses import dataclass
from math import e, pi

import numpy as np

from .errors import CatalogError, ValidationError

# Finite stand-in for "infeasible": a non-finite value would abort a run.
INFEASIBLE = -1.0e30


@dataclass(frozen=True)
class KnownBest:
    value: float
    location: tuple
    tol: float = 1e-6


@dataclass(frozen=True)
class BenchmarkSpec:
    name: str
    dims: int
    lower: tuple
    upper: tuple
    evaluator: object
    known_best: KnownBest = None
    fixed_dims: bool = True
    note: str = ""

    def bounds(self, dims=None):
        """(lower, upper) arrays, broadcasting scalar-range functions to ``dims``."""
        n = self.dims if dims is None else dims
        if self.fixed_dims and n != self.dims:
            raise ValidationError(f"{self.name} is {self.dims}-D only")
        lo = np.array(self.lower, dtype=float)
        hi = np.array(self.upper, dtype=float)
        if lo.size == 1:
            lo, hi = np.full(n, lo[0]), np.full(n, hi[0])
        return lo, hi

    def __call__(self, x):
        return self.evaluator(np.asarray(x, dtype=float))


# --- named classics -------------------------------------------------------


def parrott_f4(x):
    x1 = x[0]
    return float(np.exp(-2.0 * np.log(2.0) * ((x1 - 0.08) / 0.854) ** 2) * np.sin(5.0 * pi * (x1**0.75 - 0.05)) ** 6)


def sgo(x):
    t = x**4 - 16.0 * x**2 + 0.5 * x
    return float(-(t[0] + t[1]))


def _goldstein_price(x1, x2):
    t1 = 1.0 + (x1 + x2 + 1.0) ** 2 * (19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2)
    t2 = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return -(t1 * t2)


def goldstein_price(x):
    return float(_goldstein_price(x[0], x[1]))


def step_function(x):
    off = np.zeros(x.size)
    if x.size == 2:
        off[:] = (75.0, 35.0)
    return float(-np.sum(np.floor(x - off + 0.5) ** 2))


def schwefel_226(x):
    return float(np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def colville(x):
    x1, x2, x3, x4 = x
    z = (
        100.0 * (x2 - x1**2) ** 2
        + (1.0 - x1) ** 2
        + 90.0 * (x4 - x3**2) ** 2
        + (1.0 - x3) ** 2
        + 10.1 * ((x2 - 1.0) ** 2 + (x4 - 1.0) ** 2)
        + 19.8 * (x2 - 1.0) * (x4 - 1.0)
    )
    return float(-z)


GRIEWANK_OFFSET = 75.123


def griewank(x):
    xi = x - GRIEWANK_OFFSET
    i = np.arange(1, x.size + 1)
    return float(-(np.sum(xi**2) / 4000.0 - np.prod(np.cos(xi / np.sqrt(i))) + 1.0))


def himmelblau(x):
    x1, x2 = x
    return float(200.0 - (x1**2 + x2 - 11.0) ** 2 - (x1 + x2**2 - 7.0) ** 2)


def rosenbrock(x):
    # classical form; see the decisions ledger
    return float(-np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def sphere(x):
    return float(-np.sum(x**2))


def himmelblau_nlo(x):
    x1, x2, x3, x4, x5 = x
    g1 = 85.334407 + 0.0056858 * x2 * x5 + 0.00026 * x1 * x4 - 0.0022053 * x3 * x5
    g2 = 80.51249 + 0.0071317 * x2 * x5 + 0.0029955 * x1 * x2 + 0.0021813 * x3 * x3
    g3 = 9.300961 + 0.0047026 * x3 * x5 + 0.0012547 * x1 * x3 + 0.0019085 * x3 * x4
    if g1 < 0 or g1 > 92 or g2 < 90 or g2 > 110 or g3 < 20 or g3 > 25:
        return INFEASIBLE
    return float(-(5.3578547 * x3 * x3 + 0.8356891 * x1 * x5 + 37.29329 * x1 - 40792.141))


def _sign(v):
    return -1.0 if v <= 0 else 1.0


def tripod(x):
    x1, x2 = x
    s1, s2 = _sign(x1), _sign(x2)
    t1 = (1.0 - s2) * (abs(x1) + abs(x2 + 50.0))
    t2 = 0.5 * (1.0 + s2) * (1.0 - s1) * (1.0 + abs(x1 + 50.0) + abs(x2 - 50.0))
    t3 = (1.0 + s1) * (2.0 + abs(x1 - 50.0) + abs(x2 - 50.0))
    return float(-0.5 * (t1 + t2 + t3))


def rosenbrock_f6(x):
    z = x + 1.0
    return float(-(390.0 + np.sum(100.0 * (z[:-1] ** 2 - z[1:]) ** 2 + (z[:-1] - 1.0) ** 2)))


def compression_spring(x):
    x1 = round(float(x[0]))
    x2 = float(x[1])
    x3 = round(float(x[2]), 3)
    cf = 1.0 + 0.75 * x3 / (x2 - x3) + 0.615 * x3 / x2
    fmax, s, lmax, sig_pm, fp, sig_w = 1000.0, 189000.0, 14.0, 6.0, 300.0, 1.25
    k = 11.5e6 * x3**4 / (8.0 * x1 * x2**3)
    lf = fmax / k + 1.05 * (x1 + 2.0) * x3
    sig_p = fp / k
    g = (
        8.0 * cf * fmax * x2 / (pi * x3**3) - s,
        lf - lmax,
        sig_p - sig_pm,
        sig_p - fp / k,
        sig_w - (fmax - fp) / k,
    )
    if any(v > 0 for v in g):
        return INFEASIBLE
    return float(-(pi**2 * x2 * x3**2 * (x1 + 1.0) / 4.0))


def gear_train(x):
    x1, x2, x3, x4 = (round(float(v)) for v in x)
    return float(-((1.0 / 6.931 - x1 * x2 / (x3 * x4)) ** 2))


# --- F-series -------------------------------------------------------------


def f1(x):
    return float(-np.sum(x**2))


def f2(x):
    a = np.abs(x)
    return float(-(np.sum(a) + np.prod(a)))


def f3(x):
    return float(-np.sum(np.cumsum(x) ** 2))


def f4(x):
    return float(-np.max(np.abs(x)))


def f5(x):
    # parenthesization kept as written in the reference listing
    return float(-np.sum((100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0)) ** 2))


def f6(x):
    return float(-np.sum(np.floor(x + 0.5) ** 2))


def f7(x):
    # the uniform noise term is replaced by its mean
    i = np.arange(1, x.size + 1)
    return float(-np.sum(i * x**4) - 0.5)


def f8(x):
    return float(np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def f9(x):
    return float(-np.sum((x**2 - 10.0 * np.cos(2.0 * pi * x) + 10.0) ** 2))


def f10(x):
    n = x.size
    z = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x**2) / n)) - np.exp(np.sum(np.cos(2.0 * pi * x)) / n) + 20.0 + e
    return float(-z)


def f11(x):
    xi = x - 100.0
    i = np.arange(1, x.size + 1)
    return float(-(np.sum(xi**2) / 4000.0 - np.prod(np.cos(xi / np.sqrt(i))) + 1.0))


def _u(x, a, k, m):
    return np.where(x > a, k * (x - a) ** m, np.where(x < -a, k * (-x - a) ** m, 0.0))


def f12(x):
    n = x.size
    y = 1.0 + (x + 1.0) / 4.0
    s = np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(pi * y[1:]) ** 2))
    s += 10.0 * np.sin(pi * y[0]) ** 2 + (y[-1] - 1.0) ** 2
    s = pi * s / n
    return float(-(s + np.sum(_u(x, 10.0, 100.0, 4.0))))


def f13(x):
    s = np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * pi * x[1:]) ** 2))
    s += np.sin(3.0 * pi * x[0]) ** 2 + (x[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * pi * x[-1]) ** 2)
    return float(-(s / 10.0 + np.sum(_u(x, 5.0, 100.0, 4.0))))


_F14_A = np.array(
    [
        [-32.0, -16.0, 0.0, 16.0, 32.0] * 5,
        [v for v in (-32.0, -16.0, 0.0, 16.0, 32.0) for _ in range(5)],
    ]
)


def f14(x):
    inner = np.sum((x[:, None] - _F14_A) ** 6, axis=0)
    s = np.sum(1.0 / (np.arange(1, 26) + inner))
    return float(-1.0 / (0.002 + s))


_F15_A = np.array([0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246])
_F15_B = 1.0 / np.array([0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0])


def f15(x):
    x1, x2, x3, x4 = x
    b = _F15_B
    return float(-np.sum((_F15_A - x1 * (b**2 + b * x2) / (b**2 + b * x3 + x4)) ** 2))


def f16(x):
    x1, x2 = x
    return float(-(4.0 * x1**2 - 2.1 * x1**4 + x1**6 / 3.0 + x1 * x2 - 4.0 * x2**2 + 4.0 * x2**4))


def f17(x):
    x1, x2 = x
    z = (x2 - 5.1 * x1**2 / (4.0 * pi**2) + 5.0 * x1 / pi - 6.0) ** 2 + 10.0 * (1.0 - 1.0 / (8.0 * pi)) * np.cos(x1) + 10.0
    return float(-z)


def f18(x):
    return float(_goldstein_price(x[0], x[1]))


_H3_A = np.array([[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]])
_H3_P = np.array(
    [[0.3689, 0.117, 0.2673], [0.4699, 0.4387, 0.747], [0.1091, 0.8732, 0.5547], [0.03815, 0.5743, 0.8828]]
)
_H_C = np.array([1.0, 1.2, 3.0, 3.2])
_H6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_H6_P = np.array(
    [
        [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
        [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
        [0.2348, 0.1415, 0.3522, 0.2883, 0.3047, 0.665],
        [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
    ]
)


def _hartman(x, a, p):
    return float(np.sum(_H_C * np.exp(-np.sum(a * (x - p) ** 2, axis=1))))


def f19(x):
    return _hartman(x, _H3_A, _H3_P)


def f20(x):
    return _hartman(x, _H6_A, _H6_P)


_SHEKEL_A = np.array(
    [
        [4, 4, 4, 4],
        [1, 1, 1, 1],
        [8, 8, 8, 8],
        [6, 6, 6, 6],
        [3, 7, 3, 7],
        [2, 9, 2, 9],
        [5, 5, 3, 3],
        [8, 1, 8, 1],
        [6, 2, 6, 2],
        [7, 3.6, 7, 3.6],
    ],
    dtype=float,
)
_SHEKEL_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])


def _shekel(x, m):
    return float(np.sum(1.0 / (np.sum((x - _SHEKEL_A[:m]) ** 2, axis=1) + _SHEKEL_C[:m])))


def f21(x):
    return _shekel(x, 5)


def f22(x):
    return _shekel(x, 7)


def f23(x):
    return _shekel(x, 10)


def _spec(name, dims, lo, hi, fn, best=None, fixed=True, note=""):
    return BenchmarkSpec(name, dims, tuple(np.atleast_1d(lo)), tuple(np.atleast_1d(hi)), fn, best, fixed, note)


_CATALOG = [
    _spec("PARROTTF4", 1, 0.0, 1.0, parrott_f4),
    _spec("SGO", 2, -50.0, 50.0, sgo, KnownBest(130.8323, (-2.8362075, -2.8362075), 1e-3)),
    _spec("GP", 2, -100.0, 100.0, goldstein_price, KnownBest(-3.0, (0.0, -1.0), 1e-9)),
    _spec("STEP", 2, -100.0, 100.0, step_function, KnownBest(0.0, (75.0, 35.0)), fixed=False),
    _spec(
        "SCHWEFEL226", 30, -500.0, 500.0, schwefel_226, KnownBest(12569.5, (420.8687,) * 30, 0.5), fixed=False
    ),
    _spec("COLVILLE", 4, -10.0, 10.0, colville, KnownBest(0.0, (1.0, 1.0, 1.0, 1.0))),
    _spec("GRIEWANK", 2, -600.0, 600.0, griewank, KnownBest(0.0, (GRIEWANK_OFFSET,) * 2), fixed=False),
    _spec("HIMMELBLAU", 2, -6.0, 6.0, himmelblau, KnownBest(200.0, (3.0, 2.0))),
    _spec("ROSENBROCK", 2, -2.0, 2.0, rosenbrock, KnownBest(0.0, (1.0, 1.0)), fixed=False),
    _spec("SPHERE", 2, -100.0, 100.0, sphere, KnownBest(0.0, (0.0, 0.0)), fixed=False),
    _spec(
        "HIMMELBLAUNLO",
        5,
        (78.0, 33.0, 27.0, 27.0, 27.0),
        (102.0, 45.0, 45.0, 45.0, 45.0),
        himmelblau_nlo,
        KnownBest(31025.5562644972, (78.0, 33.0, 27.0709971052, 45.0, 44.9692425501), 1e-2),
    ),
    _spec("TRIPOD", 2, -100.0, 100.0, tripod, KnownBest(0.0, (0.0, -50.0))),
    _spec("ROSENBROCKF6", 10, -100.0, 100.0, rosenbrock_f6, note="reference code flags this function as erroneous"),
    _spec("COMPRESSIONSPRING", 3, (1.0, 0.6, 0.207), (70.0, 3.0, 0.5), compression_spring),
    _spec("GEARTRAIN", 4, 12.0, 60.0, gear_train),
    _spec("F1", 30, -100.0, 100.0, f1, KnownBest(0.0, (0.0,) * 30), fixed=False),
    _spec("F2", 30, -10.0, 10.0, f2, KnownBest(0.0, (0.0,) * 30), fixed=False),
    _spec("F3", 30, -100.0, 100.0, f3, KnownBest(0.0, (0.0,) * 30), fixed=False),
    _spec("F4", 30, -100.0, 100.0, f4, KnownBest(0.0, (0.0,) * 30), fixed=False),
    _spec("F5", 30, -30.0, 30.0, f5, fixed=False),
    _spec("F6", 30, -100.0, 100.0, f6, KnownBest(0.0, (0.0,) * 30), fixed=False),
    _spec("F8", 30, -500.0, 500.0, f8, KnownBest(12569.5, (420.8687,) * 30, 0.5), fixed=False),
    _spec("F9", 30, -5.12, 5.12, f9, KnownBest(0.0, (0.0,) * 30), fixed=False),
    _spec("F10", 30, -32.0, 32.0, f10, KnownBest(0.0, (0.0,) * 30, 1e-9), fixed=False),
    _spec("F11", 30, -600.0, 600.0, f11, KnownBest(0.0, (100.0,) * 30), fixed=False),
    _spec("F12", 30, -50.0, 50.0, f12, KnownBest(0.0, (-1.0,) * 30), fixed=False),
    _spec("F13", 30, -50.0, 50.0, f13, KnownBest(0.0, (1.0,) * 30), fixed=False),
    _spec("F14", 2, -65.536, 65.536, f14, KnownBest(-0.998004, (-32.0, -32.0), 1e-3)),
    _spec("F15", 4, -5.0, 5.0, f15, KnownBest(-0.0003075, (0.1928, 0.1908, 0.1231, 0.1358), 1e-5)),
    _spec("F16", 2, -5.0, 5.0, f16, KnownBest(1.0316285, (0.08983, -0.7126), 1e-6)),
    _spec("F17", 2, (-5.0, 0.0), (10.0, 15.0), f17, KnownBest(-0.397887, (-pi, 12.275), 1e-5)),
    _spec("F18", 2, -2.0, 2.0, f18, KnownBest(-3.0, (0.0, -1.0), 1e-9)),
    _spec("F19", 3, 0.0, 1.0, f19, KnownBest(3.86, (0.114, 0.556, 0.852), 1e-2)),
    _spec("F20", 6, 0.0, 1.0, f20, KnownBest(3.32, (0.201, 0.150, 0.477, 0.275, 0.311, 0.657), 1e-2)),
    _spec("F21", 4, 0.0, 10.0, f21, KnownBest(10.1532, (4.0, 4.0, 4.0, 4.0), 1e-2)),
    _spec("F22", 4, 0.0, 10.0, f22, KnownBest(10.4029, (4.0, 4.0, 4.0, 4.0), 1e-2)),
    _spec("F23", 4, 0.0, 10.0, f23, KnownBest(10.5364, (4.0, 4.0, 4.0, 4.0), 1e-2)),
]

# F7 is noisy in the reference code; it is reachable by name but not listed.
_F7 = _spec("F7", 30, -1.28, 1.28, f7, fixed=False, note="noise term fixed at its mean 0.5")

_BY_NAME = {s.name: s for s in _CATALOG + [_F7]}


def catalog(include_f7=False):
    """All benchmark specs in a stable order."""
    return list(_CATALOG) + ([_F7] if include_f7 else [])


def get(name):
    try:
        return _BY_NAME[name.upper()]
    except KeyError:
        raise CatalogError(f"unknown benchmark {name!r}") from None


def evaluate(name, x):
    """Evaluate benchmark ``name`` at ``x``."""
    spec = get(name)
    x = np.asarray(x, dtype=float).reshape(-1)
    if spec.fixed_dims and x.size != spec.dims:
        raise ValidationError(f"{spec.name} expects {spec.dims} coordinates, got {x.size}")
    if x.size < 1 or (spec.name in ("ROSENBROCK", "ROSENBROCKF6", "F5", "F12", "F13") and x.size < 2):
        raise ValidationError(f"{spec.name} needs at least 2 coordinates")
    return spec(x)
