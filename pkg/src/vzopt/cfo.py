"""Deterministic Central Force Optimization.

Probes start on axis-parallel probe lines, then accelerate toward probes
with higher fitness. The live decision space is halved about the best
point every ``shrink_every`` steps, and errant probes are pulled back
inside by a cycling repositioning factor ``frep``. Nothing in a run is
random, so identical inputs give bitwise-identical outputs.

Indices are zero-based throughout: probe ``p`` and step ``j``.
"""

from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ConfigError, EvaluationError, ValidationError


class DecisionSpace:
    """Per-dimension box bounds with a live (shrinkable) copy."""

    def __init__(self, lower, upper):
        lo = np.array(lower, dtype=float).reshape(-1)
        hi = np.array(upper, dtype=float).reshape(-1)
        if lo.shape != hi.shape or lo.size == 0:
            raise ValidationError("lower and upper bounds must be non-empty and the same length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValidationError("bounds must be finite")
        if np.any(lo > hi):
            raise ValidationError("every lower bound must be <= its upper bound")
        self.start_min = lo
        self.start_max = hi
        self.start_min.flags.writeable = False
        self.start_max.flags.writeable = False
        self.live_min = lo.copy()
        self.live_max = hi.copy()

    @property
    def dims(self):
        return self.start_min.size

    @property
    def diagonal(self):
        """Length of the starting-bounds diagonal."""
        return float(np.sqrt(np.sum((self.start_max - self.start_min) ** 2)))

    def reset(self):
        self.live_min = self.start_min.copy()
        self.live_max = self.start_max.copy()

    def copy(self):
        out = DecisionSpace(self.start_min, self.start_max)
        out.live_min = self.live_min.copy()
        out.live_max = self.live_max.copy()
        return out

    def __repr__(self):
        return f"DecisionSpace(dims={self.dims}, live=[{self.live_min}, {self.live_max}])"


RETRIEVAL_ORDERS = ("directional_first", "simple_first")


@dataclass(frozen=True)
class CfoParams:
    nt: int = 250
    n_gamma: int = 11
    max_np_per_dim: int = 8
    frep_init: float = 0.5
    frep_delta: float = 0.1
    frep_min: float = 0.05
    alpha_exp: float = 1.0
    beta_exp: float = 1.0
    g_const: float = 2.0
    dt: float = 0.5
    shrink_every: int = 20
    sat_window: int = 25
    sat_tol: float = 1e-6
    # order of the two retrieval passes after each position update
    retrieval_order: str = "directional_first"

    def __post_init__(self):
        if self.retrieval_order not in RETRIEVAL_ORDERS:
            raise ConfigError(f"retrieval_order must be one of {RETRIEVAL_ORDERS}")
        if self.nt < 0:
            raise ConfigError("nt must be >= 0")
        if self.n_gamma < 1:
            raise ConfigError("n_gamma must be >= 1")
        if self.max_np_per_dim < 2:
            raise ConfigError("max_np_per_dim must be >= 2")
        if not 0 < self.frep_min <= self.frep_init <= 1:
            raise ConfigError("need 0 < frep_min <= frep_init <= 1")
        if self.shrink_every < 1 or self.sat_window < 1:
            raise ConfigError("shrink_every and sat_window must be >= 1")

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class ProbeRun:
    """Histories of one run. Arrays are indexed [step, probe, ...]."""

    r: np.ndarray
    a: np.ndarray
    m: np.ndarray
    current_step: int = 0

    @property
    def np(self):
        return self.r.shape[1]


@dataclass
class RunBest:
    fitness: float
    probe: int
    step: int
    np_per_dim: int
    gamma: float
    last_step: int
    best_positions: np.ndarray

    def to_dict(self):
        return {
            "fitness": self.fitness,
            "probe": self.probe,
            "step": self.step,
            "np_per_dim": self.np_per_dim,
            "gamma": self.gamma,
            "last_step": self.last_step,
            "best_positions": [float(v) for v in self.best_positions],
        }


@dataclass
class RunHistory:
    """Per-step series for reporting, one entry per executed step."""

    best_fitness: np.ndarray
    davg: np.ndarray
    best_probe: np.ndarray


@dataclass
class SweepResult:
    best: RunBest
    evaluations: int
    runs: int
    history: RunHistory = field(repr=False)


def gamma_grid(n_gamma):
    """``n_gamma`` points spanning [0, 1]; 0.3 is exactly 3/10, not 3*0.1."""
    if n_gamma == 1:
        return [0.0]
    return [k / (n_gamma - 1) for k in range(n_gamma)]


def np_schedule(dims, max_np_per_dim):
    """Probes-per-line schedule: even values 2..max, or 3..max in 1-D."""
    if dims == 1:
        return list(range(3, max_np_per_dim + 1))
    return list(range(2, max_np_per_dim + 1, 2))


def init_probe_lines(space, np_per_dim, gamma):
    """Place ``np_per_dim`` probes on one axis-parallel line per dimension.

    Off-line coordinates sit at the fraction ``gamma`` of each range.
    Returns an (Np, Nd) array.
    """
    nd = space.dims
    if np_per_dim < 2 or (nd == 1 and np_per_dim < 3):
        raise ConfigError(f"np_per_dim={np_per_dim} too small for {nd}-D")
    if not 0.0 <= gamma <= 1.0:
        raise ConfigError(f"gamma={gamma} outside [0, 1]")
    lo, hi = space.live_min, space.live_max
    r = np.tile(lo + gamma * (hi - lo), (np_per_dim * nd, 1))
    for i in range(nd):
        delta = (hi[i] - lo[i]) / (np_per_dim - 1)
        for k in range(np_per_dim):
            r[k + np_per_dim * i, i] = lo[i] + k * delta
    return r


def compute_accelerations(positions, fitnesses, params):
    """Gravitational pull of every fitter probe on every other probe."""
    r = np.asarray(positions, dtype=float)
    m = np.asarray(fitnesses, dtype=float)
    diff = r[None, :, :] - r[:, None, :]  # [p, k, i] = R_k - R_p
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    dm = m[None, :] - m[:, None]  # [p, k] = M_k - M_p
    pull = (dm > 0) & (dist > 0)
    safe_dm = np.where(pull, dm, 1.0)
    safe_dist = np.where(pull, dist, 1.0)
    w = np.where(pull, safe_dm**params.alpha_exp / safe_dist**params.beta_exp, 0.0)
    return params.g_const * np.einsum("pk,pki->pi", w, diff)


def step_positions(positions, accelerations, params):
    return positions + 0.5 * accelerations * params.dt**2


def retrieve_errant_simple(r_now, r_prev, space, frep):
    """Pull out-of-bounds coordinates back by the fraction ``frep``."""
    r = np.array(r_now, dtype=float)
    lo, hi = space.live_min, space.live_max
    below = r < lo
    above = r > hi
    r = np.where(below, np.maximum(lo + frep * (r_prev - lo), lo), r)
    r = np.where(above, np.minimum(hi - frep * (hi - r_prev), hi), r)
    # no-op when r_prev is inside; after a shrink r_prev may not be
    return np.clip(r, lo, hi)


def retrieve_errant_directional(r_now, r_prev, a_prev, space, frep):
    """Move errant probes back along their previous acceleration vector.

    A probe is errant when some coordinate is out of bounds and that
    coordinate's previous acceleration is nonzero. It is placed at
    ``frep`` times the distance, from its previous position, to the first
    boundary plane the acceleration ray would cross.
    """
    r = np.array(r_now, dtype=float)
    lo, hi = space.live_min, space.live_max
    for p in range(r.shape[0]):
        a = a_prev[p]
        out = ((r[p] > hi) | (r[p] < lo)) & (a != 0)
        if not out.any():
            continue
        eta_star = np.inf
        for i in range(r.shape[1]):
            if a[i] == 0:
                continue  # a zero component never reaches a boundary
            for bound in (lo[i], hi[i]):
                eta = (bound - r_prev[p, i]) / a[i]
                if 0 <= eta <= eta_star:
                    eta_star = eta
        if not np.isfinite(eta_star):
            continue
        # eta * a is the displacement to the face; scaling avoids overflow in |a|
        r[p] = r_prev[p] + frep * eta_star * a
    return r


def shrink_space(space, best_position):
    """Halve the live bounds toward ``best_position`` (in place)."""
    best = np.asarray(best_position, dtype=float)
    space.live_min = space.live_min + (best - space.live_min) / 2.0
    space.live_max = space.live_max - (space.live_max - best) / 2.0
    return space


def frep_next(frep, params):
    frep = frep + params.frep_delta
    if frep > 1.0:
        frep = params.frep_min
    return frep


def step_bests(m):
    """Best fitness of each step (``>=`` scan seeded at -inf)."""
    return np.max(m, axis=1)


def fitness_saturated(m, j, window, tol):
    """True when the mean per-step best over the last ``window`` steps
    is within ``tol`` of the best at step ``j``."""
    if j < window + 10:
        return False
    bests = step_bests(np.asarray(m)[j - window + 1 : j + 1])
    total = 0.0
    for b in bests:
        total += b
    return abs(total / window - bests[-1]) <= tol


def best_so_far(m, j):
    """Global best (fitness, probe, step) over steps 0..j; later wins ties."""
    m = np.asarray(m)
    best, bp, bs = m[0, 0], 0, 0
    for k in range(j + 1):
        row = m[k]
        for p in range(row.size):
            if row[p] >= best:
                best, bp, bs = row[p], p, k
    return float(best), bp, bs


def davg(run, j, space):
    """Mean distance from probes at step ``j`` to the best point so far,
    normalized by the starting diagonal."""
    n = run.r.shape[1]
    if n < 2:
        raise ConfigError("davg needs at least two probes")
    _, bp, bs = best_so_far(run.m, j)
    return _davg_from(run.r[bs, bp], run.r[j], space.diagonal)


def _davg_from(best_pos, positions, diag):
    dist = np.sqrt(np.sum((positions - best_pos) ** 2, axis=1))
    total = 0.0
    for d in dist:
        total += d
    return total / (diag * (positions.shape[0] - 1))


def _retrieve(r, r_prev, a_prev, space, frep, order):
    if order == "simple_first":
        r = retrieve_errant_simple(r, r_prev, space, frep)
        return retrieve_errant_directional(r, r_prev, a_prev, space, frep)
    # zero-acceleration errant probes fall through to the simple pass
    r = retrieve_errant_directional(r, r_prev, a_prev, space, frep)
    return retrieve_errant_simple(r, r_prev, space, frep)


class _Evaluator:
    """Counts objective calls and rejects non-finite fitness."""

    def __init__(self, objective):
        self.objective = objective
        self.calls = 0

    def __call__(self, positions, step):
        out = np.empty(positions.shape[0])
        for p in range(positions.shape[0]):
            v = float(self.objective(positions[p].copy()))
            self.calls += 1
            if not np.isfinite(v):
                raise EvaluationError(p, step, v)
            out[p] = v
        return out


def run_single(objective, space, np_per_dim, gamma, params=None, _evaluator=None):
    """One CFO run for a fixed (np_per_dim, gamma).

    Returns ``(RunBest, RunHistory, ProbeRun)``. The live bounds of
    ``space`` are reset to the starting bounds on exit.
    """
    params = params or CfoParams()
    ev = _evaluator or _Evaluator(objective)
    space.reset()
    try:
        return _run(ev, space, np_per_dim, gamma, params)
    finally:
        space.reset()


def _run(ev, space, np_per_dim, gamma, params):
    nt = params.nt
    r0 = init_probe_lines(space, np_per_dim, gamma)
    n, nd = r0.shape
    run = ProbeRun(
        r=np.zeros((nt + 1, n, nd)),
        a=np.zeros((nt + 1, n, nd)),
        m=np.zeros((nt + 1, n)),
    )
    run.r[0] = r0
    run.m[0] = ev(r0, 0)
    diag = space.diagonal

    best, bp, bs = best_so_far(run.m, 0)
    hist_best = [best]
    hist_probe = [int(np.flatnonzero(run.m[0] == run.m[0].max())[-1])]
    hist_davg = [_davg_from(run.r[bs, bp], run.r[0], diag) if n > 1 else 0.0]

    frep = params.frep_init
    last = 0
    for j in range(1, nt + 1):
        run.a[j - 1] = compute_accelerations(run.r[j - 1], run.m[j - 1], params)
        r = step_positions(run.r[j - 1], run.a[j - 1], params)
        run.r[j] = _retrieve(r, run.r[j - 1], run.a[j - 1], space, frep, params.retrieval_order)
        run.m[j] = ev(run.r[j], j)
        run.current_step = last = j

        # incremental form of the full rescan; same >= order
        row = run.m[j]
        for p in range(n):
            if row[p] >= best:
                best, bp, bs = float(row[p]), p, j

        frep = frep_next(frep, params)
        if j >= params.shrink_every and j % params.shrink_every == 0:
            shrink_space(space, run.r[bs, bp])
            r = retrieve_errant_simple(run.r[j], run.r[j - 1], space, frep)
            run.r[j] = retrieve_errant_directional(r, run.r[j - 1], run.a[j - 1], space, frep)

        hist_best.append(best)
        hist_probe.append(int(np.flatnonzero(row == row.max())[-1]))
        hist_davg.append(_davg_from(run.r[bs, bp], run.r[j], diag) if n > 1 else 0.0)

        if fitness_saturated(run.m, j, params.sat_window, params.sat_tol):
            break

    rb = RunBest(
        fitness=best,
        probe=bp,
        step=bs,
        np_per_dim=np_per_dim,
        gamma=gamma,
        last_step=last,
        best_positions=run.r[bs, bp].copy(),
    )
    history = RunHistory(
        best_fitness=np.array(hist_best),
        davg=np.array(hist_davg),
        best_probe=np.array(hist_probe, dtype=int),
    )
    return rb, history, run


def sweep(objective, space, params=None):
    """Run every (np_per_dim, gamma) pair and keep the best run.

    The Np/Nd loop is outer and the gamma loop inner; a later run wins
    ties. Returns a SweepResult whose ``evaluations`` counts objective
    calls across all runs.
    """
    params = params or CfoParams()
    schedule = np_schedule(space.dims, params.max_np_per_dim)
    if not schedule:
        raise ConfigError(f"max_np_per_dim={params.max_np_per_dim} leaves no valid Np/Nd for {space.dims}-D")
    ev = _Evaluator(objective)
    best = hist = None
    runs = 0
    for npd in schedule:
        for gamma in gamma_grid(params.n_gamma):
            rb, h, _ = run_single(objective, space, npd, gamma, params, _evaluator=ev)
            runs += 1
            if best is None or rb.fitness >= best.fitness:
                best, hist = rb, h
    return SweepResult(best=best, evaluations=ev.calls, runs=runs, history=hist)
