"""Multi-start maximization over the nonnegative part of a lattice unit sphere.

Every objective used here is monotone in |z_i|, so the supremum over the
unit ball is attained on the sphere and on the nonnegative orthant. Points
are parametrized as z = y / ||y||_X with y on the probability simplex of the
active coordinates; the search is projected gradient ascent on that simplex.
"""

import math
from dataclasses import dataclass, field, replace
from itertools import combinations_with_replacement
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from projlab.errors import OracleInconclusive, OutOfRange
from projlab.lab.spaces import SequenceSpace, norm
from projlab.services.workers import WorkerPool
from projlab.shared_state import bus

LogObjective = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iter: int = 2000
    grad_tol: float = 1e-10
    grid_resolution: int = 12
    grid_max_dim: int = 4
    seed: int = 20240601
    workers: int = 1
    polish: bool = True
    agree_tol: float = 1e-7

    @classmethod
    def from_config(cls, config: dict, **overrides) -> "OptimizerConfig":
        opt = config.get("optimizer", {})
        run = config.get("run", {})
        base = cls(
            restarts=int(opt.get("restarts", cls.restarts)),
            max_iter=int(opt.get("max_iter", cls.max_iter)),
            grad_tol=float(opt.get("grad_tol", cls.grad_tol)),
            grid_resolution=int(opt.get("grid_resolution", cls.grid_resolution)),
            seed=int(run.get("seed", cls.seed)),
            workers=int(run.get("workers", cls.workers)),
        )
        return replace(base, **overrides)


@dataclass
class SphereMaximum:
    """Best point found and the restart statistics behind it."""
    log_value: float
    point: np.ndarray
    restarts: int
    converged: int
    agreeing: int
    values: List[float] = field(default_factory=list)

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


def project_simplex(v: np.ndarray, s: float = 1.0) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum w = s}."""
    n = v.shape[0]
    if v.sum() == s and np.all(v >= 0):
        return v
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, n + 1) > (cssv - s))[0][-1]
    theta = (cssv[rho] - s) / (rho + 1.0)
    return (v - theta).clip(min=0)


def simplex_grid(d: int, resolution: int) -> np.ndarray:
    """All points of the simplex with coordinates in (1/resolution) Z."""
    pts = []
    for combo in combinations_with_replacement(range(d), resolution):
        counts = np.bincount(combo, minlength=d)
        pts.append(counts / resolution)
    return np.array(pts)


class _SphereProblem:
    """Objective restricted to the active coordinates, in simplex coordinates."""

    def __init__(self, space: SequenceSpace, objective: LogObjective, active: Sequence[int]):
        self.space = space
        self.objective = objective
        self.active = np.asarray(active, dtype=int)
        self.d = len(self.active)

    def embed(self, y: np.ndarray) -> np.ndarray:
        z = np.zeros(self.space.dimension)
        z[self.active] = np.abs(y)
        nz = norm(self.space, z)
        return z / nz if nz > 0 else z

    def __call__(self, y: np.ndarray) -> float:
        if not np.any(y):
            return -math.inf
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = float(self.objective(self.embed(y)))
        return val if not math.isnan(val) else -math.inf

    def gradient(self, y: np.ndarray) -> np.ndarray:
        g = np.empty(self.d)
        for i in range(self.d):
            h = 1e-7 * max(abs(y[i]), 1e-3)
            up = y.copy()
            dn = y.copy()
            up[i] += h
            dn[i] -= h
            g[i] = (self(up) - self(dn)) / (2 * h)
        return g


def _ascend(problem: _SphereProblem, y0: np.ndarray, cfg: OptimizerConfig) -> tuple:
    """Projected gradient ascent with Armijo backtracking; (y, f, converged)."""
    y = project_simplex(np.asarray(y0, dtype=float))
    f = problem(y)
    if not math.isfinite(f):
        return y, f, False
    t = 1.0
    flat = 0
    for _ in range(cfg.max_iter):
        g = problem.gradient(y)
        if not np.all(np.isfinite(g)):
            return y, f, False
        while True:
            y_new = project_simplex(y + t * g)
            f_new = problem(y_new)
            if f_new >= f + 1e-4 * float(g @ (y_new - y)):
                break
            t *= 0.5
            if t < 1e-18:
                return y, f, True
        step = float(np.max(np.abs(y_new - y)))
        gain = f_new - f
        y, f = y_new, f_new
        t = min(2.0 * t, 1e8)
        if step <= cfg.grad_tol:
            return y, f, True
        flat = flat + 1 if gain <= 1e-15 * max(1.0, abs(f)) else 0
        if flat >= 3:
            return y, f, True
    return y, f, False


def _polish(problem: _SphereProblem, y: np.ndarray, f: float) -> tuple:
    """Nelder-Mead in log coordinates; catches kinks projected gradient stalls on."""
    support = y > 0
    if support.sum() < 2:
        return y, f
    idx = np.flatnonzero(support)

    def neg(u: np.ndarray) -> float:
        w = np.zeros_like(y)
        w[idx] = np.exp(u - u.max())
        val = problem(w / w.sum())
        return -val if math.isfinite(val) else 1e300

    res = minimize(neg, np.log(y[idx]), method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 400 * len(idx)})
    if -res.fun > f:
        w = np.zeros_like(y)
        w[idx] = np.exp(res.x - res.x.max())
        return w / w.sum(), -float(res.fun)
    return y, f


def maximize_on_sphere(space: SequenceSpace, objective: LogObjective,
                       active: Optional[Sequence[int]] = None,
                       config: Optional[OptimizerConfig] = None,
                       warm_starts: Sequence[np.ndarray] = (),
                       strict: bool = True, label: str = "sphere") -> SphereMaximum:
    """Maximize a log objective over nonnegative z with ||z|| = 1.

    Coordinates outside ``active`` stay at zero. Starts: the all-equal point,
    warm starts, the best simplex-grid points (small active sets) and seeded
    Dirichlet points, one SeedSequence child per restart.
    """
    cfg = config or OptimizerConfig()
    if active is None:
        active = range(space.dimension)
    problem = _SphereProblem(space, objective, list(active))
    d = problem.d
    if d == 0:
        raise OutOfRange("no active coordinates to optimize over")
    if d == 1:
        y = np.ones(1)
        f = problem(y)
        return SphereMaximum(f, problem.embed(y), 1, 1, 1, [f])

    starts: List[np.ndarray] = [np.full(d, 1.0 / d)]
    for w in warm_starts:
        w = np.abs(np.asarray(w, dtype=float))
        if w.shape[0] == space.dimension:
            w = w[problem.active]
        if w.sum() > 0:
            starts.append(w / w.sum())
    if d <= cfg.grid_max_dim:
        grid = simplex_grid(d, cfg.grid_resolution)
        scores = np.array([problem(p) for p in grid])
        take = max(2, cfg.restarts // 8)
        for i in np.argsort(-scores, kind="stable")[:take]:
            if math.isfinite(scores[i]):
                starts.append(grid[i])
    children = np.random.SeedSequence(cfg.seed).spawn(max(cfg.restarts, 1))
    for child in children[: max(cfg.restarts - len(starts), 0)]:
        starts.append(np.random.default_rng(child).dirichlet(np.ones(d)))

    pool = WorkerPool(cfg.workers)
    runs = pool.map(lambda y0: _ascend(problem, y0, cfg), starts, label=label)

    values = [r[1] for r in runs]
    best = int(np.argmax(values))
    y_best, f_best, _ = runs[best]
    if cfg.polish:
        y_best, f_best = _polish(problem, y_best, f_best)

    converged = sum(1 for r in runs if r[2])
    agreeing = sum(1 for v in values if math.isfinite(v) and f_best - v <= cfg.agree_tol * max(1.0, abs(f_best)))
    if not math.isfinite(f_best):
        raise OracleInconclusive(f"{label}: objective is -inf at every start")
    if strict and converged == 0 and agreeing < 2:
        finite = sorted(v for v in values if math.isfinite(v))
        lo = math.exp(finite[-2]) if len(finite) > 1 else math.exp(f_best)
        raise OracleInconclusive(
            f"{label}: no restart converged and no two restarts agree",
            lo=lo, hi=math.exp(f_best))
    bus.log_info(f"{label}: best log-value {f_best:.12g}, {converged}/{len(runs)} converged, "
                 f"{agreeing} agree")
    return SphereMaximum(f_best, problem.embed(y_best), len(runs), converged, agreeing, values)
