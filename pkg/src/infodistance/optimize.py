"""Derivative-free search for maximal violation over XY measurement angles.

The state is the GHZ state and each variable ``(party, setting)`` is an
equatorial measurement ``cos(a) X + sin(a) Y``.  For GHZ, a product of such
measurements has expectation ``cos(sum of angles)``, so every term entropy
is ``h((1 + cos s) / 2)`` with ``s`` the term's angle sum.  The objective
only depends on those sums, which makes it flat along directions that
leave every sum fixed; :func:`term_angle_sums` gives the comparable
invariants.

Entropy has infinite slope where a term becomes deterministic, so the
search is a grid scan followed by cyclic coordinate descent rather than a
gradient method.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from .distance import DistanceKind, binary_entropy
from .inequalities import AngleConfig, EntropicInequality, evaluate, ghz_scenario

__all__ = [
    "OptimizerSettings",
    "OptimizationResult",
    "objective",
    "objective_dense",
    "term_angle_sums",
    "grid_search",
    "grid_optima",
    "refine",
    "optimize",
]

MAX_GRID = 10**8
MAX_OPTIMA = 256


@dataclass(frozen=True)
class OptimizerSettings:
    grid_points_per_angle: int = 64
    max_refinement_iters: int = 200
    step_shrink: float = 0.5
    convergence_tol: float = 1e-12
    initial_step: float | None = None
    tie_parties: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.grid_points_per_angle < 2:
            raise ValueError("grid_points_per_angle must be >= 2")
        if not 0 < self.step_shrink < 1:
            raise ValueError("step_shrink must lie in (0, 1)")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")


def _sites(ineq: EntropicInequality):
    if ineq.sites is None:
        raise ValueError(f"{ineq.name} has no party structure to optimize over")
    return ineq.sites


def _layout(ineq: EntropicInequality, tie: bool):
    sites = _sites(ineq)
    parties = sorted({p for p, _ in sites.values()})
    settings = sorted({s for _, s in sites.values()})
    if tie:
        keys = settings
        def coord(label):
            return keys.index(sites[label][1])
    else:
        # pin setting 2 of party 0 to remove a flat direction
        pairs = sorted({sites[lab] for lab in sites})
        pinned = (parties[0], 2) if (parties[0], 2) in pairs else None
        keys = [pr for pr in pairs if pr != pinned]
        def coord(label):
            pr = sites[label]
            return None if pr == pinned else keys.index(pr)
    counts = np.zeros((len(ineq.terms), len(keys)))
    for i, term in enumerate(ineq.terms):
        for lab in term:
            c = coord(lab)
            if c is not None:
                counts[i, c] += 1
    return keys, counts, parties


def _to_config(ineq, keys, x, tie: bool) -> AngleConfig:
    sites = _sites(ineq)
    config = {}
    if tie:
        for party, setting in sorted(set(sites.values())):
            config[party, setting] = float(x[keys.index(setting)])
    else:
        for pr in sorted(set(sites.values())):
            config[pr] = float(x[keys.index(pr)]) if pr in keys else 0.0
    return config


def _from_config(ineq, keys, config: AngleConfig, tie: bool) -> np.ndarray:
    if tie:
        parties = sorted({p for p, _ in _sites(ineq).values()})
        return np.array([config[parties[0], s] for s in keys], dtype=float)
    return np.array([config[k] for k in keys], dtype=float)


def _gauge_fix(config: AngleConfig, parties) -> AngleConfig:
    """Shift party 0 by ``-c`` and party 1 by ``+c`` so setting 2 of party 0
    is zero.  Every term holds one variable per party, so sums are kept."""
    c = config.get((parties[0], 2), 0.0)
    out = {}
    for (p, s), a in config.items():
        out[p, s] = a - c if p == parties[0] else a + c if p == parties[1] else a
    return out


def _violation_from_sums(ineq: EntropicInequality, sums: np.ndarray) -> np.ndarray:
    """``sums`` has shape (terms, ...); returns violation of shape (...)."""
    e = np.cos(sums)
    if ineq.kind is DistanceKind.COVARIANCE:
        return e[1:].sum(axis=0) - e[0] - ineq.classical_bound
    h = binary_entropy(np.clip((1.0 + e) / 2.0, 0.0, 1.0))
    return h[0] - h[1:].sum(axis=0)


def term_angle_sums(ineq: EntropicInequality, config: AngleConfig) -> np.ndarray:
    """Angle sum of each term (target first), reduced to ``[-pi, pi)``."""
    sites = _sites(ineq)
    sums = []
    for term in ineq.terms:
        try:
            sums.append(sum(config[sites[lab]] for lab in term))
        except KeyError as exc:
            raise ValueError(f"angle config does not cover {exc.args[0]}") from None
    return (np.asarray(sums) + math.pi) % (2 * math.pi) - math.pi


def objective(ineq: EntropicInequality, config: AngleConfig, n: int | None = None) -> float:
    """Violation on the GHZ state via the closed-form expectation ``cos(sum)``."""
    sites = _sites(ineq)
    if n is not None and n != 1 + max(p for p, _ in sites.values()):
        raise ValueError(f"{ineq.name} has {1 + max(p for p, _ in sites.values())} parties, not {n}")
    sums = []
    for term in ineq.terms:
        try:
            sums.append(sum(config[sites[lab]] for lab in term))
        except KeyError:
            raise ValueError(f"angle config does not cover the variables of {term.label()}") from None
    return float(_violation_from_sums(ineq, np.asarray(sums)))


def objective_dense(ineq: EntropicInequality, config: AngleConfig) -> float:
    """Same violation by full state-vector simulation."""
    return evaluate(ineq, ghz_scenario(ineq, config)).violation


def _scan(ineq: EntropicInequality, n: int | None, settings: OptimizerSettings,
          optima_tol: float = 1e-9, max_optima: int = MAX_OPTIMA):
    """Grid scan returning the best configuration and the distinct optima.

    Optima are grid points within ``optima_tol`` of the best value, reduced to
    their term angle sums mod 2pi, since the objective only sees those.
    """
    if n is not None:
        objective(ineq, {pr: 0.0 for pr in _sites(ineq).values()}, n)
    tie = settings.tie_parties
    keys, counts, _ = _layout(ineq, tie)
    m = settings.grid_points_per_angle
    total = m ** len(keys)
    if total > MAX_GRID:
        raise ValueError(f"grid of {total} points exceeds the limit {MAX_GRID}; "
                         "reduce grid_points_per_angle or tie parties")
    axis = -math.pi + 2 * math.pi * np.arange(m) / m
    best_val, best_idx = -np.inf, None
    near: dict[tuple, float] = {}
    # enumerate in lexicographic order of grid index; chunk over the first axis
    rest = len(keys) - 1
    tail = np.array(list(itertools.product(range(m), repeat=rest)), dtype=np.int64).reshape(m**rest, rest)
    for i0 in range(m):
        idx = np.column_stack([np.full(len(tail), i0), tail])
        sums = counts @ axis[idx].T
        vals = _violation_from_sums(ineq, sums)
        j = int(np.argmax(vals))  # first maximum = lexicographically smallest
        if vals[j] > best_val:
            best_val, best_idx = float(vals[j]), idx[j]
            near = {k: v for k, v in near.items() if v >= best_val - optima_tol}
        for c in np.flatnonzero(vals >= best_val - optima_tol):
            if len(near) >= max_optima:
                break
            key = tuple(np.round(np.mod(sums[:, c], 2 * math.pi), 9) % round(2 * math.pi, 9))
            near.setdefault(key, float(vals[c]))
    optima = tuple(sorted(k for k, v in near.items() if v >= best_val - optima_tol))
    return _to_config(ineq, keys, axis[best_idx], tie), optima


def grid_search(ineq: EntropicInequality, n: int | None = None,
                settings: OptimizerSettings = OptimizerSettings()) -> AngleConfig:
    """Best configuration on a uniform grid over ``[-pi, pi)`` per free angle.

    Ties go to the lexicographically smallest angle tuple.
    """
    return _scan(ineq, n, settings)[0]


def grid_optima(ineq: EntropicInequality, n: int | None = None,
                settings: OptimizerSettings = OptimizerSettings(),
                tol: float = 1e-9) -> tuple[tuple[float, ...], ...]:
    """Distinct term-angle-sum patterns (mod 2pi) of all near-maximal grid points.

    No uniqueness claim is made; this only lists what the grid finds, capped
    at ``MAX_OPTIMA`` patterns.
    """
    return _scan(ineq, n, settings, tol)[1]


def refine(ineq: EntropicInequality, n: int | None, start: AngleConfig,
           settings: OptimizerSettings = OptimizerSettings()) -> tuple[AngleConfig, int]:
    """Cyclic coordinate descent from ``start``; returns ``(config, iterations)``.

    Each sweep tries ``x_i +/- step`` for every free coordinate in a seeded
    random order and keeps strict improvements.  The step shrinks by
    ``step_shrink`` after a sweep without improvement.  Stops when the step
    is below ``convergence_tol`` or after ``max_refinement_iters`` sweeps.
    The returned objective is never below the starting one.
    """
    tie = settings.tie_parties
    keys, counts, parties = _layout(ineq, tie)
    start_val = objective(ineq, start, n)
    x = _from_config(ineq, keys, _gauge_fix(start, parties) if not tie else start, tie)

    def f(vec):
        return float(_violation_from_sums(ineq, counts @ vec))

    val = f(x)
    step = settings.initial_step or 2 * math.pi / settings.grid_points_per_angle
    rng = np.random.default_rng(settings.seed)
    it = 0
    while it < settings.max_refinement_iters and step >= settings.convergence_tol:
        it += 1
        improved = False
        for i in rng.permutation(len(keys)):
            for sgn in (1.0, -1.0):
                trial = x.copy()
                trial[i] += sgn * step
                tv = f(trial)
                if tv > val:
                    x, val, improved = trial, tv, True
                    break
        if not improved:
            step *= settings.step_shrink
    x = (x + math.pi) % (2 * math.pi) - math.pi
    config = _to_config(ineq, keys, x, tie)
    if objective(ineq, config, n) < start_val:
        # reducing angles mod 2pi can cost an ulp
        return dict(start), it
    return config, it


@dataclass(frozen=True)
class OptimizationResult:
    inequality: str
    config: AngleConfig
    grid_config: AngleConfig
    objective: float
    grid_objective: float
    iterations: int
    term_angle_sums: tuple[float, ...]
    terms: tuple[dict, ...]
    settings: OptimizerSettings
    distinct_optima: tuple[tuple[float, ...], ...] = ()

    def to_json_dict(self) -> dict:
        def enc(cfg):
            return [{"party": p, "setting": s, "angle": a} for (p, s), a in sorted(cfg.items())]

        return {
            "inequality": self.inequality,
            "settings": asdict(self.settings),
            "config": enc(self.config),
            "grid_config": enc(self.grid_config),
            "objective": self.objective,
            "grid_objective": self.grid_objective,
            "iterations": self.iterations,
            "term_angle_sums": list(self.term_angle_sums),
            "terms": list(self.terms),
            "distinct_optima": [list(o) for o in self.distinct_optima],
        }


def optimize(ineq: EntropicInequality, n: int | None = None,
             settings: OptimizerSettings = OptimizerSettings()) -> OptimizationResult:
    """Grid search followed by refinement."""
    grid, optima = _scan(ineq, n, settings)
    grid_val = objective(ineq, grid, n)
    best, iters = refine(ineq, n, grid, settings)
    val = objective(ineq, best, n)
    sums = term_angle_sums(ineq, best)
    e = np.cos(sums)
    terms = []
    for (side, term), s, ev in zip([("lhs", ineq.target)] + [("rhs", t) for t in ineq.rhs_terms], sums, e):
        d = binary_entropy(min(max((1 + ev) / 2, 0.0), 1.0)) if ineq.kind is DistanceKind.ENTROPIC else 1 - ev
        terms.append({"term": term.label(ineq.order), "side": side, "angle_sum": float(s),
                      "expectation": float(ev), "delta": float(d)})
    return OptimizationResult(ineq.name, best, grid, val, grid_val, iters,
                              tuple(float(s) for s in sums), tuple(terms), settings, optima)
