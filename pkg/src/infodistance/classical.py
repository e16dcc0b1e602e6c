"""Brute-force certification of classical bounds.

Classical (local realistic or noncontextual) models assign a value to every
variable in advance; their statistics are convex mixtures of deterministic
strategies.  Correlation inequalities are linear, so the vertices decide
their maximum exactly.  Entropic inequalities are not linear, so random
mixtures of vertices are sampled as well.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .distance import MAX_VARIABLES, DistanceKind, JointDistribution, binary_entropy, natural_key
from .inequalities import PM_LABELS, PM_TRIPLES, EntropicInequality

__all__ = [
    "MIXTURE_VERTEX_CAP",
    "DeterministicStrategy",
    "ClassicalReport",
    "PMConstraintVerdict",
    "enumerate_strategies",
    "strategy_to_distribution",
    "classical_max_violation",
    "pm_product_constraint_check",
]

MIXTURE_VERTEX_CAP = 1024


class DeterministicStrategy(dict):
    """Map from variable label to a predetermined +1/-1 outcome."""

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(self)

    def outcome(self) -> tuple[int, ...]:
        return tuple(self.values())

    def product(self, labels) -> int:
        return math.prod(self[lab] for lab in labels)


def _check_count(k: int) -> None:
    if k > MAX_VARIABLES:
        raise ValueError(f"at most {MAX_VARIABLES} variables can be enumerated, got {k}")


def enumerate_strategies(variables: Sequence[str]) -> Iterator[DeterministicStrategy]:
    """All ``2**k`` assignments, lexicographic with +1 before -1."""
    variables = list(variables)
    _check_count(len(variables))
    for signs in itertools.product((1, -1), repeat=len(variables)):
        yield DeterministicStrategy(zip(variables, signs))


def strategy_to_distribution(s: DeterministicStrategy) -> JointDistribution:
    return JointDistribution.point_mass(list(s), list(s.values()))


@dataclass(frozen=True)
class ClassicalReport:
    inequality: str
    max_violation: float
    max_value: float | None
    witness: JointDistribution
    witness_is_vertex: bool
    vertices: int
    mixtures: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "inequality": self.inequality,
            "max_violation": self.max_violation,
            "max_value": self.max_value,
            "witness": self.witness.to_json_dict(),
            "witness_is_vertex": self.witness_is_vertex,
            "vertices": self.vertices,
            "mixtures": self.mixtures,
            "seed": self.seed,
        }


def _sign_matrix(ineq: EntropicInequality, variables: Sequence[str]) -> np.ndarray:
    """Integer product sign of every term at every vertex, shape (terms, vertices)."""
    k = len(variables)
    idx = {v: i for i, v in enumerate(variables)}
    # vertex v assigns -1 to variable i iff bit (k-1-i) of v is set
    codes = np.arange(2**k, dtype=np.int64)
    rows = []
    for term in ineq.terms:
        mask = 0
        for lab in term:
            mask |= 1 << (k - 1 - idx[lab])
        parity = np.zeros_like(codes)
        m = codes & mask
        while mask:
            parity ^= m & 1
            m >>= 1
            mask >>= 1
        rows.append(1 - 2 * parity)
    return np.array(rows, dtype=np.int64)


def _violations(ineq: EntropicInequality, p_plus: np.ndarray, signs_mean: np.ndarray) -> np.ndarray:
    """Violation for each column of per-term statistics."""
    if ineq.kind is DistanceKind.COVARIANCE:
        value = signs_mean[1:].sum(axis=0) - signs_mean[0]
        return value - ineq.classical_bound
    h = binary_entropy(np.clip(p_plus, 0.0, 1.0))
    return h[0] - h[1:].sum(axis=0)


def classical_max_violation(ineq: EntropicInequality, variables: Sequence[str] | None = None,
                            vertex_only: bool = False, mixture_samples: int = 10_000,
                            seed: int = 0) -> ClassicalReport:
    """Largest violation of ``ineq`` over deterministic strategies and mixtures.

    Every vertex is evaluated exactly.  Unless ``vertex_only``, also
    ``mixture_samples`` convex mixtures with Dirichlet(1) weights over the
    vertices (over a seeded subset of ``MIXTURE_VERTEX_CAP`` vertices when
    there are more).
    """
    if variables is None:
        variables = list(ineq.order)
    variables = list(variables)
    _check_count(len(variables))
    missing = ineq.variables - set(variables)
    if missing:
        raise ValueError(f"variables {sorted(missing, key=natural_key)} are not enumerated")
    if mixture_samples < 0:
        raise ValueError("mixture_samples must be non-negative")
    signs = _sign_matrix(ineq, variables)
    n_vertices = signs.shape[1]

    if ineq.kind is DistanceKind.COVARIANCE:
        values = signs[1:].sum(axis=0) - signs[0]  # exact integers
        vertex_viol = values - ineq.classical_bound
    else:
        # deterministic products have zero entropy on every term
        vertex_viol = _violations(ineq, (signs == 1).astype(float), signs.astype(float))
    best = int(np.argmax(vertex_viol))
    best_viol = float(vertex_viol[best])
    witness_weights = None

    n_mix = 0
    if not vertex_only and mixture_samples:
        rng = np.random.default_rng(seed)
        if n_vertices > MIXTURE_VERTEX_CAP:
            support = np.sort(rng.choice(n_vertices, size=MIXTURE_VERTEX_CAP, replace=False))
        else:
            support = np.arange(n_vertices)
        sub = signs[:, support]
        plus = (sub == 1).astype(float)
        chunk = 2048
        for start in range(0, mixture_samples, chunk):
            size = min(chunk, mixture_samples - start)
            w = rng.dirichlet(np.ones(support.size), size=size)
            p_plus = plus @ w.T
            means = sub.astype(float) @ w.T
            viol = _violations(ineq, p_plus, means)
            i = int(np.argmax(viol))
            if viol[i] > best_viol:
                best_viol = float(viol[i])
                witness_weights = (support, w[i])
        n_mix = mixture_samples

    k = len(variables)
    table = np.zeros(2**k)
    if witness_weights is None:
        table[best] = 1.0
    else:
        support, w = witness_weights
        table[support] = w
        table /= table.sum()
    witness = JointDistribution(variables, table)
    max_value = None
    if ineq.kind is DistanceKind.COVARIANCE:
        max_value = best_viol + ineq.classical_bound
    return ClassicalReport(ineq.name, best_viol, max_value, witness, witness_weights is None,
                           n_vertices, n_mix, seed)


@dataclass(frozen=True)
class PMConstraintVerdict:
    holds: bool
    assignments: int
    achievable: frozenset[tuple[int, ...]]

    def reachable(self, q: Sequence[int]) -> bool:
        return tuple(q) in self.achievable


def pm_product_constraint_check() -> PMConstraintVerdict:
    """Check ``q1 * ... * q6 = +1`` for all 512 noncontextual assignments."""
    achievable = set()
    holds = True
    count = 0
    for s in enumerate_strategies(PM_LABELS):
        q = tuple(s.product(t) for t in PM_TRIPLES)
        holds &= math.prod(q) == 1
        achievable.add(q)
        count += 1
    return PMConstraintVerdict(holds, count, frozenset(achievable))
