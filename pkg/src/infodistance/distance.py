"""Entropies and information-theoretic distances for binary +/-1 variables.

The basic object is :class:`JointDistribution`, a dense probability table
over outcome tuples in ``{+1, -1}^n``.  Products of variables are described
by :class:`ProductTerm`, a parity set of variable labels: a label that occurs
an even number of times in a product drops out because every +/-1 variable
squares to one.

Two distances are available for a product term ``t``:

``entropic``
    ``H(t)``, the Shannon entropy (in bits) of the product outcome.
``covariance``
    ``1 - <t>``, one minus the expectation of the product.

Both are non-negative, symmetric and satisfy the triangle inequality
``delta(v ^ w) <= delta(v) + delta(w)`` where ``^`` joins two products.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "NORMALIZATION_TOL",
    "TRIANGLE_TOL",
    "MAX_VARIABLES",
    "DistanceKind",
    "ProductTerm",
    "JointDistribution",
    "AxiomReport",
    "binary_entropy",
    "shannon_entropy",
    "product_marginal",
    "product_expectation",
    "delta",
    "distance",
    "correlation_spectrum",
    "check_axioms",
    "emax_shannon",
    "mix_distributions",
    "natural_key",
]

NORMALIZATION_TOL = 1e-12
TRIANGLE_TOL = 1e-12
MAX_VARIABLES = 24
_PROB_SLACK = 1e-12


class DistanceKind(str, enum.Enum):
    ENTROPIC = "entropic"
    COVARIANCE = "covariance"


def natural_key(label: str):
    """Sort key that orders ``A2`` before ``A10``."""
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", label)]


class ProductTerm(frozenset):
    """Set of variable labels whose outcomes are multiplied together.

    Labels appearing an even number of times in ``labels`` cancel, so
    ``ProductTerm(["B2", "C2", "B2"]) == ProductTerm(["C2"])``.  The ``^``
    operator multiplies two products.

    >>> ProductTerm(["A1", "B2", "C2"]) ^ ProductTerm(["B2", "C2", "B1", "C1"])
    ProductTerm('A1', 'B1', 'C1')
    """

    def __new__(cls, labels: Iterable[str] | str = ()):
        if isinstance(labels, str):
            labels = (labels,)
        counts = Counter(labels)
        return super().__new__(cls, (lab for lab, c in counts.items() if c % 2))

    def __xor__(self, other):
        return ProductTerm(frozenset.symmetric_difference(self, other))

    __rxor__ = __xor__

    def ordered(self, order: Sequence[str] | None = None) -> list[str]:
        if order is None:
            return sorted(self, key=natural_key)
        rank = {lab: i for i, lab in enumerate(order)}
        return sorted(self, key=lambda lab: (rank.get(lab, len(rank)), natural_key(lab)))

    def label(self, order: Sequence[str] | None = None, sep: str = "·") -> str:
        return sep.join(self.ordered(order)) if self else "1"

    def __repr__(self):
        return "ProductTerm(" + ", ".join(repr(lab) for lab in self.ordered()) + ")"


def _outcome_key(outcome) -> tuple[int, ...]:
    if isinstance(outcome, str):
        signs = []
        for ch in outcome:
            if ch == "+":
                signs.append(1)
            elif ch in "-−":
                signs.append(-1)
            else:
                raise ValueError(f"bad outcome character {ch!r} in {outcome!r}")
        return tuple(signs)
    out = tuple(int(s) for s in outcome)
    if any(s not in (1, -1) for s in out):
        raise ValueError(f"outcomes must be +1/-1, got {outcome!r}")
    return out


def _outcome_string(outcome: Sequence[int]) -> str:
    return "".join("+" if s == 1 else "-" for s in outcome)


class JointDistribution:
    """Probability table over joint outcomes of ``n`` binary +/-1 variables.

    The table has shape ``(2,) * n``; axis ``k`` belongs to ``variables[k]``
    and index 0 on an axis means outcome +1, index 1 means -1.  Read in C
    order, the first variable is the most significant bit of the flat index.

    Probabilities must be non-negative and sum to one within
    ``NORMALIZATION_TOL``; inputs are never renormalized.
    """

    __slots__ = ("_variables", "_table", "_index")

    def __init__(self, variables: Sequence[str], table):
        variables = tuple(str(v) for v in variables)
        n = len(variables)
        if n > MAX_VARIABLES:
            raise ValueError(f"at most {MAX_VARIABLES} variables supported, got {n}")
        if len(set(variables)) != n:
            raise ValueError(f"duplicate variable labels in {variables}")
        arr = np.array(table, dtype=float)
        if arr.size != 2**n:
            raise ValueError(f"table has {arr.size} cells, expected {2**n}")
        arr = arr.reshape((2,) * n)
        if not np.all(np.isfinite(arr)):
            raise ValueError("probabilities must be finite")
        if np.any(arr < 0):
            raise ValueError(f"negative probability {arr.min()!r}")
        total = float(arr.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        arr.flags.writeable = False
        self._variables = variables
        self._table = arr
        self._index = {v: i for i, v in enumerate(variables)}

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_mapping(cls, variables: Sequence[str], probabilities: Mapping) -> "JointDistribution":
        """Build from ``{outcome: p}``; outcomes are sign tuples or ``"+-+"`` strings."""
        n = len(variables)
        table = np.zeros((2,) * n)
        for outcome, p in probabilities.items():
            key = _outcome_key(outcome)
            if len(key) != n:
                raise ValueError(f"outcome {outcome!r} has wrong length for {n} variables")
            table[tuple(0 if s == 1 else 1 for s in key)] += float(p)
        return cls(variables, table)

    @classmethod
    def point_mass(cls, variables: Sequence[str], outcome) -> "JointDistribution":
        return cls.from_mapping(variables, {_outcome_key(outcome): 1.0})

    @classmethod
    def uniform(cls, variables: Sequence[str]) -> "JointDistribution":
        n = len(variables)
        return cls(variables, np.full((2,) * n, 2.0**-n))

    @classmethod
    def uniform_over(cls, variables: Sequence[str], outcomes: Iterable) -> "JointDistribution":
        """Equal weight on each listed outcome tuple (duplicates ignored)."""
        keys = sorted({_outcome_key(o) for o in outcomes}, reverse=True)
        if not keys:
            raise ValueError("no outcomes given")
        w = 1.0 / len(keys)
        return cls.from_mapping(variables, {k: w for k in keys})

    # -- accessors --------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return self._variables

    @property
    def n(self) -> int:
        return len(self._variables)

    @property
    def table(self) -> np.ndarray:
        return self._table

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown variable {label!r}; have {self._variables}") from None

    def probability(self, outcome) -> float:
        key = _outcome_key(outcome)
        return float(self._table[tuple(0 if s == 1 else 1 for s in key)])

    def items(self) -> Iterator[tuple[tuple[int, ...], float]]:
        """Yield ``(outcome, p)`` for every nonzero cell in lexicographic order."""
        for idx in zip(*np.nonzero(self._table)):
            yield tuple(1 - 2 * int(i) for i in idx), float(self._table[idx])

    def marginal(self, labels: Sequence[str]) -> "JointDistribution":
        """Marginal over ``labels``, in the order given."""
        axes = [self.index(lab) for lab in labels]
        if len(set(axes)) != len(axes):
            raise ValueError(f"duplicate labels in {labels}")
        drop = tuple(i for i in range(self.n) if i not in axes)
        marg = self._table.sum(axis=drop) if drop else self._table
        kept = [i for i in range(self.n) if i in axes]
        marg = np.transpose(marg, [kept.index(a) for a in axes])
        return JointDistribution(labels, marg)

    def relabel(self, mapping: Mapping[str, str]) -> "JointDistribution":
        return JointDistribution([mapping.get(v, v) for v in self._variables], self._table)

    def allclose(self, other: "JointDistribution", atol: float = 1e-12) -> bool:
        if set(self._variables) != set(other.variables):
            return False
        return bool(np.allclose(self._table, other.marginal(self._variables).table, rtol=0, atol=atol))

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "variables": list(self._variables),
            "probabilities": {_outcome_string(o): p for o, p in self.items()},
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "JointDistribution":
        return cls.from_mapping(data["variables"], data["probabilities"])

    def __repr__(self):
        return f"JointDistribution(variables={list(self._variables)}, support={sum(1 for _ in self.items())})"


def binary_entropy(p):
    """Entropy in bits of a two-outcome distribution ``(p, 1 - p)``.

    Accepts a scalar or an array.  ``0 log 0`` is taken as zero.  Values
    outside ``[0, 1]`` by more than 1e-12 raise ``ValueError``.
    """
    arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < -_PROB_SLACK) or np.any(arr > 1 + _PROB_SLACK):
        raise ValueError(f"probability outside [0, 1]: {p!r}")
    arr = np.clip(arr, 0.0, 1.0)
    q = 1.0 - arr
    endpoint = (arr == 0.0) | (q == 0.0)
    safe_p = np.where(endpoint, 0.5, arr)
    safe_q = np.where(endpoint, 0.5, q)
    h = np.where(endpoint, 0.0, -safe_p * np.log2(safe_p) - safe_q * np.log2(safe_q))
    if h.ndim == 0:
        return float(h)
    return h


def shannon_entropy(dist: JointDistribution) -> float:
    """Joint Shannon entropy in bits."""
    p = dist.table[dist.table > 0]
    return float(-np.sum(p * np.log2(p))) if p.size else 0.0


def _term_axes(dist: JointDistribution, term) -> list[int]:
    term = ProductTerm(term)
    if not term:
        raise ValueError("product term must contain at least one variable")
    return [dist.index(lab) for lab in term.ordered(dist.variables)]


def _prob_plus(dist: JointDistribution, term) -> float:
    axes = _term_axes(dist, term)
    drop = tuple(i for i in range(dist.n) if i not in axes)
    marg = dist.table.sum(axis=drop) if drop else dist.table
    parity = sum(np.ix_(*([np.arange(2)] * marg.ndim))) % 2
    return float(marg[parity == 0].sum())


def product_marginal(dist: JointDistribution, term) -> JointDistribution:
    """Two-point distribution of the product of the variables in ``term``.

    The result has a single variable labelled by the product, e.g. ``"A·B"``.
    """
    p_plus = _prob_plus(dist, term)
    term = ProductTerm(term)
    p_plus = min(max(p_plus, 0.0), 1.0)
    return JointDistribution([term.label(dist.variables)], [p_plus, 1.0 - p_plus])


def product_expectation(dist: JointDistribution, term) -> float:
    """Expectation ``<prod>`` of the product of the variables in ``term``."""
    p_plus = _prob_plus(dist, term)
    return 2.0 * p_plus - 1.0


def delta(dist: JointDistribution, term, kind: DistanceKind | str = DistanceKind.ENTROPIC) -> float:
    """Multipartite distance of the variables in ``term``.

    Entropic kind: entropy of the product outcome, in ``[0, 1]``.
    Covariance kind: ``1 - <product>``, in ``[0, 2]``.
    """
    kind = DistanceKind(kind)
    p_plus = _prob_plus(dist, term)
    if kind is DistanceKind.ENTROPIC:
        return binary_entropy(p_plus)
    return 1.0 - (2.0 * p_plus - 1.0)


def distance(dist: JointDistribution, a, b, kind: DistanceKind | str = DistanceKind.ENTROPIC) -> float:
    """Bipartite distance ``d(a, b)`` between two variables or products.

    ``d(A, A)`` is exactly zero: the product ``A·A`` is the constant +1.
    """
    u = ProductTerm(a) ^ ProductTerm(b)
    if not u:
        DistanceKind(kind)
        return 0.0
    return delta(dist, u, kind)


def correlation_spectrum(dist: JointDistribution) -> np.ndarray:
    """Expectations of every product term, indexed by parity bit mask.

    Entry ``m`` of the flat result is ``<prod_{k in m} X_k>`` where bit
    ``n-1-k`` of ``m`` selects ``variables[k]`` (same bit order as the
    flat probability table).  Entry 0 is always 1.
    """
    spec = np.array(dist.table, dtype=float)
    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]])
    for axis in range(dist.n):
        spec = np.moveaxis(np.tensordot(hadamard, spec, axes=([1], [axis])), 0, axis)
    return spec.reshape(-1)


def _deltas_from_spectrum(spec: np.ndarray, kind: DistanceKind) -> np.ndarray:
    if kind is DistanceKind.ENTROPIC:
        return binary_entropy(np.clip((1.0 + spec) / 2.0, 0.0, 1.0))
    return 1.0 - spec


@dataclass(frozen=True)
class AxiomReport:
    kind: DistanceKind
    trials: int
    seed: int
    nonnegative: bool
    symmetric: bool
    worst_slack: float
    worst_triple: tuple[int, int, int] | None

    @property
    def passed(self) -> bool:
        return self.nonnegative and self.symmetric and self.worst_slack >= -TRIANGLE_TOL


def check_axioms(dist: JointDistribution, kind: DistanceKind | str = DistanceKind.ENTROPIC,
                 trials: int = 1000, seed: int = 0) -> AxiomReport:
    """Spot-check the distance axioms on random term triples.

    Samples ``trials`` pairs ``(v, w)`` of distinct nonempty terms and
    checks ``delta(v ^ w) <= delta(v) + delta(w)``.  The slack reported is
    ``delta(v) + delta(w) - delta(v ^ w)``; its minimum is ``worst_slack``.
    Symmetry holds by construction since terms are unordered sets.
    """
    kind = DistanceKind(kind)
    if dist.n < 3:
        raise ValueError("axiom check needs at least 3 variables")
    values = _deltas_from_spectrum(correlation_spectrum(dist), kind)
    nonneg = bool(np.all(values[1:] >= 0.0))
    size = 2**dist.n
    rng = np.random.default_rng(seed)
    v = rng.integers(1, size, size=trials)
    w = rng.integers(1, size - 1, size=trials)
    w = np.where(w >= v, w + 1, w)  # uniform over nonzero masks different from v
    u = v ^ w
    slack = values[v] + values[w] - values[u]
    if trials:
        i = int(np.argmin(slack))
        worst, triple = float(slack[i]), (int(u[i]), int(v[i]), int(w[i]))
    else:
        worst, triple = 0.0, None
    return AxiomReport(kind, trials, seed, nonneg, True, worst, triple)


def emax_shannon(dist: JointDistribution) -> float:
    """``max_i H(all | X_i)``: the largest single-variable conditional entropy."""
    if dist.n < 2:
        raise ValueError("need at least 2 variables")
    total = shannon_entropy(dist)
    return max(total - shannon_entropy(dist.marginal([v])) for v in dist.variables)


def mix_distributions(d1: JointDistribution, d2: JointDistribution, lam: float) -> JointDistribution:
    """Convex combination ``lam * d1 + (1 - lam) * d2``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {lam}")
    if d1.variables != d2.variables:
        raise ValueError(f"variable mismatch: {d1.variables} vs {d2.variables}")
    return JointDistribution(d1.variables, lam * d1.table + (1.0 - lam) * d2.table)
