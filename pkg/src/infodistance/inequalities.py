"""Entropic and correlation inequalities built from the product distance.

Every inequality here has the shape ``delta(target) <= sum(delta(rhs))``.
With the entropic distance the terms are product entropies; with the
covariance distance ``1 - <t>`` the same inequality rearranges into a
correlator bound ``sum(<rhs>) - <target> <= len(rhs) - 1`` (the Mermin and
Cabello forms).  An inequality can only be built when its right-hand terms
multiply to the target, which is what makes it follow from the triangle
inequality.

Scenarios supply the numbers.  A binding is one of

* a :class:`~infodistance.distance.JointDistribution` over all variables
  (classical, local realistic or noncontextual data),
* a :class:`QuantumBinding` (a state plus one observable per variable),
* a :class:`ProductBinding` (a distribution over product outcomes, one
  variable per measured product, as when only products are recorded).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from . import qsim
from .chains import multipartite_cyclic_term, multipartite_labels, xor_sum_check
from .distance import (
    DistanceKind,
    JointDistribution,
    ProductTerm,
    binary_entropy,
    delta,
    mix_distributions,
    natural_key,
    product_expectation,
)

__all__ = [
    "AngleConfig",
    "EntropicInequality",
    "QuantumBinding",
    "ProductBinding",
    "Scenario",
    "TermValue",
    "EvaluationReport",
    "TRIPARTITE_LABELS",
    "PM_LABELS",
    "PM_TRIPLES",
    "PM_OBSERVABLES",
    "CANONICAL_NAMES",
    "build_tripartite_entropic",
    "build_multipartite_entropic",
    "build_pm_entropic",
    "build_mermin_correlation",
    "build_cabello_correlation",
    "get_inequality",
    "eq8_angles",
    "mermin_angles",
    "standard_multipartite_angles",
    "ghz_scenario",
    "pm_square_scenario",
    "pm_product_scenario",
    "evaluate",
    "term_distributions",
    "canonical_distribution",
    "canonical_contexts",
    "pm_mixing_violation",
]

#: ``(party, setting)`` -> angle in radians.  Parties count from 0 and equal
#: the qubit index; settings count from 1 as in the variable labels.
AngleConfig = dict


@dataclass(frozen=True)
class EntropicInequality:
    """``delta(target) <= sum(delta(t) for t in rhs_terms)``.

    ``sites`` maps each variable to ``(party, setting)`` for nonlocality
    scenarios and is ``None`` when variables are not tied to parties.
    ``classical_bound`` is only meaningful for the covariance kind, where it
    defaults to ``len(rhs_terms) - 1``.
    """

    name: str
    target: ProductTerm
    rhs_terms: tuple[ProductTerm, ...]
    kind: DistanceKind = DistanceKind.ENTROPIC
    classical_bound: float | None = None
    order: tuple[str, ...] | None = None
    sites: Mapping[str, tuple[int, int]] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", DistanceKind(self.kind))
        object.__setattr__(self, "target", ProductTerm(self.target))
        object.__setattr__(self, "rhs_terms", tuple(ProductTerm(t) for t in self.rhs_terms))
        if not self.target or not self.rhs_terms or not all(self.rhs_terms):
            raise ValueError("target and right-hand terms must be nonempty products")
        if not xor_sum_check(self.target, self.rhs_terms):
            raise ValueError(f"{self.name}: right-hand terms do not multiply to the target, "
                             "so the inequality does not follow from the triangle inequality")
        if self.kind is DistanceKind.COVARIANCE and self.classical_bound is None:
            object.__setattr__(self, "classical_bound", float(len(self.rhs_terms) - 1))
        if self.order is None:
            object.__setattr__(self, "order", tuple(sorted(self.variables, key=natural_key)))
        else:
            object.__setattr__(self, "order", tuple(self.order))

    @property
    def variables(self) -> frozenset[str]:
        out = set(self.target)
        for t in self.rhs_terms:
            out |= t
        return frozenset(out)

    @property
    def terms(self) -> tuple[ProductTerm, ...]:
        return (self.target, *self.rhs_terms)

    def describe(self) -> str:
        sym = "H" if self.kind is DistanceKind.ENTROPIC else "δ_cov"

        def show(t):
            return f"{sym}({t.label(self.order)})"

        return f"{show(self.target)} ≤ " + " + ".join(show(t) for t in self.rhs_terms)


# -- the five inequalities ---------------------------------------------------

TRIPARTITE_LABELS = ("A1", "A2", "B1", "B2", "C1", "C2")
_TRIPARTITE_SITES = {f"{p}{s}": (i, s) for i, p in enumerate("ABC") for s in (1, 2)}


def build_tripartite_entropic() -> EntropicInequality:
    return EntropicInequality(
        "tripartite",
        ProductTerm(["A1", "B1", "C1"]),
        (ProductTerm(["A1", "B2", "C2"]), ProductTerm(["A2", "B2", "C1"]),
         ProductTerm(["A2", "B1", "C2"])),
        order=TRIPARTITE_LABELS,
        sites=_TRIPARTITE_SITES,
    )


def build_mermin_correlation() -> EntropicInequality:
    """``<A1B2C2> + <A2B1C2> + <A2B2C1> - <A1B1C1> <= 2``."""
    return EntropicInequality(
        "mermin",
        ProductTerm(["A1", "B1", "C1"]),
        (ProductTerm(["A1", "B2", "C2"]), ProductTerm(["A2", "B1", "C2"]),
         ProductTerm(["A2", "B2", "C1"])),
        kind=DistanceKind.COVARIANCE,
        classical_bound=2.0,
        order=TRIPARTITE_LABELS,
        sites=_TRIPARTITE_SITES,
    )


def _check_multipartite_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n % 2 or not 4 <= n <= 12:
        raise ValueError(f"multipartite inequality needs even n in [4, 12], got {n!r}")


def build_multipartite_entropic(n: int) -> EntropicInequality:
    """Even-``n`` inequality: all-setting-1 term bounded by ``n`` cyclic terms
    and the all-setting-2 term."""
    _check_multipartite_n(n)
    target = ProductTerm(f"M1^({p})" for p in range(1, n + 1))
    rhs = [multipartite_cyclic_term(n, j) for j in range(1, n + 1)]
    rhs.append(ProductTerm(f"M2^({p})" for p in range(1, n + 1)))
    sites = {f"M{s}^({p})": (p - 1, s) for p in range(1, n + 1) for s in (1, 2, 3)}
    return EntropicInequality(f"multipartite_n{n}", target, tuple(rhs),
                              order=tuple(multipartite_labels(n)), sites=sites)


PM_LABELS = ("A", "a", "alpha", "B", "b", "beta", "C", "c", "gamma")
#: the six compatible triples, in product order q1 .. q6
PM_TRIPLES = (
    ("A", "a", "alpha"),
    ("B", "b", "beta"),
    ("C", "c", "gamma"),
    ("A", "B", "C"),
    ("a", "b", "c"),
    ("alpha", "beta", "gamma"),
)
PM_OBSERVABLES = {
    "A": qsim.PauliString("XI"), "a": qsim.PauliString("IX"), "alpha": qsim.PauliString("XX"),
    "B": qsim.PauliString("IY"), "b": qsim.PauliString("YI"), "beta": qsim.PauliString("YY"),
    "C": qsim.PauliString("XY"), "c": qsim.PauliString("YX"), "gamma": qsim.PauliString("ZZ"),
}
_PM_PRODUCT_LABELS = tuple(f"q{i}" for i in range(1, 7))


def build_pm_entropic() -> EntropicInequality:
    return EntropicInequality(
        "pm",
        ProductTerm(PM_TRIPLES[5]),
        tuple(ProductTerm(t) for t in PM_TRIPLES[:5]),
        order=PM_LABELS,
    )


def build_cabello_correlation() -> EntropicInequality:
    """Five row/column correlators minus ``<alpha beta gamma>``, at most 4."""
    return EntropicInequality(
        "cabello",
        ProductTerm(PM_TRIPLES[5]),
        tuple(ProductTerm(t) for t in PM_TRIPLES[:5]),
        kind=DistanceKind.COVARIANCE,
        classical_bound=4.0,
        order=PM_LABELS,
    )


def get_inequality(name: str, n: int | None = None) -> EntropicInequality:
    """Look up a built-in inequality by name (``multipartite`` needs ``n``)."""
    builders = {
        "tripartite": build_tripartite_entropic,
        "mermin": build_mermin_correlation,
        "pm": build_pm_entropic,
        "cabello": build_cabello_correlation,
    }
    if name in builders:
        return builders[name]()
    if name == "multipartite":
        if n is None:
            raise ValueError("multipartite inequality needs a party count n")
        return build_multipartite_entropic(n)
    if name.startswith("multipartite_n"):
        return build_multipartite_entropic(int(name[len("multipartite_n"):]))
    raise ValueError(f"unknown inequality {name!r}")


# -- measurement angles ------------------------------------------------------

def eq8_angles() -> AngleConfig:
    """Setting 1 at pi/6 and setting 2 at -pi/12 for all three parties."""
    return {(p, s): a for p in range(3) for s, a in ((1, math.pi / 6), (2, -math.pi / 12))}


def mermin_angles() -> AngleConfig:
    """Setting 1 at pi/3, setting 2 at -pi/6; gives Mermin value 4 on GHZ."""
    return {(p, s): a for p in range(3) for s, a in ((1, math.pi / 3), (2, -math.pi / 6))}


def standard_multipartite_angles(n: int) -> AngleConfig:
    """``pi/(2n)``, ``0`` and ``-pi/(2n(n-2))`` for settings 1, 2, 3 of every party."""
    if n % 2 or n < 4:
        raise ValueError(f"n must be even and >= 4, got {n}")
    per_setting = {1: math.pi / (2 * n), 2: 0.0, 3: -math.pi / (2 * n * (n - 2))}
    return {(p, s): a for p in range(n) for s, a in per_setting.items()}


# -- scenarios ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuantumBinding:
    """State plus an observable per variable.

    Observables are :class:`~infodistance.qsim.PauliString`,
    :class:`~infodistance.qsim.XYMeasurement` or dense matrices.
    """

    state: Union[qsim.StateVector, qsim.DensityMatrix]
    observables: Mapping[str, object]

    @property
    def num_qubits(self) -> int:
        return self.state.num_qubits

    def matrix(self, label: str) -> np.ndarray:
        spec = self.observables[label]
        if isinstance(spec, (qsim.PauliString, qsim.XYMeasurement)):
            return qsim.observable_matrix(spec, self.num_qubits)
        return np.asarray(spec, dtype=complex)


@dataclass(frozen=True, eq=False)
class ProductBinding:
    """Distribution over product outcomes; ``products`` maps a term to the
    distribution variable recording it."""

    distribution: JointDistribution
    products: Mapping[ProductTerm, str]


Binding = Union[JointDistribution, QuantumBinding, ProductBinding]


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    binding: Binding
    parties: tuple[str, ...] = ()
    settings: Mapping[str, Sequence[str]] = field(default_factory=dict)
    seed: int | None = None

    def bound_variables(self) -> frozenset[str]:
        b = self.binding
        if isinstance(b, JointDistribution):
            return frozenset(b.variables)
        if isinstance(b, QuantumBinding):
            return frozenset(b.observables)
        out = set()
        for t in b.products:
            out |= t
        return frozenset(out)


def _party_name(label: str) -> str:
    m = re.fullmatch(r"M\d+\^\((\d+)\)", label)
    return m.group(1) if m else label.rstrip("0123456789")


def ghz_scenario(ineq: EntropicInequality, angles: AngleConfig, name: str | None = None) -> Scenario:
    """GHZ state with every variable an XY measurement at its site's angle."""
    if ineq.sites is None:
        raise ValueError(f"{ineq.name} has no party structure")
    n = 1 + max(p for p, _ in ineq.sites.values())
    observables = {}
    for label, (party, setting) in ineq.sites.items():
        if (party, setting) not in angles:
            raise ValueError(f"no angle for party {party} setting {setting} ({label})")
        observables[label] = qsim.XYMeasurement(float(angles[party, setting]), party)
    settings: dict[str, list[str]] = {}
    for label in ineq.order:
        settings.setdefault(_party_name(label), []).append(label)
    return Scenario(name or f"{ineq.name}_ghz", QuantumBinding(qsim.ghz_state(n), observables),
                    parties=tuple(settings), settings=settings)


def pm_square_scenario(state=None, name: str = "pm_square") -> Scenario:
    """Peres-Mermin observables on a two-qubit state (maximally mixed by default)."""
    if state is None:
        state = qsim.DensityMatrix(np.eye(4) / 4)
    return Scenario(name, QuantumBinding(state, dict(PM_OBSERVABLES)))


def pm_product_scenario(dist: JointDistribution, name: str = "pm_products") -> Scenario:
    """Scenario recording only the six triple products ``q1 .. q6``."""
    if tuple(dist.variables) != _PM_PRODUCT_LABELS:
        dist = dist.marginal(_PM_PRODUCT_LABELS)
    products = {ProductTerm(t): q for t, q in zip(PM_TRIPLES, _PM_PRODUCT_LABELS)}
    return Scenario(name, ProductBinding(dist, products))


# -- evaluation --------------------------------------------------------------

@dataclass(frozen=True)
class TermValue:
    term: ProductTerm
    label: str
    side: str
    expectation: float
    delta: float


@dataclass(frozen=True)
class EvaluationReport:
    inequality: str
    kind: DistanceKind
    terms: tuple[TermValue, ...]
    lhs: float
    rhs: float
    violation: float
    tolerance: float
    value: float | None = None
    classical_bound: float | None = None
    metadata: Mapping = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return self.violation > self.tolerance

    def to_json_dict(self) -> dict:
        return {
            "inequality": self.inequality,
            "kind": self.kind.value,
            "terms": [
                {"term": t.label, "side": t.side, "expectation": t.expectation, "delta": t.delta}
                for t in self.terms
            ],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "violation": self.violation,
            "violated": self.violated,
            "tolerance": self.tolerance,
            "value": self.value,
            "classical_bound": self.classical_bound,
            "metadata": dict(self.metadata),
        }


def _apply_local(amplitudes: np.ndarray, specs, n: int) -> np.ndarray:
    psi = amplitudes.reshape((2,) * n)
    for s in specs:
        psi = np.moveaxis(np.tensordot(s.local_matrix(), psi, axes=([1], [s.qubit])), 0, s.qubit)
    return psi.reshape(-1)


def _quantum_expectation(binding: QuantumBinding, term: ProductTerm, order) -> float:
    labels = term.ordered(order)
    specs = [binding.observables[lab] for lab in labels]
    n = binding.num_qubits
    if all(isinstance(s, qsim.XYMeasurement) for s in specs):
        qubits = [s.qubit for s in specs]
        if len(set(qubits)) == len(qubits):
            # distinct sites commute trivially; apply locally to the state
            if isinstance(binding.state, qsim.StateVector):
                amps = binding.state.amplitudes
                val = np.vdot(amps, _apply_local(amps, specs, n))
                return float(val.real)
            return qsim.expectation(binding.state, qsim.local_product_matrix(specs, n))
    prod, _ = qsim.product_operator([binding.matrix(lab) for lab in labels])
    return qsim.expectation(binding.state, prod)


def _term_stats(scenario: Scenario, term: ProductTerm, kind: DistanceKind, order) -> tuple[float, float]:
    """Return ``(expectation, delta)`` for one product term."""
    b = scenario.binding
    if isinstance(b, JointDistribution):
        return product_expectation(b, term), delta(b, term, kind)
    if isinstance(b, ProductBinding):
        var = b.products[term]
        return product_expectation(b.distribution, [var]), delta(b.distribution, [var], kind)
    e = _quantum_expectation(b, term, order)
    if kind is DistanceKind.ENTROPIC:
        p_plus = min(max((1.0 + e) / 2.0, 0.0), 1.0)
        return e, binary_entropy(p_plus)
    return e, 1.0 - e


def _check_bound(ineq: EntropicInequality, scenario: Scenario) -> None:
    b = scenario.binding
    if isinstance(b, ProductBinding):
        missing = [t.label(ineq.order) for t in ineq.terms if t not in b.products]
    else:
        missing = sorted(ineq.variables - scenario.bound_variables(), key=natural_key)
    if missing:
        raise ValueError(f"scenario {scenario.name!r} does not bind {missing}")


def evaluate(ineq: EntropicInequality, scenario: Scenario, tolerance: float = 1e-9) -> EvaluationReport:
    """Evaluate both sides of ``ineq`` on ``scenario``.

    Violation is ``lhs - rhs``; for the covariance kind this equals the
    correlator combination minus the classical bound.  Negative values are
    kept as they are.
    """
    _check_bound(ineq, scenario)
    values = []
    for side, term in [("lhs", ineq.target)] + [("rhs", t) for t in ineq.rhs_terms]:
        e, d = _term_stats(scenario, term, ineq.kind, ineq.order)
        values.append(TermValue(term, term.label(ineq.order), side, e, d))
    lhs = values[0].delta
    rhs = float(sum(v.delta for v in values[1:]))
    value = None
    if ineq.kind is DistanceKind.COVARIANCE:
        value = float(sum(v.expectation for v in values[1:]) - values[0].expectation)
        violation = value - ineq.classical_bound
    else:
        violation = lhs - rhs
    meta = {"scenario": scenario.name}
    if scenario.seed is not None:
        meta["seed"] = scenario.seed
    return EvaluationReport(ineq.name, ineq.kind, tuple(values), lhs, rhs, violation, tolerance,
                            value, ineq.classical_bound, meta)


def term_distributions(ineq: EntropicInequality, scenario: Scenario) -> dict[ProductTerm, JointDistribution]:
    """Outcome distribution of each term's variables, measured jointly.

    For a quantum binding this runs the full joint-outcome simulation of
    every term's commuting observables, independently of :func:`evaluate`.
    """
    _check_bound(ineq, scenario)
    b = scenario.binding
    out = {}
    for term in ineq.terms:
        labels = term.ordered(ineq.order)
        if isinstance(b, JointDistribution):
            out[term] = b.marginal(labels)
        elif isinstance(b, ProductBinding):
            out[term] = b.distribution.marginal([b.products[term]])
        else:
            mats = [b.matrix(lab) for lab in labels]
            out[term] = qsim.outcome_distribution(b.state, mats, labels)
    return out


# -- canonical distributions -------------------------------------------------

CANONICAL_NAMES = (
    "fig1a_classical",
    "fig1b_anticorrelated",
    "fig1b_uncorrelated",
    "fig2a_classical",
    "fig2b_ghz_paradox",
    "fig2b_uncorrelated",
    "pm_quantum_products",
    "pm_classical_products",
)

_BIPARTITE = ("A", "A'", "B", "B'")
_BI_CONTEXTS = (("A", "B'"), ("A'", "B'"), ("A'", "B"), ("A", "B"))
_TRIPARTITE = ("A", "A'", "B", "B'", "C", "C'")
_TRI_CONTEXTS = (("A", "B'", "C'"), ("A'", "B", "C'"), ("A'", "B'", "C"), ("A", "B", "C"))


def _signs(k: int):
    return itertools.product((1, -1), repeat=k)


def _product_is(k: int, sign: int):
    return [s for s in _signs(k) if math.prod(s) == sign]


def _fig2a_joint() -> JointDistribution:
    outcomes = []
    for s in _signs(6):
        v = dict(zip(_TRIPARTITE, s))
        if all(math.prod(v[x] for x in ctx) == 1 for ctx in _TRI_CONTEXTS[:3]):
            outcomes.append(s)
    return JointDistribution.uniform_over(_TRIPARTITE, outcomes)


def canonical_contexts(name: str) -> dict[tuple[str, ...], JointDistribution]:
    """Distributions of every jointly measured context of a figure scenario.

    Classical scenarios have a global joint distribution and their contexts
    are its marginals.  The nonclassical ones have none, so each context is
    the maximum-entropy distribution meeting its constraint with uniform
    single-variable marginals.
    """
    if name in ("fig1a_classical", "fig2a_classical", "pm_quantum_products", "pm_classical_products"):
        joint = canonical_distribution(name)
        contexts = {"fig1a_classical": _BI_CONTEXTS, "fig2a_classical": _TRI_CONTEXTS}.get(
            name, (joint.variables,))
        return {ctx: joint.marginal(ctx) for ctx in contexts}
    if name.startswith("fig1b"):
        correlated = JointDistribution.uniform_over(("x", "y"), _product_is(2, 1))
        out = {ctx: correlated.relabel(dict(zip(("x", "y"), ctx))) for ctx in _BI_CONTEXTS[:3]}
        out[_BI_CONTEXTS[3]] = canonical_distribution(name)
        return out
    if name.startswith("fig2b"):
        even = JointDistribution.uniform_over(("x", "y", "z"), _product_is(3, 1))
        out = {ctx: even.relabel(dict(zip(("x", "y", "z"), ctx))) for ctx in _TRI_CONTEXTS[:3]}
        out[_TRI_CONTEXTS[3]] = canonical_distribution(name)
        return out
    raise ValueError(f"unknown canonical distribution {name!r}; choose from {CANONICAL_NAMES}")


def canonical_distribution(name: str) -> JointDistribution:
    """Reference distributions of the bipartite, tripartite and square scenarios.

    Classical names return the full joint distribution over all settings.
    Nonclassical names (``fig1b_*``, ``fig2b_*``) admit no such joint; they
    return the distribution of the context where nonclassicality shows,
    ``(A, B)`` or ``(A, B, C)``.  The ``pm_*`` names are distributions over
    the six triple products ``q1 .. q6``.  See :func:`canonical_contexts`
    for all measured contexts.
    """
    if name == "fig1a_classical":
        return JointDistribution.uniform_over(_BIPARTITE, [(1,) * 4, (-1,) * 4])
    if name == "fig1b_anticorrelated":
        return JointDistribution.uniform_over(("A", "B"), _product_is(2, -1))
    if name == "fig1b_uncorrelated":
        return JointDistribution.uniform(("A", "B"))
    if name == "fig2a_classical":
        return _fig2a_joint()
    if name == "fig2b_ghz_paradox":
        return JointDistribution.uniform_over(("A", "B", "C"), _product_is(3, -1))
    if name == "fig2b_uncorrelated":
        return JointDistribution.uniform(("A", "B", "C"))
    if name == "pm_quantum_products":
        return JointDistribution.point_mass(_PM_PRODUCT_LABELS, (1, 1, 1, 1, 1, -1))
    if name == "pm_classical_products":
        return JointDistribution.point_mass(_PM_PRODUCT_LABELS, (1,) * 6)
    raise ValueError(f"unknown canonical distribution {name!r}; choose from {CANONICAL_NAMES}")


def pm_mixing_violation(lam: float, tolerance: float = 1e-9) -> EvaluationReport:
    """Entropic square inequality on ``lam * quantum + (1 - lam) * classical``.

    The quantum point has ``q6 = -1`` surely, the classical point all
    products +1; at ``lam = 1/2`` ``H(q6) = 1`` while the other five
    product entropies vanish.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    mixed = mix_distributions(canonical_distribution("pm_quantum_products"),
                              canonical_distribution("pm_classical_products"), lam)
    report = evaluate(build_pm_entropic(), pm_product_scenario(mixed, f"pm_mix_{lam:g}"), tolerance)
    return EvaluationReport(report.inequality, report.kind, report.terms, report.lhs, report.rhs,
                            report.violation, tolerance, report.value, report.classical_bound,
                            {**report.metadata, "lambda": lam})
