"""Triangle-inequality derivations over product terms.

A :class:`TriangleStep` ``(u, v, w)`` stands for ``delta(u) <= delta(v) +
delta(w)``; it is valid for any associative distance exactly when
``u == v ^ w`` as parity sets.  A :class:`DerivationChain` starts from a
target term, repeatedly splits one open term, and ends with the open terms
equal to its leaves.  Acceptance therefore proves ``delta(target) <=
sum(delta(leaf))``.

Solving for leaves is linear algebra over GF(2): terms are bit masks and
``^`` is vector addition.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .distance import ProductTerm, natural_key
from .exceptions import ChainStructureError

__all__ = [
    "TriangleStep",
    "DerivationChain",
    "ChainVerdict",
    "verify_step",
    "verify_chain",
    "xor_sum_check",
    "fold_chain",
    "synthesize_chain",
    "solve_parity",
    "multipartite_labels",
    "multipartite_cyclic_term",
    "generate_eq10_chain",
    "tripartite_chain",
    "pm_chain",
    "format_chain",
    "chain_to_json_dict",
    "chain_from_json_dict",
    "chain_to_json",
]


@dataclass(frozen=True)
class TriangleStep:
    u: ProductTerm
    v: ProductTerm
    w: ProductTerm

    def __post_init__(self):
        for name in ("u", "v", "w"):
            object.__setattr__(self, name, ProductTerm(getattr(self, name)))


@dataclass(frozen=True)
class DerivationChain:
    target: ProductTerm
    steps: tuple[TriangleStep, ...]
    leaves: tuple[ProductTerm, ...]
    order: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "target", ProductTerm(self.target))
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "leaves", tuple(ProductTerm(t) for t in self.leaves))
        if self.order is not None:
            object.__setattr__(self, "order", tuple(self.order))

    def without_leaf(self, index: int) -> "DerivationChain":
        leaves = self.leaves[:index] + self.leaves[index + 1:]
        return DerivationChain(self.target, self.steps, leaves, self.order)


@dataclass(frozen=True)
class ChainVerdict:
    accepted: bool
    failing_step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.accepted


def verify_step(step: TriangleStep) -> bool:
    return step.u == step.v ^ step.w


def verify_chain(chain: DerivationChain) -> ChainVerdict:
    """Check every step and the open-term bookkeeping of ``chain``.

    Raises :class:`ChainStructureError` when a step splits a term that is
    not open at that point.
    """
    if not chain.target:
        raise ChainStructureError("empty target term")
    open_terms = Counter([chain.target])
    for i, step in enumerate(chain.steps):
        if open_terms[step.u] == 0:
            raise ChainStructureError(
                f"step {i} splits {step.u.label()} which is not an open term", index=i)
        if not verify_step(step):
            return ChainVerdict(False, i, f"step {i}: {step.u.label()} != "
                                          f"{step.v.label()} ^ {step.w.label()}")
        open_terms[step.u] -= 1
        open_terms[step.v] += 1
        open_terms[step.w] += 1
    open_terms = +open_terms
    if open_terms != Counter(chain.leaves):
        missing = open_terms - Counter(chain.leaves)
        extra = Counter(chain.leaves) - open_terms
        return ChainVerdict(False, None,
                            "leaf mismatch: unaccounted "
                            + ", ".join(t.label() for t in missing.elements())
                            + "; unexpected " + ", ".join(t.label() for t in extra.elements()))
    return ChainVerdict(True)


def xor_sum_check(target, leaves: Sequence) -> bool:
    """True iff the product of all ``leaves`` equals ``target``."""
    acc = ProductTerm()
    for t in leaves:
        acc = acc ^ ProductTerm(t)
    return acc == ProductTerm(target)


def fold_chain(target, leaves: Sequence, order: Sequence[str] | None = None) -> DerivationChain:
    """Chain peeling ``leaves`` off ``target`` left to right.

    Step ``k`` splits the current remainder into ``leaves[k]`` and the
    new remainder; the last step splits into the final two leaves.
    """
    target = ProductTerm(target)
    leaves = [ProductTerm(t) for t in leaves]
    if not xor_sum_check(target, leaves):
        raise ValueError("leaves do not multiply to the target")
    steps = []
    rest = target
    for leaf in leaves[:-2]:
        steps.append(TriangleStep(rest, leaf, rest ^ leaf))
        rest = rest ^ leaf
    if len(leaves) >= 2:
        steps.append(TriangleStep(rest, leaves[-2], leaves[-1]))
    return DerivationChain(target, steps, leaves, order)


def _bit_index(terms: Sequence[ProductTerm]) -> list[str]:
    labels = set()
    for t in terms:
        labels |= t
    return sorted(labels, key=natural_key)


def solve_parity(target: ProductTerm, allowed: Sequence[ProductTerm]) -> list[int] | None:
    """Select a subset of ``allowed`` whose product is ``target``.

    Returns the selected indices, or ``None`` if no subset works.  Among
    all solutions the one whose selection vector ``(x_0, x_1, ...)`` is
    lexicographically smallest is returned.
    """
    target = ProductTerm(target)
    allowed = [ProductTerm(t) for t in allowed]
    labels = _bit_index([target, *allowed])
    bit = {lab: 1 << i for i, lab in enumerate(labels)}

    def mask(t):
        m = 0
        for lab in t:
            m |= bit[lab]
        return m

    # Row-reduce the augmented system.  Each row pairs a variable-space mask
    # with the selection mask producing it; selection bit k <-> allowed[k].
    k = len(allowed)
    rows = [(mask(t), 1 << (k - 1 - j)) for j, t in enumerate(allowed)]
    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for vec, sel in rows:
        for pbit, (pvec, psel) in pivots.items():
            if vec & pbit:
                vec ^= pvec
                sel ^= psel
        if vec == 0:
            kernel.append(sel)
            continue
        low = vec & -vec
        for pbit in list(pivots):
            pvec, psel = pivots[pbit]
            if pvec & low:
                pivots[pbit] = (pvec ^ vec, psel ^ sel)
        pivots[low] = (vec, sel)
    goal = mask(target)
    sel = 0
    for pbit, (pvec, psel) in pivots.items():
        if goal & pbit:
            goal ^= pvec
            sel ^= psel
    if goal:
        return None
    # Kernel in echelon form on the most significant selection bit; clearing
    # those bits from the particular solution minimizes it lexicographically.
    basis: list[int] = []
    for vec in kernel:
        for b in basis:
            if vec ^ b < vec:
                vec ^= b
        if vec:
            basis.append(vec)
            basis.sort(reverse=True)
    for b in basis:
        top = 1 << (b.bit_length() - 1)
        if sel & top:
            sel ^= b
    return [j for j in range(k) if sel & (1 << (k - 1 - j))]


def synthesize_chain(target, allowed: Sequence, order: Sequence[str] | None = None) -> DerivationChain | None:
    """Find a derivation of ``target`` from a subset of ``allowed`` terms.

    Each allowed term is used at most once.  Terms equal to the target, and
    the empty product, are skipped: neither gives a nontrivial chain.
    Returns ``None`` when no derivation exists.
    """
    target = ProductTerm(target)
    if not target:
        raise ValueError("empty target term")
    if not allowed:
        raise ValueError("allowed term list is empty")
    candidates = [ProductTerm(t) for t in allowed]
    usable = [t for t in candidates if t and t != target]
    chosen = solve_parity(target, usable)
    if chosen is None:
        return None
    return fold_chain(target, [usable[j] for j in chosen], order)


# -- even-N multipartite family -------------------------------------------

def multipartite_labels(n: int) -> list[str]:
    """Variable labels ``M{setting}^({party})`` for ``n`` parties, grouped by party."""
    return [f"M{s}^({p})" for p in range(1, n + 1) for s in (1, 2, 3)]


def _check_even(n: int) -> None:
    if n % 2 or n < 4:
        raise ValueError(f"party count must be even and >= 4, got {n}")


def multipartite_cyclic_term(n: int, j: int) -> ProductTerm:
    """Cyclic term ``j`` (1-based): setting 1 at party ``j``, setting 2 at
    party ``j + 1`` (mod n), setting 3 everywhere else."""
    second = j % n + 1
    labels = []
    for p in range(1, n + 1):
        s = 1 if p == j else 2 if p == second else 3
        labels.append(f"M{s}^({p})")
    return ProductTerm(labels)


def generate_eq10_chain(n: int) -> DerivationChain:
    """Derivation of the all-setting-1 term for even ``n`` parties.

    Steps 1 .. n-1 each peel one cyclic term off the remainder; the last
    step splits the remainder into cyclic term ``n`` and the all-setting-2
    term.  Remainders follow from parity bookkeeping.
    """
    _check_even(n)
    target = ProductTerm(f"M1^({p})" for p in range(1, n + 1))
    all_two = ProductTerm(f"M2^({p})" for p in range(1, n + 1))
    leaves = [multipartite_cyclic_term(n, j) for j in range(1, n + 1)] + [all_two]
    return fold_chain(target, leaves, multipartite_labels(n))


def tripartite_chain() -> DerivationChain:
    """Two-step derivation of the three-party inequality."""
    T = ProductTerm
    target = T(["A1", "B1", "C1"])
    middle = T(["B2", "C2", "B1", "C1"])
    steps = [
        TriangleStep(target, T(["A1", "B2", "C2"]), middle),
        TriangleStep(middle, T(["A2", "B2", "C1"]), T(["A2", "B1", "C2"])),
    ]
    leaves = [T(["A1", "B2", "C2"]), T(["A2", "B2", "C1"]), T(["A2", "B1", "C2"])]
    return DerivationChain(target, steps, leaves, ("A1", "A2", "B1", "B2", "C1", "C2"))


def pm_chain() -> DerivationChain:
    """Four-step derivation bounding ``delta(alpha, beta, gamma)`` by the
    other five square triples, peeled in the order rows 1, 2, column 1,
    column 2, row 3."""
    T = ProductTerm
    s1 = T(["A", "a", "beta", "gamma"])
    s2 = T(["A", "a", "B", "b", "gamma"])
    s3 = T(["C", "a", "b", "gamma"])
    steps = [
        TriangleStep(T(["alpha", "beta", "gamma"]), T(["A", "a", "alpha"]), s1),
        TriangleStep(s1, T(["B", "b", "beta"]), s2),
        TriangleStep(s2, T(["A", "B", "C"]), s3),
        TriangleStep(s3, T(["a", "b", "c"]), T(["C", "c", "gamma"])),
    ]
    leaves = [T(["A", "a", "alpha"]), T(["B", "b", "beta"]), T(["A", "B", "C"]),
              T(["a", "b", "c"]), T(["C", "c", "gamma"])]
    return DerivationChain(T(["alpha", "beta", "gamma"]), steps, leaves,
                           ("A", "a", "alpha", "B", "b", "beta", "C", "c", "gamma"))


# -- presentation and serialization -----------------------------------------

def _delta(term: ProductTerm, order) -> str:
    return "δ(" + ", ".join(term.ordered(order)) + ")"


def format_chain(chain: DerivationChain) -> str:
    """Render the chain as successive inequalities in delta notation.

    Each line replaces the term split by one step with its two parts.
    """
    order = chain.order
    expr = [chain.target]
    lines = []
    for step in chain.steps:
        i = expr.index(step.u)
        expr[i:i + 1] = [step.v, step.w]
        rhs = " + ".join(_delta(t, order) for t in expr)
        lines.append(f"{_delta(chain.target, order)} ≤ {rhs}" if not lines else f"    ≤ {rhs}")
    if not lines:
        lines.append(f"{_delta(chain.target, order)} ≤ {_delta(chain.target, order)}")
    return "\n".join(lines)


def chain_to_json_dict(chain: DerivationChain) -> dict:
    order = chain.order

    def enc(t):
        return t.ordered(order)

    out = {
        "target": enc(chain.target),
        "steps": [{"u": enc(s.u), "v": enc(s.v), "w": enc(s.w)} for s in chain.steps],
        "leaves": [enc(t) for t in chain.leaves],
    }
    if order is not None:
        out["order"] = list(order)
    return out


def chain_from_json_dict(data: Mapping) -> DerivationChain:
    steps = [TriangleStep(ProductTerm(s["u"]), ProductTerm(s["v"]), ProductTerm(s["w"]))
             for s in data["steps"]]
    return DerivationChain(ProductTerm(data["target"]), steps,
                           [ProductTerm(t) for t in data["leaves"]], data.get("order"))


def chain_to_json(chain: DerivationChain) -> str:
    return json.dumps(chain_to_json_dict(chain), ensure_ascii=False)
