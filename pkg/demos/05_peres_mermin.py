"""
Peres-Mermin square and the mixing trick
========================================

Quantum mechanics fixes the six triple products to (+,+,+,+,+,-) on every
state, which no value assignment can reproduce.  That point alone does not
break the entropic inequality (every product is deterministic), but mixing
it half and half with the classical all-plus point does.
"""

import numpy as np

from infodistance.chains import format_chain, synthesize_chain
from infodistance.distance import ProductTerm
from infodistance.inequalities import (
    PM_OBSERVABLES,
    PM_TRIPLES,
    build_cabello_correlation,
    evaluate,
    pm_mixing_violation,
    pm_square_scenario,
)
from infodistance.qsim import product_operator, random_density_matrix

for triple in PM_TRIPLES:
    _, sign = product_operator([PM_OBSERVABLES[lab].matrix() for lab in triple])
    print(f"{'·'.join(triple):18s} = {sign:+d} I")

# the derivation, found by parity search over the six triples
chain = synthesize_chain(ProductTerm(PM_TRIPLES[5]), [ProductTerm(t) for t in PM_TRIPLES],
                         ["A", "a", "alpha", "B", "b", "beta", "C", "c", "gamma"])
print(format_chain(chain))

rng = np.random.default_rng(0)
cab = build_cabello_correlation()
values = [evaluate(cab, pm_square_scenario(random_density_matrix(2, rng))).value for _ in range(5)]
print("correlator sum on random states:", np.round(values, 12), "classical bound", cab.classical_bound)

print(" lambda    lhs      violation")
for lam in np.linspace(0, 1, 11):
    rep = pm_mixing_violation(float(lam))
    print(f"  {lam:.1f}   {rep.lhs:.4f}   {rep.violation:+.4f}")
