"""
The even-N family
=================

For N parties with three settings each, the all-setting-1 distance is
bounded by N cyclic terms and the all-setting-2 term.  The derivation is
generated mechanically and the standard angles give violation 1 for every
even N.
"""

import numpy as np

from infodistance.chains import format_chain, generate_eq10_chain, verify_chain
from infodistance.inequalities import build_multipartite_entropic, evaluate, ghz_scenario, standard_multipartite_angles
from infodistance.optimize import objective

print(format_chain(generate_eq10_chain(4)))
print()

for n in (4, 6, 8, 10):
    ineq = build_multipartite_entropic(n)
    angles = standard_multipartite_angles(n)
    dense = evaluate(ineq, ghz_scenario(ineq, angles)).violation
    closed = objective(ineq, angles, n)
    ok = verify_chain(generate_eq10_chain(n)).accepted
    print(f"N={n:2d}  terms={len(ineq.rhs_terms):2d}  chain ok={ok}  "
          f"closed form {closed:.12f}  dense {dense:.12f}  |diff| {abs(closed - dense):.1e}")

# how quickly the violation decays when the setting-3 angle is detuned
ineq = build_multipartite_entropic(6)
base = standard_multipartite_angles(6)
for eps in np.linspace(0, 0.2, 5):
    cfg = {k: v + (eps if k[1] == 3 else 0.0) for k, v in base.items()}
    print(f"detune {eps:.2f} rad -> violation {objective(ineq, cfg):+.4f}")
