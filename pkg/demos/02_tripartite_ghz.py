"""
Tripartite entropic inequality on the GHZ state
===============================================

Chaining two triangle inequalities bounds the three-party distance
delta(A1,B1,C1) by three others.  Any joint distribution obeys it; the GHZ
state with equatorial measurements breaks it by one full bit.
"""

import math

from infodistance.chains import format_chain, tripartite_chain, verify_chain
from infodistance.inequalities import build_tripartite_entropic, eq8_angles, evaluate, ghz_scenario

chain = tripartite_chain()
print(format_chain(chain))
print("chain accepted:", verify_chain(chain).accepted)

ineq = build_tripartite_entropic()
print(ineq.describe())

# setting 1 at pi/6 and setting 2 at -pi/12 for every party
angles = eq8_angles()
print({k: round(v / math.pi, 4) for k, v in angles.items()}, "(units of pi)")

report = evaluate(ineq, ghz_scenario(ineq, angles))
for tv in report.terms:
    print(f"  {tv.side}  H({tv.label}) = {tv.delta:.3e}   <product> = {tv.expectation:+.6f}")
print(f"violation = {report.violation:.12f}")
