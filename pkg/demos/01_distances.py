"""
Entropic distance between binary observables
============================================

The distance between two +/-1 variables is the entropy of their product.
It vanishes exactly when the two always agree, which is what makes it
useful for chaining correlations.
"""

import numpy as np

from infodistance import JointDistribution, ProductTerm, check_axioms, delta, distance
from infodistance.inequalities import canonical_distribution

# A and B perfectly correlated: distance 0
corr = JointDistribution.uniform_over(["A", "B"], [(1, 1), (-1, -1)])
print("d(A,B) correlated  :", distance(corr, ["A"], ["B"]))

# independent fair coins: distance 1 bit
print("d(A,B) independent :", distance(JointDistribution.uniform(["A", "B"]), ["A"], ["B"]))

# three-way distance on the uncorrelated tripartite box
box = canonical_distribution("fig2b_uncorrelated")
print("delta(A,B,C) uncorrelated:", delta(box, ProductTerm(["A", "B", "C"])))

# the covariance variant is 1 - <product>
anti = JointDistribution.uniform_over(["A", "B"], [(1, -1), (-1, 1)])
print("covariance distance, anticorrelated:", delta(anti, ["A", "B"], "covariance"))

# triangle inequality on a random four-variable distribution
rng = np.random.default_rng(0)
d = JointDistribution(["W", "X", "Y", "Z"], rng.dirichlet(np.ones(16)))
for kind in ("entropic", "covariance"):
    rep = check_axioms(d, kind, trials=500, seed=1)
    print(f"{kind:10s} worst triangle slack {rep.worst_slack:.4f}  passed={rep.passed}")
