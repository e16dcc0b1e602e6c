"""
Why not Shannon E_max
=====================

Replacing complexity by Shannon entropy in the maximal-conditional
information distance gives a quantity blind to the sign of correlations:
the classical transitive box and the anticorrelated box look identical.
The product distance tells them apart.
"""

from infodistance import ProductTerm, delta, emax_shannon, shannon_entropy
from infodistance.inequalities import canonical_contexts, canonical_distribution

classical = canonical_contexts("fig1a_classical")
anti = canonical_contexts("fig1b_anticorrelated")
print(" context    E_max cl/anti    H cl/anti    delta cl/anti")
for ctx in classical:
    a, b = classical[ctx], anti[ctx]
    term = ProductTerm(ctx)
    print(f" {','.join(ctx):8s}   {emax_shannon(a):.2f} / {emax_shannon(b):.2f}"
          f"      {shannon_entropy(a):.2f} / {shannon_entropy(b):.2f}"
          f"      {delta(a, term):.2f} / {delta(b, term):.2f}")

# the anticorrelated pair has distance 0 but product -1: delta plus the chain
# d(A,B) <= d(A,B') + d(B',A') + d(A',B) = 0 forces A=B, contradicting A=-B
abc = ProductTerm(["A", "B", "C"])
print("delta(A,B,C) classical tripartite box:", delta(canonical_distribution("fig2a_classical"), abc))
print("delta(A,B,C) uncorrelated box        :", delta(canonical_distribution("fig2b_uncorrelated"), abc))
