"""
Tour of the closed sector of a polynomial model
===============================================

Build the quotient algebra of a degree-3 superpotential, look at its
idempotent basis, and compare the two routes to the critical weights.
"""

import numpy as np

from lgcardy import build_closed, verify_frobenius

# ----------------- the running example -----------------
# p(z) = z^3 - 3z, so p'(z) = 3(z^2 - 1) with critical points -1, 1.
closed = build_closed(n=2, a=(-3.0, 0.0))

print("superpotential coefficients:", closed.p.a)
print("critical points:", np.round(closed.roots, 12))
print("critical values p(alpha):", np.round(closed.p.eval(closed.roots), 12))

# The functional is the residue at infinity of q / p'.  Evaluating it on
# the monomial basis gives the moments the whole module is built from.
print("functional on 1, z:", np.round(closed.pair.functional, 12))

# ----------------- idempotents -----------------
# Rows are coefficient vectors in the monomial basis 1, z.
print("\nidempotent basis:")
print(np.round(closed.idempotents, 12))

alg = closed.pair.algebra
e0, e1 = closed.idempotents
print("e0*e0 - e0:", np.max(np.abs(alg.multiply(e0, e0) - e0)))
print("e0*e1:", np.max(np.abs(alg.multiply(e0, e1))))
print("e0 + e1 - 1:", np.max(np.abs(e0 + e1 - alg.unit)))

# ----------------- critical weights, two ways -----------------
# Route one evaluates the functional on the idempotents; route two uses
# the product formula over root differences.  They must agree.
print("\nmu (functional route):", np.round(closed.mu, 12))
print("mu (product route):  ", np.round(closed.mu_product, 12))
print("gap:", np.max(np.abs(closed.mu - closed.mu_product)))

# For this model the weights are -1/6 and +1/6 exactly.
print("against +-1/6:", np.max(np.abs(np.sort(closed.mu.real) - np.array([-1, 1]) / 6.0)))

# ----------------- the axioms, numerically -----------------
report = verify_frobenius(closed.pair, commutative=True)
print("\n" + report.summary())

# A randomly perturbed model still passes; only the residual scale moves.
rng = np.random.default_rng(0)
for trial in range(3):
    a = rng.uniform(-2, 2, 4) + 1j * rng.uniform(-1, 1, 4)
    other = build_closed(n=4, a=tuple(a))
    rep = verify_frobenius(other.pair, commutative=True)
    print("n=4 trial %d: passed=%s worst=%.3e"
          % (trial, rep.passed, max(rep.residuals.values())))
