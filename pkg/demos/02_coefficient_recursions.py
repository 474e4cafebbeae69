"""
Coefficient recursions
======================

The tail coefficients come from the inverse Schroder function ``G`` and
``H = Psi(G)``.  Here the recursions are compared with closed forms for the
first terms and with two slower routes: series reversion of ``G``, and the
normalized probabilities ``P(X_t = n)`` of the process itself.
"""
import numpy as np

from gwimm import series_alg
from gwimm.pgf import imm_pgf_coeffs, quadratic_model

model = quadratic_model(0.3, 0.5)
p1, q0 = model.p1, model.q0
p2, q1 = 1 - p1, 1 - q0

g = series_alg.phi_inv_coeffs(model, 10)
h = series_alg.psi_of_phi_inv_coeffs(model, g, 10)
a = series_alg.a_coeffs(model, 10)

print(" n          g_n            h_n            A_n")
for n in range(8):
    print(f"{n:2d} {g[n]:14.6f} {h[n]:14.6f} {a[n]:14.6f}")

# closed forms of the first nontrivial terms
g2 = -p2 / (p1 * (1 - p1))
h1 = q1 / (q0 * (1 - p1))
print(f"\ng_2 = {g[2]:.12f}   closed form {g2:.12f}")
print(f"h_1 = {h[1]:.12f}   closed form {h1:.12f}")
print(f"A_1 = {a[1]:.12f}   closed form {g2 - h1:.12f}")

# Phi by reversion of G against the direct recursion Phi(P) = p1 Phi
phi_rev = series_alg.phi_taylor_by_reversion(model, 8).coeffs
phi_dir = series_alg.phi_coeffs(model, 8).coeffs
print(f"\nreversion vs direct Schroder recursion: {np.max(np.abs(phi_rev - phi_dir)):.1e}")

# (p1 q0)^-t P(X_t = n) settles on the coefficients of Phi * Psi
lim = series_alg.phi_psi_product_coeffs(model, 6).coeffs
for t in (10, 20, 30):
    ratios = imm_pgf_coeffs(model, t, 6) / (p1 * q0) ** t
    print(f"t={t:2d}: max |ratio - limit| = {np.max(np.abs(ratios - lim)):.2e}")
