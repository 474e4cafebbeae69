"""
Periodic modulations and the sector probe
=========================================

``K`` and ``L`` are one-periodic and almost constant.  Their wobble is what
the ``m != 0`` Fourier modes carry, and those modes fall off so fast that
the table has to be computed in extended precision.  The last part probes
how wide a sector at 1 stays inside the filled Julia set of ``P``.
"""
import math

import numpy as np

from gwimm import periodic
from gwimm.limits import DEFAULT_CONFIG
from gwimm.pgf import REFERENCE_PARAMS, quadratic_model

model = quadratic_model(0.3, 0.5)

xs = np.linspace(0, 1, 9)
k, l = periodic.kl_eval(model, DEFAULT_CONFIG, xs)
print("   x        K(x)               L(x)")
for x, kv, lv in zip(xs, k, l):
    print(f"{x:5.3f}  {kv:.15f}  {lv:.15f}")
print(f"relative wobble: K {np.ptp(k) / k.mean():.1e}, L {np.ptp(l) / l.mean():.1e}")

table = periodic.fourier_table(model, n_max=4, m_max=6)
print(f"\nFourier table computed with {table.dps} digits")
print("|theta_0m| for m = 0..6:")
print("  " + "  ".join(f"{abs(table.coeff(0, m)):.2e}" for m in range(7)))
print(f"bound on the ratio between modes: {math.exp(-math.pi ** 2 / model.log_e):.2e}")

print("\nlower bound on the critical angle (needs to exceed pi = 3.1416)")
for p1, q0 in REFERENCE_PARAMS:
    rep = periodic.julia_sector_probe(quadratic_model(p1, q0))
    print(f"  p1={p1}: {rep.theta_star_lower:.2f} rad, ok={rep.hypothesis_pi_ok}")
