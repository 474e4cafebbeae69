"""
The limit density, three ways
=============================

Fourier inversion gives the reference curve.  The left-tail series and its
quick approximation are checked against it for the three quadratic models
used throughout, and the curves are written side by side as CSV.
"""
from pathlib import Path

import numpy as np

from gwimm import inversion, tail_series
from gwimm.pgf import REFERENCE_PARAMS, quadratic_model

out_dir = Path(__file__).with_name("output")
out_dir.mkdir(exist_ok=True)

xs = np.linspace(0.05, 4.0, 400)

for p1, q0 in REFERENCE_PARAMS:
    model = quadratic_model(p1, q0)
    print(model.describe())

    # reference: trapezoid inversion of Pi_imm along the imaginary axis
    ref = inversion.density_fourier_profile(model, "paper", inversion.default_grid())
    on_xs = np.interp(xs, ref.xs, ref.ps)
    print(f"  area {ref.area():.9f}   mean {inversion.moment(ref, 1):.9f} "
          f"(exact {model.mean_limit:.9f})")

    # the left-tail series: coefficients A_n and the Fourier table of K^{n+1} L
    a, table = tail_series.prepare(model)
    full, last = tail_series.density_series(model, a, table, xs, n_terms=17)
    quick = tail_series.density_quick(model, a, table, xs, m_terms=10)

    band = (xs >= 0.2) & (xs <= 2.5)
    scale = on_xs.max()
    print(f"  on [0.2, 2.5]: series off by {np.abs(full - on_xs)[band].max() / scale:.1e}, "
          f"quick off by {np.abs(quick - on_xs)[band].max() / scale:.1e} of the maximum")

    # both expansions are in powers of x; the series stops being useful at large x
    for x in (1.0, 2.5, 4.0):
        i = np.argmin(np.abs(xs - x))
        print(f"  x={xs[i]:.2f}: fourier {on_xs[i]:.6f}  series {full[i]:.6f}  "
              f"quick {quick[i]:.6f}  last term {last[i]:.1e}")

    path = out_dir / f"density_p1_{p1}_q0_{q0}.csv"
    np.savetxt(path, np.column_stack([xs, on_xs, full, quick]), delimiter=",",
               header="x,fourier,series,quick", comments="", fmt="%.12g")
    print(f"  wrote {path}\n")
