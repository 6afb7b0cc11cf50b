"""Stress intensity factor of a slightly advanced crack.

The exact value after an advance ``a`` is compared with the first-order
prediction; the error should fall by about 100 per decade of ``a``.
"""

from wfcrack import advance_sif, first_order, params_from_eta, three_point_case

p = params_from_eta(0.5, 0.2, 0.3)
lc = three_point_case(1.0, 1.0, 0.5)
dK, dA = first_order(p, lc)
for a in (1e-2, 1e-3, 1e-4):
    res = advance_sif(p, lc, a)
    pred = res.K0 + a * dK
    print(f"a = {a:.0e}  K*(a) = {res.K_star:.8f}  first order = {pred:.8f}  error = {abs(res.K_star - pred):.2e}")
