"""Near-tip stresses: truncated asymptotic series against the exact field.

The three-term expansion (oscillatory singular term, T-stress, next
oscillatory term) is compared with a numerical inverse Mellin transform of
the full solution at several distances from the tip.
"""

import numpy as np

from wfcrack import field_asymptotics, mellin_inverse, params_from_eta, three_point_case, tip_expansion

p = params_from_eta(0.5, 0.2, 0.3)
lc = three_point_case(1.0, 1.0, 0.5)
exp = tip_expansion(p, lc)
print(f"K = {exp.K:.6f}")
for theta in (0.0, np.pi / 2, np.pi):
    for r in (1e-3, 1e-2, 1e-1):
        exact = mellin_inverse(r, theta, p, lc).stress
        series = field_asymptotics(r, theta, 3, exp, p)[0]
        err = np.max(np.abs(series - exact)) / np.max(np.abs(exact))
        print(f"theta = {theta:.3f}  r = {r:.0e}  sigma_tt = {exact[1, 1]:+.5e}  series rel err = {err:.1e}")
