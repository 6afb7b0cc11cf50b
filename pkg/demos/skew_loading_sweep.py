"""How much does the skew-symmetric part of a load matter?

Three point forces on the crack faces are split into symmetric and skew parts.
For each bimaterial contrast the script prints the ratio of the skew
contribution to the symmetric one as the inner forces move towards the tip.
"""

import numpy as np

from wfcrack import params_from_eta, sif_quadrature, split_symmetric, three_point_case

for eta in (-0.99, 0.0, 0.5, 0.99):
    p = params_from_eta(eta, 0.2, 0.3)
    print(f"eta = {eta:+.2f}  alpha = {p.alpha:+.4f}  eps = {p.epsilon:+.5f}")
    for b in np.linspace(0.1, 0.9, 5):
        sym, skew = split_symmetric(three_point_case(1.0, 1.0, float(b)))
        ks, ka = sif_quadrature(p, sym).K, sif_quadrature(p, skew).K
        print(f"   b/a = {b:.1f}   K^S = {ks:.5f}   K^A = {ka:.5f}   Re ratio = {ka.real / ks.real:+.4f}")
