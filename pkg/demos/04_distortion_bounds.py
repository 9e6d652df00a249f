"""Two-sided diameter distortion, after Tukia and Vaisala.

For nested subsets A inside B, a quasisymmetric map cannot shrink or
inflate the diameter ratio diam A / diam B arbitrarily: it is pinched
between two expressions in eta.  The classical inequality covers metric
spaces; the generalized version threads the triangle coefficients K1 and
K2 through both sides, and for ultrametrics the halves corollary gives
K1 = K2 = 1/2.
"""

import numpy as np

from qsym import (
    Additive,
    MaxGauge,
    PowerModulus,
    ScaledAdditive,
    SubsetRef,
    bounded_image_bounds,
    LinearModulus,
    euclidean_space,
    identity_map,
    snowflake_map,
    transform_distances,
    transform_map,
    tv_bounds,
    ultrametric_space,
)

space = euclidean_space(8, 2, seed=6)
f = snowflake_map(space, 0.5)
A = SubsetRef(space, (0, 1, 4))
B = SubsetRef(space, (0, 1, 2, 4, 5, 7))

rep = tv_bounds(f, PowerModulus(0.5), A, B, Additive(), Additive())
print("metric snowflake, A (3 pts) inside B (6 pts):")
print(f"  upper: {rep.upper_lhs:.6f} <= {rep.upper_rhs:.6f} "
      f"(slack {rep.upper_slack:.3g})")
print(f"  lower: {rep.lower_lhs:.6f} <= {rep.lower_rhs:.6f} "
      f"(slack {rep.lower_slack:.3g})")
c = rep.classical
print(f"  classical chain: {c.lower:.6f} <= {c.ratio:.6f} <= {c.upper:.6f} "
      f"(K1 = {c.K1:g}, K2 = {c.K2:g})")

# b-metric version: squared distances force K = 2 gauges on both sides
dom = transform_distances(space, lambda d: d * d)
g = snowflake_map(dom, 0.7)
rep = tv_bounds(g, PowerModulus(0.7), SubsetRef(dom, (0, 2, 5)),
                SubsetRef(dom, (0, 1, 2, 4, 5, 7)),
                ScaledAdditive(2.0), ScaledAdditive(2.0))
print(f"\nsquared-metric instance: holds={rep.holds} "
      f"(upper slack {rep.upper_slack:.3g}, lower slack {rep.lower_slack:.3g})")

# ultrametric corollary: max gauges carry coefficient 1/2 on both ends
u = ultrametric_space(8, seed=6)
rep = tv_bounds(identity_map(u), PowerModulus(1.0), SubsetRef(u, (0, 1, 2)),
                SubsetRef(u, tuple(range(8))), MaxGauge(), MaxGauge())
c = rep.classical
print(f"ultrametric identity: K1 = {c.K1:g}, K2 = {c.K2:g}, "
      f"{c.lower:.6f} <= {c.ratio:.6f} <= {c.upper:.6f}")

# when eta is linear the pair bounds collapse to a bi-Lipschitz estimate
h = transform_map(space, lambda d: 3.0 * d)
rep = bounded_image_bounds(h, LinearModulus(1.0), Additive(), Additive())
print(f"\nscaling by 3 under a linear modulus: derived L = {rep.derived_L:g}, "
      f"minimal L = {rep.minimal_L:g}")
