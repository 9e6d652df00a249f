"""How triangle structure survives a quasisymmetric map.

If the domain satisfies a triangle function Phi1 and f is
eta-quasisymmetric, the image satisfies Phi2 as soon as the implication

    1 <= Phi1(1/t1, 1/t2)   ==>   1 <= Phi2(1/eta(t1), 1/eta(t2))

holds for all positive t1, t2.  The check below probes the implication
on a log grid, derives the smallest admissible image coefficient for
additive gauges, and finally verifies the whole pipeline on concrete
maps.
"""

import numpy as np

from qsym import (
    Additive,
    MaxGauge,
    PowerModulus,
    ScaledAdditive,
    check_transfer_condition,
    euclidean_space,
    minimal_transfer_K2,
    snowflake_map,
    verify_transfer_end_to_end,
)

# squaring the metric (eta(t) = t^2) does not keep the plain triangle
# inequality, but K = 2 absorbs it, with the tight pair sitting at (2, 2)
bad = check_transfer_condition(Additive(), Additive(), PowerModulus(2.0))
good = check_transfer_condition(Additive(), ScaledAdditive(2.0), PowerModulus(2.0))
print(f"additive -> additive with t^2: holds={bad.holds}, "
      f"violating pair t1={bad.worst[0]:g}, t2={bad.worst[1]:g}")
print(f"additive -> 2(u+v) with t^2:  holds={good.holds}, "
      f"tight pair t1={good.worst[0]:g}, t2={good.worst[1]:g}")

# the minimal image coefficient as a function of the power: below 1 the
# map is concave and nothing inflates; above 1 it follows 2^(alpha-1)
print("\n alpha   minimal K2   2^(alpha-1)")
for alpha in (0.5, 1.0, 1.5, 2.0, 3.0):
    K2 = minimal_transfer_K2(1.0, PowerModulus(alpha))
    print(f"  {alpha:4.2f}   {K2:10.6f}   {max(1.0, 2.0 ** (alpha - 1)):10.6f}")

# end to end on an actual map: domain triangle check, quasisymmetry
# check, realized transfer, image triangle check, and the consistency of
# the lot
space = euclidean_space(7, 2, seed=2)
f = snowflake_map(space, 0.5)
rep = verify_transfer_end_to_end(f, Additive(), ScaledAdditive(2.0),
                                 PowerModulus(0.5))
print(f"\nsnowflake pipeline: holds={rep.holds}, consistent={rep.consistent}")
print(f"  domain margin {rep.domain_triangle.margin:.3g}, "
      f"image margin {rep.image_triangle.margin:.3g}, "
      f"{rep.transfer.checked_pairs} realized pairs checked")

# ultrametrics transfer through max with any eta fixing 1
u = check_transfer_condition(MaxGauge(), MaxGauge(), PowerModulus(3.0))
print(f"max -> max with t^3: holds={u.holds} "
      f"(any modulus with eta(1) = 1 works)")
