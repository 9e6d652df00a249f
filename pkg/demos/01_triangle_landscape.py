"""Where the triangle inequality lives, bends, and breaks.

A finite semimetric only has to be symmetric and positive off the
diagonal.  Whether it is a metric, a b-metric, or an ultrametric is a
question about which triangle function the matrix satisfies, and that is
a finite check.  This walkthrough classifies a few familiar spaces and
then watches the minimal b-metric coefficient grow along a family of
squared lines.
"""

import numpy as np

from qsym import (
    Additive,
    MaxGauge,
    ScaledAdditive,
    check_triangle,
    collinear_space,
    euclidean_space,
    minimal_bmetric_K,
    transform_distances,
    ultrametric_space,
    wilson_space,
)


def classify(name, space):
    metric = check_triangle(space, Additive())
    ultra = check_triangle(space, MaxGauge())
    K = minimal_bmetric_K(space)
    print(f"{name:>22}: metric={str(metric.holds):5}  "
          f"ultrametric={str(ultra.holds):5}  minimal K={K:g}")
    return metric


print("-- classification --")
classify("euclidean n=7", euclidean_space(7, 2, seed=1))
classify("ultrametric n=7", ultrametric_space(7, seed=1))
line = collinear_space([0.0, 1.0, 3.0, 6.0])
classify("collinear line", line)
sq = transform_distances(line, lambda d: d * d)
rep = classify("squared line", sq)

# the squared line is the canonical b-metric: the witness triple shows
# exactly which equality broke
print(f"worst triple {rep.worst_labels(sq)}: "
      f"d(x,y) = {rep.lhs:g} vs gauge {rep.rhs:g} (margin {rep.margin:g})")
assert check_triangle(sq, ScaledAdditive(minimal_bmetric_K(sq))).holds

# squaring a metric at most doubles nothing: K stays below 2, and the
# collinear case attains it
print("\n-- squared metrics stay 2-bounded --")
for n in (3, 5, 8):
    base = euclidean_space(n, 2, seed=n)
    print(f"squared euclidean n={n}: minimal K = "
          f"{minimal_bmetric_K(transform_distances(base, lambda d: d * d)):.4f}")

# Wilson's weighted line: insert midpoints with a slight stretch and the
# triangle inequality survives only up to a point
print("\n-- a ladder out of metricity --")
for n in (2, 3, 4, 5):
    w = wilson_space(n)
    print(f"wilson n={n} ({w.n} points): metric="
          f"{check_triangle(w, Additive()).holds}, "
          f"minimal K = {minimal_bmetric_K(w):.4f}")
