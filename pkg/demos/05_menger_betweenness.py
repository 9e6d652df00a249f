"""Betweenness, Menger's exception, and moduli built from generators.

y lies between x and z when d(x,z) = d(x,y) + d(y,z).  Spaces whose
quadruples all carry enough betweenness embed isometrically in the real
line, with exactly one exception: the pseudolinear quadruple, a
four-point "circle" with opposite sides (t, s, t, s) and both diagonals
s + t.  Every 3-point piece of it is linear but the whole is not.

Maps that preserve betweenness have control functions satisfying two
partition equalities; a pair of increasing generators on [0, 1] produces
them all.
"""

import numpy as np

from qsym import (
    PowerModulus,
    betweenness_triples,
    check_l02_conditions,
    collinear_space,
    detect_pseudolinear,
    eta_from_generators,
    line_embed,
    power_generator,
    preserves_betweenness,
    pseudolinear_quadruple,
    snowflake_map,
    transform_map,
)

line = collinear_space([0.0, 1.0, 3.0, 6.0])
print("triples on the line {0, 1, 3, 6}:")
for t in betweenness_triples(line):
    print(f"  {line.labels[t.y]} between {line.labels[t.x]} "
          f"and {line.labels[t.z]}")
print(f"line embedding: {line_embed(line)}")

q = pseudolinear_quadruple(1.0, 2.0)
shape = detect_pseudolinear(q)
print(f"\npseudolinear(1, 2): ordering {shape.ordering}, "
      f"s = {shape.s:g}, t = {shape.t:g}")
print(f"whole quadruple embeds: {line_embed(q) is not None}; "
      "3-point pieces embed: "
      + str(all(line_embed(q.subspace([i for i in range(4) if i != k]))
                is not None for k in range(4))))

# scaling keeps additive equalities; snowflaking strictly bends them
print(f"\nscaling x3 preserves betweenness: "
      f"{preserves_betweenness(transform_map(line, lambda d: 3 * d)).holds}")
rep = preserves_betweenness(snowflake_map(line, 0.5))
v = rep.violations[0]
print(f"sqrt snowflake preserves betweenness: {rep.holds} "
      f"(first broken triple indices ({v[0]}, {v[1]}, {v[2]}), "
      f"image slack {v[4]:.4f})")

# generator moduli satisfy eta(t1) + eta(t2) = 1 and the reciprocal
# partition identity on t1 + t2 = 1; powers of t do not
eta = eta_from_generators(power_generator(3), power_generator(3))
print(f"\ncubic-generator modulus: eta(1/4) = {eta.eval(0.25):.6f} "
      f"(= 19/64), eta(3/4) = {eta.eval(0.75):.6f}, sum = "
      f"{eta.eval(0.25) + eta.eval(0.75):g}")
rep = check_l02_conditions(eta)
print(f"partition equalities hold: {rep.holds} "
      f"(defects {rep.max_sum_defect:.2g} / {rep.max_reciprocal_defect:.2g})")
root = check_l02_conditions(PowerModulus(0.5), samples=[0.5])
t1, t2, direct, recip = root.necessity_violations[0]
print(f"sqrt at t1 = t2 = 1/2: both partition sums equal {direct:.6f} "
      f"(sqrt 2), so no betweenness-preserving map is controlled by it")
