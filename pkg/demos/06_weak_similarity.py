"""Weak similarity: keeping the order of distances, and nothing else.

A bijection that preserves the rank of every distance (a weak
similarity) looks like an isometry to anyone who can only compare
distances, never measure them.  On finite spaces finding one is an
edge-colored graph isomorphism problem, solved here by backtracking and
cross-checked against the factorial oracle.

Quasisymmetry sits strictly inside: every quasisymmetric map is weakly
similar, but the exponential stretch of a long arithmetic line is
weakly similar while its envelope outruns every fixed modulus.
"""

import numpy as np

from qsym import (
    BiLipschitzModulus,
    PowerModulus,
    brute_force_weak_similarity,
    check_involution_identity,
    check_monotone_implications,
    check_qs,
    collinear_space,
    empirical_modulus,
    find_weak_similarity,
    qs_from_weaksim,
    random_semimetric_space,
    transform_distances,
    transform_map,
    verify_weak_similarity,
)
from qsym.spaces import build_space

X = random_semimetric_space(7, seed=9)
perm = np.random.default_rng(9).permutation(7)
D = np.asarray(X.dist)[np.ix_(perm, perm)] ** 1.5
Y = build_space(tuple(f"y{i}" for i in range(7)), D)

ws = find_weak_similarity(X, Y)
oracle = brute_force_weak_similarity(X, Y)
print("scrambled and rescaled 7-point space:")
print(f"  search found {dict(zip(X.labels, (Y.labels[i] for i in ws.f.assignment)))}")
print(f"  verified: {verify_weak_similarity(ws)}; "
      f"oracle agrees it exists: {oracle is not None}")
print(f"  spectrum map sample: {ws.phi.pairs()[1:3]}")

# a submultiplicative continuation of the spectrum map upgrades a weak
# similarity to honest quasisymmetry
line = collinear_space([0.0, 1.0, 3.0, 6.0])
Y3 = transform_distances(line, lambda d: 3.0 * d)
eta = qs_from_weaksim(find_weak_similarity(line, Y3), lambda t: 3.0 * t)
print(f"\nscaling x3 continued off the spectrum: eta(2) = {eta.eval(2.0):g}, "
      f"verifies the map: {check_qs(transform_map(line, lambda d: 3 * d), eta).holds}")

# the implication chain: verified modulus + involution identity =>
# order and equality of distances are both preserved
f = transform_map(line, lambda d: d**0.5)
print(f"snowflake chain: qs={check_qs(f, PowerModulus(0.5)).holds}, "
      f"involution={check_involution_identity(PowerModulus(0.5)).holds}, "
      f"monotone implications={check_monotone_implications(f).holds}")
print(f"(bi-Lipschitz moduli fail the involution identity: defect "
      f"{check_involution_identity(BiLipschitzModulus(2.0)).max_defect:g})")

# the separating example: exp on {0, ..., 6}
Xl = collinear_space([float(v) for v in range(7)])
Yl = transform_distances(Xl, np.expm1)
g = transform_map(Xl, np.expm1)
env = empirical_modulus(g)
print(f"\nexp on the line 0..6: weakly similar = "
      f"{find_weak_similarity(Xl, Yl) is not None}")
print(f"but H(2) = {float(env.eval(2.0)):.4f} (= e^3 + 1), and stretching the "
      "line stretches H(2) past any bound, so no single modulus survives")
for m in (9, 12):
    Z = collinear_space([float(v) for v in range(m + 1)])
    h = empirical_modulus(transform_map(Z, np.expm1))
    print(f"  line 0..{m}: H(2) = {float(h.eval(2.0)):.1f}")
