"""The empirical envelope, and why snowflakes are the clean case.

For a bijection f between finite spaces, every triple (x, a, b) realizes
a ratio t = d(x,a)/d(x,b) upstairs and an image ratio downstairs.  The
cumulative maximum H of image ratios over t is the tightest control
function the data admits: f is eta-quasisymmetric exactly when
eta >= H at every realized t.

For the snowflake d -> d^alpha the envelope collapses onto the single
power curve t^alpha, so verification and fitting are exact.
"""

import numpy as np

from qsym import (
    PowerModulus,
    check_qs,
    empirical_modulus,
    euclidean_space,
    fit_snowflake,
    minimal_bilipschitz_L,
    snowflake_map,
    transform_map,
)

space = euclidean_space(6, 2, seed=4)
f = snowflake_map(space, 0.5)
env = empirical_modulus(f)

print(f"{len(env)} envelope knots on a {space.n}-point space")
print("      t            H(t)        t^0.5")
for t, h in list(zip(env.ts, env.hs))[::6]:
    print(f"  {t:10.6f}  {h:10.6f}  {t**0.5:10.6f}")
print(f"max |H(t) - sqrt(t)| = {np.max(np.abs(env.hs - env.ts**0.5)):.3g}")

# the verdict is sharp: the true exponent passes, anything smaller fails
for alpha in (0.5, 0.45):
    rep = check_qs(f, PowerModulus(alpha))
    word = "verifies" if rep.holds else "fails"
    print(f"Power({alpha}) {word}", end="")
    if not rep.holds:
        print(f": witness {rep.witness_labels} at t = {rep.t:.4f}, "
              f"ratio {rep.image_ratio:.4f} > eta(t) = {rep.eta_at_t:.4f}", end="")
    print()

# recovering the transform from the distances alone
fit = fit_snowflake(f)
print(f"fitted: rho = {fit.scale:g} * d^{fit.exponent:g}")

# snowflaking is not bi-Lipschitz on a spread-out space; a similarity is
g = transform_map(space, lambda d: 3.0 * d)
print(f"minimal bi-Lipschitz L: snowflake {minimal_bilipschitz_L(f):.4f}, "
      f"scaling x3 {minimal_bilipschitz_L(g):.4f}")
print(f"scaling fit: rho = {fit_snowflake(g).scale:g} * "
      f"d^{fit_snowflake(g).exponent:g} "
      f"(similarity = {fit_snowflake(g).similarity})")
