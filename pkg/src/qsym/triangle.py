"""Triangle functions and the checks built on them.

A triangle function Phi(u, v) generalizes the role the sum plays in the
triangle inequality: a space satisfies Phi when

    d(x, y) <= Phi(d(x, z), d(y, z))   for all points x != y and every z.

``Additive`` gives metrics, ``ScaledAdditive(K)`` gives b-metrics with
coefficient K, ``MaxGauge`` gives ultrametrics, and ``CustomGauge`` wraps a
user function after probing it for symmetry and monotonicity on a fixed
grid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import GaugeInvalid, NoBracket, NotInvertible
from .spaces import DEFAULT_TOL, SemimetricSpace

#: probe grid used to validate custom gauges (both axes)
GAUGE_PROBE_AXIS = np.geomspace(1e-6, 1e6, 64)

#: probe grid used to test diagonal invertibility
DIAG_PROBE_AXIS = np.geomspace(1e-6, 1e6, 64)

#: residual tolerance for numeric diagonal inversion
INVERT_RESIDUAL_TOL = 1e-12

#: quadruple count beyond which the Ptolemy checker samples
PTOLEMY_EXHAUSTIVE_LIMIT = 64


class TriangleFunction:
    """Base class; subclasses implement ``__call__`` on scalars or arrays."""

    name = "abstract"
    continuous = True  # capability flag, per variant

    def __call__(self, u, v):
        raise NotImplementedError

    def diag(self, t):
        """The one-variable gauge phi(t) = Phi(t, t)."""
        return self(t, t)

    def diag_inverse(self, y: float) -> float:
        """Solve phi(t) = y for t >= 0.  Closed form where available."""
        raise NotImplementedError

    @property
    def classical_coefficient(self) -> Optional[float]:
        """The K for which the classical two-sided distortion bound applies
        (K for scaled-additive gauges, 1/2 for the max gauge, None else)."""
        return None

    def describe(self) -> str:
        return self.name


class Additive(TriangleFunction):
    """Phi(u, v) = u + v: the ordinary triangle inequality."""

    name = "additive"

    def __call__(self, u, v):
        return np.asarray(u) + np.asarray(v)

    def diag_inverse(self, y):
        return y / 2.0

    @property
    def classical_coefficient(self):
        return 1.0


class ScaledAdditive(TriangleFunction):
    """Phi(u, v) = K (u + v) with K >= 1: the b-metric inequality."""

    def __init__(self, K: float):
        K = float(K)
        if K < 1.0:
            raise ValueError(f"b-metric coefficient must be >= 1, got {K}")
        self.K = K
        self.name = f"bmetric:{K:g}"

    def __call__(self, u, v):
        return self.K * (np.asarray(u) + np.asarray(v))

    def diag_inverse(self, y):
        return y / (2.0 * self.K)

    @property
    def classical_coefficient(self):
        return self.K


class MaxGauge(TriangleFunction):
    """Phi(u, v) = max(u, v): the ultrametric inequality."""

    name = "max"

    def __call__(self, u, v):
        return np.maximum(u, v)

    def diag_inverse(self, y):
        return float(y)

    @property
    def classical_coefficient(self):
        # max(u, v) <= u + v <= 2 max(u, v), so the classical bound holds
        # with the halved coefficient.
        return 0.5

    def describe(self):
        return "max"


class CustomGauge(TriangleFunction):
    """A user-supplied gauge, validated on a fixed 64x64 log-spaced grid.

    The function must vanish at (0, 0), be symmetric, and be monotone
    (non-strictly) in each variable on the grid; violations raise
    :class:`GaugeInvalid`.  Pass ``vectorized=True`` if the callable
    already accepts numpy arrays.
    """

    def __init__(self, fn: Callable, name: str = "custom", continuous: bool = True,
                 vectorized: bool = False):
        self._fn = fn if vectorized else np.vectorize(fn, otypes=[float])
        self.name = name
        self.continuous = continuous
        self._validate()

    def __call__(self, u, v):
        return np.asarray(self._fn(u, v), dtype=float)

    def _validate(self):
        z = float(self._fn(0.0, 0.0))
        if abs(z) > 1e-12:
            raise GaugeInvalid(f"{self.name}: Phi(0,0) = {z:.3g}, expected 0")
        g = GAUGE_PROBE_AXIS
        vals = self(g[:, None], g[None, :])
        if not np.all(np.isfinite(vals)):
            raise GaugeInvalid(f"{self.name}: non-finite value on the probe grid")
        scale = np.maximum(1.0, np.abs(vals))
        asym = np.abs(vals - vals.T)
        if np.any(asym > 1e-9 * np.maximum(scale, scale.T)):
            i, j = np.unravel_index(np.argmax(asym), asym.shape)
            raise GaugeInvalid(
                f"{self.name}: not symmetric at ({g[i]:.3g}, {g[j]:.3g})"
            )
        slack = 1e-12 * scale
        if np.any(np.diff(vals, axis=0) < -slack[1:, :]) or np.any(
            np.diff(vals, axis=1) < -slack[:, 1:]
        ):
            raise GaugeInvalid(f"{self.name}: not monotone on the probe grid")

    def diag_inverse(self, y):
        return _bisect_diag(self, y)


def _bisect_diag(phi: TriangleFunction, y: float) -> float:
    """Invert phi.diag by bracket doubling plus bisection on the residual."""
    y = float(y)
    if y < 0:
        raise NotInvertible(f"cannot invert {phi.name} diagonal at negative value {y}")
    if y == 0.0:
        return 0.0
    probe = np.asarray(phi.diag(DIAG_PROBE_AXIS), dtype=float)
    if np.any(np.diff(probe) <= 0):
        raise NotInvertible(
            f"{phi.name}: diagonal gauge is not strictly increasing on the probe grid"
        )
    hi = 1.0
    doublings = 0
    while float(phi.diag(hi)) < y:
        hi *= 2.0
        doublings += 1
        if doublings > 64:
            raise NoBracket(
                f"{phi.name}: diag never reaches {y:.6g} (bracket grew past 2^64)"
            )
    lo = 0.0
    tol = INVERT_RESIDUAL_TOL * max(1.0, y)
    mid = hi
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        val = float(phi.diag(mid))
        if abs(val - y) <= tol:
            return mid
        if val < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-17 * max(1.0, mid):
            break
    val = float(phi.diag(mid))
    if abs(val - y) <= tol:
        return mid
    raise NotInvertible(
        f"{phi.name}: bisection stalled at residual {abs(val - y):.3g} inverting {y:.6g}"
    )


def invert_diag(phi: TriangleFunction, y: float) -> float:
    """Inverse of the diagonal gauge t -> Phi(t, t) at y >= 0.

    Closed forms for the built-in variants; bisection with bracket doubling
    otherwise, to residual ``1e-12 * max(1, y)``.
    """
    return float(phi.diag_inverse(y))


@dataclass(frozen=True)
class TriangleReport:
    """Outcome of a generalized triangle check.

    ``worst_triple`` is (x, z, y): the inequality read d(x,y) <= Phi(d(x,z),
    d(y,z)), so the middle entry is the via-point.  ``margin`` = rhs - lhs
    at that triple; the check holds iff margin >= -tol there.
    """

    holds: bool
    worst_triple: Optional[tuple]
    lhs: float
    rhs: float
    margin: float
    gauge: str
    tol: float

    def worst_labels(self, space: SemimetricSpace):
        if self.worst_triple is None:
            return None
        return tuple(space.labels[i] for i in self.worst_triple)

    def to_dict(self):
        return {
            "holds": bool(self.holds),
            "worst_triple": None if self.worst_triple is None else list(self.worst_triple),
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "margin": float(self.margin),
            "gauge": self.gauge,
            "tol": float(self.tol),
        }


def check_triangle(
    space: SemimetricSpace, phi: TriangleFunction, tol: float = DEFAULT_TOL
) -> TriangleReport:
    """Check d(x, y) <= Phi(d(x, z), d(y, z)) over all triples.

    x and y range over distinct pairs; z ranges over *all* points,
    including x and y themselves.  The report carries the minimum-margin
    triple.
    """
    n = space.n
    d = space.dist
    if n < 2:
        return TriangleReport(True, None, 0.0, 0.0, np.inf, phi.describe(), tol)

    best = np.inf
    best_triple = None
    for x in range(n):
        # rhs[y, z] = Phi(d(x, z), d(y, z)); lhs[y] = d(x, y)
        rhs = np.asarray(phi(d[x, :][None, :], d), dtype=float)
        margin = rhs - d[x, :][:, None]
        margin[x, :] = np.inf  # exclude y == x
        k = int(np.argmin(margin))
        y, z = divmod(k, n)
        if margin[y, z] < best:
            best = float(margin[y, z])
            best_triple = (x, z, y)

    x, z, y = best_triple
    lhs = float(d[x, y])
    rhs = float(np.asarray(phi(d[x, z], d[y, z])))
    return TriangleReport(best >= -tol, best_triple, lhs, rhs, best, phi.describe(), tol)


def minimal_bmetric_K(space: SemimetricSpace) -> float:
    """The smallest K with d(x, y) <= K (d(x, z) + d(z, y)) throughout.

    Computed as the maximum of d(x, y) / (d(x, z) + d(z, y)) over pairs
    x != y and every z (z = x or z = y contributes exactly 1, so the
    result is always >= 1 when n >= 3).  Returns 0 for n < 3 by
    convention.  The space is a metric iff the value is <= 1.
    """
    n = space.n
    if n < 3:
        return 0.0
    d = space.dist
    best = 0.0
    for x in range(n):
        denom = d[x, :][None, :] + d.T  # denom[y, z] = d(x, z) + d(z, y)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = d[x, :][:, None] / denom
        ratio[x, :] = 0.0
        np.nan_to_num(ratio, copy=False, nan=0.0, posinf=0.0)
        m = float(np.max(ratio))
        if m > best:
            best = m
    return best


@dataclass(frozen=True)
class PtolemyReport:
    """Outcome of the four-point (Ptolemy) check.

    ``worst_quadruple`` is ordered (x, y, z, t) so that the inequality read

        d(x, z) d(t, y) <= d(x, y) d(t, z) + d(x, t) d(y, z).

    ``mode`` is "exhaustive" or "sampled"; sampling kicks in above
    ``PTOLEMY_EXHAUSTIVE_LIMIT`` points.
    """

    holds: bool
    worst_quadruple: Optional[tuple]
    lhs: float
    rhs: float
    margin: float
    mode: str
    checked: int
    tol: float

    def worst_labels(self, space: SemimetricSpace):
        if self.worst_quadruple is None:
            return None
        return tuple(space.labels[i] for i in self.worst_quadruple)

    def to_dict(self):
        return {
            "holds": bool(self.holds),
            "worst_quadruple": None
            if self.worst_quadruple is None
            else list(self.worst_quadruple),
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "margin": float(self.margin),
            "mode": self.mode,
            "checked": int(self.checked),
            "tol": float(self.tol),
        }


def _ptolemy_margins(d, i, j, k, l):
    """Margins of the three pairings for 4-subsets given as index arrays."""
    ab = d[i, j] * d[k, l]
    ce = d[i, k] * d[j, l]
    fg = d[i, l] * d[j, k]
    m1 = ce + fg - ab
    m2 = ab + fg - ce
    m3 = ab + ce - fg
    return ab, ce, fg, np.stack([m1, m2, m3], axis=1)


def is_ptolemaic(
    space: SemimetricSpace,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    samples: int = 1_000_000,
) -> PtolemyReport:
    """Check every 4-subset against all three product pairings.

    Holds iff each product of "diagonal" distances is at most the sum of
    the other two products, within ``tol * max(1, lhs)``.  Vacuously true
    for n < 4.
    """
    n = space.n
    d = space.dist
    if n < 4:
        return PtolemyReport(True, None, 0.0, 0.0, np.inf, "exhaustive", 0, tol)

    if n <= PTOLEMY_EXHAUSTIVE_LIMIT:
        quads = np.array(list(itertools.combinations(range(n), 4)), dtype=int)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        parts = []
        need = samples
        while need > 0:
            draw = rng.integers(0, n, size=(int(need * 1.3) + 16, 4))
            draw.sort(axis=1)
            ok = np.all(np.diff(draw, axis=1) > 0, axis=1)
            parts.append(draw[ok][:need])
            need -= len(parts[-1])
        quads = np.concatenate(parts)
        mode = "sampled"

    i, j, k, l = quads.T
    ab, ce, fg, margins = _ptolemy_margins(d, i, j, k, l)
    lhs_products = np.stack([ab, ce, fg], axis=1)
    rel = margins / np.maximum(1.0, lhs_products)
    flat = int(np.argmin(rel))
    q, pairing = divmod(flat, 3)
    ii, jj, kk, ll = quads[q]
    # arrange the worst quadruple as (x, y, z, t) with lhs = d(x,z) d(t,y)
    if pairing == 0:
        worst = (ii, ll, jj, kk)
    elif pairing == 1:
        worst = (ii, ll, kk, jj)
    else:
        worst = (ii, kk, ll, jj)
    lhs = float(lhs_products[q, pairing])
    margin = float(margins[q, pairing])
    rhs = lhs + margin
    holds = bool(np.min(rel) >= -tol)
    return PtolemyReport(holds, worst, lhs, rhs, margin, mode, len(quads) * 3, tol)


def parse_triangle_function(text: str) -> TriangleFunction:
    """Parse the command-line gauge grammar: additive | bmetric:K | max."""
    text = text.strip()
    if text == "additive":
        return Additive()
    if text == "max":
        return MaxGauge()
    if text.startswith("bmetric:"):
        try:
            K = float(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad b-metric coefficient in {text!r}") from None
        return ScaledAdditive(K)
    raise ValueError(f"unknown triangle function spec {text!r}")
