"""Transfer of triangle structure along quasisymmetric maps.

The central implication: whenever 1 <= Phi1(1/t1, 1/t2) forces
1 <= Phi2(1/eta(t1), 1/eta(t2)) across ratio pairs, a map verified by eta
carries the Phi1 triangle inequality of its domain to the Phi2 inequality
on its image.  The checks here evaluate that implication on realized
ratios or on a log grid, derive the minimal scaled-additive coefficient
the image can be given, and run the whole chain end to end, including the
four-ratio Ptolemy variant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import PreconditionFailed, Unbounded
from .moduli import Modulus, PowerModulus
from .quasisymmetry import check_qs
from .spaces import DEFAULT_TOL, PointMap, SemimetricSpace
from .triangle import (
    PTOLEMY_EXHAUSTIVE_LIMIT,
    PtolemyReport,
    TriangleFunction,
    TriangleReport,
    check_triangle,
    is_ptolemaic,
)

#: default grid for the a-priori (non-realized) implication scan
TRANSFER_GRID_POINTS = 256
TRANSFER_GRID_SPAN = (1e-4, 1e4)


def _inv_eta(eta: Modulus, t: np.ndarray) -> np.ndarray:
    """1/eta(t) through the log path, stable under overflow of eta."""
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        return np.exp(-np.asarray(eta.log_eval(t), dtype=float))


@dataclass(frozen=True)
class TransferReport:
    """Outcome of the ratio-pair implication scan.

    ``worst`` is (t1, t2, lhs1, lhs2): the first violation when failing,
    otherwise the premise pair with the smallest conclusion side.
    """

    holds: bool
    checked_pairs: int
    worst: Optional[tuple]
    mode: str
    tol: float

    def to_dict(self):
        return {
            "holds": bool(self.holds),
            "checked_pairs": int(self.checked_pairs),
            "worst": None if self.worst is None else [float(v) for v in self.worst],
            "mode": self.mode,
            "tol": float(self.tol),
        }


def _scan_pairs(phi1, phi2, eta, t1, t2, tol, state):
    """Update the running scan state with one batch of (t1, t2) pairs."""
    lhs1 = np.asarray(phi1(1.0 / t1, 1.0 / t2), dtype=float)
    premise = lhs1 >= 1.0 - tol
    if not np.any(premise):
        return
    t1p = t1[premise]
    t2p = t2[premise]
    lhs2 = np.asarray(phi2(_inv_eta(eta, t1p), _inv_eta(eta, t2p)), dtype=float)
    state["checked"] += len(t1p)
    bad = lhs2 < 1.0 - tol
    if np.any(bad) and state["violation"] is None:
        i = int(np.argmax(bad))
        state["violation"] = (
            float(t1p[i]), float(t2p[i]), float(lhs1[premise][i]), float(lhs2[i])
        )
    i = int(np.argmin(lhs2))
    if state["tightest"] is None or lhs2[i] < state["tightest"][3]:
        state["tightest"] = (
            float(t1p[i]), float(t2p[i]), float(lhs1[premise][i]), float(lhs2[i])
        )


def check_transfer_condition(
    phi1: TriangleFunction,
    phi2: TriangleFunction,
    eta: Modulus,
    pairs: Union[PointMap, SemimetricSpace, None] = None,
    tol: float = DEFAULT_TOL,
    grid_points: int = TRANSFER_GRID_POINTS,
    grid_span: tuple = TRANSFER_GRID_SPAN,
) -> TransferReport:
    """Scan the implication 1 <= Phi1(1/t1,1/t2) => 1 <= Phi2(1/eta t's).

    ``pairs`` selects the source of ratio pairs: a map or space takes the
    realized ratios t1 = d(x,y)/d(x,z), t2 = d(x,y)/d(z,y) over its
    triples; None scans a ``grid_points`` squared log grid over
    ``grid_span``.  The first violation (lowest scan index) wins.
    """
    state = {"checked": 0, "violation": None, "tightest": None}
    if pairs is None:
        axis = np.geomspace(grid_span[0], grid_span[1], grid_points)
        # anchor the small dyadic ratios where the classical equality
        # cases live, so binding pairs like (2, 2) are hit exactly
        anchors = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
        anchors = anchors[(anchors >= grid_span[0]) & (anchors <= grid_span[1])]
        axis = np.unique(np.concatenate([axis, anchors]))
        m = len(axis)
        t1 = np.repeat(axis, m)
        t2 = np.tile(axis, m)
        _scan_pairs(phi1, phi2, eta, t1, t2, tol, state)
        mode = "grid"
    else:
        space = pairs.domain if isinstance(pairs, PointMap) else pairs
        D = np.asarray(space.dist)
        n = space.n
        for x in range(n):
            keep = ~np.eye(n, dtype=bool)
            keep[x, :] = False
            keep[:, x] = False
            with np.errstate(divide="ignore", invalid="ignore"):
                t1 = D[x, :][:, None] / D[x, :][None, :]
                t2 = D[x, :][:, None] / D
            # stop at the first violating x so the witness stays lexicographic
            _scan_pairs(phi1, phi2, eta, t1[keep], t2[keep], tol, state)
            if state["violation"] is not None:
                break
        mode = "realized"
    if state["violation"] is not None:
        return TransferReport(False, state["checked"], state["violation"], mode, tol)
    return TransferReport(True, state["checked"], state["tightest"], mode, tol)


def minimal_transfer_K2(
    K1: float, eta: Modulus, grid_points: int = 2001, refine: bool = True
) -> float:
    """Smallest K2 with 1 <= K1(1/t1+1/t2) implying 1 <= K2(1/eta(t1)+1/eta(t2)).

    Equals the supremum of 1/(1/eta(t1) + 1/eta(t2)) over the constraint
    boundary 1/t1 + 1/t2 = 1/K1 (the objective is increasing in both
    ratios, so the interior never beats the boundary).  The boundary is
    scanned on a grid, the best cell is polished by bounded scalar
    minimization, and the corner limit eta(K1) enters as a candidate;
    the result is clamped to >= 1 (no gauge has a smaller coefficient).
    """
    if K1 < 1:
        raise ValueError("K1 must be >= 1")
    b = 1.0 / K1

    frac = np.unique(
        np.concatenate(
            [
                np.linspace(0.0, 1.0, grid_points + 2)[1:-1],
                np.geomspace(1e-12, 0.5, 200),
                1.0 - np.geomspace(1e-12, 0.5, 200),
            ]
        )
    )
    us = frac * b
    with np.errstate(divide="ignore"):
        t1 = 1.0 / us
        t2 = 1.0 / (b - us)
    denom = _inv_eta(eta, t1) + _inv_eta(eta, t2)
    with np.errstate(divide="ignore"):
        obj = 1.0 / denom
    if np.any(~np.isfinite(obj)):
        i = int(np.argmax(~np.isfinite(obj)))
        raise Unbounded(
            f"transfer coefficient diverges at t1 = {t1[i]:.6g}, t2 = {t2[i]:.6g}"
        )
    i = int(np.argmax(obj))
    best = float(obj[i])

    if refine:
        lo = us[max(i - 1, 0)]
        hi = us[min(i + 1, len(us) - 1)]
        if hi > lo:
            def neg(u):
                d = float(
                    _inv_eta(eta, np.array([1.0 / u]))[0]
                    + _inv_eta(eta, np.array([1.0 / (b - u)]))[0]
                )
                return -1.0 / d

            res = minimize_scalar(
                neg, bounds=(lo, hi), method="bounded", options={"xatol": 1e-14}
            )
            if np.isfinite(res.fun):
                best = max(best, float(-res.fun))

    corner = float(
        1.0 / (_inv_eta(eta, np.array([1e15]))[0] + _inv_eta(eta, np.array([K1]))[0])
    )
    if np.isfinite(corner):
        best = max(best, corner)
    return max(best, 1.0)


@dataclass(frozen=True)
class EndToEndReport:
    """The full transfer chain on one map.

    ``consistent`` is the theorem itself at finite scale: either the
    implication scan failed, or the image triangle inequality holds.
    """

    holds: bool
    consistent: bool
    domain_triangle: TriangleReport
    qs: object
    transfer: TransferReport
    image_triangle: TriangleReport

    def to_dict(self):
        return {
            "holds": bool(self.holds),
            "consistent": bool(self.consistent),
            "domain_triangle": self.domain_triangle.to_dict(),
            "qs": self.qs.to_dict(),
            "transfer": self.transfer.to_dict(),
            "image_triangle": self.image_triangle.to_dict(),
        }


def verify_transfer_end_to_end(
    f: PointMap,
    phi1: TriangleFunction,
    phi2: TriangleFunction,
    eta: Modulus,
    tol: float = DEFAULT_TOL,
) -> EndToEndReport:
    """Run the whole transfer argument on a concrete bijection.

    Preconditions (each raises :class:`PreconditionFailed` naming the
    failing input): f bijective, the domain satisfies the Phi1 triangle
    inequality, and eta verifies f.  Then the implication is scanned on
    realized ratios and the codomain is checked against Phi2.
    """
    if not f.is_bijection():
        raise PreconditionFailed("bijection: the map is not a bijection onto the codomain")
    dom = check_triangle(f.domain, phi1, tol=tol)
    if not dom.holds:
        raise PreconditionFailed(
            f"domain triangle: the domain fails {phi1.describe()} at triple "
            f"{dom.worst_labels(f.domain)}"
        )
    qs = check_qs(f, eta, tol=tol)
    if not qs.holds:
        raise PreconditionFailed(
            f"quasisymmetry: {eta.describe()} does not verify the map "
            f"(witness {qs.witness_labels})"
        )
    transfer = check_transfer_condition(phi1, phi2, eta, pairs=f, tol=tol)
    image = check_triangle(f.codomain, phi2, tol=tol)
    consistent = (not transfer.holds) or image.holds
    return EndToEndReport(
        transfer.holds and image.holds, consistent, dom, qs, transfer, image
    )


def _quadruple_sets(n: int, samples: int, seed: int):
    """Index quadruples i<j<k<l: exhaustive when feasible, else sampled."""
    if n <= PTOLEMY_EXHAUSTIVE_LIMIT:
        Q = np.array(list(combinations(range(n), 4)), dtype=int).reshape(-1, 4)
        return Q, "exhaustive"
    rng = np.random.default_rng(seed)
    rows = []
    have = 0
    while have < samples:
        draw = rng.integers(0, n, size=(int((samples - have) * 1.3) + 16, 4))
        draw.sort(axis=1)
        good = draw[np.all(np.diff(draw, axis=1) > 0, axis=1)]
        rows.append(good)
        have += len(good)
    return np.concatenate(rows)[:samples], "sampled"


@dataclass(frozen=True)
class PtolemyTransferReport:
    """Four-ratio implication scan plus the image Ptolemy verdict."""

    holds: bool
    mode: str
    implication_holds: bool
    checked: int
    worst_value: Optional[float]
    worst_quadruple: Optional[tuple]
    worst_ratios: Optional[tuple]
    image: PtolemyReport
    tol: float

    def to_dict(self):
        return {
            "holds": bool(self.holds),
            "mode": self.mode,
            "implication_holds": bool(self.implication_holds),
            "checked": int(self.checked),
            "worst_value": None if self.worst_value is None else float(self.worst_value),
            "worst_quadruple": None
            if self.worst_quadruple is None
            else [int(v) for v in self.worst_quadruple],
            "worst_ratios": None
            if self.worst_ratios is None
            else [float(v) for v in self.worst_ratios],
            "image": self.image.to_dict(),
            "tol": float(self.tol),
        }


#: the three (x, y, z, t) arrangements of a sorted quadruple that realize
#: the three distinct Ptolemy pairings as the product d(x,z) d(t,y)
_PTOLEMY_ARRANGEMENTS = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 1, 3, 2))


def ptolemy_transfer_check(
    f: PointMap,
    eta: Modulus,
    tol: float = DEFAULT_TOL,
    force_realized: bool = False,
    seed: int = 0,
    samples: int = 200_000,
) -> PtolemyTransferReport:
    """Does the map carry the Ptolemy inequality to its image?

    Preconditions: the domain is Ptolemaic, f is a bijection, and eta
    verifies f.  For eta = t**alpha with alpha <= 1 the four-ratio
    implication holds analytically (subadditivity of u**alpha) and only
    the image is verified; otherwise the implication

        t1 t2 t3 t4 <= t1 t2 + t3 t4
            implies  eta(t1)eta(t2)eta(t3)eta(t4)
                         <= eta(t1)eta(t2) + eta(t3)eta(t4)

    is checked at realized quadruple ratios (t1 = d(x,z)/d(x,y),
    t2 = d(t,y)/d(t,z), t3 = d(x,z)/d(x,t), t4 = d(t,y)/d(y,z)).
    """
    dom = is_ptolemaic(f.domain, tol=tol, seed=seed)
    if not dom.holds:
        raise PreconditionFailed(
            f"domain Ptolemy: fails at quadruple {dom.worst_quadruple}"
        )
    if not f.is_bijection():
        raise PreconditionFailed("bijection: the map is not a bijection onto the codomain")
    qs = check_qs(f, eta, tol=tol)
    if not qs.holds:
        raise PreconditionFailed(
            f"quasisymmetry: {eta.describe()} does not verify the map "
            f"(witness {qs.witness_labels})"
        )

    image = is_ptolemaic(f.codomain, tol=tol, seed=seed)

    if (
        isinstance(eta, PowerModulus)
        and eta.alpha <= 1.0
        and not force_realized
    ):
        return PtolemyTransferReport(
            image.holds, "analytic", True, 0, None, None, None, image, tol
        )

    D = np.asarray(f.domain.dist)
    Q, _ = _quadruple_sets(f.domain.n, samples, seed)
    checked = 0
    violation = None
    worst = None
    for perm in _PTOLEMY_ARRANGEMENTS:
        X, Y, Z, T = (Q[:, p] for p in perm)
        t1 = D[X, Z] / D[X, Y]
        t2 = D[T, Y] / D[T, Z]
        t3 = D[X, Z] / D[X, T]
        t4 = D[T, Y] / D[Y, Z]
        lhs = t1 * t2 * t3 * t4
        rhs = t1 * t2 + t3 * t4
        premise = lhs <= rhs + tol * np.maximum(1.0, rhs)
        if not np.any(premise):
            continue
        idx = np.nonzero(premise)[0]
        l1 = np.asarray(eta.log_eval(t1[idx]), dtype=float)
        l2 = np.asarray(eta.log_eval(t2[idx]), dtype=float)
        l3 = np.asarray(eta.log_eval(t3[idx]), dtype=float)
        l4 = np.asarray(eta.log_eval(t4[idx]), dtype=float)
        with np.errstate(over="ignore"):
            c = np.exp(-(l1 + l2)) + np.exp(-(l3 + l4))
        checked += len(idx)
        bad = c < 1.0 - tol
        if np.any(bad) and violation is None:
            k = idx[int(np.argmax(bad))]
            violation = (
                float(c[int(np.argmax(bad))]),
                tuple(int(v) for v in (X[k], Y[k], Z[k], T[k])),
                (float(t1[k]), float(t2[k]), float(t3[k]), float(t4[k])),
            )
        k = int(np.argmin(c))
        if worst is None or c[k] < worst[0]:
            kk = idx[k]
            worst = (
                float(c[k]),
                tuple(int(v) for v in (X[kk], Y[kk], Z[kk], T[kk])),
                (float(t1[kk]), float(t2[kk]), float(t3[kk]), float(t4[kk])),
            )
    if violation is not None:
        return PtolemyTransferReport(
            False, "realized", False, checked,
            violation[0], violation[1], violation[2], image, tol,
        )
    wv, wq, wr = worst if worst is not None else (None, None, None)
    return PtolemyTransferReport(
        image.holds, "realized", True, checked, wv, wq, wr, image, tol
    )
