"""Weak similarity: distance-rank-preserving bijections.

Two spaces are weakly similar when some bijection of their points admits
a strictly increasing bijection phi between their spectra with
phi(d(x, y)) = rho(fx, fy) on every pair.  On a finite space that is an
edge-colored complete-graph isomorphism problem, where an edge's color is
the rank of its distance in the spectrum.  Distances are bucketed into
ranks with a relative tolerance first; phi itself lives on rank space as
a pair of value lists.

The bridges to quasisymmetry (submultiplicative continuations, the
involution identity, the monotone-implication characterization) are here
as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Optional

import numpy as np

from .errors import (
    NotAContinuation,
    NotAntisymmetric,
    NotBijective,
    NotQuasisymmetric,
    NotSubmultiplicative,
    TooLarge,
)
from .moduli import (
    CallableModulus,
    INVOLUTION_GRID,
    InvolutiveModulus,
    Modulus,
    SUBMULT_AXIS,
    _vectorized,
)
from .quasisymmetry import check_qs
from .spaces import PointMap, SemimetricSpace

#: relative tolerance for bucketing distances into spectrum ranks
RANK_TOL = 1e-9

#: brute-force oracle guard
ORACLE_MAX_N = 9


def space_ranks(space: SemimetricSpace, tol: float = RANK_TOL):
    """Bucketed spectrum of a space.

    Returns (reps, rank_matrix): strictly increasing representative values
    (reps[0] = 0) and the integer rank of every matrix entry.  Buckets
    grow greedily from below: a sorted value starts a new bucket when it
    exceeds the previous one by more than tol relative.
    """
    D = np.asarray(space.dist)
    vals = np.unique(D)
    reps = [float(vals[0])]
    for v in vals[1:]:
        if v - reps[-1] > tol * v:
            reps.append(float(v))
    reps = np.array(reps)
    ranks = np.searchsorted(reps, D, side="right") - 1
    return reps, ranks


@dataclass(frozen=True, eq=False)
class ScalingFunction:
    """An order isomorphism between two spectra, as paired value lists."""

    domain_values: np.ndarray
    codomain_values: np.ndarray

    def __post_init__(self):
        dv = np.asarray(self.domain_values, dtype=float)
        cv = np.asarray(self.codomain_values, dtype=float)
        if dv.shape != cv.shape or dv.ndim != 1:
            raise ValueError("scaling function needs matching 1-d value lists")
        if np.any(np.diff(dv) <= 0) or np.any(np.diff(cv) <= 0):
            raise ValueError("scaling function values must be strictly increasing")
        object.__setattr__(self, "domain_values", dv)
        object.__setattr__(self, "codomain_values", cv)

    def __call__(self, value: float, tol: float = RANK_TOL) -> float:
        dv = self.domain_values
        i = int(np.searchsorted(dv, value))
        for k in (i - 1, i):
            if 0 <= k < len(dv) and abs(value - dv[k]) <= tol * max(1.0, abs(dv[k])):
                return float(self.codomain_values[k])
        raise ValueError(f"{value!r} is not in the domain spectrum")

    def pairs(self):
        return list(zip(self.domain_values.tolist(), self.codomain_values.tolist()))

    def __eq__(self, other):
        return (
            isinstance(other, ScalingFunction)
            and np.array_equal(self.domain_values, other.domain_values)
            and np.array_equal(self.codomain_values, other.codomain_values)
        )


@dataclass(frozen=True)
class WeakSimilarity:
    """A realization: the bijection and the spectrum isomorphism."""

    f: PointMap
    phi: ScalingFunction


def _edge_multiplicities(ranks: np.ndarray, nranks: int) -> np.ndarray:
    iu = np.triu_indices(ranks.shape[0], k=1)
    return np.bincount(ranks[iu], minlength=nranks)


def forced_scaling(
    X: SemimetricSpace, Y: SemimetricSpace, tol: float = RANK_TOL
) -> Optional[ScalingFunction]:
    """The only candidate spectrum isomorphism, or None.

    phi must send the i-th smallest domain value to the i-th smallest
    codomain value, so equal spectrum sizes force it uniquely; unequal
    sizes, point counts, or per-rank edge multiplicities rule it out.
    """
    if X.n != Y.n:
        return None
    repX, rkX = space_ranks(X, tol)
    repY, rkY = space_ranks(Y, tol)
    if len(repX) != len(repY):
        return None
    if not np.array_equal(
        _edge_multiplicities(rkX, len(repX)), _edge_multiplicities(rkY, len(repY))
    ):
        return None
    return ScalingFunction(repX, repY)


def verify_weak_similarity(ws: WeakSimilarity, tol: float = RANK_TOL) -> bool:
    """Independent validity check of a realization: every pair's distance
    rank must be preserved and phi must match the bucketed spectra."""
    X, Y = ws.f.domain, ws.f.codomain
    repX, rkX = space_ranks(X, tol)
    repY, rkY = space_ranks(Y, tol)
    if len(repX) != len(ws.phi.domain_values) or len(repY) != len(
        ws.phi.codomain_values
    ):
        return False
    if np.any(np.abs(repX - ws.phi.domain_values) > tol * np.maximum(1.0, repX)):
        return False
    if np.any(np.abs(repY - ws.phi.codomain_values) > tol * np.maximum(1.0, repY)):
        return False
    sigma = np.asarray(ws.f.assignment, dtype=int)
    return bool(np.array_equal(rkY[np.ix_(sigma, sigma)], rkX))


def find_weak_similarity(
    X: SemimetricSpace, Y: SemimetricSpace, tol: float = RANK_TOL
) -> Optional[WeakSimilarity]:
    """Search for a rank-preserving bijection by backtracking.

    Vertices are matched in order of candidate scarcity (fewest admissible
    images first, ties by index); candidates must have the same incident
    rank multiset, and every partial assignment is checked against all
    previously placed vertices.  Exhaustive, hence sound and complete.
    """
    phi = forced_scaling(X, Y, tol)
    if phi is None:
        return None
    n = X.n
    _, rkX = space_ranks(X, tol)
    _, rkY = space_ranks(Y, tol)
    nranks = len(phi.domain_values)

    countsX = np.stack(
        [np.bincount(np.delete(rkX[i], i), minlength=nranks) for i in range(n)]
    )
    countsY = np.stack(
        [np.bincount(np.delete(rkY[i], i), minlength=nranks) for i in range(n)]
    )
    cand = [
        [y for y in range(n) if np.array_equal(countsY[y], countsX[i])]
        for i in range(n)
    ]
    if any(not c for c in cand):
        return None
    order = sorted(range(n), key=lambda i: (len(cand[i]), i))

    sigma = np.full(n, -1, dtype=int)
    used = np.zeros(n, dtype=bool)

    def place(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        prev = order[:k]
        want = rkX[v, prev]
        for y in cand[v]:
            if used[y]:
                continue
            if not np.array_equal(rkY[y, sigma[prev]], want):
                continue
            sigma[v] = y
            used[y] = True
            if place(k + 1):
                return True
            used[y] = False
            sigma[v] = -1
        return False

    if not place(0):
        return None
    f = PointMap(X, Y, tuple(int(v) for v in sigma), bijective=True)
    return WeakSimilarity(f, phi)


def brute_force_weak_similarity(
    X: SemimetricSpace, Y: SemimetricSpace, tol: float = RANK_TOL
) -> Optional[WeakSimilarity]:
    """Factorial-time oracle: try every bijection in lexicographic order.

    Guarded by :class:`TooLarge` above n = 9.
    """
    if X.n > ORACLE_MAX_N or Y.n > ORACLE_MAX_N:
        raise TooLarge(f"brute force is capped at n = {ORACLE_MAX_N}")
    phi = forced_scaling(X, Y, tol)
    if phi is None:
        return None
    n = X.n
    _, rkX = space_ranks(X, tol)
    _, rkY = space_ranks(Y, tol)
    for perm in permutations(range(n)):
        p = np.array(perm)
        if np.array_equal(rkY[np.ix_(p, p)], rkX):
            f = PointMap(X, Y, tuple(perm), bijective=True)
            return WeakSimilarity(f, phi)
    return None


@dataclass(frozen=True)
class MonotoneImplicationsReport:
    """The pairwise implications d < d' => rho < rho' and d = d' => rho = rho'.

    A bijection satisfies both exactly when it is a weak similarity, so a
    passing report doubles as a certificate.  The witness holds two pairs
    with their distances: ((i, j), (k, l), d_ij, d_kl, rho_ij, rho_kl).
    """

    holds: bool
    equality_holds: bool
    order_holds: bool
    witness: Optional[tuple]
    checked_pairs: int
    tol: float

    def to_dict(self):
        w = self.witness
        return {
            "holds": bool(self.holds),
            "equality_holds": bool(self.equality_holds),
            "order_holds": bool(self.order_holds),
            "witness": None
            if w is None
            else {
                "pair1": list(w[0]),
                "pair2": list(w[1]),
                "d1": float(w[2]),
                "d2": float(w[3]),
                "rho1": float(w[4]),
                "rho2": float(w[5]),
            },
            "checked_pairs": int(self.checked_pairs),
            "tol": float(self.tol),
        }


def check_monotone_implications(
    f: PointMap, tol: float = RANK_TOL
) -> MonotoneImplicationsReport:
    """Scan all pairs-of-pairs through their rank structure.

    Equivalent formulation used here: the map from domain distance rank
    to image distance rank must be single-valued (equality implication)
    and strictly increasing (order implication).
    """
    if not f.is_bijection():
        raise NotBijective("monotone implications are certified for bijections only")
    X = f.domain
    D = np.asarray(X.dist)
    R = f.image_matrix()
    _, rkX = space_ranks(X, tol)
    repR, rkR_all = space_ranks(f.codomain, tol)
    sigma = np.asarray(f.assignment, dtype=int)
    rkR = rkR_all[np.ix_(sigma, sigma)]

    n = X.n
    iu = np.triu_indices(n, k=1)
    first_pair = {}
    witness = None
    eq_ok = True
    for i, j, dr, rr in zip(iu[0], iu[1], rkX[iu], rkR[iu]):
        if dr not in first_pair:
            first_pair[dr] = (int(i), int(j), int(rr))
        elif first_pair[dr][2] != rr and witness is None:
            a, b, _ = first_pair[dr]
            witness = (
                (a, b), (int(i), int(j)),
                float(D[a, b]), float(D[i, j]),
                float(R[a, b]), float(R[i, j]),
            )
            eq_ok = False

    order_ok = True
    if eq_ok:
        ranks = sorted(first_pair)
        for prev, cur in zip(ranks, ranks[1:]):
            if first_pair[cur][2] <= first_pair[prev][2]:
                a, b, _ = first_pair[prev]
                c, d, _ = first_pair[cur]
                witness = (
                    (a, b), (c, d),
                    float(D[a, b]), float(D[c, d]),
                    float(R[a, b]), float(R[c, d]),
                )
                order_ok = False
                break

    return MonotoneImplicationsReport(
        eq_ok and order_ok, eq_ok, order_ok, witness, len(iu[0]), tol
    )


@dataclass(frozen=True)
class InvolutionReport:
    """Grid certification of eta(k) eta(1/k) = 1."""

    holds: bool
    max_defect: float
    worst_k: float
    points: int
    certification: str
    tol: float

    def to_dict(self):
        return {
            "holds": bool(self.holds),
            "max_defect": float(self.max_defect),
            "worst_k": float(self.worst_k),
            "points": int(self.points),
            "certification": self.certification,
            "tol": float(self.tol),
        }


def check_involution_identity(
    eta: Modulus, grid: Optional[np.ndarray] = None, tol: float = 1e-9
) -> InvolutionReport:
    """Probe |eta(k) eta(1/k) - 1| <= tol on a reciprocal-symmetric grid.

    Products run through the log path so that over/underflowing factors
    cancel instead of producing inf * 0.
    """
    ks = INVOLUTION_GRID if grid is None else np.asarray(grid, dtype=float)
    with np.errstate(over="ignore"):
        prod = np.exp(
            np.asarray(eta.log_eval(ks), dtype=float)
            + np.asarray(eta.log_eval(1.0 / ks), dtype=float)
        )
    defect = np.abs(prod - 1.0)
    i = int(np.argmax(defect))
    return InvolutionReport(
        bool(defect[i] <= tol), float(defect[i]), float(ks[i]), len(ks), "grid", tol
    )


#: probe axis for antisymmetry of two-argument kernels
ANTISYM_AXIS = np.geomspace(1e-3, 1e3, 25)


def eta_from_antisymmetric(psi: Callable, label: str = "involutive") -> Modulus:
    """Promote an antisymmetric kernel to the modulus exp(psi(t, 1/t)).

    psi(x, z) = -psi(z, x) is probed on a grid pair sample
    (:class:`NotAntisymmetric` on failure); the resulting modulus must
    still be strictly increasing with limit 0 at 0, which the constructor
    validates on the log grid.
    """
    probe = np.array([0.5, 2.0])
    try:
        out = np.asarray(psi(probe, probe[::-1]), dtype=float)
        p = psi if out.shape == probe.shape else np.vectorize(psi, otypes=[float])
    except Exception:
        p = np.vectorize(psi, otypes=[float])
    x = np.repeat(ANTISYM_AXIS, len(ANTISYM_AXIS))
    z = np.tile(ANTISYM_AXIS, len(ANTISYM_AXIS))
    fwd = np.asarray(p(x, z), dtype=float)
    bwd = np.asarray(p(z, x), dtype=float)
    bad = np.abs(fwd + bwd) > 1e-9 * np.maximum(1.0, np.abs(fwd))
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NotAntisymmetric(
            f"psi({x[i]:.4g}, {z[i]:.4g}) + psi({z[i]:.4g}, {x[i]:.4g}) = "
            f"{fwd[i] + bwd[i]:.3g}, expected 0"
        )
    return InvolutiveModulus(psi, label=label)


def qs_from_weaksim(
    ws: WeakSimilarity, phistar: Callable, tol: float = 1e-9
) -> Modulus:
    """Turn a weak similarity into a quasisymmetry modulus.

    ``phistar`` must continue ws.phi off the spectrum: it has to match the
    paired values within 1e-12 (:class:`NotAContinuation`), be a valid
    modulus, and be submultiplicative, phistar(uv) <= phistar(u)phistar(v),
    on the probe grid (:class:`NotSubmultiplicative`).  The returned
    modulus is asserted to verify ws.f.
    """
    p = _vectorized(phistar)
    dv = ws.phi.domain_values
    cv = ws.phi.codomain_values
    got = np.asarray(p(dv), dtype=float)
    gap = np.abs(got - cv)
    bad = gap > 1e-12 * np.maximum(1.0, np.abs(cv))
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NotAContinuation(
            f"phistar({dv[i]:.6g}) = {got[i]:.6g}, but the realization needs "
            f"{cv[i]:.6g}"
        )
    u = SUBMULT_AXIS[:, None]
    v = SUBMULT_AXIS[None, :]
    # fast-growing continuations overflow at the far corner of the probe
    # grid; inf on both sides compares as equal and asserts nothing
    with np.errstate(over="ignore", invalid="ignore"):
        lhs = np.asarray(p(u * v), dtype=float)
        rhs = np.asarray(p(u), dtype=float) * np.asarray(p(v), dtype=float)
        bad = lhs > rhs + 1e-9 * np.maximum(1.0, np.abs(rhs))
    if np.any(bad):
        i, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
        raise NotSubmultiplicative(
            f"phistar({SUBMULT_AXIS[i] * SUBMULT_AXIS[j]:.6g}) = "
            f"{lhs[i, j]:.6g} > {rhs[i, j]:.6g} = phistar({SUBMULT_AXIS[i]:.6g})"
            f" * phistar({SUBMULT_AXIS[j]:.6g})"
        )
    eta = CallableModulus(p, label="phistar")
    rep = check_qs(ws.f, eta, tol=tol)
    if not rep.holds:
        raise NotQuasisymmetric(
            f"continuation does not verify the realization (witness "
            f"{rep.witness_labels}, t = {rep.t:.6g})"
        )
    return eta


def compose_weak_similarities(
    first: WeakSimilarity, second: WeakSimilarity, tol: float = RANK_TOL
) -> WeakSimilarity:
    """Compose realizations: (phi2 . phi1, f2 . f1)."""
    if second.f.domain is not first.f.codomain:
        raise ValueError("realizations do not chain: codomain/domain mismatch")
    f = first.f.compose(second.f)
    mapped = np.array([second.phi(v, tol) for v in first.phi.codomain_values])
    phi = ScalingFunction(first.phi.domain_values, mapped)
    return WeakSimilarity(f, phi)
