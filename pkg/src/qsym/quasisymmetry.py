"""Quasisymmetry checks for concrete maps between finite spaces.

The workhorse is the empirical envelope: for a map f and every ordered
triple (x, a, b) with a != x != b, the realized ratio t = d(x,a) / d(x,b)
is paired with the image ratio r = rho(fx,fa) / rho(fx,fb).  The running
maximum H of r over ratios <= t is the smallest step function any valid
control function must dominate, so f verifies against eta exactly when
eta(t_i) >= H(t_i) at the finitely many realized ratios.

On top of the envelope sit the derived analyses: snowflake fitting,
sandwich-built moduli, bi-Lipschitz constants, and the two-sided diameter
distortion bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    NotQuasisymmetric,
    SandwichOrderViolated,
    SubmultiplicativityViolated,
    UnboundedEnvelope,
)
from .moduli import (
    BiLipschitzModulus,
    EmpiricalModulus,
    LinearModulus,
    Modulus,
    MONOTONE_GRID,
    SUBMULT_AXIS,
    SandwichModulus,
    _vectorized,
)
from .spaces import DEFAULT_TOL, PointMap, SubsetRef, diameter
from .triangle import TriangleFunction, invert_diag

#: realized ratios closer than this (relatively) are merged into one step
RATIO_DEDUP = 1e-12

#: pinned tolerances of the ratio-identity report
RATIO_PRODUCT_TOL = 1e-9
ETA_ONE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EmpiricalEnvelope:
    """The step envelope of a map: knots ``ts`` (strictly increasing
    realized ratios), values ``hs`` (nondecreasing running maxima), and for
    every knot the (x, a, b) triple whose image ratio set the value."""

    ts: np.ndarray
    hs: np.ndarray
    witnesses: np.ndarray
    map: PointMap

    def __len__(self):
        return len(self.ts)

    def eval(self, t):
        return self.as_modulus().eval(t)

    def as_modulus(self) -> EmpiricalModulus:
        return EmpiricalModulus(self.ts, self.hs)

    def witness_labels(self, i: int):
        x, a, b = self.witnesses[i]
        lab = self.map.domain.labels
        return (lab[x], lab[a], lab[b])


def _realized(f: PointMap):
    """All realized (t, r) pairs with their (x, a, b) triples.

    Raises :class:`UnboundedEnvelope` when some denominator pair collapses
    while a numerator does not.
    """
    D = np.asarray(f.domain.dist)
    R = f.image_matrix()
    n = f.domain.n
    ts, rs, xs, as_, bs = [], [], [], [], []
    all_idx = np.arange(n)
    for x in range(n):
        idx = all_idx[all_idx != x]
        if len(idx) == 0:
            continue
        dx = D[x, idx]
        rx = R[x, idx]
        zero = rx == 0.0
        if np.any(zero):
            if np.any(rx > 0.0):
                b = int(idx[int(np.argmax(zero))])
                a = int(idx[int(np.argmax(rx > 0.0))])
                raise UnboundedEnvelope(
                    f"rho(f{f.domain.labels[x]}, f{f.domain.labels[b]}) = 0 but "
                    f"rho(f{f.domain.labels[x]}, f{f.domain.labels[a]}) > 0: "
                    "no finite control function exists",
                    witness=(x, a, b),
                )
            continue  # x's whole image row collapsed: every ratio is 0/0
        m = len(idx)
        t = (dx[:, None] / dx[None, :]).ravel()
        r = (rx[:, None] / rx[None, :]).ravel()
        ts.append(t)
        rs.append(r)
        xs.append(np.full(m * m, x))
        as_.append(np.repeat(idx, m))
        bs.append(np.tile(idx, m))
    if not ts:
        empty = np.array([])
        return empty, empty, np.zeros((0, 3), dtype=int)
    ts = np.concatenate(ts)
    rs = np.concatenate(rs)
    triples = np.stack(
        [np.concatenate(xs), np.concatenate(as_), np.concatenate(bs)], axis=1
    )
    return ts, rs, triples


def empirical_modulus(f: PointMap) -> EmpiricalEnvelope:
    """Compute the cumulative-max envelope of a map's realized ratios.

    Knots within relative ``RATIO_DEDUP`` of each other are merged, keeping
    the larger value.
    """
    ts, rs, triples = _realized(f)
    if len(ts) == 0:
        return EmpiricalEnvelope(ts, rs, triples, f)
    order = np.argsort(ts, kind="stable")
    ts = ts[order]
    rs = rs[order]
    triples = triples[order]

    runmax = np.maximum.accumulate(rs)
    pos = np.arange(len(rs))
    carry = np.maximum.accumulate(np.where(rs >= runmax, pos, -1))

    is_last = np.empty(len(ts), dtype=bool)
    is_last[-1] = True
    is_last[:-1] = (ts[1:] - ts[:-1]) > RATIO_DEDUP * ts[1:]
    keep = np.nonzero(is_last)[0]

    env_t = ts[keep].copy()
    env_h = runmax[keep].copy()
    env_w = triples[carry[keep]].copy()
    env_t.setflags(write=False)
    env_h.setflags(write=False)
    env_w.setflags(write=False)
    return EmpiricalEnvelope(env_t, env_h, env_w, f)


@dataclass(frozen=True)
class QsReport:
    """Verdict of a quasisymmetry check against a concrete modulus."""

    holds: bool
    witness: Optional[tuple]
    witness_labels: Optional[tuple]
    t: Optional[float]
    image_ratio: Optional[float]
    eta_at_t: Optional[float]
    modulus: str
    tol: float
    checked: int

    def to_dict(self):
        return {
            "holds": bool(self.holds),
            "witness": None if self.witness is None else list(self.witness),
            "witness_labels": None
            if self.witness_labels is None
            else list(self.witness_labels),
            "t": self.t,
            "image_ratio": self.image_ratio,
            "eta_at_t": self.eta_at_t,
            "modulus": self.modulus,
            "tol": float(self.tol),
            "checked": int(self.checked),
        }


def check_qs(f: PointMap, eta: Modulus, tol: float = DEFAULT_TOL) -> QsReport:
    """Does eta verify f?  Holds iff eta(t_i) + tol >= H(t_i) at every
    envelope knot; the witness is the triple behind the first violation."""
    env = empirical_modulus(f)
    if len(env) == 0:
        return QsReport(True, None, None, None, None, None, eta.describe(), tol, 0)
    vals = np.asarray(eta.eval(env.ts), dtype=float)
    bad = vals + tol < env.hs
    if not np.any(bad):
        return QsReport(True, None, None, None, None, None, eta.describe(), tol, len(env))
    i = int(np.argmax(bad))
    x, a, b = (int(v) for v in env.witnesses[i])
    return QsReport(
        False,
        (x, a, b),
        env.witness_labels(i),
        float(env.ts[i]),
        float(env.hs[i]),
        float(vals[i]),
        eta.describe(),
        tol,
        len(env),
    )


@dataclass(frozen=True)
class RatioIdentityReport:
    """Realized check of eta(t) eta(1/t) >= 1 and eta(1) >= 1."""

    holds: bool
    min_product: float
    at_t: float
    eta_one: float
    product_ok: bool
    eta_one_ok: bool
    checked: int

    def to_dict(self):
        return {
            "holds": bool(self.holds),
            "min_product": float(self.min_product),
            "at_t": float(self.at_t),
            "eta_one": float(self.eta_one),
            "product_ok": bool(self.product_ok),
            "eta_one_ok": bool(self.eta_one_ok),
            "checked": int(self.checked),
        }


def eta_ratio_report(f: PointMap, eta: Modulus) -> RatioIdentityReport:
    """Evaluate the reciprocal-ratio identity on the map's realized ratios.

    Every realized ratio t comes with its reciprocal (swap a and b), so any
    modulus that verifies f must satisfy eta(t) eta(1/t) >= 1 there, and
    eta(1) >= 1.  Pure report; tolerances are ``RATIO_PRODUCT_TOL`` and
    ``ETA_ONE_TOL``.
    """
    env = empirical_modulus(f)
    eta_one = float(np.asarray(eta.eval(1.0)))
    if len(env) == 0:
        ok1 = eta_one >= 1.0 - ETA_ONE_TOL
        return RatioIdentityReport(ok1, np.inf, 1.0, eta_one, True, ok1, 0)
    ts = env.ts
    direct = np.asarray(eta.eval(ts), dtype=float) * np.asarray(
        eta.eval(1.0 / ts), dtype=float
    )
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        stable = np.exp(
            np.asarray(eta.log_eval(ts), dtype=float)
            + np.asarray(eta.log_eval(1.0 / ts), dtype=float)
        )
    prod = np.where(np.isfinite(direct), direct, stable)
    i = int(np.argmin(prod))
    product_ok = bool(prod[i] >= 1.0 - RATIO_PRODUCT_TOL)
    eta_one_ok = bool(eta_one >= 1.0 - ETA_ONE_TOL)
    return RatioIdentityReport(
        product_ok and eta_one_ok,
        float(prod[i]),
        float(ts[i]),
        eta_one,
        product_ok,
        eta_one_ok,
        len(ts),
    )


@dataclass(frozen=True)
class SnowflakeFit:
    """An exact fit rho = scale * d**exponent across all pairs."""

    scale: float
    exponent: float
    similarity: bool

    def to_dict(self):
        return {
            "scale": float(self.scale),
            "exponent": float(self.exponent),
            "similarity": bool(self.similarity),
        }


def fit_snowflake(f: PointMap, tol: float = DEFAULT_TOL) -> Optional[SnowflakeFit]:
    """Fit rho = scale * d**exponent exactly, or return None.

    The two smallest distinct domain distances give scale and exponent in
    closed form; every pair is then verified within relative ``tol``.
    An exponent of (numerically) 1 is flagged as a similarity.
    """
    n = f.domain.n
    if n < 2:
        return None
    iu = np.triu_indices(n, k=1)
    d = np.asarray(f.domain.dist)[iu]
    r = f.image_matrix()[iu]
    if np.any(r <= 0):
        return None
    order = np.argsort(d, kind="stable")
    d, r = d[order], r[order]
    distinct = np.nonzero(np.diff(d) > 0)[0]
    if len(distinct) == 0:
        alpha = 1.0
        lam = float(r[0] / d[0])
    else:
        k = distinct[0] + 1
        d1, r1 = d[0], r[0]
        d2, r2 = d[k], r[k]
        alpha = float(np.log(r2 / r1) / np.log(d2 / d1))
        if not np.isfinite(alpha) or alpha <= 0:
            return None
        lam = float(np.exp(np.log(r1) - alpha * np.log(d1)))
    model = lam * d ** alpha
    if np.any(np.abs(r - model) > tol * np.maximum(r, model)):
        return None
    return SnowflakeFit(lam, alpha, abs(alpha - 1.0) <= 1e-12)


def eta_from_sandwich(
    phi1: Callable, phi2: Callable, C: float, K: float, label: str = "phi1"
) -> SandwichModulus:
    """Build eta(t) = C K**2 phi1(t) after probing the sandwich hypotheses.

    Checks, on fixed probe grids: phi1 <= phi2 <= K phi1
    (:class:`SandwichOrderViolated`) and phi2(u v) <= C phi2(u) phi2(v)
    (:class:`SubmultiplicativityViolated`).  phi1 must itself be a
    homeomorphism of the half line; that is validated by the modulus
    constructor.
    """
    if C <= 0:
        raise ValueError("sandwich constant C must be positive")
    if K < 1:
        raise ValueError("sandwich constant K must be >= 1")
    p1 = _vectorized(phi1)
    p2 = _vectorized(phi2)

    g = MONOTONE_GRID
    with np.errstate(over="ignore", invalid="ignore"):
        v1 = np.asarray(p1(g), dtype=float)
        v2 = np.asarray(p2(g), dtype=float)
        slack = 1e-9 * np.maximum(1.0, np.abs(v2))
        # overflowed probe points compare as NaN, which asserts nothing
        low_bad = v2 < v1 - slack
        high_bad = v2 > K * v1 + 1e-9 * np.maximum(1.0, K * np.abs(v1))
    if np.any(low_bad) or np.any(high_bad):
        k = int(np.argmax(low_bad | high_bad))
        raise SandwichOrderViolated(
            f"phi1 <= phi2 <= K phi1 fails at t = {g[k]:.6g}: "
            f"phi1 = {v1[k]:.6g}, phi2 = {v2[k]:.6g}, K = {K:g}"
        )

    u = SUBMULT_AXIS[:, None]
    v = SUBMULT_AXIS[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        lhs = np.asarray(p2(u * v), dtype=float)
        rhs = C * np.asarray(p2(u), dtype=float) * np.asarray(p2(v), dtype=float)
        bad = lhs > rhs + 1e-9 * np.maximum(1.0, np.abs(rhs))
    if np.any(bad):
        i, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
        raise SubmultiplicativityViolated(
            f"phi2(uv) <= C phi2(u) phi2(v) fails at u = {SUBMULT_AXIS[i]:.6g}, "
            f"v = {SUBMULT_AXIS[j]:.6g}: lhs = {lhs[i, j]:.6g}, rhs = {rhs[i, j]:.6g}"
        )
    return SandwichModulus(C, K, p1, label=label)


def minimal_bilipschitz_L(f: PointMap) -> Optional[float]:
    """The smallest L with d/L <= rho <= L d on all pairs, or None when a
    distinct pair has image distance 0."""
    n = f.domain.n
    if n < 2:
        return 1.0
    iu = np.triu_indices(n, k=1)
    d = np.asarray(f.domain.dist)[iu]
    r = f.image_matrix()[iu]
    if np.any(r == 0):
        return None
    return float(np.max(np.maximum(r / d, d / r)))


def image_subset(f: PointMap, A: SubsetRef) -> SubsetRef:
    """The image point set f(A) as a subset of the codomain."""
    idx = sorted(set(int(f.assignment[i]) for i in A.indices))
    return SubsetRef(f.codomain, tuple(idx))


@dataclass(frozen=True)
class ClassicalBoundsReport:
    """The two-sided diameter bound with scaled-additive coefficients."""

    K1: float
    K2: float
    lower: float
    ratio: float
    upper: float
    holds: bool

    def to_dict(self):
        return {
            "K1": float(self.K1),
            "K2": float(self.K2),
            "lower": float(self.lower),
            "ratio": float(self.ratio),
            "upper": float(self.upper),
            "holds": bool(self.holds),
        }


@dataclass(frozen=True)
class DiameterBoundsReport:
    """Distortion of the diameter ratio of nested subsets A within B.

    ``upper_*`` is   diam f(A)/diam f(B) <= eta(diam A / phi1inv(diam B)),
    ``lower_*`` is   1/eta(diam B/diam A) <= diam f(A) / phi2inv(diam f(B)).
    ``classical`` is filled when both gauges admit a scaled-additive
    coefficient (K for b-metric gauges, 1/2 for the max gauge).
    """

    diam_a: float
    diam_b: float
    diam_fa: float
    diam_fb: float
    upper_lhs: float
    upper_rhs: float
    upper_slack: float
    upper_holds: bool
    lower_lhs: float
    lower_rhs: float
    lower_slack: float
    lower_holds: bool
    classical: Optional[ClassicalBoundsReport]
    holds: bool
    tol: float

    def to_dict(self):
        return {
            "diam_a": float(self.diam_a),
            "diam_b": float(self.diam_b),
            "diam_fa": float(self.diam_fa),
            "diam_fb": float(self.diam_fb),
            "upper_lhs": float(self.upper_lhs),
            "upper_rhs": float(self.upper_rhs),
            "upper_slack": float(self.upper_slack),
            "upper_holds": bool(self.upper_holds),
            "lower_lhs": float(self.lower_lhs),
            "lower_rhs": float(self.lower_rhs),
            "lower_slack": float(self.lower_slack),
            "lower_holds": bool(self.lower_holds),
            "classical": None if self.classical is None else self.classical.to_dict(),
            "holds": bool(self.holds),
            "tol": float(self.tol),
        }


def _require_qs(f: PointMap, eta: Modulus, tol: float):
    rep = check_qs(f, eta, tol=tol)
    if not rep.holds:
        raise NotQuasisymmetric(
            f"map does not verify against {eta.describe()}: at t = {rep.t:.6g} the "
            f"image ratio {rep.image_ratio:.6g} exceeds eta(t) = {rep.eta_at_t:.6g} "
            f"(witness {rep.witness_labels})"
        )


def tv_bounds(
    f: PointMap,
    eta: Modulus,
    A: SubsetRef,
    B: SubsetRef,
    phi1: TriangleFunction,
    phi2: TriangleFunction,
    tol: float = DEFAULT_TOL,
) -> DiameterBoundsReport:
    """Two-sided distortion bounds for nested subsets A within B.

    Requires A, B on the domain of f with A a subset of B and diam A > 0,
    f verifying against eta (:class:`NotQuasisymmetric` otherwise), and
    both gauge diagonals invertible (:class:`NotInvertible`).
    """
    if A.space is not f.domain or B.space is not f.domain:
        raise ValueError("subsets must reference the domain of the map")
    if not A.issubset(B):
        raise ValueError("A must be a subset of B")
    dA = diameter(A)
    dB = diameter(B)
    if dA <= 0:
        raise ValueError("diam A must be positive")
    _require_qs(f, eta, tol)

    fA = image_subset(f, A)
    fB = image_subset(f, B)
    dfA = diameter(fA)
    dfB = diameter(fB)
    if dfA <= 0 or dfB <= 0:
        raise ValueError("image subsets are degenerate (zero diameter)")

    upper_lhs = dfA / dfB
    upper_rhs = float(np.asarray(eta.eval(dA / invert_diag(phi1, dB))))
    lower_lhs = 1.0 / float(np.asarray(eta.eval(dB / dA)))
    lower_rhs = dfA / invert_diag(phi2, dfB)
    upper_slack = upper_rhs - upper_lhs
    lower_slack = lower_rhs - lower_lhs
    upper_holds = bool(upper_slack >= -tol)
    lower_holds = bool(lower_slack >= -tol)

    classical = None
    K1c = phi1.classical_coefficient
    K2c = phi2.classical_coefficient
    if K1c is not None and K2c is not None:
        low = 1.0 / (2.0 * K2c * float(np.asarray(eta.eval(dB / dA))))
        up = float(np.asarray(eta.eval(2.0 * K1c * dA / dB)))
        ratio = dfA / dfB
        classical = ClassicalBoundsReport(
            K1c,
            K2c,
            low,
            ratio,
            up,
            bool(ratio - low >= -tol and up - ratio >= -tol),
        )

    holds = upper_holds and lower_holds and (classical is None or classical.holds)
    return DiameterBoundsReport(
        dA, dB, dfA, dfB,
        upper_lhs, upper_rhs, upper_slack, upper_holds,
        lower_lhs, lower_rhs, lower_slack, lower_holds,
        classical, holds, tol,
    )


@dataclass(frozen=True)
class PairBoundsReport:
    """Per-pair distance bounds from the diameters of the whole space."""

    diam_x: float
    diam_fx: float
    worst_upper_slack: float
    worst_upper_pair: tuple
    worst_lower_slack: float
    worst_lower_pair: tuple
    derived_L: Optional[float]
    minimal_L: Optional[float]
    holds: bool
    tol: float

    def to_dict(self):
        return {
            "diam_x": float(self.diam_x),
            "diam_fx": float(self.diam_fx),
            "worst_upper_slack": float(self.worst_upper_slack),
            "worst_upper_pair": list(self.worst_upper_pair),
            "worst_lower_slack": float(self.worst_lower_slack),
            "worst_lower_pair": list(self.worst_lower_pair),
            "derived_L": None if self.derived_L is None else float(self.derived_L),
            "minimal_L": None if self.minimal_L is None else float(self.minimal_L),
            "holds": bool(self.holds),
            "tol": float(self.tol),
        }


def bounded_image_bounds(
    f: PointMap,
    eta: Modulus,
    phi1: TriangleFunction,
    phi2: TriangleFunction,
    tol: float = DEFAULT_TOL,
) -> PairBoundsReport:
    """Sandwich every image distance between envelope-of-diameter bounds:

        phi2inv(diam fX) / eta(diam X / d(x,y))
            <= rho(fx, fy) <=
        diam fX * eta(d(x,y) / phi1inv(diam X)).

    When eta is linear (C t, or a bi-Lipschitz L**2 t) the report also
    carries the derived bi-Lipschitz constant
    2 C max(diam fX / diam X, diam X / diam fX).
    """
    n = f.domain.n
    if n < 2:
        raise ValueError("need at least two points")
    _require_qs(f, eta, tol)
    X = SubsetRef(f.domain, tuple(range(n)))
    dX = diameter(X)
    dfX = diameter(image_subset(f, X))
    if dX <= 0 or dfX <= 0:
        raise ValueError("degenerate diameters")

    p1inv = invert_diag(phi1, dX)
    p2inv = invert_diag(phi2, dfX)
    iu = np.triu_indices(n, k=1)
    d = np.asarray(f.domain.dist)[iu]
    rho = f.image_matrix()[iu]
    upper = dfX * np.asarray(eta.eval(d / p1inv), dtype=float)
    lower = p2inv / np.asarray(eta.eval(dX / d), dtype=float)

    up_slack = (upper - rho) / np.maximum(1.0, upper)
    low_slack = (rho - lower) / np.maximum(1.0, np.maximum(np.abs(lower), rho))
    iu_up = int(np.argmin(up_slack))
    iu_low = int(np.argmin(low_slack))
    pair_up = (int(iu[0][iu_up]), int(iu[1][iu_up]))
    pair_low = (int(iu[0][iu_low]), int(iu[1][iu_low]))

    derived_L = None
    C = None
    if isinstance(eta, LinearModulus):
        C = eta.C
    elif isinstance(eta, BiLipschitzModulus):
        C = eta.L ** 2
    if C is not None:
        derived_L = 2.0 * C * max(dfX / dX, dX / dfX)

    holds = bool(up_slack[iu_up] >= -tol and low_slack[iu_low] >= -tol)
    return PairBoundsReport(
        dX,
        dfX,
        float(up_slack[iu_up]),
        pair_up,
        float(low_slack[iu_low]),
        pair_low,
        derived_L,
        minimal_bilipschitz_L(f),
        holds,
        tol,
    )
