"""Modular invariants of point sets and the quantum modular invariant.

J(a) = zeta_a(6)^2 / zeta_a(4)^3 is scale invariant; j = P / (1 - (49/40) J)
with P = 12^3 for ideals.  The diophantine sets
Lambda_eps(theta) = {n > 0 : ||n theta|| < eps} carry the same construction,
whose normalized ratio is conventionally taken with prefactor 12.  Both
prefactors are exposed; comparisons between the two families are made on
the prefactor-free J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from mpmath import iv

from .errors import (CompletenessError, InvalidInputError, PrecisionError,
                     UnsupportedFieldError)
from .modelset import PointCloud, enumerate_points, ideal_spec
from .numberfield import FieldElement, make_field
from .zeta import zeta_direct

NORMALIZER = Fraction(49, 40)
IDEAL_PREFACTOR = 1728
QUANTUM_PREFACTOR = 12
INFINITY_TOLERANCE = 1e-8
# s = 4 tail requirement for the diophantine zeta sums
EPS_TAIL_LIMIT = 1e-10
FLOAT_MARGIN = 1e-9
INTERVAL_PREC = 128


@dataclass
class JValue:
    J: float
    J_bound: float
    j: float
    j_infinite: bool
    prefactor: int
    zeta4: float
    zeta6: float

    @property
    def normalized(self) -> float:
        """(49/40) J, equal to 1 for the lattice Z."""
        return float(NORMALIZER) * self.J

    def to_dict(self) -> dict:
        return {
            "J": self.J, "J_bound": self.J_bound, "normalized_J": self.normalized,
            "j": None if self.j_infinite else self.j, "j_infinite": self.j_infinite,
            "prefactor": self.prefactor, "zeta4": self.zeta4, "zeta6": self.zeta6,
        }


def _j_from_zetas(z4: float, e4: float, z6: float, e6: float, prefactor: int) -> JValue:
    if z4 == 0:
        return JValue(0.0, 0.0, float(prefactor), False, prefactor, 0.0, 0.0)
    J = z6 * z6 / z4 ** 3
    rel = 2 * e6 / z6 + 3 * e4 / z4 if z6 > 0 else 0.0
    J_bound = J * rel
    denom = 1 - float(NORMALIZER) * J
    tol = max(INFINITY_TOLERANCE, float(NORMALIZER) * J_bound)
    if abs(denom) < tol:
        sign = math.copysign(math.inf, denom) if denom != 0 else math.inf
        return JValue(J, J_bound, sign, True, prefactor, z4, z6)
    return JValue(J, J_bound, prefactor / denom, False, prefactor, z4, z6)


def j_invariant(cloud: PointCloud, prefactor: int = IDEAL_PREFACTOR) -> JValue:
    """J and j of the positive points of ``cloud`` from direct zeta sums.

    j is flagged infinite when 1 - (49/40) J is within the propagated bound
    (or 1e-8) of zero, as happens for the lattice Z.
    """
    z4 = zeta_direct(cloud, 4)
    z6 = zeta_direct(cloud, 6)
    return _j_from_zetas(z4.value.real, z4.error_bound, z6.value.real,
                         z6.error_bound, prefactor)


# ---------------------------------------------------------------------------
# diophantine sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerEps:
    """The threshold |base|^exponent with base a field element."""

    base: FieldElement
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent))
        if self.base == 0:
            raise InvalidInputError("threshold base must be nonzero")

    def __float__(self) -> float:
        return math.exp(float(self.exponent) * math.log(abs(float(self.base))))

    def exceeds(self, delta: FieldElement) -> bool:
        """|delta| < |base|^exponent, exactly."""
        q = self.exponent.denominator
        p = self.exponent.numerator
        # |delta|^(2q) < |base|^(2p)
        lhs = delta ** (2 * q)
        rhs = self.base ** (2 * p)
        return (rhs - lhs).sign() > 0


Threshold = Union[float, Fraction, FieldElement, PowerEps]
Slope = Union[float, FieldElement]


def _threshold_float(eps: Threshold) -> float:
    return float(eps)


def nearest_distance(x: float) -> float:
    return abs(x - round(x))


def _exact_below(theta: FieldElement, n: int, eps) -> bool:
    approx = n * float(theta)
    r = round(approx)
    best = None
    for cand in (r - 1, r, r + 1):
        delta = theta * n - cand
        if best is None or (abs(delta) - abs(best)).sign() < 0:
            best = delta
    if isinstance(eps, PowerEps):
        return eps.exceeds(best)
    return (abs(best) - eps).sign() < 0


def _interval_below(theta: float, n: int, eps: float) -> bool:
    old = iv.prec
    iv.prec = INTERVAL_PREC
    try:
        x = iv.mpf(n) * iv.mpf(theta)
        r = round(n * theta)
        dist = abs(x - r)
        e = iv.mpf(eps)
        if dist.b < e.a:
            return True
        if dist.a > e.b:
            return False
    finally:
        iv.prec = old
    raise PrecisionError("cannot decide ||n theta|| against eps", n=n)


def lambda_eps(theta: Slope, eps: Threshold, n_max: int) -> np.ndarray:
    """All 0 < n <= n_max with ||n theta|| < eps.

    Quadratic theta (a FieldElement) with an algebraic threshold is decided
    exactly near the boundary; float data falls back to interval arithmetic.
    """
    e = _threshold_float(eps)
    if not 0 < e < 0.5:
        raise InvalidInputError("eps must lie in (0, 1/2)", eps=e)
    if not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise InvalidInputError("n_max must be a positive integer")
    exact = isinstance(theta, FieldElement)
    if exact and theta.is_rational:
        raise InvalidInputError("theta must be irrational")
    if exact and isinstance(eps, float):
        exact_eps: Threshold = Fraction(eps)
    else:
        exact_eps = eps
    t = float(theta)
    n = np.arange(1, int(n_max) + 1, dtype=np.int64)
    x = n * t
    dist = np.abs(x - np.round(x))
    margin = FLOAT_MARGIN + 1e-15 * n_max * abs(t)
    keep = dist < e - margin
    near = np.nonzero(np.abs(dist - e) <= margin)[0]
    for idx in near:
        k = int(n[idx])
        if exact:
            keep[idx] = _exact_below(theta, k, exact_eps)
        else:
            keep[idx] = _interval_below(t, k, e)
    return n[keep]


def _eps_tail(ns: np.ndarray, theta: Slope, eps: Threshold, n_max: int, s: float) -> float:
    """Bound on sum_{n > n_max, n in Lambda_eps} n^-s.

    Elements differ by members of Lambda_2eps, so consecutive ones are at
    least g apart with g the least such member.
    """
    two_eps = 2 * _threshold_float(eps)
    if two_eps >= 0.5:
        g = 1
    else:
        g = _least_member(float(theta), two_eps)
    N = float(n_max)
    return N ** -s + N ** (1 - s) / (g * (s - 1))


def _least_member(theta: float, eps: float, limit: int = 10 ** 7) -> int:
    k = 1
    # slightly conservative: count near-boundary k as members
    while k <= limit:
        if nearest_distance(k * theta) < eps + FLOAT_MARGIN:
            return k
        k += 1
    return limit


def zeta_eps(ns: np.ndarray, s: float) -> float:
    if len(ns) == 0:
        return 0.0
    return math.fsum(np.asarray(ns, dtype=float) ** -s)


@dataclass
class EpsJValue:
    eps: float
    count: int
    value: JValue

    def to_dict(self) -> dict:
        return {"eps": self.eps, "count": self.count, **self.value.to_dict()}


def j_eps(theta: Slope, eps: Threshold, n_max: int,
          prefactor: int = QUANTUM_PREFACTOR) -> EpsJValue:
    """J_eps = zeta(6)^2 / zeta(4)^3 over Lambda_eps(theta) (prefactor-free)
    and j_eps = prefactor / (1 - (49/40) J_eps)."""
    ns = lambda_eps(theta, eps, n_max)
    tail4 = _eps_tail(ns, theta, eps, n_max, 4.0)
    if tail4 > EPS_TAIL_LIMIT:
        raise CompletenessError("n_max too small for the s = 4 tail",
                                tail=tail4, n_max=n_max)
    tail6 = _eps_tail(ns, theta, eps, n_max, 6.0)
    z4, z6 = zeta_eps(ns, 4.0), zeta_eps(ns, 6.0)
    return EpsJValue(float(eps), int(len(ns)),
                     _j_from_zetas(z4, tail4, z6, tail6, prefactor))


@dataclass
class QuantumJReport:
    theta: float
    eps_sequence: list
    j_values: list
    lambda_counts: list

    def to_dict(self) -> dict:
        return {"theta": self.theta, "eps_sequence": self.eps_sequence,
                "j_values": [v.to_dict() for v in self.j_values],
                "lambda_counts": self.lambda_counts}


def jqt(theta: Slope, eps_sequence: Sequence[Threshold], n_max: int,
        prefactor: int = QUANTUM_PREFACTOR) -> QuantumJReport:
    """J_eps along a strictly decreasing sequence of thresholds."""
    floats = [_threshold_float(e) for e in eps_sequence]
    if not floats:
        raise InvalidInputError("empty eps sequence")
    if any(b >= a for a, b in zip(floats, floats[1:])):
        raise InvalidInputError("eps sequence must be strictly decreasing")
    values = [j_eps(theta, e, n_max, prefactor) for e in eps_sequence]
    return QuantumJReport(float(theta), floats, values, [v.count for v in values])


# ---------------------------------------------------------------------------
# Pink's limit
# ---------------------------------------------------------------------------

def _pink_field(d: int):
    F = make_field(d)
    if not F.zt_equals_ok:
        raise UnsupportedFieldError(f"Z[theta] != O_K for d={d}", d=d)
    return F


def _check_x(x) -> Fraction:
    x = Fraction(x)
    if not 0 <= x < 1:
        raise InvalidInputError("x must lie in [0, 1)", x=str(x))
    return x


def pink_scaled_set(d: int, x, m: int, range_max: float) -> np.ndarray:
    """(Delta / theta^m) Lambda_{x+m} on (0, range_max], with Delta = theta - theta'."""
    F = _pink_field(d)
    x = _check_x(x)
    theta = F.fu
    t = float(theta)
    delta = float(theta - theta.conj())
    scale = delta / t ** m
    n_max = int(math.floor(range_max / scale)) + 1
    eps = PowerEps(theta, -(x + m))
    if float(eps) >= 0.5:
        raise InvalidInputError("threshold theta^-(x+m) must be below 1/2", m=m)
    ns = lambda_eps(theta, eps, n_max)
    vals = ns * scale
    return vals[vals <= range_max]


def pink_ring_form(d: int, x, m: int, range_max: float) -> np.ndarray:
    """The same set written as beta - beta' * (N / theta^2)^m over beta in a_x."""
    F = _pink_field(d)
    x = _check_x(x)
    theta = F.fu
    N = int(theta.norm())
    t = float(theta)
    cloud = enumerate_points(ideal_spec(d, x), range_max + 1.0)
    vals = cloud.values - cloud.conj_values * (N / t ** 2) ** m
    vals = np.sort(vals[(vals > 0) & (vals <= range_max)])
    return vals


def _one_sided(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) == 0:
        return 0.0
    if len(b) == 0:
        return math.inf
    idx = np.searchsorted(b, a)
    lo = b[np.clip(idx - 1, 0, len(b) - 1)]
    hi = b[np.clip(idx, 0, len(b) - 1)]
    return float(np.max(np.minimum(np.abs(a - lo), np.abs(a - hi))))


def hausdorff_window(a: np.ndarray, b: np.ndarray, lo: float, hi: float) -> float:
    """Symmetric Hausdorff distance using the points of each set in [lo, hi]
    against all points of the other."""
    a_in = a[(a >= lo) & (a <= hi)]
    b_in = b[(b >= lo) & (b <= hi)]
    return max(_one_sided(a_in, b), _one_sided(b_in, a))


@dataclass
class PinkReport:
    d: int
    x: Fraction
    m_values: list
    set_distances: list = field(default_factory=list)
    ratios: list = field(default_factory=list)
    counts: list = field(default_factory=list)
    target_count: int = 0
    value_gaps: list = field(default_factory=list)
    j_values: list = field(default_factory=list)
    target: Optional[JValue] = None
    target_closed: Optional[JValue] = None
    buffer: float = 0.0

    def to_dict(self) -> dict:
        out = {"d": self.d, "x": str(self.x), "m_values": self.m_values}
        if self.set_distances:
            out.update({"set_distances": self.set_distances, "ratios": self.ratios,
                        "counts": self.counts, "target_count": self.target_count,
                        "edge_buffer": self.buffer})
        if self.target is not None:
            out.update({"target": self.target.to_dict(),
                        "target_closed": self.target_closed.to_dict(),
                        "j_values": [v.to_dict() for v in self.j_values],
                        "value_gaps": self.value_gaps})
        return out


def pink_set_check(d: int, x, m_max: int, range_max: float = 50.0,
                   m_min: int = 0) -> PinkReport:
    """Hausdorff distance between (Delta/theta^m) Lambda_{x+m} and a_x on
    [delta, R - delta], delta = 2 * gap_max, for m = m_min..m_max."""
    _pink_field(d)
    x = _check_x(x)
    if m_max < m_min or m_min < 0:
        raise InvalidInputError("need 0 <= m_min <= m_max")
    target = enumerate_points(ideal_spec(d, x), range_max)
    if len(target) < 2:
        raise CompletenessError("range too short for the target ideal")
    buffer = 2 * target.gap_max
    report = PinkReport(d, x, list(range(m_min, m_max + 1)), buffer=buffer,
                        target_count=len(target))
    theta = float(make_field(d).fu)
    for m in report.m_values:
        if theta ** -(float(x) + m) >= 0.5:
            report.set_distances.append(None)
            report.counts.append(None)
            continue
        scaled = pink_scaled_set(d, x, m, range_max)
        report.set_distances.append(
            hausdorff_window(scaled, target.values, buffer, range_max - buffer))
        report.counts.append(int(len(scaled)))
    for a, b in zip(report.set_distances, report.set_distances[1:]):
        report.ratios.append(b / a if a and b is not None else None)
    return report


def pink_value_check(d: int, x, m_max: int, n_max: int = 100_000,
                     target_cutoff: float = 1e4, m_min: int = 1,
                     prefactor: int = QUANTUM_PREFACTOR) -> PinkReport:
    """J_{theta^-(x+m)}(theta) against J(a_x) and J(a_x^+)."""
    F = _pink_field(d)
    x = _check_x(x)
    report = PinkReport(d, x, [])
    report.target = j_invariant(enumerate_points(ideal_spec(d, x), target_cutoff))
    report.target_closed = j_invariant(
        enumerate_points(ideal_spec(d, x, strict=False), target_cutoff))
    theta = F.fu
    for m in range(m_min, m_max + 1):
        eps = PowerEps(theta, -(x + m))
        if float(eps) >= 0.5:
            continue
        val = j_eps(theta, eps, n_max, prefactor)
        report.m_values.append(m)
        report.j_values.append(val)
        report.value_gaps.append(abs(val.value.J - report.target.J))
    return report
