"""Zeta and L-functions of point sets.

Continuation works with the counting discrepancy D(u) = rho*u - N(u), where
N counts the points in (0, u] and rho is the asymptotic density.  In the
plain lattice Z this is the usual sawtooth {u}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import CompletenessError, DomainError, InvalidInputError
from .modelset import ModelSetSpec, PointCloud, enumerate_points

MAX_IBP_DEPTH = 4
MIN_POINTS = 10
# sub-cutoffs used to measure how far the deep estimate has settled
STABILITY_FRACTIONS = (0.5, 0.625, 0.75, 0.875)


@dataclass
class EvalResult:
    value: complex
    error_bound: float
    cutoff_used: float
    method: str
    rigorous: bool = True
    details: dict = field(default_factory=dict)

    @property
    def real(self) -> float:
        return self.value.real

    def to_dict(self) -> dict:
        return {
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "error_bound": self.error_bound,
            "rigorous": self.rigorous,
            "method": self.method,
            "cutoff": self.cutoff_used,
            **({"details": self.details} if self.details else {}),
        }


@dataclass(frozen=True)
class GaussianWeight:
    """Even Schwartz weight f_c(y) = exp(-pi*c*y^2); c = 0 is the constant 1."""

    c: float = 1.0

    def __post_init__(self):
        if self.c < 0:
            raise InvalidInputError("Gaussian weight needs c >= 0")

    def __call__(self, y):
        return np.exp(-math.pi * self.c * np.square(y))

    def max_on(self, bound: float) -> float:
        return 1.0  # attained at y = 0

    def dual(self):
        """Fourier transform of f_c: c^(-1/2) exp(-pi y^2 / c)."""
        if self.c == 0:
            raise InvalidInputError("the constant weight has no dual Gaussian")
        return ScaledGaussian(amplitude=self.c ** -0.5, c=1.0 / self.c)


@dataclass(frozen=True)
class ScaledGaussian:
    amplitude: float
    c: float

    def __call__(self, y):
        return self.amplitude * np.exp(-math.pi * self.c * np.square(y))

    def max_on(self, bound: float) -> float:
        return self.amplitude


def _fsum_complex(terms: np.ndarray) -> complex:
    if np.iscomplexobj(terms):
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    return complex(math.fsum(terms), 0.0)


def _powers(values: np.ndarray, s: complex) -> np.ndarray:
    """values ** (-s) on the principal branch (values > 0)."""
    if s.imag == 0:
        return values ** (-s.real)
    return np.exp(-s * np.log(values))


def _density(cloud: PointCloud, density: Optional[float]) -> tuple[float, bool]:
    if density is not None:
        return float(density), True
    if cloud.lattice_step is not None:
        return 1.0 / cloud.lattice_step, True
    if cloud.spec is not None:
        return cloud.spec.density, True
    return cloud.density_est, False


def _positive_values(cloud: PointCloud) -> np.ndarray:
    v = cloud.values
    return v[v > 0]


def zeta_direct(cloud: PointCloud, s: complex) -> EvalResult:
    """Ascending partial sum of alpha^(-s) with a tail bound."""
    s = complex(s)
    if s.real <= 1:
        raise DomainError("direct summation needs Re(s) > 1", s=str(s))
    vals = _positive_values(cloud)
    X = cloud.range_max
    if len(vals) == 0:
        return EvalResult(0j, 0.0, X, "direct")
    terms = _powers(vals, s)
    value = _fsum_complex(terms)
    # each power carries about one rounding error; fsum adds none
    rounding = 4 * np.finfo(float).eps * math.fsum(np.abs(terms))
    rho = len(vals) / X
    gap_max = float(np.diff(vals).max()) if len(vals) > 1 else float(vals[0])
    sig = s.real
    tail = rho * X ** (1 - sig) / (sig - 1) * (1 + gap_max * rho)
    return EvalResult(value, tail + rounding, X, "direct", True,
                      {"points": int(len(vals)), "gap_max": gap_max})


def _discrepancy_at_points(vals: np.ndarray, rho: float):
    """D just after and just before each point."""
    m = np.arange(1, len(vals) + 1, dtype=float)
    after = rho * vals - m
    before = after + 1.0
    return after, before


def zeta_continued(cloud: PointCloud, s: complex,
                   density: Optional[float] = None) -> EvalResult:
    """Continuation to Re(s) > 0 via the discrepancy integral.

    zeta(s) = sum_{alpha <= x} alpha^-s + rho x^(1-s)/(s-1) + D(x) x^-s
              - s * int_x^inf D(u) u^(-s-1) du
    with x the largest point; the integral up to the cloud range is exact and
    the remainder is bounded by |s| sup|D| X^(-Re s)/Re s.
    """
    s = complex(s)
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    if s.real <= 0:
        raise DomainError("continued formula needs Re(s) > 0; use zeta_deep", s=str(s))
    vals = _positive_values(cloud)
    if len(vals) < 2:
        raise CompletenessError("cloud too small for the continuation", points=len(vals))
    rho, exact_rho = _density(cloud, density)
    X = cloud.range_max
    x = float(vals[-1])
    n = len(vals)
    partial = _fsum_complex(_powers(vals, s))
    main = rho * x ** (1 - s) / (s - 1)
    d_x = rho * x - n
    boundary = d_x * x ** (-s)
    # exact piece on [x, X], where D(u) = rho*u - n
    if X > x:
        piece = rho * (X ** (1 - s) - x ** (1 - s)) / (1 - s) \
            + n * (X ** (-s) - x ** (-s)) / s
    else:
        piece = 0j
    value = partial + main + boundary - s * piece
    after, before = _discrepancy_at_points(vals, rho)
    d_sup = max(float(np.abs(after).max()), float(np.abs(before).max()),
                abs(rho * X - n))
    lattice = cloud.lattice_step is not None
    sig = s.real
    # beyond the cloud the discrepancy is only known empirically for model sets
    safety = 1.0 if lattice else 2.0
    bound = abs(s) * safety * d_sup * X ** (-sig) / sig
    return EvalResult(complex(value), bound, X, "continued", lattice and exact_rho,
                      {"points": n, "density": rho, "discrepancy_sup": d_sup})


class PiecewiseAntiderivatives:
    """Iterated mean-corrected antiderivatives of D on [0, X].

    Level 0 is D - mu_0 and level j + 1 is the antiderivative of level j
    vanishing at 0, minus its mean mu_{j+1}.  On the interval starting at
    breakpoint b_m (b_0 = 0, then the points) each level is a polynomial in
    t = u - b_m, stored by ascending coefficients.
    """

    def __init__(self, vals: np.ndarray, rho: float, X: float, depth: int):
        self.X = X
        starts = np.concatenate([[0.0], vals])
        ends = np.concatenate([vals, [X]])
        h = ends - starts
        self.starts = starts
        m = np.arange(len(starts), dtype=float)
        coef = np.zeros((len(starts), depth + 2))
        coef[:, 0] = rho * starts - m
        coef[:, 1] = rho
        self.means = []
        self.sups = []
        self.levels = []
        for level in range(depth + 1):
            deg = level + 1
            # integral of the polynomial over each interval
            powers = np.stack([h ** (i + 1) / (i + 1) for i in range(deg + 1)], axis=1)
            integrals = (coef[:, :deg + 1] * powers).sum(axis=1)
            mu = math.fsum(integrals) / X
            self.means.append(mu)
            coef = coef.copy()
            coef[:, 0] -= mu
            integrals = integrals - mu * h
            self.levels.append(coef[:, :deg + 1].copy())
            self.sups.append(self._sup(coef, h, deg))
            if level == depth:
                break
            # next antiderivative, anchored at 0 on the left end
            new = np.zeros_like(coef)
            for i in range(deg + 1):
                new[:, i + 1] = coef[:, i] / (i + 1)
            cum = np.concatenate([[0.0], np.cumsum(integrals)[:-1]])
            new[:, 0] = cum
            coef = new

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def evaluate(self, level: int, u: np.ndarray) -> np.ndarray:
        """Level ``level`` at points 0 <= u <= X (right-continuous at points)."""
        u = np.asarray(u, dtype=float)
        idx = np.searchsorted(self.starts, u, side="right") - 1
        idx = np.clip(idx, 0, len(self.starts) - 1)
        t = u - self.starts[idx]
        coef = self.levels[level]
        out = np.zeros_like(t)
        for i in range(coef.shape[1] - 1, -1, -1):
            out = out * t + coef[idx, i]
        return out

    @staticmethod
    def _sup(coef, h, deg) -> float:
        # sample endpoints and midpoints; exact for the linear level
        best = 0.0
        for frac in (0.0, 0.5, 1.0):
            t = h * frac
            vals = sum(coef[:, i] * t ** i for i in range(deg + 1))
            best = max(best, float(np.abs(vals).max()))
        return best


def _deep_estimate(vals: np.ndarray, rho: float, X: float, s: complex, k: int):
    anti = PiecewiseAntiderivatives(vals, rho, X, k)
    mu = anti.means
    partial = _fsum_complex(_powers(vals, s))
    d_X = rho * X - len(vals)
    value = partial + rho * X ** (1 - s) / (s - 1) + (d_X - mu[0]) * X ** (-s)
    # -s * I_0 with I_j = mu_{j+1} X^(-s-1-j) + (s+1+j) I_{j+1}
    coeff = -s
    for j in range(k):
        value += coeff * mu[j + 1] * X ** (-s - 1 - j)
        coeff *= (s + 1 + j)
    sig = s.real
    dropped = abs(coeff) * anti.sups[k] * X ** (-sig - k) / (sig + k)
    return complex(value), float(dropped), mu


def zeta_deep(cloud: PointCloud, s: complex, k: int = MAX_IBP_DEPTH,
              density: Optional[float] = None) -> EvalResult:
    """Continuation to Re(s) > -k by k-fold integration by parts.

    Each antiderivative is corrected by its empirical mean over the cloud, so
    the result is heuristic.  The reported bound is the size of the first
    dropped term plus the largest change of the estimate over a few smaller
    cutoffs;
    for model sets whose iterated antiderivatives are unbounded the second
    part exposes the missing convergence.
    """
    s = complex(s)
    if not isinstance(k, int) or k < 0:
        raise InvalidInputError("integration depth must be a non-negative integer")
    if k > MAX_IBP_DEPTH:
        raise InvalidInputError(f"integration depth above {MAX_IBP_DEPTH} is unsupported")
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    if s.real <= -k:
        raise DomainError(f"depth {k} only reaches Re(s) > {-k}", s=str(s))
    vals = _positive_values(cloud)
    X = cloud.range_max
    if np.count_nonzero(vals <= X / 2) < MIN_POINTS:
        raise CompletenessError("cloud range too small for deep continuation",
                                points=int(np.count_nonzero(vals <= X / 2)), need=MIN_POINTS)
    rho, _ = _density(cloud, density)
    value, dropped, mu = _deep_estimate(vals, rho, X, s, k)
    spread = 0.0
    for frac in STABILITY_FRACTIONS:
        Y = X * frac
        other, _, _ = _deep_estimate(vals[vals <= Y], rho, Y, s, k)
        spread = max(spread, abs(value - other))
    bound = dropped + spread
    return EvalResult(value, float(bound), X, f"deep-{k}", False,
                      {"points": int(len(vals)), "density": rho, "means": mu,
                       "cutoff_spread": spread})


def bernoulli_qc(cloud: PointCloud, n: int) -> EvalResult:
    """zeta(-n) for n in {1, 3}; experimental."""
    if n not in (1, 3):
        raise InvalidInputError("only n = 1 and n = 3 are supported")
    res = zeta_deep(cloud, -n, k=min(n + 2, MAX_IBP_DEPTH))
    res.details["experimental"] = True
    res.method = f"bernoulli/{res.method}"
    return res


def l_function(target: Union[ModelSetSpec, PointCloud], weight, s: complex,
               cutoff: float = 1e4) -> EvalResult:
    """sum over positive points of f(alpha') alpha^(-s)."""
    s = complex(s)
    if s.real <= 1:
        raise DomainError("L-series needs Re(s) > 1", s=str(s))
    cloud = target if isinstance(target, PointCloud) else enumerate_points(target, cutoff)
    mask = cloud.values > 0
    vals = cloud.values[mask]
    X = cloud.range_max
    if len(vals) == 0:
        return EvalResult(0j, 0.0, X, "direct-weighted")
    conj = cloud.conj_values[mask]
    w = weight(conj)
    value = _fsum_complex(w * _powers(vals, s))
    base = zeta_direct(cloud, s)
    bound = weight.max_on(np.inf) * base.error_bound
    return EvalResult(value, bound, X, "direct-weighted", True, {"points": int(len(vals))})
