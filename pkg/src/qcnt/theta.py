"""Theta functions, dual model sets and the completed L-function.

Conventions.  The ideal A is embedded in R^2 by alpha -> (alpha, alpha').
With the Fourier kernel exp(-2 pi i <x, xi>) the dual lattice is the trace
dual A^v and Poisson summation of exp(-pi t x^2) f(y) gives

    theta(t) = C * t^(-1/2) * theta_dual(1/t),   C = 1 / covolume(A),

where theta uses the weights f(alpha') and theta_dual the weights
f^(beta') with f^ the Fourier transform of f.  The identity concerns the
whole lattice, so the primal window has to cover the effective support of f
for the model-set theta function to satisfy it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, DomainError, InvalidInputError
from .modelset import (ModelSetSpec, PointCloud, WindowSpec, enumerate_points,
                       hnf_basis, lattice_spec)
from .numberfield import FieldElement
from .zeta import EvalResult, GaussianWeight, ScaledGaussian, l_function

# exp(-40) ~ 4e-18: Gaussian terms beyond this exponent are dropped
GAUSS_EXPONENT_CUTOFF = 40.0
DUAL_WINDOW_FACTOR = Fraction(1, 3)  # times pi

CONSTANT_CHOICES = ("covolume", "paper")


# ---------------------------------------------------------------------------
# Gamma function
# ---------------------------------------------------------------------------

_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def lanczos_gamma(z: complex) -> complex:
    """Gamma(z) by the Lanczos approximation (g = 7), reflected for Re z < 1/2."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError("Gamma has a pole at non-positive integers", z=str(z))
    if z.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * z) * lanczos_gamma(1 - z))
    z -= 1
    x = _LANCZOS_COEF[0]
    for i in range(1, _LANCZOS_G + 2):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def dual_lattice(basis) -> tuple[FieldElement, FieldElement]:
    """Trace-dual basis: Tr(beta_i * alpha_j) = delta_ij."""
    e1, e2 = basis
    g11, g12, g22 = (e1 * e1).trace(), (e1 * e2).trace(), (e2 * e2).trace()
    det = g11 * g22 - g12 * g12
    if det == 0:
        raise ArithmeticError("singular trace form")
    b1 = (e1 * g22 - e2 * g12) / det
    b2 = (e2 * g11 - e1 * g12) / det
    for b, row in ((b1, (1, 0)), (b2, (0, 1))):
        assert ((b * e1).trace(), (b * e2).trace()) == row
    return b1, b2


@dataclass(frozen=True)
class DualData:
    dual_basis: tuple
    dual_window: WindowSpec
    covolume: float

    @property
    def dual_window_bound(self) -> float:
        return self.dual_window.bound


def dual_data(spec: ModelSetSpec) -> DualData:
    if spec.is_lattice:
        return DualData((), WindowSpec.everything(), spec.lattice_step)
    if spec.window.vacuous or spec.window.inner is not None:
        raise InvalidInputError("dual window needs a plain interval window")
    w = spec.window
    dual_w = WindowSpec(strict=True, factor=DUAL_WINDOW_FACTOR / w.factor,
                        powers=tuple((g, -e) for g, e in w.powers),
                        pi_power=1 - w.pi_power)
    return DualData(hnf_basis(dual_lattice(spec.ideal_basis)), dual_w, spec.covolume)


def _scale_window(w: WindowSpec, k: int) -> WindowSpec:
    return WindowSpec(strict=True, factor=w.factor * k, powers=w.powers, pi_power=w.pi_power)


def dual_model_set(spec: ModelSetSpec, n_shell: int) -> ModelSetSpec:
    """Shell n of the dual: (n-1) w^v <= |beta'| < n w^v on the trace dual."""
    if not isinstance(n_shell, int) or n_shell < 1:
        raise InvalidInputError("shell index must be a positive integer")
    if spec.is_lattice:
        if n_shell > 1:
            raise InvalidInputError("the plain lattice has a single dual shell")
        return lattice_spec(1.0 / spec.lattice_step)
    dd = dual_data(spec)
    outer = _scale_window(dd.dual_window, n_shell)
    if n_shell > 1:
        outer = WindowSpec(strict=True, factor=outer.factor, powers=outer.powers,
                           pi_power=outer.pi_power,
                           inner=_scale_window(dd.dual_window, n_shell - 1))
    return ModelSetSpec(spec.field, dd.dual_basis, outer)


def dual_union(spec: ModelSetSpec, n_shells: int) -> ModelSetSpec:
    """Union of shells 1..n_shells: the dual lattice with window n w^v."""
    dd = dual_data(spec)
    return ModelSetSpec(spec.field, dd.dual_basis, _scale_window(dd.dual_window, n_shells))


def poisson_constant(spec: ModelSetSpec, constant: str = "covolume") -> float:
    if constant not in CONSTANT_CHOICES:
        raise InvalidInputError(f"constant must be one of {CONSTANT_CHOICES}")
    cov = spec.covolume
    return 1.0 / cov if constant == "covolume" else 2 * math.pi / cov


# ---------------------------------------------------------------------------
# theta series
# ---------------------------------------------------------------------------

class ThetaSeries:
    """Sum over positive points of chi(alpha) exp(-pi alpha^2 t), for t >= t_min."""

    def __init__(self, values: np.ndarray, weights: np.ndarray, chi0: float,
                 t_min: float, r_min: float, weight_max: float):
        self.values = values
        self.weights = weights
        self.chi0 = chi0
        self.t_min = t_min
        self.r_min = r_min
        self.weight_max = weight_max
        self.range_max = math.sqrt(GAUSS_EXPONENT_CUTOFF / (math.pi * t_min))

    def tail_bound(self, t: float) -> float:
        # at most one point per r_min beyond the physical cutoff R(t)
        R = math.sqrt(GAUSS_EXPONENT_CUTOFF / (math.pi * t))
        q = math.exp(-2 * math.pi * t * R * self.r_min)
        return self.weight_max * math.exp(-math.pi * t * R * R) / (1 - q)

    def shifted(self, t):
        """theta(t) - chi(0)/2 for scalar or array t."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        expo = -math.pi * np.outer(t, self.values ** 2)
        keep = expo >= -GAUSS_EXPONENT_CUTOFF
        terms = np.where(keep, np.exp(np.where(keep, expo, 0.0)), 0.0) * self.weights
        return np.array([math.fsum(row) for row in terms])

    def __call__(self, t: float) -> float:
        return 0.5 * self.chi0 + float(self.shifted(t)[0])


def _primal_series(spec: ModelSetSpec, weight: GaussianWeight, t_min: float) -> ThetaSeries:
    R = math.sqrt(GAUSS_EXPONENT_CUTOFF / (math.pi * t_min))
    cloud = enumerate_points(spec, R)
    if spec.is_lattice:
        w = np.ones(len(cloud))
        chi0 = 1.0
        wmax = 1.0
        r_min = spec.lattice_step
    else:
        w = weight(cloud.conj_values)
        chi0 = 1.0
        wmax = 1.0
        r_min = _r_min_estimate(spec, cloud)
    return ThetaSeries(cloud.values, w, chi0, t_min, r_min, wmax)


def _r_min_estimate(spec: ModelSetSpec, cloud: PointCloud) -> float:
    if len(cloud) >= 2:
        return float(np.diff(cloud.values).min())
    bigger = enumerate_points(spec, max(cloud.range_max * 4, 10.0 / spec.density))
    return float(np.diff(bigger.values).min())


def _dual_shell_count(spec: ModelSetSpec, weight: GaussianWeight) -> int:
    """Shells needed until the dual Gaussian is below 1e-18 of its peak."""
    dd = dual_data(spec)
    eta = math.sqrt(GAUSS_EXPONENT_CUTOFF * weight.c / math.pi)
    return max(1, math.ceil(eta / dd.dual_window_bound) + 1)


@dataclass
class DualSeries:
    series: ThetaSeries
    shell_index: np.ndarray
    n_shells: int
    truncation: float


def _dual_series(spec: ModelSetSpec, weight: GaussianWeight, t_min: float,
                 n_shells: Optional[int]) -> DualSeries:
    if spec.is_lattice:
        dual = lattice_spec(1.0 / spec.lattice_step)
        s = _primal_series(dual, weight, t_min)
        return DualSeries(s, np.ones(len(s.values), dtype=int), 1, 0.0)
    fhat = weight.dual()
    if n_shells is None:
        n_shells = _dual_shell_count(spec, weight)
    R = math.sqrt(GAUSS_EXPONENT_CUTOFF / (math.pi * t_min))
    dd = dual_data(spec)
    if n_shells == 0:
        s = ThetaSeries(np.zeros(0), np.zeros(0), fhat.amplitude, t_min, 1.0, fhat.amplitude)
        return DualSeries(s, np.zeros(0, dtype=int), 0, fhat.amplitude)
    union = dual_union(spec, n_shells)
    cloud = enumerate_points(union, R)
    wv = dd.dual_window_bound
    shell = np.floor(np.abs(cloud.conj_values) / wv).astype(int) + 1
    weights = fhat(cloud.conj_values)
    r_min = _r_min_estimate(union, cloud)
    s = ThetaSeries(cloud.values, weights, fhat.amplitude, t_min, r_min, fhat.amplitude)
    # next shell: weight at its inner edge times a generous count
    edge = fhat(n_shells * wv)
    count = 1 + 2 * union.density * R
    return DualSeries(s, shell, n_shells, float(edge * count))


def theta_qc(spec: ModelSetSpec, weight: GaussianWeight, t: float) -> EvalResult:
    """chi(0)/2 + sum_{alpha > 0} f(alpha') exp(-pi alpha^2 t)."""
    if not t > 0:
        raise InvalidInputError("theta needs t > 0")
    series = _primal_series(spec, weight, t)
    return EvalResult(complex(series(t)), series.tail_bound(t), series.range_max,
                      "theta", True, {"points": int(len(series.values))})


def theta_dual(spec: ModelSetSpec, weight: GaussianWeight, t: float,
               n_shells: Optional[int] = None) -> EvalResult:
    """chi_v(0)/2 + sum over dual shells 1..n_shells of f^(beta') exp(-pi beta^2 t)."""
    if not t > 0:
        raise InvalidInputError("theta needs t > 0")
    if n_shells is not None and (not isinstance(n_shells, int) or n_shells < 0):
        raise InvalidInputError("n_shells must be a non-negative integer")
    ds = _dual_series(spec, weight, t, n_shells)
    s = ds.series
    value = s(t)
    contributions = []
    if len(s.values):
        terms = s.weights * np.exp(np.maximum(-math.pi * s.values ** 2 * t,
                                              -745.0))
        for n in range(1, ds.n_shells + 1):
            contributions.append(math.fsum(terms[ds.shell_index == n]))
    bound = s.tail_bound(t) + ds.truncation
    return EvalResult(complex(value), bound, s.range_max, "theta-dual", False,
                      {"n_shells": ds.n_shells, "shell_contributions": contributions})


@dataclass
class PoissonReport:
    t: float
    lhs: float
    rhs: float
    rel_err: float
    constant_used: float
    constant: str
    lhs_bound: float
    rhs_bound: float
    window_leak: float
    cutoffs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "t": self.t, "lhs": self.lhs, "rhs": self.rhs, "rel_err": self.rel_err,
            "constant_used": self.constant_used, "constant": self.constant,
            "lhs_bound": self.lhs_bound, "rhs_bound": self.rhs_bound,
            "window_leak": self.window_leak, "cutoffs": self.cutoffs,
        }


def window_leak(spec: ModelSetSpec, weight: GaussianWeight, t: float) -> float:
    """Weighted mass of lattice points outside the window, which the Poisson
    identity counts but the model-set theta function omits."""
    if spec.is_lattice or weight.c == 0:
        return 0.0
    y_max = math.sqrt(GAUSS_EXPONENT_CUTOFF / (math.pi * weight.c))
    if spec.window.bound >= y_max:
        return 0.0
    wide = ModelSetSpec(spec.field, spec.ideal_basis,
                        WindowSpec(strict=True, factor=Fraction(math.ceil(y_max) + 1),
                                   inner=spec.window.with_strict(not spec.window.strict)))
    R = math.sqrt(GAUSS_EXPONENT_CUTOFF / (math.pi * t))
    cloud = enumerate_points(wide, R)
    vals = weight(cloud.conj_values) * np.exp(-math.pi * cloud.values ** 2 * t)
    return 2 * math.fsum(vals)


def poisson_check(spec: ModelSetSpec, weight: GaussianWeight, t: float,
                  constant: str = "covolume") -> PoissonReport:
    """Compare theta(t) with C t^(-1/2) theta_dual(1/t)."""
    if not t > 0:
        raise InvalidInputError("theta needs t > 0")
    C = poisson_constant(spec, constant)
    lhs = theta_qc(spec, weight, t)
    rhs_d = theta_dual(spec, weight, 1.0 / t)
    rhs = C * t ** -0.5 * rhs_d.value.real
    lhs_v = lhs.value.real
    rel = abs(lhs_v - rhs) / abs(lhs_v)
    leak = window_leak(spec, weight, t)
    return PoissonReport(t, lhs_v, rhs, rel, C, constant, lhs.error_bound,
                         C * t ** -0.5 * rhs_d.error_bound, leak,
                         {"primal_range": lhs.cutoff_used, "dual_range": rhs_d.cutoff_used,
                          "dual_shells": rhs_d.details["n_shells"]})


# ---------------------------------------------------------------------------
# completed L-function
# ---------------------------------------------------------------------------

def _gauss_panels(f: Callable, a: float, b: float, panels: int, nodes: np.ndarray,
                  wts: np.ndarray) -> complex:
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    vals = f(t).reshape(panels, -1)
    partial = (vals * wts[None, :]).sum(axis=1) * half
    if np.iscomplexobj(partial):
        return complex(math.fsum(partial.real), math.fsum(partial.imag))
    return complex(math.fsum(partial), 0.0)


def mellin_tail(series: ThetaSeries, s: complex, start: float,
                rel_tol: float = 1e-10, max_panels: int = 1 << 14) -> tuple[complex, float]:
    """int_start^inf (theta(t) - chi(0)/2) t^(s/2) dt/t by composite Gauss-Legendre
    on [start, T*], doubling panels until successive results agree."""
    s = complex(s)
    if len(series.values) == 0:
        return 0j, 0.0
    v_min = float(np.min(series.values))
    # the smallest point dominates; choose T* where its term is negligible
    decay = math.pi * v_min ** 2
    t_star = start + (GAUSS_EXPONENT_CUTOFF + 3 * abs(s.real) + 5) / decay
    t_star = max(t_star, start * 2)
    # log substitution t = start * e^x keeps panels balanced for slow decay
    nodes, wts = np.polynomial.legendre.leggauss(20)
    x_max = math.log(t_star / start)

    def integrand(x):
        t = start * np.exp(x)
        th = series.shifted(t)
        return th * np.exp(0.5 * s * np.log(t))

    panels = 8
    prev = _gauss_panels(integrand, 0.0, x_max, panels, nodes, wts)
    while True:
        panels *= 2
        cur = _gauss_panels(integrand, 0.0, x_max, panels, nodes, wts)
        diff = abs(cur - prev)
        if diff <= rel_tol * max(abs(cur), 1e-300) or diff < 1e-17:
            # neglected piece beyond T*
            tail = series.weight_max * len(series.values) * \
                math.exp(-decay * t_star) * t_star ** max(s.real / 2, 0) / decay
            return cur, diff + tail
        if panels > max_panels:
            raise ConvergenceError("Mellin quadrature did not settle",
                                   panels=panels, diff=diff)
        prev = cur


@dataclass
class _LambdaPieces:
    primal: ThetaSeries
    dual: ThetaSeries
    C: float


def _lambda_pieces(spec: ModelSetSpec, weight: GaussianWeight, t_min: float,
                   constant: str) -> _LambdaPieces:
    primal = _primal_series(spec, weight, t_min)
    dual = _dual_series(spec, weight, t_min, None).series
    return _LambdaPieces(primal, dual, poisson_constant(spec, constant))


def _split_formula(a: ThetaSeries, b: ThetaSeries, C: float, s: complex,
                   split: float) -> tuple[complex, float]:
    """Mellin transform of theta_a continued through the identity
    theta_a(t) = C t^(-1/2) theta_b(1/t), split at t = split."""
    ia, ea = mellin_tail(a, s, split)
    ib, eb = mellin_tail(b, 1 - s, 1.0 / split)
    inv = 1.0 / split
    poles = C * b.chi0 * inv ** ((1 - s) / 2) / (s - 1) - a.chi0 * inv ** (-s / 2) / s
    return ia + C * ib + poles, ea + abs(C) * eb


def lambda_completed(spec: ModelSetSpec, weight: GaussianWeight, s: complex,
                     constant: str = "covolume", split: float = 1.0) -> EvalResult:
    """pi^(-s/2) Gamma(s/2) L(s), continued by the Mellin split

        Lambda(s) = I(s) + C I_v(1-s) + C chi_v(0)/(s-1) - chi(0)/s

    (shown for split = 1), with I, I_v the [split, inf) and [1/split, inf)
    Mellin integrals of the primal and dual theta functions.
    """
    s = complex(s)
    if s == 0 or s == 1:
        raise DomainError("Lambda has poles at s = 0 and s = 1")
    t_min = min(split, 1.0 / split)
    p = _lambda_pieces(spec, weight, t_min, constant)
    value, err = _split_formula(p.primal, p.dual, p.C, s, split)
    return EvalResult(value, err, p.primal.range_max, "mellin-split", False,
                      {"constant": p.C, "split": split})


def lambda_dual_completed(spec: ModelSetSpec, weight: GaussianWeight, s: complex,
                          constant: str = "covolume", split: float = 1.0) -> EvalResult:
    """The dual completed function, continued through theta_v(u) = C^-1 u^(-1/2) theta(1/u)."""
    s = complex(s)
    if s == 0 or s == 1:
        raise DomainError("Lambda has poles at s = 0 and s = 1")
    t_min = min(split, 1.0 / split)
    p = _lambda_pieces(spec, weight, t_min, constant)
    value, err = _split_formula(p.dual, p.primal, 1.0 / p.C, s, split)
    return EvalResult(value, err, p.dual.range_max, "mellin-split-dual", False,
                      {"constant": p.C, "split": split})


def functional_equation_residual(spec: ModelSetSpec, weight: GaussianWeight,
                                 s: complex, constant: str = "covolume",
                                 dual_split: float = 2.0) -> dict:
    """|Lambda(s) - C Lambda_v(1-s)| / |Lambda(s)|.

    Lambda is split at t = 1 and Lambda_v at u = ``dual_split``, so the two
    sides use the theta identity on different ranges of t and the residual
    is not an algebraic tautology.
    """
    lam = lambda_completed(spec, weight, s, constant, split=1.0)
    lam_v = lambda_dual_completed(spec, weight, 1 - complex(s), constant, split=dual_split)
    C = lam.details["constant"]
    resid = abs(lam.value - C * lam_v.value) / abs(lam.value)
    return {"s": complex(s), "lambda": lam.value, "lambda_dual": lam_v.value,
            "constant_used": C, "residual": resid,
            "bounds": [lam.error_bound, C * lam_v.error_bound]}


def residue_at_one(spec: ModelSetSpec, weight: GaussianWeight, h: float = 1e-3,
                   constant: str = "covolume") -> dict:
    """Symmetric estimate of the residue of Lambda at s = 1 against C chi_v(0)."""
    lp = lambda_completed(spec, weight, 1 + h, constant).value
    lm = lambda_completed(spec, weight, 1 - h, constant).value
    estimate = 0.5 * h * (lp - lm)
    C = poisson_constant(spec, constant)
    chi_v0 = 1.0 if spec.is_lattice else weight.dual().amplitude
    expected = C * chi_v0
    return {"estimate": estimate, "expected": expected,
            "rel_err": abs(estimate - expected) / abs(expected)}


def lambda_dirichlet(spec: ModelSetSpec, weight: GaussianWeight, s: complex,
                     cutoff: float = 1e4) -> EvalResult:
    """pi^(-s/2) Gamma(s/2) L(s) from the Dirichlet series (Re s > 1)."""
    s = complex(s)
    L = l_function(spec, weight, s, cutoff)
    factor = cmath.exp(-0.5 * s * math.log(math.pi)) * lanczos_gamma(s / 2)
    return EvalResult(factor * L.value, abs(factor) * L.error_bound, L.cutoff_used,
                      "dirichlet", L.rigorous)
