"""Trigonometry of point sets.

For a discrete set of positive points alpha the absolute sine and cosine are

    s(x) = x * prod (1 - x^2 / alpha^2),    c(x) = s'(x),

and c has exactly one zero beta_k in each gap (alpha_{k-1}, alpha_k), with
alpha_0 = 0.  Products are truncated at the cloud range X and completed by a
tail factor built from the moments sum_{alpha > X} alpha^(-2j), estimated from
the density and the counting discrepancy at X.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (ConvergenceError, DomainError, InsufficientDataError,
                     InvalidInputError)
from .modelset import ModelSetSpec, PointCloud, enumerate_points
from .numberfield import FieldElement
from .zeta import PiecewiseAntiderivatives

TAIL_TERMS = 10
# arguments beyond this fraction of the product cutoff are rejected
MAX_ARGUMENT_FRACTION = 0.1
ZERO_TOLERANCE = 1e-12
CHUNK_ELEMENTS = 4_000_000
DIRECT_WORK_LIMIT = 50_000_000
NEWTON_MAX_ITER = 200
PHASE_THRESHOLD = 1e-4


def _chunks(n: int, width: int):
    step = max(1, CHUNK_ELEMENTS // max(width, 1))
    for start in range(0, n, step):
        yield slice(start, min(n, start + step))


class ZeroProduct:
    """prod over positive zeros of (1 - x^2/z^2), truncated at X with a tail.

    ``rho`` is the density of the zeros beyond X; ``rho=None`` means the
    zero set is finite and the product is exact.
    """

    def __init__(self, zeros: np.ndarray, X: float, rho: Optional[float],
                 depth: int = 1):
        self.zeros = np.asarray(zeros, dtype=float)
        if np.any(self.zeros <= 0) or np.any(np.diff(self.zeros) <= 0):
            raise InvalidInputError("zeros must be positive and increasing")
        self.X = float(X)
        self.rho = rho
        self.sq = self.zeros ** 2
        self.anti = None
        self.moments = np.zeros(TAIL_TERMS + 1)  # moments[j] ~ sum_{z > X} z^(-2j)
        self.moment_error = 0.0
        if rho is not None:
            if len(self.zeros) < 2:
                raise InsufficientDataError("tail estimate needs at least two zeros")
            self.anti = PiecewiseAntiderivatives(self.zeros, rho, self.X, depth)
            phi0 = float(self.anti.evaluate(0, np.array([self.X]))[0])
            sup1 = self.anti.sups[1] if depth >= 1 else self.anti.sups[0] * self.X
            for j in range(1, TAIL_TERMS + 1):
                m = 2 * j
                self.moments[j] = rho * self.X ** (1 - m) / (m - 1) + phi0 * self.X ** -m
            self.moment_error = 2 * sup1 * self.X ** -3

    @property
    def max_argument(self) -> float:
        if self.rho is None:
            return math.inf
        return MAX_ARGUMENT_FRACTION * self.X

    def check_argument(self, x) -> None:
        if np.max(np.abs(x)) > self.max_argument * (1 + 1e-12):
            raise DomainError("argument beyond 0.1 of the product cutoff",
                              x=float(np.max(np.abs(x))), cutoff=self.X)

    def _tail(self, x: np.ndarray):
        """log tail factor and its x-derivative."""
        if self.rho is None:
            return np.zeros_like(x), np.zeros_like(x)
        x2 = x * x
        log_t = np.zeros_like(x)
        dlog_t = np.zeros_like(x)
        for j in range(TAIL_TERMS, 0, -1):
            # log(1 - x^2/z^2) = -sum_j x^(2j) / (j z^(2j))
            log_t = log_t * x2 - self.moments[j] / j
            dlog_t = dlog_t * x2 - 2 * self.moments[j]
        return log_t * x2, dlog_t * x

    def relative_error(self, x) -> float:
        x = np.abs(np.asarray(x, dtype=float))
        if self.rho is None:
            return 0.0
        rounding = 1e-15 * math.sqrt(max(len(self.zeros), 1)) * (1 + float(np.max(x)))
        return float(np.max(x) ** 2 * self.moment_error + rounding)

    def deflated(self, x: np.ndarray):
        """For real x: nearest zero index m, the deflated product P_m, its
        log-derivative L_m and q = 1 - x^2/z_m^2 (q = 1 without zeros)."""
        x = np.asarray(x, dtype=float)
        n = len(self.zeros)
        P = np.empty_like(x)
        L = np.empty_like(x)
        q = np.ones_like(x)
        dq = np.zeros_like(x)
        log_t, dlog_t = self._tail(x)
        if n == 0:
            return np.exp(log_t), dlog_t, q, dq
        ax = np.abs(x)
        pos = np.searchsorted(self.zeros, ax)
        left = np.clip(pos - 1, 0, n - 1)
        right = np.clip(pos, 0, n - 1)
        m = np.where(np.abs(self.zeros[left] - ax) <= np.abs(self.zeros[right] - ax),
                     left, right)
        for sl in _chunks(len(x), n):
            xs = x[sl][:, None]
            x2 = xs * xs
            fac = 1.0 - x2 / self.sq[None, :]
            rows = np.arange(sl.stop - sl.start)
            fac[rows, m[sl]] = 1.0
            logabs = np.log(np.abs(fac)).sum(axis=1)
            negs = (fac < 0).sum(axis=1)
            P[sl] = np.where(negs % 2, -1.0, 1.0) * np.exp(logabs + log_t[sl])
            with np.errstate(divide="ignore"):
                # the nearest-zero column may divide by zero; it is dropped next
                terms = 2 * xs / (x2 - self.sq[None, :])
            terms[rows, m[sl]] = 0.0
            L[sl] = terms.sum(axis=1) + dlog_t[sl]
        zm2 = self.sq[m]
        q = 1.0 - x * x / zm2
        dq = -2 * x / zm2
        return P, L, q, dq

    def product(self, x):
        """prod (1 - x^2/z^2) for real or complex x."""
        if np.iscomplexobj(x):
            z = np.atleast_1d(np.asarray(x, dtype=complex))
            out = np.empty_like(z)
            for sl in _chunks(len(z), len(self.zeros)):
                zz = z[sl][:, None] ** 2
                logs = np.log(1.0 - zz / self.sq[None, :]).sum(axis=1)
                out[sl] = np.exp(logs + self._tail(z[sl])[0])
            return out
        P, _, q, _ = self.deflated(np.atleast_1d(np.asarray(x, dtype=float)))
        return P * q


@dataclass
class PiResult:
    value: float
    estimate: float
    n_terms: int
    partials: dict = field(default_factory=dict)
    sign_anomaly: bool = False
    extrapolated: Optional[float] = None

    def to_dict(self) -> dict:
        return {"value": self.value, "estimate": self.estimate, "n_terms": self.n_terms,
                "partials": {str(k): v for k, v in self.partials.items()},
                "sign_anomaly": self.sign_anomaly, "extrapolated": self.extrapolated}


@dataclass
class CurveSample:
    x: float
    z: complex


class TrigTables:
    """Absolute trigonometric functions of the positive points of a cloud."""

    def __init__(self, alphas: Sequence[float], X: float, rho: Optional[float],
                 depth: Optional[int] = None, band: Optional[int] = None,
                 lattice: bool = False):
        self.lattice = lattice
        if depth is None:
            depth = 4 if lattice else 1
        if band is None:
            band = 16 if lattice else 1024
        self.depth = depth
        self.band = band
        self.alpha_product = ZeroProduct(np.asarray(alphas, dtype=float), X, rho, depth)
        self._betas = np.zeros(0)
        self._beta_product: Optional[ZeroProduct] = None
        self._pi: Optional[PiResult] = None

    @classmethod
    def from_cloud(cls, cloud: PointCloud, **kw) -> "TrigTables":
        vals = cloud.values[cloud.values > 0]
        if cloud.lattice_step is not None:
            rho = 1.0 / cloud.lattice_step
        elif cloud.spec is not None:
            rho = cloud.spec.density
        else:
            rho = cloud.density_est
        return cls(vals, cloud.range_max, rho, lattice=cloud.lattice_step is not None, **kw)

    @classmethod
    def from_spec(cls, spec: ModelSetSpec, cutoff: float, **kw) -> "TrigTables":
        return cls.from_cloud(enumerate_points(spec, cutoff), **kw)

    @classmethod
    def finite(cls, points: Sequence[float]) -> "TrigTables":
        """Tables of a finite point set: exact polynomial products, no tail."""
        pts = np.sort(np.asarray(points, dtype=float))
        return cls(pts, float(pts[-1]) if len(pts) else 1.0, None)

    @property
    def alphas(self) -> np.ndarray:
        return self.alpha_product.zeros

    @property
    def cutoff(self) -> float:
        return self.alpha_product.X

    # -- absolute functions ----------------------------------------------
    def s_abs(self, x):
        """x * prod (1 - x^2/alpha^2); real or complex, scalar or array."""
        arr = np.asarray(x)
        self.alpha_product.check_argument(arr)
        flat = np.atleast_1d(arr)
        out = flat * self.alpha_product.product(flat)
        return out.reshape(arr.shape) if arr.ndim else out[0]

    def s_abs_error(self, x) -> float:
        """Estimated relative error of :meth:`s_abs` at x."""
        return self.alpha_product.relative_error(x)

    def sc(self, x):
        """(s, c) for real x, using the deflated product near zeros."""
        arr = np.asarray(x, dtype=float)
        self.alpha_product.check_argument(arr)
        flat = np.atleast_1d(arr)
        P, L, q, dq = self.alpha_product.deflated(flat)
        s = flat * q * P
        c = P * (q * (1 + flat * L) + flat * dq)
        if arr.ndim:
            return s.reshape(arr.shape), c.reshape(arr.shape)
        return s[0], c[0]

    def c_abs(self, x):
        """s'(x); real or complex."""
        arr = np.asarray(x)
        if np.iscomplexobj(arr):
            self.alpha_product.check_argument(arr)
            flat = np.atleast_1d(arr)
            P = self.alpha_product.product(flat)
            L = np.array([self._complex_log_derivative(z) for z in flat])
            out = P * (1 + flat * L)
            return out.reshape(arr.shape) if arr.ndim else out[0]
        return self.sc(arr)[1]

    def _complex_log_derivative(self, z: complex) -> complex:
        ap = self.alpha_product
        terms = 2 * z / (z * z - ap.sq)
        _, dlog_t = ap._tail(np.array([z]))
        return complex(terms.sum() + dlog_t[0])

    # -- zeros of c --------------------------------------------------------
    def _log_derivative_direct(self, x: np.ndarray):
        """f = c/s = 1/x + sum 2x/(x^2 - alpha^2) + tail, and f'."""
        ap = self.alpha_product
        f = 1.0 / x
        fp = -1.0 / (x * x)
        for sl in _chunks(len(x), len(ap.zeros)):
            xs = x[sl][:, None]
            d = xs * xs - ap.sq[None, :]
            f[sl] += (2 * xs / d).sum(axis=1)
            fp[sl] += (-2 * (xs * xs + ap.sq[None, :]) / (d * d)).sum(axis=1)
        log_t, dlog_t = ap._tail(x)
        if ap.rho is not None:
            x2 = x * x
            d2 = np.zeros_like(x)
            for j in range(TAIL_TERMS, 0, -1):
                d2 = d2 * x2 - 2 * (2 * j - 1) * ap.moments[j]
            fp += d2
        return f + dlog_t, fp

    def _log_derivative_banded(self, x: np.ndarray, gap: np.ndarray):
        """f and an approximate f' from the nearest 2*band points exactly
        and an expansion in the discrepancy antiderivatives beyond."""
        ap = self.alpha_product
        a = ap.zeros
        K = len(a)
        nb = self.band
        rho = ap.rho
        anti = ap.anti
        f = 1.0 / x
        fp = -1.0 / (x * x)
        offs = np.arange(-nb, nb)
        lo = np.maximum(gap - nb, 0)
        hi = gap + nb
        if np.any(hi >= K):
            raise InsufficientDataError("cloud too short for the banded zero search",
                                        need=int(hi.max()) + 1, have=K)
        for sl in _chunks(len(x), 2 * nb):
            idx = gap[sl][:, None] + offs[None, :]
            valid = idx >= 0
            al = a[np.clip(idx, 0, K - 1)]
            xs = x[sl][:, None]
            d = xs * xs - al * al
            f[sl] += np.where(valid, 2 * xs / d, 0.0).sum(axis=1)
            fp[sl] += np.where(valid, -2 * (xs * xs + al * al) / (d * d), 0.0).sum(axis=1)
        # right part (b, inf)
        b = 0.5 * (a[hi - 1] + a[hi])
        f += -rho * np.log((b + x) / (b - x))
        fp += -rho * (1 / (b + x) + 1 / (b - x))
        f += self._boundary_terms(x, b, anti)
        # left part (0, a_edge]
        has_left = lo > 0
        if np.any(has_left):
            xl = x[has_left]
            ll = lo[has_left]
            ae = 0.5 * (a[ll - 1] + a[ll])
            f[has_left] += rho * np.log((xl + ae) / (xl - ae))
            fp[has_left] += rho * (1 / (xl + ae) - 1 / (xl - ae))
            f[has_left] -= self._boundary_terms(xl, ae, anti)
            f[has_left] += self._boundary_terms(xl, np.zeros_like(xl), anti)
        return f, fp

    @staticmethod
    def _boundary_terms(x, u, anti) -> np.ndarray:
        """sum_j (-1)^j g^(j)(u) Phi_j(u) for g(u) = 1/(x - u) + 1/(x + u)."""
        out = np.zeros_like(x)
        fact = 1.0
        for j in range(anti.depth + 1):
            if j:
                fact *= j
            gj = fact * ((x - u) ** -(j + 1) + (-1) ** j * (x + u) ** -(j + 1))
            out += (-1) ** j * gj * anti.evaluate(j, u)
        return out

    def _solve_gaps(self, gaps: np.ndarray, method: str) -> np.ndarray:
        a = self.alphas
        lo = np.where(gaps > 0, a[np.maximum(gaps - 1, 0)], 0.0)
        hi = a[gaps].copy()
        x = 0.5 * (lo + hi)
        active = np.ones(len(x), dtype=bool)
        for _ in range(NEWTON_MAX_ITER):
            idx = np.nonzero(active)[0]
            if len(idx) == 0:
                break
            xa = x[idx]
            if method == "direct":
                f, fp = self._log_derivative_direct(xa)
            else:
                f, fp = self._log_derivative_banded(xa, gaps[idx])
            # f decreases strictly on each gap: keep the sign bracket
            pos = f > 0
            lo[idx] = np.where(pos, xa, lo[idx])
            hi[idx] = np.where(pos, hi[idx], xa)
            with np.errstate(divide="ignore", invalid="ignore"):
                newton = xa - f / fp
            ok = np.isfinite(newton) & (newton >= lo[idx]) & (newton <= hi[idx])
            nxt = np.where(ok, newton, 0.5 * (lo[idx] + hi[idx]))
            step = np.abs(nxt - xa)
            x[idx] = nxt
            done = (step <= 1e-15 * np.maximum(1.0, np.abs(nxt))) | \
                (hi[idx] - lo[idx] <= 4e-16 * np.maximum(1.0, hi[idx])) | (f == 0)
            active[idx[done]] = False
        else:
            raise ConvergenceError("zero search did not converge",
                                   remaining=int(active.sum()))
        return x

    def choose_method(self, n: int) -> str:
        if self.alpha_product.rho is None:
            return "direct"
        # the direct tail series only holds well inside the cutoff
        within = self.alphas[min(n, len(self.alphas)) - 1] <= self.alpha_product.max_argument
        return "direct" if within and n * len(self.alphas) <= DIRECT_WORK_LIMIT else "banded"

    def cos_zeros(self, n: int, method: Optional[str] = None) -> np.ndarray:
        """The first n positive zeros of c, one per gap (alpha_{k-1}, alpha_k)."""
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise InvalidInputError("zero count must be a positive integer")
        K = len(self.alphas)
        if n > K - 1 and self.alpha_product.rho is not None:
            raise InsufficientDataError("not enough points for the requested zeros",
                                        requested=n, available=K - 1)
        if n > K:
            raise InsufficientDataError("a finite set of k points has k cosine zeros "
                                        "below its largest point", requested=n, available=K)
        if len(self._betas) >= n:
            return self._betas[:n].copy()
        method = method or self.choose_method(n)
        if method not in ("direct", "banded"):
            raise InvalidInputError("method must be 'direct' or 'banded'")
        if method == "direct" and self.alpha_product.rho is not None:
            self.alpha_product.check_argument(self.alphas[n - 1])
        betas = self._solve_gaps(np.arange(n), method)
        self._betas = betas
        self._beta_product = None
        return betas.copy()

    def interlacing_report(self, n: int) -> dict:
        betas = self.cos_zeros(n)
        a = self.alphas
        lower = np.concatenate([[0.0], a[:n - 1]])
        ok = bool(np.all(betas > lower) and np.all(betas < a[:n]))
        _, c = self.sc(betas)
        return {"n": n, "strict": ok, "max_abs_c": float(np.max(np.abs(c)))}

    # -- Wallis constant ---------------------------------------------------
    def pi_qc(self, n_terms: int, method: Optional[str] = None) -> PiResult:
        """(1/beta_1) prod_{n <= N} alpha_n^2 / (beta_n beta_{n+1})."""
        if not isinstance(n_terms, (int, np.integer)) or n_terms < 1:
            raise InvalidInputError("n_terms must be a positive integer")
        betas = self.cos_zeros(n_terms + 1, method)
        a = self.alphas[:n_terms]
        logs = 2 * np.log(a) - np.log(betas[:n_terms]) - np.log(betas[1:n_terms + 1])
        base = -math.log(betas[0])

        def partial(N: int) -> float:
            return math.exp(base + math.fsum(logs[:N]))

        value = partial(n_terms)
        partials = {}
        N = n_terms
        while N >= 1 and len(partials) < 6:
            partials[N] = partial(N)
            N //= 10
        tenth = max(n_terms // 10, 1)
        # partial products approach the limit like 1/N
        estimate = abs(value - partial(tenth)) / 9 if tenth < n_terms else abs(value)
        # Richardson step against the 1/N approach of the partial products
        half = n_terms // 2
        extrapolated = 2 * value - partial(half) if half >= 1 else value
        res = PiResult(value, estimate, int(n_terms), partials, value <= 0, extrapolated)
        self._pi = res
        return res

    @property
    def pi_value(self) -> float:
        """The extrapolated Wallis constant used by the normalized functions."""
        if self._pi is None:
            raise InsufficientDataError("call pi_qc first")
        return self._pi.extrapolated

    # -- normalized functions ---------------------------------------------
    def beta_product(self) -> ZeroProduct:
        if self._beta_product is None:
            if len(self._betas) < 2:
                raise InsufficientDataError("call cos_zeros first")
            b = self._betas
            # the zeros interlace with the points, so they share the density
            self._beta_product = ZeroProduct(b, float(self.alphas[len(b) - 1]),
                                             self.alpha_product.rho)
        return self._beta_product

    def trig_normalized(self, z):
        """(sin_a(pi_a z), cos_a(pi_a z)) = (pi_a * s(z), prod (1 - z^2/beta^2))."""
        sin = self.pi_value * self.s_abs(z)
        bp = self.beta_product()
        arr = np.asarray(z)
        bp.check_argument(arr)
        cos = bp.product(np.atleast_1d(arr))
        cos = cos.reshape(arr.shape) if arr.ndim else cos[0]
        return sin, cos

    def exp_qc(self, x, normalized: bool = False):
        """c(x) + i s(x), or cos_a + i sin_a at pi_a x when normalized."""
        if normalized:
            s, c = self.trig_normalized(x)
            return c + 1j * s
        s, c = self.sc(x)
        return c + 1j * s

    def tan_normalized(self, x):
        return self.pi_value * self.tan_abs(x)

    def tan_abs(self, x):
        """s/c; the normalized tangent differs by the constant factor pi_a."""
        s, c = self.sc(x)
        return s / c

    # -- curves ------------------------------------------------------------
    def curve_samples(self, x_min: float, x_max: float, n: int) -> list[CurveSample]:
        if not isinstance(n, (int, np.integer)) or n < 2:
            raise InvalidInputError("need at least two samples")
        if not x_max > x_min:
            raise InvalidInputError("need x_min < x_max")
        xs = np.linspace(x_min, x_max, n)
        z = self.exp_qc(xs)
        return [CurveSample(float(a), complex(b)) for a, b in zip(xs, z)]

    def nonvanishing_report(self, x_min: float, x_max: float, n: int) -> dict:
        xs = np.linspace(x_min, x_max, n)
        s, c = self.sc(xs)
        both_small = bool(np.any((np.abs(s) < ZERO_TOLERANCE) & (np.abs(c) < ZERO_TOLERANCE)))
        mod = np.hypot(s, c)
        return {"min_modulus": float(mod.min()), "argmin": float(xs[int(mod.argmin())]),
                "both_small": both_small, "samples": int(n)}

    # -- phase action ------------------------------------------------------
    def phase_pair_check(self, gamma, x: float, branches: int = 3,
                         samples: int = 64) -> dict:
        """Find y in one of the next ``branches`` branches of t = s/c right of
        x with t(y) = t(x) and report |t(gamma x) - t(gamma y)| divided by
        |t'(gamma y)| * |gamma (y - x)|.  The factor pi_a of the normalized
        tangent cancels in both the equation and the residual."""
        g = float(gamma)
        if g == 0:
            raise InvalidInputError("gamma must be nonzero")
        tx = float(self.tan_abs(x))
        betas = self._betas
        k = int(np.searchsorted(betas, x))
        if k + branches >= len(betas):
            raise InsufficientDataError("not enough cosine zeros beyond x")
        partner = None
        for br in range(1, branches + 1):
            lo, hi = betas[k + br - 1], betas[k + br]
            span = hi - lo
            grid = np.linspace(lo + 1e-9 * span, hi - 1e-9 * span, samples)
            vals = self.tan_abs(grid) - tx
            sign = np.sign(vals)
            cross = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
            for i in cross:
                a_, b_ = grid[i], grid[i + 1]
                fa = vals[i]
                for _ in range(200):
                    mid = 0.5 * (a_ + b_)
                    fm = float(self.tan_abs(mid)) - tx
                    if (fm > 0) == (fa > 0):
                        a_, fa = mid, fm
                    else:
                        b_ = mid
                    if b_ - a_ <= 1e-15 * max(1.0, abs(mid)):
                        break
                y = 0.5 * (a_ + b_)
                # a pole of t also changes sign; keep genuine crossings only
                if abs(float(self.tan_abs(y)) - tx) <= 1e-6 * (1 + abs(tx)):
                    partner = y
                    break
            if partner is not None:
                break
        if partner is None:
            return {"status": "inconclusive", "x": x, "gamma": g}
        gx, gy = g * x, g * partner
        tgx = float(self.tan_abs(gx))
        tgy = float(self.tan_abs(gy))
        h = 1e-6 * max(1.0, abs(gy))
        slope = (float(self.tan_abs(gy + h)) - float(self.tan_abs(gy - h))) / (2 * h)
        denom = abs(slope) * abs(gy - gx)
        residual = abs(tgx - tgy) / denom if denom > 0 else 0.0
        return {"status": "ok", "x": x, "y": partner, "gamma": g, "t_x": tx,
                "t_gamma_x": tgx, "t_gamma_y": tgy, "residual": residual,
                "threshold": PHASE_THRESHOLD, "passed": residual < PHASE_THRESHOLD}


def count_loops(samples: Sequence[CurveSample]) -> int:
    """Closed loops of the curve: each loop ends where s changes sign, so
    count sign changes of the imaginary part (a sample exactly on the axis
    counts once)."""
    im = np.array([p.z.imag for p in samples])
    sgn = np.sign(im)
    sgn = sgn[sgn != 0]
    return int(np.count_nonzero(sgn[:-1] * sgn[1:] < 0))


def curve_svg(samples: Sequence[CurveSample], size: int = 600) -> str:
    """Single polyline, viewBox fitted to the data (imaginary axis up)."""
    re = np.array([p.z.real for p in samples])
    im = -np.array([p.z.imag for p in samples])
    x0, x1 = float(re.min()), float(re.max())
    y0, y1 = float(im.min()), float(im.max())
    w = max(x1 - x0, 1e-12)
    h = max(y1 - y0, 1e-12)
    pad = 0.02 * max(w, h)
    pts = " ".join(f"{a:.6g},{b:.6g}" for a, b in zip(re, im))
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
            f'height="{int(round(size * (h + 2 * pad) / (w + 2 * pad)))}" '
            f'viewBox="{x0 - pad:.6g} {y0 - pad:.6g} {w + 2 * pad:.6g} {h + 2 * pad:.6g}">'
            f'<polyline fill="none" stroke="black" stroke-width="{0.002 * max(w, h):.3g}" '
            f'points="{pts}"/></svg>\n')


def curve_csv(samples: Sequence[CurveSample]) -> str:
    lines = ["x,re,im"]
    lines += [f"{p.x:.17g},{p.z.real:.17g},{p.z.imag:.17g}" for p in samples]
    return "\n".join(lines) + "\n"
