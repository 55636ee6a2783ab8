"""Rank-1 cut-and-project sets over real quadratic fields.

A model set is the collection of lattice points alpha of a fractional ideal
whose Galois conjugate lies in a symmetric window |alpha'| < w (or <= w).
Windows of the form c * prod |g'|^e are compared exactly; everything else
falls back to 256-bit interval arithmetic.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from mpmath import iv

from .errors import (BoundaryUndecidableError, CompletenessError,
                     InsufficientDataError, InvalidInputError, ResourceError,
                     UnsupportedFieldError)
from .numberfield import FieldElement, QuadraticField, make_field

Exponent = Union[Fraction, float]

MAX_EXACT_DENOMINATOR = 64
INTERVAL_PREC = 256
DEFAULT_POINT_CAP = 5_000_000


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------

def _as_exponent(x) -> Exponent:
    if isinstance(x, float):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class WindowSpec:
    """Window |alpha'| < bound (strict) or <= bound, where
    bound = factor * pi**pi_power * prod(|sigma_2(g)| ** e for g, e in powers).

    ``inner`` optionally removes a smaller window, giving an annulus.
    """

    strict: bool = True
    factor: Fraction = Fraction(1)
    powers: tuple = ()
    vacuous: bool = False
    pi_power: int = 0
    inner: Optional["WindowSpec"] = None

    def __post_init__(self):
        object.__setattr__(self, "factor", Fraction(self.factor))
        if not self.vacuous and self.factor <= 0:
            raise InvalidInputError("window bound must be positive")
        merged: list[list] = []
        for g, e in self.powers:
            if g == 0:
                raise InvalidInputError("window base must be nonzero")
            e = _as_exponent(e)
            for slot in merged:
                if slot[0] == g:
                    slot[1] = slot[1] + e
                    break
            else:
                merged.append([g, e])
        cleaned = tuple((g, e) for g, e in merged if e != 0)
        object.__setattr__(self, "powers", cleaned)

    @classmethod
    def from_exponent(cls, unit: FieldElement, x, strict: bool = True,
                      factor=1) -> "WindowSpec":
        return cls(strict=strict, factor=factor, powers=((unit, x),))

    @classmethod
    def from_bound(cls, w, strict: bool = True) -> "WindowSpec":
        """A plain numeric bound; floats are taken at their exact binary value."""
        if w <= 0:
            raise InvalidInputError(f"window bound must be positive, got {w}")
        return cls(strict=strict, factor=Fraction(w))

    @classmethod
    def everything(cls) -> "WindowSpec":
        return cls(strict=False, vacuous=True)

    @property
    def bound(self) -> float:
        if self.vacuous:
            return math.inf
        logw = math.log(self.factor) + self.pi_power * math.log(math.pi)
        for g, e in self.powers:
            logw += float(e) * math.log(abs(g.conj_float()))
        return math.exp(logw)

    @property
    def is_exact(self) -> bool:
        return self.pi_power == 0 and \
            all(isinstance(e, Fraction) for _, e in self.powers) and \
            self._denominator() <= MAX_EXACT_DENOMINATOR

    def _denominator(self) -> int:
        q = 1
        for _, e in self.powers:
            if isinstance(e, Fraction):
                q = q * e.denominator // math.gcd(q, e.denominator)
        return q

    def times(self, other: "WindowSpec") -> "WindowSpec":
        """Product window, strict iff both factors are strict."""
        if self.vacuous or other.vacuous:
            return WindowSpec.everything()
        if self.inner is not None or other.inner is not None:
            raise InvalidInputError("products of annular windows are not supported")
        return WindowSpec(strict=self.strict and other.strict,
                          factor=self.factor * other.factor,
                          powers=self.powers + other.powers,
                          pi_power=self.pi_power + other.pi_power)

    def scaled_by(self, g: FieldElement, k=1) -> "WindowSpec":
        if self.vacuous:
            return self
        if self.inner is not None:
            return replace(replace(self, inner=None).scaled_by(g, k),
                           inner=self.inner.scaled_by(g, k))
        if g.is_rational:
            if not isinstance(k, int):
                return replace(self, powers=self.powers + ((g, k),))
            return replace(self, factor=self.factor * abs(g.a) ** k)
        return replace(self, powers=self.powers + ((g, k),))

    def with_strict(self, strict: bool) -> "WindowSpec":
        return replace(self, strict=strict)

    def compare(self, alpha: FieldElement) -> int:
        """Sign of |sigma_2(alpha)| - bound (outer bound for annuli), decided
        exactly when possible."""
        if self.vacuous:
            return -1
        if alpha == 0:
            return -1
        if self.is_exact:
            q = self._denominator()
            big = _window_power(self, q, alpha.d)
            a = alpha ** q
            return (a * a - big * big).conj_sign()
        return self._compare_interval(alpha)

    def _compare_interval(self, alpha: FieldElement) -> int:
        old = iv.prec
        iv.prec = INTERVAL_PREC
        try:
            lhs = abs(_iv_conj(alpha))
            logw = iv.log(_iv_frac(self.factor)) + self.pi_power * iv.log(iv.pi)
            for g, e in self.powers:
                ee = iv.mpf(e) if isinstance(e, float) else _iv_frac(e)
                logw += ee * iv.log(abs(_iv_conj(g)))
            rhs = iv.exp(logw)
            if lhs.b < rhs.a:
                return -1
            if lhs.a > rhs.b:
                return 1
        finally:
            iv.prec = old
        raise BoundaryUndecidableError(
            "cannot separate |alpha'| from the window bound at 256 bits",
            alpha=str(alpha))

    def contains(self, alpha: FieldElement) -> bool:
        c = self.compare(alpha)
        inside = c < 0 or (c == 0 and not self.strict)
        if inside and self.inner is not None:
            return not self.inner.contains(alpha)
        return inside

    def describe(self) -> dict:
        if self.vacuous:
            return {"vacuous": True}
        out = {
            "strict": self.strict,
            "factor": str(self.factor),
            "powers": [[_elem_json(g), str(e) if isinstance(e, Fraction) else repr(e)]
                       for g, e in self.powers],
            "bound": self.bound,
        }
        if self.pi_power:
            out["pi_power"] = self.pi_power
        if self.inner is not None:
            out["inner"] = self.inner.describe()
        return out


def _iv_frac(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _iv_conj(g: FieldElement):
    p, q = g.surd()
    return _iv_frac(p) - _iv_frac(q) * iv.sqrt(g.d)


@lru_cache(maxsize=256)
def _window_power(window: WindowSpec, q: int, d: int) -> FieldElement:
    out = FieldElement(d, window.factor ** q, 0)
    for g, e in window.powers:
        out = out * g ** int(e * q)
    return out


def _elem_json(e: FieldElement) -> list:
    return [str(e.a), str(e.b)]


# ---------------------------------------------------------------------------
# ideal bases
# ---------------------------------------------------------------------------

def hnf_basis(gens: Iterable[FieldElement]) -> tuple[FieldElement, FieldElement]:
    """Canonical basis (h/D, (r + g*w)/D) of the Z-span of ``gens``,
    with h, g > 0 and 0 <= r < h."""
    gens = list(gens)
    if not gens:
        raise InvalidInputError("need at least one generator")
    d = gens[0].d
    den = 1
    for e in gens:
        for c in (e.a, e.b):
            den = den * c.denominator // math.gcd(den, c.denominator)
    vecs = [[int(e.a * den), int(e.b * den)] for e in gens]
    # Euclid on the w-coordinate
    pivot = None
    rest = []
    for v in vecs:
        if v[1] == 0:
            rest.append(v)
            continue
        if pivot is None:
            pivot = v
            continue
        a, b = pivot, v
        while b[1] != 0:
            k = a[1] // b[1]
            a, b = b, [a[0] - k * b[0], a[1] - k * b[1]]
        pivot = a
        rest.append(b)
    if pivot is None:
        raise InvalidInputError("generators span a rank-1 lattice")
    if pivot[1] < 0:
        pivot = [-pivot[0], -pivot[1]]
    h = 0
    for v in rest:
        h = math.gcd(h, v[0])
    if h == 0:
        raise InvalidInputError("generators span a rank-1 lattice")
    r = pivot[0] % h
    return (FieldElement(d, Fraction(h, den), 0),
            FieldElement(d, Fraction(r, den), Fraction(pivot[1], den)))


def _covolume(basis: Sequence[FieldElement]) -> float:
    e1, e2 = basis
    det = e1 * e2.conj() - e2 * e1.conj()
    return abs(float(det))


# ---------------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelSetSpec:
    """Cut-and-project set M(A, D): lattice ``ideal_basis`` and window D.

    ``ideal_basis`` and ``window`` already include the scale factor; ``scale``
    is kept as a record of the multiplier that was applied.  With
    ``lattice_step`` set the spec is the plain lattice step*Z (no field).
    """

    field: Optional[QuadraticField]
    ideal_basis: Optional[tuple]
    window: WindowSpec
    scale: Optional[FieldElement] = None
    lattice_step: Optional[float] = None

    def __post_init__(self):
        if self.lattice_step is not None:
            if not self.lattice_step > 0:
                raise InvalidInputError("lattice step must be positive")
            return
        if self.field is None or self.ideal_basis is None:
            raise InvalidInputError("field and ideal basis are required")
        basis = tuple(self.ideal_basis)
        if len(basis) < 2:
            raise InvalidInputError("ideal basis needs two elements")
        for e in basis:
            if e.d != self.field.d:
                raise InvalidInputError("basis element from another field")
        object.__setattr__(self, "ideal_basis", hnf_basis(basis))
        if self.scale is None:
            object.__setattr__(self, "scale", self.field.one)

    @property
    def is_lattice(self) -> bool:
        return self.lattice_step is not None

    @property
    def covolume(self) -> float:
        if self.is_lattice:
            return self.lattice_step
        return _covolume(self.ideal_basis)

    @property
    def density(self) -> float:
        """Asymptotic number of points per unit length on the positive axis."""
        if self.is_lattice:
            return 1.0 / self.lattice_step
        return 2.0 * self.window.bound / self.covolume

    def lattice_coords(self, alpha: FieldElement) -> Optional[tuple[int, int]]:
        """Integer (m, n) with alpha = m*e1 + n*e2, or None if alpha is off-lattice."""
        e1, e2 = self.ideal_basis
        n = alpha.b / e2.b
        if n.denominator != 1:
            return None
        m = (alpha.a - n * e2.a) / e1.a
        if m.denominator != 1:
            return None
        return int(m), int(n)

    def contains(self, alpha: FieldElement) -> bool:
        if self.is_lattice:
            raise InvalidInputError("membership needs a field spec")
        return self.lattice_coords(alpha) is not None and self.window.contains(alpha)

    def scaled(self, gamma) -> "ModelSetSpec":
        """The class gamma * M(A, D) = M(gamma A, |gamma'| D)."""
        if self.is_lattice:
            return replace(self, lattice_step=self.lattice_step * float(gamma))
        g = gamma if isinstance(gamma, FieldElement) else self.field.element(gamma)
        if g == 0:
            raise InvalidInputError("scale must be nonzero")
        return ModelSetSpec(
            field=self.field,
            ideal_basis=tuple(g * e for e in self.ideal_basis),
            window=self.window.scaled_by(g),
            scale=self.scale * g,
        )

    def with_strict(self, strict: bool) -> "ModelSetSpec":
        return replace(self, window=self.window.with_strict(strict))

    def describe(self) -> dict:
        if self.is_lattice:
            return {"lattice_step": self.lattice_step}
        return {
            "d": self.field.d,
            "ideal_basis": [_elem_json(e) for e in self.ideal_basis],
            "scale": _elem_json(self.scale),
            "window": self.window.describe(),
        }


def ideal_spec(d: int, x=0, strict: bool = True, basis=None,
               unit: Optional[FieldElement] = None) -> ModelSetSpec:
    """The ideal a_x(u) = {alpha in A : |alpha'| < |u'|^x} (``strict=False``
    gives the closed variant).  ``unit`` defaults to the fundamental unit and
    ``basis`` to the ring of integers."""
    F = make_field(d)
    u = F.fu if unit is None else unit
    if basis is None:
        basis = (F.one, F.omega)
    return ModelSetSpec(F, tuple(basis), WindowSpec.from_exponent(u, x, strict))


def sigma_ring(d: int) -> ModelSetSpec:
    """The ring {alpha in O_K : |alpha'| <= 1}."""
    return ideal_spec(d, 0, strict=False)


def lattice_spec(step: float = 1.0) -> ModelSetSpec:
    return ModelSetSpec(None, None, WindowSpec.everything(), lattice_step=step)


# ---------------------------------------------------------------------------
# point clouds
# ---------------------------------------------------------------------------

class PointCloud:
    """Sorted finite truncation of a model set.

    ``coords`` holds integer lattice coordinates with respect to ``basis``
    (for the plain lattice, column 0 is the integer multiplier).
    """

    def __init__(self, values, conj_values, coords, basis, range_max: float,
                 signed: bool, field: Optional[QuadraticField] = None,
                 lattice_step: Optional[float] = None, spec=None):
        order = np.argsort(values, kind="stable")
        self.values = np.asarray(values, dtype=float)[order]
        self.conj_values = np.asarray(conj_values, dtype=float)[order]
        self.coords = np.asarray(coords, dtype=np.int64).reshape(-1, 2)[order]
        self.basis = basis
        self.range_max = float(range_max)
        self.signed = signed
        self.field = field
        self.lattice_step = lattice_step
        self.spec = spec

    @classmethod
    def from_elements(cls, elements: Iterable[FieldElement], field: QuadraticField,
                      range_max: float, signed: bool) -> "PointCloud":
        elems = list(dict.fromkeys(elements))
        den = 1
        for e in elems:
            for c in (e.a, e.b):
                den = den * c.denominator // math.gcd(den, c.denominator)
        basis = (field.element(Fraction(1, den)), field.element(0, Fraction(1, den)))
        coords = [(int(e.a * den), int(e.b * den)) for e in elems]
        emb = [e.embed() for e in elems]
        vals = [v for v, _ in emb]
        conj = [c for _, c in emb]
        return cls(vals, conj, coords, basis, range_max, signed, field=field)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_lattice(self) -> bool:
        return self.lattice_step is not None

    @cached_property
    def elements(self) -> list[FieldElement]:
        if self.is_lattice:
            raise InvalidInputError("lattice clouds carry no field elements")
        e1, e2 = self.basis
        return [int(m) * e1 + int(n) * e2 for m, n in self.coords]

    def element_set(self) -> set:
        return set(self.elements)

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.values)

    @property
    def r_min(self) -> float:
        return delaunay_stats(self)[0]

    @property
    def gap_max(self) -> float:
        return delaunay_stats(self)[1]

    @property
    def density_est(self) -> float:
        length = 2 * self.range_max if self.signed else self.range_max
        return len(self) / length

    def positive(self) -> "PointCloud":
        mask = self.values > 0
        return PointCloud(self.values[mask], self.conj_values[mask], self.coords[mask],
                          self.basis, self.range_max, False, self.field,
                          self.lattice_step, self.spec)

    def restrict(self, range_max: float) -> "PointCloud":
        if range_max > self.range_max:
            raise CompletenessError("cannot extend a cloud beyond its range",
                                    have=self.range_max, need=range_max)
        mask = np.abs(self.values) <= range_max if self.signed else self.values <= range_max
        return PointCloud(self.values[mask], self.conj_values[mask], self.coords[mask],
                          self.basis, range_max, self.signed, self.field,
                          self.lattice_step, self.spec)

    def to_csv(self) -> str:
        lines = ["a,b,value,conj_value"]
        for (m, n), v, c in zip(self.coords, self.values, self.conj_values):
            lines.append(f"{int(m)},{int(n)},{v:.17g},{c:.17g}")
        return "\n".join(lines) + "\n"


def delaunay_stats(cloud: PointCloud) -> tuple[float, float]:
    if len(cloud) < 2:
        raise InsufficientDataError("need at least two points for gap statistics",
                                    points=len(cloud))
    gaps = np.diff(cloud.values)
    return float(gaps.min()), float(gaps.max())


def _expand_ranges(n: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    counts = np.maximum(hi - lo + 1, 0)
    total = int(counts.sum())
    n_rep = np.repeat(n, counts)
    starts = np.repeat(lo, counts)
    offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    return starts + offsets, n_rep


def enumerate_points(spec: ModelSetSpec, range_max: float, signed: bool = False,
                     point_cap: int = DEFAULT_POINT_CAP) -> PointCloud:
    """All points of ``spec`` with 0 < value <= range_max (|value| <= range_max
    when ``signed``), sorted increasingly."""
    if not range_max > 0:
        raise InvalidInputError(f"range_max must be positive, got {range_max}")
    if spec.is_lattice:
        step = spec.lattice_step
        top = int(math.floor(range_max / step * (1 + 1e-15)))
        while (top + 1) * step <= range_max:
            top += 1
        while top > 0 and top * step > range_max:
            top -= 1
        ks = np.arange(-top if signed else 1, top + 1, dtype=np.int64)
        if len(ks) > point_cap:
            raise ResourceError("point count exceeds cap", cap=point_cap)
        coords = np.stack([ks, np.zeros_like(ks)], axis=1)
        vals = ks * step
        return PointCloud(vals, np.zeros(len(ks)), coords, None, range_max, signed,
                          lattice_step=step, spec=spec)

    F = spec.field
    e1, e2 = spec.ideal_basis
    E1 = float(e1.a)
    S1, S2 = e2.embed()
    w = spec.window.bound
    lo_val = -range_max if signed else 0.0
    slab = S1 - S2  # = g*sqrt(d)/D > 0
    n_lo = math.floor((lo_val - w) / slab) - 1
    n_hi = math.ceil((range_max + w) / slab) + 1
    if (n_hi - n_lo) * (2 * w / E1 + 3) > 4 * point_cap:
        raise ResourceError("window too large for the configured point cap",
                            cap=point_cap, bound=w)
    n = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    nf = n.astype(float)
    # internal constraint: |m*E1 + n*S2| <= w ; physical: lo <= m*E1 + n*S1 <= R
    m_lo = np.maximum(np.floor((-w - nf * S2) / E1), np.floor((lo_val - nf * S1) / E1)) - 1
    m_hi = np.minimum(np.ceil((w - nf * S2) / E1), np.ceil((range_max - nf * S1) / E1)) + 1
    m_lo = m_lo.astype(np.int64)
    m_hi = m_hi.astype(np.int64)
    if int(np.maximum(m_hi - m_lo + 1, 0).sum()) > 4 * point_cap:
        raise ResourceError("candidate count exceeds cap", cap=point_cap)
    m, nn = _expand_ranges(n, m_lo, m_hi)
    mf = m.astype(float)
    nnf = nn.astype(float)
    v1 = mf * E1 + nnf * S1
    v2 = mf * E1 + nnf * S2
    scale = np.abs(mf) * E1 + np.abs(nnf) * (abs(S1) + abs(S2)) + 1.0
    tol = 1e-13 * scale
    wtol = tol + 1e-13 * w
    a2 = np.abs(v2)
    inside = (a2 < w - wtol) & (v1 > lo_val + tol) & (v1 < range_max - tol)
    if not signed:
        inside &= v1 > tol
    near = ((np.abs(a2 - w) <= wtol) & (v1 > lo_val - tol) & (v1 < range_max + tol)) | \
           ((a2 < w + wtol) & ((np.abs(v1 - range_max) <= tol) | (np.abs(v1 - lo_val) <= tol)
                               | (np.abs(v1) <= tol)))
    near &= ~inside
    inner = spec.window.inner
    if inner is not None:
        wi = inner.bound
        wi_tol = tol + 1e-13 * wi
        inside &= a2 > wi + wi_tol
        near |= (np.abs(a2 - wi) <= wi_tol) & (a2 < w + wtol) & \
            (v1 > lo_val - tol) & (v1 < range_max + tol)
    keep = inside.copy()
    rmax = Fraction(range_max)
    for idx in np.nonzero(near)[0]:
        alpha = int(m[idx]) * e1 + int(nn[idx]) * e2
        s = alpha.sign()
        if signed:
            ok = abs(alpha) <= rmax
        else:
            ok = s > 0 and alpha <= rmax
        keep[idx] = ok and spec.window.contains(alpha)
    if int(keep.sum()) > point_cap:
        raise ResourceError("point count exceeds cap", cap=point_cap)
    coords = np.stack([m[keep], nn[keep]], axis=1)
    return PointCloud(v1[keep], v2[keep], coords, spec.ideal_basis, range_max, signed,
                      field=F, spec=spec)


# ---------------------------------------------------------------------------
# monoid structure
# ---------------------------------------------------------------------------

def _require_same_field(a: PointCloud, b: PointCloud) -> QuadraticField:
    if a.is_lattice or b.is_lattice:
        raise InvalidInputError("field clouds required")
    if a.field.d != b.field.d:
        raise InvalidInputError("clouds over different fields")
    return a.field


def monoid_product(a: PointCloud, b: PointCloud, range_max: float) -> PointCloud:
    """All products alpha*beta with 0 < alpha*beta <= range_max."""
    F = _require_same_field(a, b)
    pa, pb = a.positive(), b.positive()
    if len(pa) == 0 or len(pb) == 0:
        return PointCloud.from_elements([], F, range_max, False)
    need_a = range_max / pb.values[0]
    need_b = range_max / pa.values[0]
    if a.range_max < need_a or b.range_max < need_b:
        raise CompletenessError("inputs do not cover the product range",
                                need_a=need_a, have_a=a.range_max,
                                need_b=need_b, have_b=b.range_max)
    rmax = Fraction(range_max)
    eb = pb.elements
    out = []
    for alpha, va in zip(pa.elements, pa.values):
        k = bisect.bisect_right(pb.values, range_max / va * (1 + 1e-12))
        for beta in eb[:k]:
            g = alpha * beta
            if g <= rmax:
                out.append(g)
    return PointCloud.from_elements(out, F, range_max, False)


def sumset(a: PointCloud, b: PointCloud, range_max: float) -> PointCloud:
    """All sums alpha + beta with 0 < alpha + beta <= range_max.

    Only pairs inside the input truncations are seen, so the inputs must at
    least cover ``range_max``; use signed inputs with a margin to capture
    sums of elements of opposite sign.
    """
    F = _require_same_field(a, b)
    if a.range_max < range_max or b.range_max < range_max:
        raise CompletenessError("inputs do not cover the sumset range",
                                need=range_max, have_a=a.range_max, have_b=b.range_max)
    rmax = Fraction(range_max)
    eb = b.elements
    vb = b.values
    out = []
    pad = 1e-9 * (range_max + 1)
    for alpha, va in zip(a.elements, a.values):
        lo = bisect.bisect_left(vb, -va - pad)
        hi = bisect.bisect_right(vb, range_max - va + pad)
        for beta in eb[lo:hi]:
            g = alpha + beta
            if g.sign() > 0 and g <= rmax:
                out.append(g)
    return PointCloud.from_elements(out, F, range_max, False)


def star_product(a: ModelSetSpec, b: ModelSetSpec) -> ModelSetSpec:
    """M(AB, D*D'): product ideal in canonical form and product window."""
    if a.is_lattice and b.is_lattice:
        return lattice_spec(a.lattice_step * b.lattice_step)
    if a.is_lattice or b.is_lattice or a.field.d != b.field.d:
        raise InvalidInputError("star product needs two specs over the same field")
    gens = [x * y for x in a.ideal_basis for y in b.ideal_basis]
    return ModelSetSpec(a.field, hnf_basis(gens), a.window.times(b.window),
                        scale=a.scale * b.scale)


def scale_by_unit(spec: ModelSetSpec, k: int) -> ModelSetSpec:
    """theta^k * spec: basis times theta^k, window times |theta'|^k."""
    if spec.is_lattice:
        raise InvalidInputError("unit scaling needs a field spec")
    if k == 0:
        return spec
    u = spec.field.fu ** k
    return ModelSetSpec(spec.field, tuple(u * e for e in spec.ideal_basis),
                        spec.window.scaled_by(spec.field.fu, k),
                        scale=spec.scale * u)


def coding_function(spec: ModelSetSpec, a_max: int) -> list[int]:
    """Bit a (1 <= a <= a_max) is 1 iff a*theta + b lies in the set for some integer b."""
    if spec.is_lattice:
        raise InvalidInputError("coding function needs a field spec")
    F = spec.field
    if not F.zt_equals_ok:
        raise UnsupportedFieldError(f"Z[theta] != O_K for d={F.d}")
    if spec.window.compare(F.one) < 0:
        raise InvalidInputError("coding function needs a window exponent x >= 0")
    theta = F.fu
    tc = theta.conj_float()
    bits = []
    for a in range(1, a_max + 1):
        b0 = round(-a * tc)
        hit = any(spec.contains(a * theta + b) for b in (b0 - 1, b0, b0 + 1))
        bits.append(int(hit))
    return bits


def extend_to_ideal(spec: ModelSetSpec, range_max: Optional[float] = None,
                    max_range: float = 1e4) -> tuple[FieldElement, FieldElement]:
    """Canonical basis of the O_K-module generated by the points of ``spec``.

    For a fractional ideal this is the ideal itself.  The range is doubled
    until the generated lattice stops growing and contains the points used.
    """
    if spec.is_lattice:
        raise InvalidInputError("extension map needs a field spec")
    F = spec.field
    R = range_max if range_max is not None else 4.0 / max(spec.density, 1e-300)
    R = max(R, 10.0)
    prev = None
    while R <= max_range:
        cloud = enumerate_points(spec, R)
        if len(cloud) >= 2:
            gens = []
            for alpha in cloud.elements:
                gens.append(alpha)
                gens.append(alpha * F.omega)
            basis = hnf_basis(gens)
            if basis == prev:
                return basis
            prev = basis
        R *= 2
    if prev is None:
        raise CompletenessError("no points found to generate the ideal")
    return prev
