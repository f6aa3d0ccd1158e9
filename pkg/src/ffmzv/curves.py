"""Models of a curve C with a rational point at infinity.

Three shapes are supported, each with an explicit monomial basis of the ring
A of functions regular away from infinity:

* the projective line, A = F_q[theta], basis theta^i;
* an elliptic curve in general Weierstrass form, basis x^a and x^a y;
* an odd-degree hyperelliptic curve y^2 + h(x) y = f(x) of genus g >= 2,
  deg f = 2g+1, deg h <= g, basis x^a and x^a y.

Expansions at infinity use the uniformizer t = 1/theta, t = -x/y and
t = x^g/y respectively.  A function is monic when the leading coefficient of
its expansion in t is 1; the basis element xi_i is the sign-normalised
monomial of pole order d_i, so every xi_i expands as t^(-d_i) * (1 + O(t)).
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import (FieldMismatch, ParseError, PrecisionTooSmall,
                     SequenceTooShort, SingularCurve, UnsupportedModel)
from .field import FieldSpec, FqElement, enumerate_field, field_from_dict
from .series import (LaurentSeries, ls_pow, scale_array, trunc_inv, trunc_mul,
                     trunc_pow, unit_array)


# -- polynomials over F_q as little-endian lists of FqElement --

def _ptrim(a: list[FqElement]) -> list[FqElement]:
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def _pmul(a, b):
    if not a or not b:
        return []
    out = [a[0].field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def _padd(a, b):
    n = max(len(a), len(b))
    F = (a or b)[0].field
    a = list(a) + [F.zero] * (n - len(a))
    b = list(b) + [F.zero] * (n - len(b))
    return _ptrim([x + y for x, y in zip(a, b)])


def _pderiv(a):
    return _ptrim([c * k for k, c in enumerate(a)][1:])


def _pmod(a, b):
    a, b = _ptrim(a), _ptrim(b)
    inv = b[-1].inverse()
    while len(a) >= len(b):
        c = a[-1] * inv
        shift = len(a) - len(b)
        for k, bk in enumerate(b):
            a[shift + k] = a[shift + k] - c * bk
        a = _ptrim(a)
    return a


def _pgcd(a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pmod(a, b)
    return a


# -- condition classes and the non-gap sequence --

class ConditionClass(enum.Enum):
    A = "A"
    B = "B"
    A_AND_B = "A&B"
    NEITHER = "Neither"

    @property
    def satisfies_a(self) -> bool:
        return self in (ConditionClass.A, ConditionClass.A_AND_B)

    @property
    def satisfies_b(self) -> bool:
        return self in (ConditionClass.B, ConditionClass.A_AND_B)

    @property
    def certified(self) -> bool:
        return self is not ConditionClass.NEITHER


def pattern_a(g: int, length: int) -> list[int]:
    """Prefix of {0, g+1, g+2, ...}."""
    return [0] + [g + k for k in range(1, length)][:max(length - 1, 0)]


def pattern_b(g: int, length: int) -> list[int]:
    """Prefix of {0, 2, ..., 2g-2, 2g, 2g+1, 2g+2, ...}."""
    seq = [2 * k for k in range(g + 1)]
    nxt = 2 * g + 1
    while len(seq) < length:
        seq.append(nxt)
        nxt += 1
    return seq[:length]


@dataclass(frozen=True)
class NonGapSequence:
    terms: tuple[int, ...]
    genus: int
    condition_class: ConditionClass

    def __getitem__(self, j):
        return self.terms[j]

    def __len__(self):
        return len(self.terms)


def condition_class(terms: Sequence[int], genus: int) -> ConditionClass:
    """Classify a non-gap prefix against the two shapes covered by the valuation formula."""
    terms = list(terms)
    if len(terms) <= 2 * genus:
        raise SequenceTooShort(f"need more than {2 * genus} terms to classify genus {genus}")
    a = terms == pattern_a(genus, len(terms))
    b = terms == pattern_b(genus, len(terms))
    if a and b:
        return ConditionClass.A_AND_B
    if a:
        return ConditionClass.A
    if b:
        return ConditionClass.B
    return ConditionClass.NEITHER


# -- the curve model --

@dataclass(frozen=True, eq=False)
class CurveModel:
    field: FieldSpec
    kind: str                                  # "p1" | "elliptic" | "hyperelliptic"
    coeffs: tuple[FqElement, ...] = ()         # a1..a6 for elliptic
    genus: int = 0
    f: tuple[FqElement, ...] = ()              # hyperelliptic f, little-endian
    h: tuple[FqElement, ...] = ()              # hyperelliptic h, little-endian

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})
        if self.kind == "p1":
            object.__setattr__(self, "genus", 0)
        elif self.kind == "elliptic":
            object.__setattr__(self, "genus", 1)
            self._validate_elliptic()
        elif self.kind == "hyperelliptic":
            self._validate_hyperelliptic()
        else:
            raise UnsupportedModel(f"unknown curve shape {self.kind!r}")
        for c in (*self.coeffs, *self.f, *self.h):
            if c.field != self.field:
                raise FieldMismatch("curve coefficients must lie in the curve's field")

    def _validate_elliptic(self):
        if len(self.coeffs) != 5:
            raise UnsupportedModel("elliptic curves need [a1, a2, a3, a4, a6]")
        if self.discriminant().is_zero():
            raise SingularCurve("Weierstrass discriminant vanishes")

    def _validate_hyperelliptic(self):
        g = self.genus
        F = self.field
        f, h = _ptrim(self.f), _ptrim(self.h)
        if g < 2:
            raise UnsupportedModel("hyperelliptic models need genus >= 2")
        if len(f) != 2 * g + 2 or f[-1] != F.one:
            raise UnsupportedModel(f"f must be monic of degree {2 * g + 1}")
        if len(h) > g + 1:
            raise UnsupportedModel(f"h must have degree <= {g}")
        if F.p != 2:
            # (2y + h)^2 = 4f + h^2 is smooth iff the right side is squarefree
            rhs = _padd(_pmul([F.scalar(4)], f), _pmul(h, h))
            if len(_pgcd(rhs, _pderiv(rhs))) > 1:
                raise SingularCurve("4f + h^2 is not squarefree")
        else:
            if not h:
                raise SingularCurve("in characteristic 2 the model needs h != 0")
            df, dh = _pderiv(f), _pderiv(h)
            test = _padd(_pmul(df, df), _pmul(f, _pmul(dh, dh)))
            if len(_pgcd(h, test)) > 1:
                raise SingularCurve("affine singular point on y^2 + h y = f")

    def discriminant(self) -> FqElement:
        a1, a2, a3, a4, a6 = self.coeffs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    # -- identification and serialisation --

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def curve_id(self) -> str:
        F = f"GF({self.field.q})" if self.field.e == 1 else f"GF({self.field.p}^{self.field.e})"
        if self.kind == "p1":
            return f"P1/{F}"
        if self.kind == "elliptic":
            return f"E[{','.join(str(int(c)) for c in self.coeffs)}]/{F}"
        return (f"H{self.genus}[f={','.join(str(int(c)) for c in self.f)};"
                f"h={','.join(str(int(c)) for c in self.h)}]/{F}")

    def __repr__(self):
        return f"CurveModel({self.curve_id})"

    def to_dict(self) -> dict:
        if self.kind == "p1":
            shape = "p1"
        elif self.kind == "elliptic":
            shape = {"elliptic": [int(c) for c in self.coeffs]}
        else:
            shape = {"hyperelliptic": {"g": self.genus, "f": [int(c) for c in self.f],
                                       "h": [int(c) for c in self.h]}}
        return {"field": self.field.to_dict(), "shape": shape}

    # -- monomial basis --

    def _pole_orders(self) -> tuple[int, int]:
        """Pole orders of (x, y); theta plays the role of x on P1."""
        if self.kind == "p1":
            return 1, 0
        if self.kind == "elliptic":
            return 2, 3
        return 2, 2 * self.genus + 1

    def monomial_table(self, count: int) -> list[tuple[int, int, int]]:
        """First `count` entries (d, a, b) with x^a y^b of pole order d, sorted by d."""
        ox, oy = self._pole_orders()
        if self.kind == "p1":
            return [(a, a, 0) for a in range(count)]
        limit = ox * count + oy
        table = sorted((ox * a + oy * b, a, b) for b in (0, 1)
                       for a in range((limit - oy * b) // ox + 1) if ox * a + oy * b <= limit)
        orders = [d for d, _, _ in table]
        if len(set(orders)) != len(orders):
            raise UnsupportedModel("two basis monomials share a pole order")
        return table[:count]

    def unit_power(self, a: int, b: int) -> int:
        """k with xi = t^(-d) * X^k, X the unit part of x (constant term 1)."""
        if self.kind == "p1":
            return 0
        if self.kind == "elliptic":
            return a + b
        return a + self.genus * b

    def sign_constant(self, a: int, b: int) -> FqElement:
        """c such that xi = c * x^a y^b is monic."""
        if self.kind == "elliptic" and b % 2:
            return -self.field.one
        return self.field.one

    # -- expansions at infinity --

    def x_unit_array(self, window: int) -> np.ndarray:
        """Unit part X of x = t^(-2) X to relative precision `window` (ones array on P1)."""
        if window < 1:
            raise PrecisionTooSmall("window must be >= 1")
        cache = self._cache.setdefault("X", {})
        best = max((w for w in cache if w >= window), default=None)
        if best is not None:
            return cache[best][:window]
        if self.kind == "p1":
            arr = unit_array(self.field, window)
        elif self.kind == "elliptic":
            w = _solve_elliptic_w(self, window + 3)
            arr = trunc_inv(w[3:], self.field, window)
        else:
            u = _solve_hyperelliptic_u(self, window + 2)
            arr = trunc_inv(u[2:], self.field, window)
        arr.setflags(write=False)
        cache[window] = arr
        return arr

    def coordinate_expansions(self, window: int) -> tuple[LaurentSeries, LaurentSeries]:
        """(x, y) as Laurent series in t with relative precision `window`; (theta, 0) on P1."""
        F = self.field
        if self.kind == "p1":
            return LaurentSeries.monomial(F, -1), LaurentSeries.zero(F)
        X = self.x_unit_array(window)
        x = LaurentSeries(F, -2, X)
        if self.kind == "elliptic":
            y = LaurentSeries(F, -3, -X % F.p)
        else:
            g = self.genus
            y = LaurentSeries(F, -(2 * g + 1), trunc_pow(X, g, F, window))
        return x, y

    def basis_arrays(self, i: int, window: int) -> np.ndarray:
        """Expansions of xi_0..xi_i aligned at t^(-d_i): shape (i+1, window, e).

        Row j holds the coefficients of t^(-d_i) ... t^(-d_i+window-1) of xi_j.
        """
        key = (i, window)
        cache = self._cache.setdefault("basis", {})
        if key in cache:
            return cache[key]
        F = self.field
        table = self.monomial_table(i + 1)
        d_i = table[i][0]
        out = np.zeros((i + 1, window, F.e), dtype=np.int64)
        if self.kind == "p1":
            for j in range(i + 1):
                if d_i - j < window:
                    out[j, d_i - j, 0] = 1
        else:
            X = self.x_unit_array(window)
            powers = {}
            for j, (d, a, b) in enumerate(table):
                k = self.unit_power(a, b)
                if k not in powers:
                    powers[k] = trunc_pow(X, k, F, window)
                shift = d_i - d
                if shift < window:
                    out[j, shift:] = powers[k][:window - shift]
        out.setflags(write=False)
        cache[key] = out
        return out


def _horner(poly: Sequence[FqElement], S: np.ndarray, F: FieldSpec, n: int) -> np.ndarray:
    """poly(S) mod t^n for a power series array S."""
    acc = np.zeros((n, F.e), dtype=np.int64)
    for c in reversed(list(poly)):
        acc = trunc_mul(acc, S, F, n) if acc.any() else np.zeros((n, F.e), dtype=np.int64)
        acc = _pad_rows(acc, n)
        acc[0] = (acc[0] + np.array(c.coeffs)) % F.p
    return acc


def _pad_rows(A: np.ndarray, n: int) -> np.ndarray:
    if len(A) >= n:
        return A[:n].copy()
    out = np.zeros((n, A.shape[1]), dtype=np.int64)
    out[:len(A)] = A
    return out


def _shift(A: np.ndarray, k: int, n: int) -> np.ndarray:
    """t^k * A mod t^n."""
    out = np.zeros((n, A.shape[1]), dtype=np.int64)
    if k < n:
        take = min(len(A), n - k)
        out[k:k + take] = A[:take]
    return out


def _newton(residual, derivative, start: np.ndarray, correct: int, n: int, F: FieldSpec) -> np.ndarray:
    """Solve residual(S) = 0 mod t^n from `start`, known correct mod t^correct."""
    S = _pad_rows(start, n)
    k = correct
    while k < n:
        k = min(2 * k, n)
        Sk = S[:k]
        r = residual(Sk, k)
        dinv = trunc_inv(derivative(Sk, k), F, k)
        S = _pad_rows((Sk - trunc_mul(r, dinv, F, k)) % F.p, n)
    if residual(S, n).any():
        raise ArithmeticError("Newton iteration failed to converge")  # pragma: no cover
    return S


def _solve_elliptic_w(curve: CurveModel, n: int) -> np.ndarray:
    """w = -1/y as a power series in t = -x/y, mod t^n.

    w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3.
    """
    F = curve.field
    p = F.p
    a1, a2, a3, a4, a6 = curve.coeffs

    def sc(A, c):
        return scale_array(A, c) if not c.is_zero() else np.zeros_like(A)

    def residual(w, k):
        w2 = trunc_mul(w, w, F, k)
        w2 = _pad_rows(w2, k)
        w3 = _pad_rows(trunc_mul(w2, w, F, k), k)
        rhs = (_shift(unit_array(F, 1), 3, k) + sc(_shift(w, 1, k), a1) + sc(_shift(w, 2, k), a2)
               + sc(w2, a3) + sc(_shift(w2, 1, k), a4) + sc(w3, a6))
        return (w - rhs) % p

    def derivative(w, k):
        w2 = _pad_rows(trunc_mul(w, w, F, k), k)
        one = unit_array(F, k)
        d = (one - sc(_shift(one, 1, k), a1) - sc(_shift(one, 2, k), a2)
             - sc(w, 2 * a3) - sc(_shift(w, 1, k), 2 * a4) - sc(w2, 3 * a6))
        return d % p

    start = _shift(unit_array(F, 1), 3, 4)
    return _newton(residual, derivative, start, 4, n, F)


def _solve_hyperelliptic_u(curve: CurveModel, n: int) -> np.ndarray:
    """u = 1/x as a power series in t = x^g/y, mod t^n.

    Dividing the curve equation by x^(2g+1) gives u + t u h~(u) = t^2 f~(u),
    with f~(u) = u^(2g+1) f(1/u) and h~(u) = u^g h(1/u).
    """
    F = curve.field
    g = curve.genus
    ftil = list(reversed(list(curve.f)))
    hpad = list(curve.h) + [F.zero] * (g + 1 - len(curve.h))
    htil = list(reversed(hpad))
    dftil = [c * k for k, c in enumerate(ftil)][1:]
    dhtil = [c * k for k, c in enumerate(htil)][1:]

    def residual(u, k):
        hu = _horner(htil, u, F, k)
        fu = _horner(ftil, u, F, k)
        return (u + _shift(_pad_rows(trunc_mul(u, hu, F, k), k), 1, k) - _shift(fu, 2, k)) % F.p

    def derivative(u, k):
        hu = _horner(htil, u, F, k)
        dhu = _horner(dhtil, u, F, k) if dhtil else np.zeros((k, F.e), dtype=np.int64)
        dfu = _horner(dftil, u, F, k)
        return (unit_array(F, k) + _shift(hu, 1, k)
                + _shift(_pad_rows(trunc_mul(u, dhu, F, k), k), 1, k) - _shift(dfu, 2, k)) % F.p

    start = _shift(unit_array(F, 1), 2, 3)
    return _newton(residual, derivative, start, 3, n, F)


# -- constructors --

def projective_line(F: FieldSpec) -> CurveModel:
    return CurveModel(F, "p1")


def elliptic_curve(F: FieldSpec, a1=0, a2=0, a3=0, a4=0, a6=0) -> CurveModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 (ints are element indices)."""
    coeffs = tuple(F.element(c) for c in (a1, a2, a3, a4, a6))
    return CurveModel(F, "elliptic", coeffs)


def hyperelliptic_curve(F: FieldSpec, g: int, f: Sequence, h: Sequence = ()) -> CurveModel:
    """y^2 + h(x) y = f(x) with little-endian coefficient lists (ints are element indices)."""
    return CurveModel(F, "hyperelliptic", genus=g,
                      f=tuple(F.element(c) for c in f), h=tuple(F.element(c) for c in h))


def _element_of(F: FieldSpec, raw):
    if isinstance(raw, (list, tuple)):
        return F.element(raw)
    return F.element(int(raw))


def curve_from_dict(d: dict) -> CurveModel:
    try:
        F = field_from_dict(d["field"])
        shape = d["shape"]
        if shape == "p1":
            return projective_line(F)
        if "elliptic" in shape:
            return elliptic_curve(F, *[_element_of(F, c) for c in shape["elliptic"]])
        if "hyperelliptic" in shape:
            spec = shape["hyperelliptic"]
            return hyperelliptic_curve(F, int(spec["g"]), [_element_of(F, c) for c in spec["f"]],
                                       [_element_of(F, c) for c in spec.get("h", [])])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed curve description: {exc}") from exc
    raise ParseError(f"unknown curve shape {shape!r}")


def load_curve(path: str | Path) -> CurveModel:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read curve file {path}: {exc}") from exc
    return curve_from_dict(data)


# -- the curve-rings operations --

def nongap_sequence(curve: CurveModel, count: int) -> NonGapSequence:
    if count < 1:
        raise ValueError("count must be >= 1")
    terms = tuple(d for d, _, _ in curve.monomial_table(count))
    try:
        cls = condition_class(terms, curve.genus)
    except SequenceTooShort:
        longer = tuple(d for d, _, _ in curve.monomial_table(2 * curve.genus + 1))
        cls = condition_class(longer, curve.genus)
    return NonGapSequence(terms, curve.genus, cls)


@dataclass(frozen=True, eq=False)
class RingElement:
    """f_0 xi_0 + ... + f_i xi_i with f_i != 0."""

    curve: CurveModel
    coords: tuple[FqElement, ...]

    def __post_init__(self):
        if not self.coords or self.coords[-1].is_zero():
            raise ValueError("trailing coordinate must be non-zero")

    @property
    def index(self) -> int:
        return len(self.coords) - 1

    @property
    def degree(self) -> int:
        return self.curve.monomial_table(self.index + 1)[-1][0]

    @property
    def is_monic(self) -> bool:
        return self.coords[-1] == self.curve.field.one

    def expand(self, precision: int) -> LaurentSeries:
        return expand_at_infinity(self.curve, self, precision)

    def __eq__(self, other):
        return (isinstance(other, RingElement) and other.curve is self.curve
                and other.coords == self.coords)

    def __hash__(self):
        return hash((id(self.curve), self.coords))

    def __str__(self):
        names = [basis_name(self.curve, j) for j in range(len(self.coords))]
        terms = []
        for c, name in reversed(list(zip(self.coords, names))):
            if c.is_zero():
                continue
            cs = str(c)
            if name == "1":
                terms.append(cs)
            elif c == self.curve.field.one:
                terms.append(name)
            else:
                terms.append(f"({cs})*{name}" if "+" in cs else f"{cs}*{name}")
        return " + ".join(terms)


def basis_name(curve: CurveModel, j: int) -> str:
    d, a, b = curve.monomial_table(j + 1)[j]
    var = "theta" if curve.kind == "p1" else "x"
    parts = []
    if a:
        parts.append(var if a == 1 else f"{var}^{a}")
    if b:
        parts.append("y")
    mono = "*".join(parts) or "1"
    if not curve.sign_constant(a, b) == curve.field.one:
        mono = "-" + mono
    return mono


def basis_element(curve: CurveModel, i: int) -> RingElement:
    """The monic basis function xi_i of pole order d_i."""
    if i < 0:
        raise ValueError("i must be >= 0")
    F = curve.field
    return RingElement(curve, (F.zero,) * i + (F.one,))


def monic_element(curve: CurveModel, i: int, k: int) -> RingElement:
    """The k-th monic element of degree d_i; f_0 is the most significant digit of k."""
    F = curve.field
    q = F.q
    if not 0 <= k < q ** i:
        raise IndexError(f"monic element index {k} out of range for q^{i}")
    coords = []
    for _ in range(i):
        k, r = divmod(k, q)
        coords.append(F.element(r))
    return RingElement(curve, tuple(reversed(coords)) + (F.one,))


def monic_elements(curve: CurveModel, i: int) -> Iterator[RingElement]:
    """All q^i monic elements of degree d_i in lexicographic coefficient order."""
    if i < 0:
        raise ValueError("i must be >= 0")
    F = curve.field
    elems = enumerate_field(F)
    for fs in itertools.product(elems, repeat=i):
        yield RingElement(curve, tuple(fs) + (F.one,))


def expand_at_infinity(curve: CurveModel, elem: RingElement, precision: int) -> LaurentSeries:
    """Laurent expansion in t with `precision` coefficients starting at t^(-d_i)."""
    if precision < 1:
        raise PrecisionTooSmall("precision must be >= 1")
    if elem.curve is not curve:
        raise FieldMismatch("element belongs to a different curve")
    F = curve.field
    i = elem.index
    d_i = elem.degree
    if curve.kind == "p1":
        # a polynomial in theta = 1/t, known exactly
        coeffs = list(reversed(elem.coords))
        return LaurentSeries.exact(F, -d_i, coeffs)
    B = curve.basis_arrays(i, precision)
    arr = np.zeros((precision, F.e), dtype=np.int64)
    for j, c in enumerate(elem.coords):
        if not c.is_zero():
            arr += scale_array(B[j], c)
    return LaurentSeries(F, -d_i, arr % F.p)


def evaluate_curve_equation(curve: CurveModel, window: int) -> LaurentSeries:
    """Left minus right side of the curve equation at the expansions of x and y."""
    x, y = curve.coordinate_expansions(window)
    F = curve.field
    if curve.kind == "elliptic":
        a1, a2, a3, a4, a6 = curve.coeffs
        lhs = y * y + x * y * a1 + y * a3
        rhs = ls_pow(x, 3) + x * x * a2 + x * a4 + LaurentSeries.monomial(F, 0, a6)
        return lhs - rhs
    if curve.kind == "hyperelliptic":
        def poly(cs):
            acc = None
            for k, c in enumerate(cs):
                if c.is_zero():
                    continue
                term = ls_pow(x, k) * c if k else LaurentSeries.monomial(F, 0, c)
                acc = term if acc is None else acc + term
            return acc
        lhs = y * y
        hx = poly(curve.h)
        if hx is not None:
            lhs = lhs + hx * y
        return lhs - poly(curve.f)
    raise UnsupportedModel("the projective line has no defining equation")
