"""Truncated Laurent series over F_q with explicit precision windows.

A LaurentSeries stands for

    c_0 t^lead + c_1 t^(lead+1) + ... + c_{W-1} t^(lead+W-1) + O(t^(lead+W))

with every coefficient below `lead` exactly zero.  A series flagged
`known_exact` has no error term; its window is simply all of its non-zero
support.  Operations return the largest window they can prove and never pad
beyond it, so an all-zero window is reported as indeterminate rather than
being mistaken for zero.

Coefficients live in an int64 array of shape (W, e): row k holds the power
basis coordinates of c_k.  The `trunc_*` functions below operate on such
arrays directly and are shared with the curve expansions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.fft

from .errors import EmptyWindow, FieldMismatch, NotInvertible, PrecisionTooSmall
from .field import FieldSpec, FqElement

# below this length the direct O(nm) convolution beats the FFT
_DIRECT_CUTOFF = 48
# FFT products are exact while every raw convolution entry stays far below 2^53
_FFT_EXACT_LIMIT = 2 ** 40


def _direct_conv(A: np.ndarray, B: np.ndarray, n_out: int, e: int) -> np.ndarray:
    raw = np.zeros((n_out, 2 * e - 1), dtype=np.int64)
    for j in range(e):
        a = A[:, j]
        if not a.any():
            continue
        for k in range(e):
            b = B[:, k]
            if b.any():
                c = np.convolve(a, b)[:n_out]
                raw[:len(c), j + k] += c
    return raw


def _fft_conv(A: np.ndarray, B: np.ndarray, n_out: int, e: int) -> np.ndarray:
    size = scipy.fft.next_fast_len(len(A) + len(B) - 1, real=True)
    FA = scipy.fft.rfft(A.astype(np.float64), size, axis=0)
    FB = scipy.fft.rfft(B.astype(np.float64), size, axis=0)
    if e == 1:
        prod = FA * FB
    else:
        prod = np.zeros((FA.shape[0], 2 * e - 1), dtype=np.complex128)
        for j in range(e):
            for k in range(e):
                prod[:, j + k] += FA[:, j] * FB[:, k]
    raw = scipy.fft.irfft(prod, size, axis=0)[:n_out]
    return np.rint(raw).astype(np.int64)


def trunc_mul(A: np.ndarray, B: np.ndarray, F: FieldSpec, n_out: int) -> np.ndarray:
    """First n_out coefficients of the product of two coefficient arrays."""
    n_out = max(0, min(n_out, len(A) + len(B) - 1))
    e, p = F.e, F.p
    if n_out == 0 or len(A) == 0 or len(B) == 0:
        return np.zeros((n_out, e), dtype=np.int64)
    A = A[:n_out]
    B = B[:n_out]
    bound = min(len(A), len(B)) * e * (p - 1) ** 2
    if min(len(A), len(B)) <= _DIRECT_CUTOFF or bound > _FFT_EXACT_LIMIT:
        raw = _direct_conv(A, B, n_out, e)
    else:
        raw = _fft_conv(A, B, n_out, e)
    out = np.zeros((n_out, e), dtype=np.int64)
    raw %= p
    if e == 1:
        out[:len(raw)] = raw
    else:
        out[:len(raw)] = raw @ F.reduction_matrix.T % p
    return out


def unit_array(F: FieldSpec, n: int) -> np.ndarray:
    out = np.zeros((n, F.e), dtype=np.int64)
    if n:
        out[0, 0] = 1
    return out


def scale_array(A: np.ndarray, c: FqElement) -> np.ndarray:
    F = c.field
    if F.e == 1:
        return A * c.coeffs[0] % F.p
    return A @ F.mult_matrix(c).T % F.p


def trunc_inv(A: np.ndarray, F: FieldSpec, n: int) -> np.ndarray:
    """Inverse of a power series with invertible constant term, mod t^n (Newton)."""
    c0 = F.element(A[0].tolist())
    if c0.is_zero():
        raise NotInvertible("constant term is zero")
    g = np.array([c0.inverse().coeffs], dtype=np.int64)
    k = 1
    while k < n:
        k = min(2 * k, n)
        err = -trunc_mul(A, g, F, k) % F.p       # -(A g) = (1 - A g) - 1
        err[0, 0] = (err[0, 0] + 1) % F.p
        corr = trunc_mul(g, err, F, k)
        g_new = corr
        g_new[:len(g)] = (g_new[:len(g)] + g) % F.p
        g = g_new
    return g[:n]


def frobenius_array(A: np.ndarray, F: FieldSpec, n_out: int | None = None) -> np.ndarray:
    """Coefficients of (sum c_k t^k)^p = sum c_k^p t^(pk), optionally truncated."""
    p = F.p
    mapped = A if F.e == 1 else A @ F.frobenius_matrix.T % p
    full = (len(A) - 1) * p + 1 if len(A) else 0
    n_out = full if n_out is None else min(n_out, full)
    out = np.zeros((n_out, F.e), dtype=np.int64)
    take = -(-n_out // p)
    out[::p] = mapped[:take]
    return out


def trunc_pow(A: np.ndarray, n: int, F: FieldSpec, n_out: int) -> np.ndarray:
    """A^n mod t^n_out for n >= 0.

    The exponent is split into base-p digits; A^(d p^l) is the l-fold
    Frobenius image of A^d, and each A^d uses square-and-multiply.
    """
    p = F.p
    result = unit_array(F, min(n_out, 1) if n == 0 else n_out)
    if n == 0:
        return result
    cur = A[:n_out]
    first = True
    while n:
        n, d = divmod(n, p)
        if d:
            power = None
            base = cur
            while d:
                if d & 1:
                    power = base if power is None else trunc_mul(power, base, F, n_out)
                d >>= 1
                if d:
                    base = trunc_mul(base, base, F, n_out)
            result = power if first else trunc_mul(result, power, F, n_out)
            first = False
        if n:
            cur = frobenius_array(cur, F, n_out)
    return result


def _pad(A: np.ndarray, n: int) -> np.ndarray:
    if len(A) >= n:
        return A[:n]
    out = np.zeros((n, A.shape[1]), dtype=np.int64)
    out[:len(A)] = A
    return out


def _coerce(field: FieldSpec, c) -> FqElement:
    # plain ints are residues mod p over a prime field, element indices otherwise
    if isinstance(c, (int, np.integer)) and field.e == 1:
        return field.scalar(int(c))
    return field.element(c)


@dataclass(frozen=True)
class IndeterminateBeyond:
    """Valuation of an all-zero window: only known to be >= bound."""

    bound: int

    def __str__(self):
        return f">= {self.bound} (indeterminate)"


class LaurentSeries:
    __slots__ = ("field", "lead", "_c", "known_exact")

    def __init__(self, field: FieldSpec, lead: int, coeffs, known_exact: bool = False):
        self.field = field
        self.lead = int(lead)
        if isinstance(coeffs, np.ndarray):
            arr = np.asarray(coeffs, dtype=np.int64).reshape(-1, field.e) % field.p
        else:
            arr = np.array([_coerce(field, c).coeffs for c in coeffs],
                           dtype=np.int64).reshape(-1, field.e)
        arr.setflags(write=False)
        self._c = arr
        self.known_exact = bool(known_exact)
        if not known_exact and len(arr) == 0:
            raise PrecisionTooSmall("an inexact series needs a window of at least one coefficient")

    # -- constructors --

    @classmethod
    def exact(cls, field: FieldSpec, lead: int, coeffs) -> "LaurentSeries":
        return cls(field, lead, coeffs, known_exact=True)._normalized()

    @classmethod
    def monomial(cls, field: FieldSpec, exponent: int, c=1) -> "LaurentSeries":
        return cls.exact(field, exponent, [_coerce(field, c)])

    @classmethod
    def one(cls, field: FieldSpec) -> "LaurentSeries":
        return cls.monomial(field, 0, 1)

    @classmethod
    def zero(cls, field: FieldSpec, lead: int = 0, window: int | None = None) -> "LaurentSeries":
        if window is None:
            return cls(field, lead, np.zeros((0, field.e), dtype=np.int64), known_exact=True)
        return cls(field, lead, np.zeros((window, field.e), dtype=np.int64))

    # -- basic accessors --

    @property
    def window(self) -> int:
        return len(self._c)

    @property
    def upper(self) -> float:
        """Exponent of the error term; inf for exact series."""
        return math.inf if self.known_exact else self.lead + len(self._c)

    @property
    def array(self) -> np.ndarray:
        return self._c

    @property
    def coeffs(self) -> list[FqElement]:
        return [FqElement(self.field, tuple(int(v) for v in row)) for row in self._c]

    def coefficient(self, exponent: int) -> FqElement:
        if exponent < self.lead:
            return self.field.zero
        k = exponent - self.lead
        if k < len(self._c):
            return FqElement(self.field, tuple(int(v) for v in self._c[k]))
        if self.known_exact:
            return self.field.zero
        raise EmptyWindow(f"coefficient of t^{exponent} lies beyond the precision O(t^{self.upper})")

    def _first_nonzero(self) -> int | None:
        nz = np.flatnonzero(self._c.any(axis=1))
        return int(nz[0]) if len(nz) else None

    def valuation(self):
        k = self._first_nonzero()
        if k is not None:
            return self.lead + k
        if self.known_exact:
            return math.inf
        return IndeterminateBeyond(self.lead + len(self._c))

    def leading_coefficient(self) -> FqElement:
        k = self._first_nonzero()
        if k is None:
            raise NotInvertible("no non-zero coefficient within the window")
        return FqElement(self.field, tuple(int(v) for v in self._c[k]))

    def _normalized(self) -> "LaurentSeries":
        """Shift lead to the first non-zero coefficient; trim exact tails."""
        k = self._first_nonzero()
        if k is None:
            if self.known_exact and len(self._c):
                return LaurentSeries.zero(self.field)
            return self
        arr = self._c[k:]
        if self.known_exact:
            nz = np.flatnonzero(arr.any(axis=1))
            arr = arr[:nz[-1] + 1]
        if k == 0 and len(arr) == len(self._c):
            return self
        return LaurentSeries(self.field, self.lead + k, arr, self.known_exact)

    def truncate(self, upper: int) -> "LaurentSeries":
        """Forget everything from t^upper on (never extends the window)."""
        if upper >= self.upper:
            return self
        n = upper - self.lead
        if n <= 0:
            raise EmptyWindow(f"truncation at {upper} leaves nothing above lead {self.lead}")
        return LaurentSeries(self.field, self.lead, _pad(self._c, n))

    def with_window(self, window: int) -> "LaurentSeries":
        """Inexact copy holding exactly `window` coefficients from lead."""
        if window < 1:
            raise PrecisionTooSmall("window must be >= 1")
        if not self.known_exact and window > len(self._c):
            raise EmptyWindow("cannot extend a window beyond its proven precision")
        return LaurentSeries(self.field, self.lead, _pad(self._c, window))

    # -- operators --

    def _check(self, other: "LaurentSeries") -> None:
        if not isinstance(other, LaurentSeries):
            raise TypeError(f"expected LaurentSeries, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other):
        return ls_add(self, other)

    def __sub__(self, other):
        return ls_add(self, ls_neg(other))

    def __neg__(self):
        return ls_neg(self)

    def __mul__(self, other):
        if isinstance(other, (FqElement, int)):
            return ls_scale(self, other)
        return ls_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return ls_pow(self, n)

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __str__(self):
        terms = []
        for k, row in enumerate(self._c):
            if row.any():
                c = FqElement(self.field, tuple(int(v) for v in row))
                cs = str(c)
                if self.field.e > 1 and "+" in cs:
                    cs = f"({cs})"
                terms.append(f"{cs}*t^{self.lead + k}")
        if not self.known_exact:
            terms.append(f"O(t^{self.upper})")
        return " + ".join(terms) if terms else "0"


def ls_neg(a: LaurentSeries) -> LaurentSeries:
    return LaurentSeries(a.field, a.lead, -a.array % a.field.p, a.known_exact)


def ls_scale(a: LaurentSeries, c) -> LaurentSeries:
    c = a.field.scalar(c) if isinstance(c, int) else c
    if c.field != a.field:
        raise FieldMismatch(f"{a.field!r} vs {c.field!r}")
    return LaurentSeries(a.field, a.lead, scale_array(a.array, c), a.known_exact)


def ls_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Coefficient-wise sum on the intersection of the two precision windows."""
    a._check(b)
    lead = min(a.lead, b.lead)
    upper = min(a.upper, b.upper)
    exact = a.known_exact and b.known_exact
    if exact:
        top = max(a.lead + a.window, b.lead + b.window)
    else:
        top = upper
        if top <= lead:
            raise EmptyWindow("the operands share no precision window")
    n = int(top - lead)
    out = np.zeros((max(n, 0), a.field.e), dtype=np.int64)
    for s in (a, b):
        off = s.lead - lead
        take = max(0, min(s.window, n - off))
        if take:
            out[off:off + take] += s.array[:take]
    out %= a.field.p
    res = LaurentSeries(a.field, lead, out, exact)
    return res._normalized() if exact else res


def ls_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Cauchy product truncated to the window it can prove.

    With A, B the known parts and O(t^ua), O(t^ub) the error terms, the
    product is AB + O(t^min(v(A)+ub, v(B)+ua)).
    """
    a._check(b)
    F = a.field
    a, b = a._normalized(), b._normalized()
    lead = a.lead + b.lead
    if a.known_exact and b.known_exact:
        if not a.window or not b.window:
            return LaurentSeries.zero(F)
        return LaurentSeries(F, lead, trunc_mul(a.array, b.array, F, a.window + b.window - 1), True)
    upper = min(a.lead + b.upper, b.lead + a.upper)
    n = int(upper - lead)
    if n <= 0:
        raise EmptyWindow("product has no provable coefficients")
    prod = _pad(trunc_mul(a.array, b.array, F, n), n)
    return LaurentSeries(F, lead, prod)


def ls_inv(a: LaurentSeries, precision: int | None = None) -> LaurentSeries:
    """1/a.  Relative precision is preserved; exact non-monomial input needs `precision`."""
    F = a.field
    a = a._normalized()
    if a.valuation() == math.inf or isinstance(a.valuation(), IndeterminateBeyond):
        raise NotInvertible("leading coefficient is zero within the window")
    if a.known_exact and a.window == 1:
        c = a.leading_coefficient().inverse()
        return LaurentSeries.monomial(F, -a.lead, c)
    if a.known_exact:
        if precision is None:
            raise PrecisionTooSmall("inverting an exact polynomial needs an explicit precision")
        n = precision
    else:
        n = a.window if precision is None else min(precision, a.window)
    if n < 1:
        raise PrecisionTooSmall("precision must be >= 1")
    return LaurentSeries(F, -a.lead, trunc_inv(_pad(a.array, n), F, n))


def ls_pow(a: LaurentSeries, n: int, precision: int | None = None) -> LaurentSeries:
    """a^n for any integer n; negative n goes through ls_inv."""
    F = a.field
    if n == 0:
        return LaurentSeries.one(F)
    if n < 0:
        return ls_pow(ls_inv(a, precision), -n)
    a = a._normalized()
    v = a.valuation()
    if isinstance(v, IndeterminateBeyond):
        # a = O(t^U) gives a^n = O(t^(nU))
        return LaurentSeries.zero(F, n * a.lead, n * a.window)
    if a.known_exact:
        if a.window == 1:
            return LaurentSeries.monomial(F, n * a.lead, a.leading_coefficient() ** n)
        if precision is None:
            full = n * (a.window - 1) + 1
            return LaurentSeries(F, n * a.lead, trunc_pow(a.array, n, F, full), True)._normalized()
        w = precision
    else:
        w = a.window if precision is None else min(precision, a.window)
    return LaurentSeries(F, n * a.lead, trunc_pow(_pad(a.array, w), n, F, w))


def ls_frobenius(a: LaurentSeries) -> LaurentSeries:
    """a^p computed coefficient-wise; the error term O(t^U) becomes O(t^(pU))."""
    F = a.field
    arr = frobenius_array(a.array, F)
    if a.known_exact:
        return LaurentSeries(F, F.p * a.lead, arr, True)
    return LaurentSeries(F, F.p * a.lead, _pad(arr, F.p * a.window))


def ls_valuation(a: LaurentSeries):
    return a.valuation()


def agrees(a: LaurentSeries, b: LaurentSeries) -> bool:
    """True iff a and b have identical coefficients on their common window."""
    a._check(b)
    lo = min(a.lead, b.lead)
    hi = min(a.upper, b.upper)
    if hi == math.inf:
        hi = max(a.lead + a.window, b.lead + b.window)
    n = int(hi - lo)
    if n <= 0:
        return True

    def dense(s):
        out = np.zeros((n, s.field.e), dtype=np.int64)
        off = s.lead - lo
        take = max(0, min(s.window, n - off))
        if take:
            out[off:off + take] = s.array[:take]
        return out

    return bool(np.array_equal(dense(a), dense(b)))


def series_from_elements(field: FieldSpec, lead: int, coeffs: Sequence, exact: bool = False) -> LaurentSeries:
    return LaurentSeries(field, lead, list(coeffs), exact)
