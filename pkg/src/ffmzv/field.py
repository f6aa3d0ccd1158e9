"""Exact arithmetic in the finite field F_q, q = p^e.

An element is stored as its coordinate vector (c_0, ..., c_{e-1}) in the power
basis 1, x, ..., x^{e-1}, where x is a root of the field's monic irreducible
modulus.  Elements are also addressed by the integer index c_0 + c_1 p + ...,
which gives the deterministic enumeration order [0, 1, x, x+1, ...].

Field elements carry their FieldSpec; there is no global field registry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (DegreeMismatch, DivisionByZero, FieldMismatch,
                     FieldTooLarge, NotIrreducible, NotPrime)

MAX_DEGREE = 8


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power q into (p, e).  Raises NotPrime otherwise."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = next(f for f in itertools.count(2) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NotPrime(f"{q} is not a prime power")
    return p, e


# -- polynomials over F_p as little-endian int lists (only used for the modulus) --

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for k, bk in enumerate(b):
            a[shift + k] = (a[shift + k] - c * bk) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterable[list[int]]:
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible_mod_p(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    e = len(poly) - 1
    for d in range(1, e // 2 + 1):
        for g in _monic_polys(p, d):
            if not _polymod_p(poly, g, p):
                return False
    return True


def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """The first monic irreducible of degree e in enumeration order."""
    if e == 1:
        return (0, 1)
    for poly in _monic_polys(p, e):
        if poly[0] != 0 and is_irreducible_mod_p(poly, p):
            return tuple(poly)
    raise NotIrreducible(f"no irreducible polynomial of degree {e} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"p={self.p} is not prime")
        if self.e < 1:
            raise DegreeMismatch(f"extension degree must be >= 1, got {self.e}")
        if self.e > MAX_DEGREE:
            raise FieldTooLarge(f"extension degree {self.e} exceeds limit {MAX_DEGREE}")
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.e + 1 or mod[-1] != 1:
            raise DegreeMismatch(f"modulus must be monic of degree {self.e}: {list(self.modulus)}")
        if not is_irreducible_mod_p(mod, self.p):
            raise NotIrreducible(f"modulus {list(mod)} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p ** self.e

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e}, modulus={list(self.modulus)})"

    # -- element construction --

    def element(self, value) -> "FqElement":
        """Coerce an index (int), coefficient sequence or FqElement."""
        if isinstance(value, FqElement):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if not 0 <= value < self.q:
                raise ValueError(f"element index {value} out of range for q={self.q}")
            coeffs = []
            for _ in range(self.e):
                value, c = divmod(value, self.p)
                coeffs.append(c)
            return FqElement(self, tuple(coeffs))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.e:
            raise DegreeMismatch(f"too many coordinates for degree {self.e}: {list(value)}")
        coeffs += [0] * (self.e - len(coeffs))
        return FqElement(self, tuple(coeffs))

    def scalar(self, c: int) -> "FqElement":
        """The image of the integer c under Z -> F_p -> F_q."""
        return FqElement(self, (c % self.p,) + (0,) * (self.e - 1))

    @cached_property
    def zero(self) -> "FqElement":
        return self.scalar(0)

    @cached_property
    def one(self) -> "FqElement":
        return self.scalar(1)

    @cached_property
    def gen(self) -> "FqElement":
        """The class of x (equal to the residue of 0 when e == 1 and modulus is x)."""
        if self.e == 1:
            return self.scalar(-self.modulus[0])
        return self.element([0, 1])

    # -- linear-algebra tables used by the series kernel --

    @cached_property
    def reduction_matrix(self) -> np.ndarray:
        """R with coords(x^n) = R[:, n] for 0 <= n <= 2e-2."""
        e, p = self.e, self.p
        R = np.zeros((e, 2 * e - 1), dtype=np.int64)
        cur = [0] * e
        cur[0] = 1
        for n in range(2 * e - 1):
            R[:, n] = cur
            # multiply by x and reduce with x^e = -sum(m_k x^k)
            top = cur[-1]
            cur = [0] + cur[:-1]
            for k in range(e):
                cur[k] = (cur[k] - top * self.modulus[k]) % p
        return R

    @cached_property
    def frobenius_matrix(self) -> np.ndarray:
        """F with coords(c^p) = F @ coords(c)."""
        F = np.zeros((self.e, self.e), dtype=np.int64)
        for k in range(self.e):
            basis = [0] * self.e
            basis[k] = 1
            F[:, k] = (self.element(basis) ** self.p).coeffs
        return F

    def mult_matrix(self, a: "FqElement") -> np.ndarray:
        """M with coords(a*b) = M @ coords(b)."""
        M = np.zeros((self.e, self.e), dtype=np.int64)
        for k in range(self.e):
            basis = [0] * self.e
            basis[k] = 1
            M[:, k] = (a * self.element(basis)).coeffs
        return M

    def to_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}


def make_field(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Validated FieldSpec for F_{p^e}.

    For e == 1 the modulus defaults to x; for e > 1 a missing modulus is
    replaced by the first irreducible polynomial in enumeration order.
    """
    if not is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    if e > MAX_DEGREE:
        raise FieldTooLarge(f"extension degree {e} exceeds limit {MAX_DEGREE}")
    if modulus is None:
        if e < 1:
            raise DegreeMismatch(f"extension degree must be >= 1, got {e}")
        modulus = default_modulus(p, e)
    return FieldSpec(p, e, tuple(modulus))


def field_of_order(q: int) -> FieldSpec:
    p, e = prime_power(q)
    return make_field(p, e)


def field_from_dict(d: dict) -> FieldSpec:
    return make_field(int(d["p"]), int(d.get("e", 1)), d.get("modulus"))


@dataclass(frozen=True)
class FqElement:
    field: FieldSpec = dc_field(repr=False)
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.e:
            raise DegreeMismatch(f"expected {self.field.e} coordinates, got {self.coeffs}")

    def _other(self, b) -> "FqElement":
        if isinstance(b, FqElement):
            if b.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {b.field!r}")
            return b
        if isinstance(b, (int, np.integer)):
            return self.field.scalar(int(b))
        return NotImplemented

    def __add__(self, b):
        b = self._other(b)
        if b is NotImplemented:
            return b
        p = self.field.p
        return FqElement(self.field, tuple((x + y) % p for x, y in zip(self.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FqElement(self.field, tuple(-x % p for x in self.coeffs))

    def __sub__(self, b):
        b = self._other(b)
        if b is NotImplemented:
            return b
        return self + (-b)

    def __rsub__(self, b):
        return -self + b

    def __mul__(self, b):
        b = self._other(b)
        if b is NotImplemented:
            return b
        F = self.field
        if F.e == 1:
            return FqElement(F, ((self.coeffs[0] * b.coeffs[0]) % F.p,))
        raw = [0] * (2 * F.e - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    raw[i + j] += x * y
        R = F.reduction_matrix
        out = tuple(int(sum(int(R[k, n]) * raw[n] for n in range(len(raw))) % F.p)
                    for k in range(F.e))
        return FqElement(F, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FqElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in " + repr(self.field))
        return self ** (self.field.q - 2)

    def __truediv__(self, b):
        b = self._other(b)
        if b is NotImplemented:
            return b
        return self * b.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __int__(self):
        return sum(c * self.field.p ** k for k, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"FqElement({self})"

    def __str__(self):
        if self.field.e == 1:
            return str(self.coeffs[0])
        terms = []
        for k, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"


def _check_same(a: FqElement, b: FqElement) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")


def fq_add(a: FqElement, b: FqElement) -> FqElement:
    _check_same(a, b)
    return a + b


def fq_sub(a: FqElement, b: FqElement) -> FqElement:
    _check_same(a, b)
    return a - b


def fq_mul(a: FqElement, b: FqElement) -> FqElement:
    _check_same(a, b)
    return a * b


def fq_neg(a: FqElement) -> FqElement:
    return -a


def fq_inv(a: FqElement) -> FqElement:
    return a.inverse()


def enumerate_field(F: FieldSpec) -> list[FqElement]:
    """All q elements, 0 first, in index order."""
    return [F.element(k) for k in range(F.q)]


def character_power_sum(F: FieldSpec, m: int) -> FqElement:
    """Sum of f^m over f in F_q (with 0^0 = 1): -1 iff m is a positive multiple of q-1."""
    if m < 0:
        raise ValueError("exponent must be non-negative")
    if m > 0 and m % (F.q - 1) == 0:
        return -F.one
    return F.zero


def literal_power_sum(F: FieldSpec, m: int) -> FqElement:
    """Direct summation of f^m over the field, 0^0 = 1."""
    total = F.zero
    for f in enumerate_field(F):
        total = total + f ** m
    return total
