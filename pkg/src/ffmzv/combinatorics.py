"""Base-p digit arithmetic, carry-free sums, Lucas' criterion and the G-sequence.

All integers are Python ints (arbitrary precision).
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BadBase, BudgetExceeded, LengthMismatch
from .field import prime_power

DEFAULT_SEARCH_CAP = 5_000_000


@dataclass(frozen=True)
class DigitVector:
    """Little-endian digits without trailing zeros; [] is zero."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise BadBase(f"base must be >= 2, got {self.base}")
        if any(not 0 <= d < self.base for d in self.digits):
            raise ValueError(f"digits out of range for base {self.base}: {self.digits}")
        if self.digits and self.digits[-1] == 0:
            raise ValueError("trailing zero digit")

    def __int__(self):
        return from_digits(self.digits, self.base)

    def __str__(self):
        return format_base(int(self), self.base)


def to_digits(n: int, base: int) -> DigitVector:
    if base < 2:
        raise BadBase(f"base must be >= 2, got {base}")
    if n < 0:
        raise ValueError("only non-negative integers have digit vectors")
    out = []
    while n:
        n, d = divmod(n, base)
        out.append(d)
    return DigitVector(base, tuple(out))


def from_digits(digits: Sequence[int], base: int) -> int:
    if base < 2:
        raise BadBase(f"base must be >= 2, got {base}")
    n = 0
    for d in reversed(digits):
        n = n * base + d
    return n


def digit_sum(n: int, base: int) -> int:
    return sum(to_digits(n, base).digits)


def format_base(n: int, base: int) -> str:
    """Render n as '<digits>_(<base>)', e.g. 18 in base 7 -> '24_(7)'."""
    if base > 10:
        raise BadBase("base-annotated literals are only rendered for base <= 10")
    digits = to_digits(n, base).digits or (0,)
    return "".join(str(d) for d in reversed(digits)) + f"_({base})"


def parse_int(text: str) -> int:
    """Parse '223413@7', '24_(7)' or a plain decimal literal."""
    text = text.strip()
    if "@" in text:
        body, base = text.split("@", 1)
    elif text.endswith(")") and "_(" in text:
        body, base = text[:-1].split("_(", 1)
    else:
        return int(text)
    base = int(base)
    if base < 2:
        raise BadBase(f"base must be >= 2, got {base}")
    if base > 10:
        raise BadBase("base-annotated literals use decimal digit symbols, base <= 10")
    digits = [int(ch) for ch in reversed(body)]
    if any(d >= base for d in digits):
        raise ValueError(f"digit out of range in {text!r}")
    return from_digits(digits, base)


# -- carries and Lucas --

def carry_free(terms: Sequence[int], p: int) -> bool:
    """True iff adding the terms in base p never carries."""
    terms = [int(t) for t in terms]
    while any(terms):
        col = 0
        nxt = []
        for t in terms:
            t, d = divmod(t, p)
            col += d
            nxt.append(t)
        if col > p - 1:
            return False
        terms = nxt
    return True


@lru_cache(maxsize=None)
def _factorials_mod(p: int) -> tuple[int, ...]:
    return tuple(math.factorial(k) % p for k in range(p))


def multinomial_mod_p(n: int, parts: Sequence[int], p: int) -> int:
    """n!/prod(parts!) mod p as a product of digit-wise multinomials (Lucas)."""
    if sum(parts) != n or any(m < 0 for m in parts):
        return 0
    fact = _factorials_mod(p)
    value = 1
    n = int(n)
    parts = [int(m) for m in parts]
    while n or any(parts):
        n, nl = divmod(n, p)
        col = 0
        denom = 1
        for j, m in enumerate(parts):
            parts[j], d = divmod(m, p)
            col += d
            denom = denom * fact[d] % p
        if col != nl:
            return 0
        value = value * fact[nl] * pow(denom, -1, p) % p
    return value


def multinomial_mod_p_factorial(n: int, parts: Sequence[int], p: int) -> int:
    """Oracle: exact big-integer multinomial reduced mod p."""
    if sum(parts) != n or any(m < 0 for m in parts):
        return 0
    value = math.factorial(n)
    for m in parts:
        value //= math.factorial(m)
    return value % p


def multinomial_nonzero_mod_p(n: int, parts: Sequence[int], p: int) -> bool:
    if sum(parts) != n or any(m < 0 for m in parts):
        return False
    return carry_free(parts, p)


def signed_binomial(s: int, y: int, p: int) -> int:
    """binom(-s, y) mod p, computed as (-1)^y binom(y+s-1, y)."""
    return (-1) ** y * multinomial_mod_p(y + s - 1, [y, s - 1], p) % p


TABLE_LIMIT = 1 << 16


@lru_cache(maxsize=None)
def _digit_tables(p: int, limit: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-integer digit sum, digit-factorial product and its inverse, for 0 <= k < limit."""
    fact = _factorials_mod(p)
    inv = [pow(f, -1, p) for f in fact]
    dsum = np.zeros(limit, dtype=np.int32)
    dfac = np.ones(limit, dtype=np.int32)
    dinv = np.ones(limit, dtype=np.int32)
    for k in range(1, limit):
        hi, lo = divmod(k, p)
        dsum[k] = dsum[hi] + lo
        dfac[k] = dfac[hi] * fact[lo] % p
        dinv[k] = dinv[hi] * inv[lo] % p
    return dsum, dfac, dinv


def _small(arrays, limit=TABLE_LIMIT) -> bool:
    return all(a.size == 0 or (a.min() >= 0 and a.max() < limit) for a in arrays)


def multinomial_mod_p_batch(n: np.ndarray, parts: Sequence[np.ndarray], p: int) -> np.ndarray:
    """Vectorised Lucas product over arrays of equal shape.

    The result is 0 wherever a part sum differs from n.  Inputs below
    TABLE_LIMIT use per-integer digit tables: with no carries the Lucas
    product factors as dfac(n) * prod dinv(m_j), and a carry shows up as a
    drop in total digit sum.
    """
    n = np.asarray(n, dtype=np.int64)
    parts = [np.asarray(m, dtype=np.int64) for m in parts]
    valid = sum(parts) == n
    if _small([n, *parts]):
        dsum, dfac, dinv = _digit_tables(p, TABLE_LIMIT)
        # reduce once at the end when the raw product cannot overflow
        lazy = (p - 1) ** (len(parts) + 1) < 2 ** 62
        value = dfac[n].astype(np.int64)
        col = dsum[n].astype(np.int32)
        for m in parts:
            value = value * dinv[m]
            if not lazy:
                value %= p
            col -= dsum[m]
        value %= p
        value[~(valid & (col == 0))] = 0
        return value
    fact = np.array(_factorials_mod(p), dtype=np.int64)
    inv_fact = np.array([pow(int(f), -1, p) for f in fact], dtype=np.int64)
    value = valid.astype(np.int64)
    rest_n = n.copy()
    rest = [m.copy() for m in parts]
    while np.any(rest_n):
        nl = rest_n % p
        rest_n //= p
        col = np.zeros_like(nl)
        for j in range(len(rest)):
            d = rest[j] % p
            rest[j] //= p
            col += d
            value = value * inv_fact[d] % p
        value = np.where(col == nl, value * fact[nl] % p, 0)
    return value


def carry_free_batch(parts: Sequence[np.ndarray], p: int) -> np.ndarray:
    """Carry check over arrays of equal shape (column by column for large inputs)."""
    rest = [np.asarray(m, dtype=np.int64) for m in parts]
    if _small(rest, TABLE_LIMIT // max(1, len(rest))):
        dsum = _digit_tables(p, TABLE_LIMIT)[0]
        return dsum[sum(rest)] == sum(dsum[m] for m in rest)
    rest = [m.copy() for m in rest]
    ok = np.ones(rest[0].shape, dtype=bool)
    while any(np.any(r) for r in rest):
        col = np.zeros(rest[0].shape, dtype=np.int64)
        for j in range(len(rest)):
            col += rest[j] % p
            rest[j] //= p
        ok &= col <= p - 1
    return ok


# -- the G-sequence --

@dataclass(frozen=True)
class GSequence:
    q: int
    s: int
    terms: tuple[int, ...]

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    def partial_sum(self, j: int | None = None) -> int:
        """(s-1) + G_0 + ... + G_{j-1}; all terms when j is None."""
        return self.s - 1 + sum(self.terms[:j])

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, j):
        return self.terms[j]


def _next_carry_free_multiple(acc: int, step: int, p: int) -> int:
    """Smallest positive multiple m of step with acc + m carry-free base p."""
    m = step
    while True:
        # lowest colliding digit position, if any
        a, b, l = acc, m, 0
        collide = None
        while a and b:
            if a % p + b % p > p - 1:
                collide = l
                break
            a //= p
            b //= p
            l += 1
        if collide is None:
            return m
        # every number sharing m's digits above `collide` and having a digit at
        # `collide` at least m's also collides, so jump past that block
        block = p ** (collide + 1)
        m = (m // block + 1) * block
        m = -(-m // step) * step


def g_sequence(s: int, q: int, count: int) -> GSequence:
    """Greedy minimal multiples of q-1 keeping (s-1)+G_0+...+G_j carry-free base p."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    if count < 0:
        raise ValueError("count must be non-negative")
    p, _ = prime_power(q)
    acc = s - 1
    terms = []
    for _ in range(count):
        g = _next_carry_free_multiple(acc, q - 1, p)
        terms.append(g)
        acc += g
    return GSequence(q, s, tuple(terms))


# -- weighted sums --

def weighted_sum(nongaps: Sequence[int], parts: Sequence[int]) -> int:
    """(d_i-d_0) m_0 + ... + (d_i-d_{i-1}) m_{i-1} for nongaps d_0..d_i."""
    if len(nongaps) != len(parts) + 1:
        raise LengthMismatch(f"need {len(parts) + 1} non-gaps for {len(parts)} parts, got {len(nongaps)}")
    top = nongaps[-1]
    return sum((top - d) * m for d, m in zip(nongaps, parts))


def weighted_sum_p1(parts: Sequence[int]) -> int:
    """Weighted sum for the projective line, i m_0 + (i-1) m_1 + ... + m_{i-1}."""
    return weighted_sum(range(len(parts) + 1), parts)


# -- admissible tuples and the minimality check --

@dataclass(frozen=True)
class AdmissibleTuple:
    s: int
    q: int
    parts: tuple[int, ...]

    def is_admissible(self) -> bool:
        p, _ = prime_power(self.q)
        return (all(m > 0 and m % (self.q - 1) == 0 for m in self.parts)
                and carry_free([self.s - 1, *self.parts], p))


@dataclass
class SheatsReport:
    s: int
    q: int
    i: int
    strategy: str
    g_terms: tuple[int, ...]
    ws_g: int
    checked: int
    violations: list[tuple[int, ...]] = field(default_factory=list)
    min_gap: int | None = None
    median_gap: float | None = None
    bound: int | None = None
    samples: int | None = None
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "s": self.s, "q": self.q, "i": self.i, "strategy": self.strategy,
            "g_terms": list(self.g_terms), "ws_g": self.ws_g, "checked": self.checked,
            "violations": [list(v) for v in self.violations],
            "min_gap": self.min_gap, "median_gap": self.median_gap,
            "bound": self.bound, "samples": self.samples, "seed": self.seed,
        }


def _exhaustive_tuples(s: int, q: int, i: int, bound: int, ws_cap: int | None = None):
    """Yield admissible tuples with every part <= bound (and WS_P1 <= ws_cap if given).

    Parts are placed in order m_0, m_1, ...; the P1 weights i, i-1, ... are
    positive so a partial weighted sum above ws_cap prunes the branch.
    """
    if ws_cap is None:
        ws_cap = math.inf
    p, _ = prime_power(q)
    step = q - 1

    def rec(j, acc, ws, prefix):
        if j == i:
            yield tuple(prefix)
            return
        weight = i - j
        m = step
        while m <= bound and ws + weight * m <= ws_cap:
            if carry_free([acc, m], p):
                prefix.append(m)
                yield from rec(j + 1, acc + m, ws + weight * m, prefix)
                prefix.pop()
            m += step

    yield from rec(0, s - 1, 0, [])


def _sampled_tuple(rng: random.Random, s: int, q: int, i: int, positions: int):
    """Distribute a random carry-free digit budget over i parts, position by position."""
    p, _ = prime_power(q)
    base_digits = list(to_digits(s - 1, p).digits) + [0] * positions
    parts = [0] * i
    for l in range(positions):
        room = p - 1 - base_digits[l]
        budget = rng.randint(0, room)
        # random composition of `budget` into i non-negative pieces
        cuts = sorted(rng.randint(0, budget) for _ in range(i - 1))
        pieces = [b - a for a, b in zip([0] + cuts, cuts + [budget])]
        for j, d in enumerate(pieces):
            parts[j] += d * p ** l
    return tuple(parts)


def sheats_minimality_check(s: int, q: int, i: int, strategy: str = "exhaustive", *,
                            bound: int | None = None, samples: int = 1000,
                            seed: int = 0, prune: bool = False,
                            cap: int = DEFAULT_SEARCH_CAP) -> SheatsReport:
    """Search for admissible tuples whose P1 weighted sum does not exceed that of G.

    Strategy "exhaustive" walks every admissible tuple with parts <= bound
    (default 2*max(G)*p).  With prune=True, branches whose weighted sum
    already exceeds WS(G) are cut, which cannot hide a violation but leaves
    the gap statistics covering only the surviving tuples.  Strategy
    "sampled" draws `samples` admissible tuples with a seeded generator.
    An empty violation list means G is strictly minimal within the search.
    """
    if i < 1:
        raise ValueError("i must be >= 1")
    p, _ = prime_power(q)
    g = g_sequence(s, q, i)
    ws_g = weighted_sum_p1(g.terms)
    violations: list[tuple[int, ...]] = []
    gaps: list[int] = []

    if strategy == "exhaustive":
        if bound is None:
            bound = 2 * max(g.terms) * p
        per_coord = bound // (q - 1)
        if per_coord ** i > cap:
            raise BudgetExceeded(f"search space {per_coord}^{i} exceeds cap {cap}")
        ceiling = ws_g if prune else None
        checked = 0
        for m in _exhaustive_tuples(s, q, i, bound, ceiling):
            checked += 1
            if m == g.terms:
                continue
            gap = weighted_sum_p1(m) - ws_g
            gaps.append(gap)
            if gap <= 0:
                violations.append(m)
        report = SheatsReport(s, q, i, strategy, g.terms, ws_g, checked, violations, bound=bound)
    elif strategy == "sampled":
        rng = random.Random(seed)
        positions = len(to_digits(max(g.terms) * p, p).digits) + 1
        checked = attempts = 0
        while checked < samples:
            attempts += 1
            if attempts > cap:
                raise BudgetExceeded(f"sampler needed more than {cap} attempts")
            m = _sampled_tuple(rng, s, q, i, positions)
            if not AdmissibleTuple(s, q, m).is_admissible():
                continue
            checked += 1
            if m == g.terms:
                continue
            gap = weighted_sum_p1(m) - ws_g
            gaps.append(gap)
            if gap <= 0:
                violations.append(m)
        report = SheatsReport(s, q, i, strategy, g.terms, ws_g, checked, violations,
                              samples=samples, seed=seed)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    if gaps:
        report.min_gap = min(gaps)
        report.median_gap = statistics.median(gaps)
    return report
