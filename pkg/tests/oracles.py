"""Independent reference implementations used to cross-check the library.

Nothing here imports the series or curve code; everything is plain Python
integers or numpy index arithmetic.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def p1_power_sum_coeffs(p: int, d: int, s: int, window: int) -> list[int]:
    """Coefficients of t^(ds), ..., t^(ds+window-1) in sum over monic a of degree d of a^(-s).

    Works over F_p[theta] with t = 1/theta.  Writing a = theta^d * A(t) with
    A = 1 + c_{d-1} t + ... + c_0 t^d, one has a^(-s) = t^(ds) * (A^s)^(-1);
    A^s is a polynomial and its inverse comes from long division.
    """
    total = [0] * window
    for tail in itertools.product(range(p), repeat=d):
        A = [1] + list(reversed(tail))          # coefficients of 1, t, ..., t^d
        As = [1]
        for _ in range(s):
            nxt = [0] * (len(As) + len(A) - 1)
            for i, x in enumerate(As):
                if x:
                    for j, y in enumerate(A):
                        nxt[i + j] = (nxt[i + j] + x * y) % p
            As = nxt
        inv = [0] * window
        for k in range(window):
            acc = 1 if k == 0 else 0
            for j in range(1, min(k, len(As) - 1) + 1):
                acc -= As[j] * inv[k - j]
            inv[k] = acc % p
        total = [(u + v) % p for u, v in zip(total, inv)]
    return total


def binomial_table(limit: int, p: int) -> np.ndarray:
    """Flattened table of binom(n, k) mod p for 0 <= n, k <= limit, from exact integers."""
    return np.array([[math.comb(n, k) % p for k in range(limit + 1)]
                     for n in range(limit + 1)], dtype=np.int64).ravel()


def multinomial_via_binomials(table: np.ndarray, limit: int, n: np.ndarray, parts, p: int) -> np.ndarray:
    """n!/prod(m!) mod p as a chain of exact binomials binom(n, m1) binom(n-m1, m2) ..."""
    value = np.ones(np.shape(n), dtype=np.int64)
    rest = np.asarray(n, dtype=np.int64)
    for m in parts[:-1]:
        value = value * table[rest * (limit + 1) + m]
        rest = rest - m
    return value % p


def compositions(k: int, n_max: int) -> np.ndarray:
    """All positive k-tuples with sum <= n_max, one row per tuple, sorted by sum."""
    if k == 1:
        return np.arange(1, n_max + 1, dtype=np.int64)[:, None]
    prev = compositions(k - 1, n_max - 1)
    sums = prev.sum(1)
    rows = []
    for last in range(1, n_max - k + 2):
        keep = prev[sums <= n_max - last]
        rows.append(np.column_stack([keep, np.full(len(keep), last)]))
    out = np.concatenate(rows)
    return out[np.argsort(out.sum(1), kind="stable")]


def brute_g_sequence(s: int, q: int, count: int) -> list[int]:
    """Greedy carry-free multiples by plain linear scan."""
    p = min(f for f in range(2, q + 1) if q % f == 0)

    def carry_free(a, b):
        while a or b:
            if a % p + b % p >= p:
                return False
            a, b = a // p, b // p
        return True

    acc, out = s - 1, []
    for _ in range(count):
        m = q - 1
        while not carry_free(acc, m):
            m += q - 1
        out.append(m)
        acc += m
    return out
