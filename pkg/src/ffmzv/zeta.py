"""Power sums, valuation predictions, truncated multiple zeta values and certificates.

Power sums are computed by brute force: every monic element of degree d_i is
expanded at infinity and a^(-s) is accumulated as a truncated Laurent series.
Precision escalation only looks at the observed series, never at the
predicted valuation, so the comparison between the two stays independent.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .combinatorics import GSequence, g_sequence, weighted_sum
from .curves import ConditionClass, CurveModel, NonGapSequence, nongap_sequence
from .errors import (BudgetExceeded, CutoffTooSmall,
                     PrecisionEscalationFailed)
from .series import (IndeterminateBeyond, LaurentSeries, ls_add, ls_mul,
                     scale_array, trunc_inv, trunc_pow)

DEFAULT_BUDGET = 2 ** 20
BUDGET_ENV = "FFMZV_BUDGET"


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class PrecisionPolicy:
    """How windows are chosen and escalated.

    initial_window=None uses d_i*s + 2(q-1)*d_i*i + 16 for S_{d_i}(s); each
    failed attempt doubles the window, at most max_doublings times.
    """

    initial_window: int | None = None
    max_doublings: int = 8
    budget: int = field(default_factory=default_budget)
    threads: int = 1


@dataclass
class PowerSumResult:
    curve_id: str
    i: int
    d_i: int
    s: int
    series: LaurentSeries
    observed_valuation: int
    predicted_valuation: int
    precision_used: int
    condition_class: ConditionClass

    @property
    def matches(self) -> bool:
        return self.observed_valuation == self.predicted_valuation

    def to_dict(self) -> dict:
        return {"curve": self.curve_id, "i": self.i, "d_i": self.d_i, "s": self.s,
                "observed": self.observed_valuation, "predicted": self.predicted_valuation,
                "precision_used": self.precision_used,
                "condition_class": self.condition_class.value,
                "series": str(self.series)}


@dataclass
class MZVResult:
    tuple: tuple[int, ...]
    cutoff: int
    series: LaurentSeries
    valuation: int
    precision_used: int

    @property
    def depth(self) -> int:
        return len(self.tuple)

    @property
    def weight(self) -> int:
        return sum(self.tuple)

    def to_dict(self) -> dict:
        return {"tuple": list(self.tuple), "depth": self.depth, "weight": self.weight,
                "cutoff": self.cutoff, "valuation": self.valuation,
                "precision_used": self.precision_used, "series": str(self.series)}


@dataclass
class NonvanishingCertificate:
    curve: dict
    curve_id: str
    tuple: tuple[int, ...]
    cutoff: int
    condition_class: ConditionClass
    nongaps: tuple[int, ...]
    g_sequences: dict[int, tuple[int, ...]]
    table: list[dict]
    gaps: list[dict]
    dominant_chain: tuple[int, ...]
    dominant_valuation: int
    mzv_valuation: int
    checks: dict[str, bool]
    failures: list[dict]
    verdict: str
    precision_used: int
    budget: int

    def to_dict(self) -> dict:
        return {
            "curve": self.curve, "curve_id": self.curve_id, "tuple": list(self.tuple),
            "cutoff": self.cutoff, "condition_class": self.condition_class.value,
            "nongaps": list(self.nongaps),
            "g_sequences": {str(s): list(g) for s, g in sorted(self.g_sequences.items())},
            "table": self.table, "gaps": self.gaps,
            "dominant_chain": list(self.dominant_chain),
            "dominant_valuation": self.dominant_valuation,
            "mzv_valuation": self.mzv_valuation, "checks": self.checks,
            "failures": self.failures, "verdict": self.verdict,
            "precision_used": self.precision_used, "budget": self.budget,
        }


class ZetaEngine:
    """Memoising front end for one curve and one precision policy."""

    def __init__(self, curve: CurveModel, policy: PrecisionPolicy | None = None):
        self.curve = curve
        self.policy = policy or PrecisionPolicy()
        self._sums: dict[tuple[int, int], PowerSumResult] = {}
        self._nongaps: NonGapSequence | None = None

    # -- curve data --

    def nongaps(self, count: int) -> NonGapSequence:
        if self._nongaps is None or len(self._nongaps) < count:
            self._nongaps = nongap_sequence(self.curve, max(count, 2 * self.curve.genus + 2))
        return self._nongaps

    def degree(self, i: int) -> int:
        return self.nongaps(i + 1)[i]

    @property
    def condition(self) -> ConditionClass:
        return self.nongaps(1).condition_class

    # -- predictions --

    def predicted_valuation(self, i: int, s: int) -> int:
        d = self.nongaps(i + 1).terms[:i + 1]
        g = g_sequence(s, self.curve.q, i)
        return d[i] * s + weighted_sum(d, g.terms)

    def valuation_gap(self, i: int, s: int) -> int:
        if i < 1:
            raise ValueError("the gap needs i >= 1")
        gap = self.predicted_valuation(i - 1, s) - self.predicted_valuation(i, s)
        closed = valuation_gap_closed_form(self.nongaps(i + 1).terms, g_sequence(s, self.curve.q, i), i)
        if gap != closed:
            raise ArithmeticError(f"gap identity broken at i={i}, s={s}: {gap} != {closed}")  # pragma: no cover
        return gap

    # -- brute-force power sums --

    def _initial_window(self, i: int, s: int) -> int:
        if self.policy.initial_window is not None:
            return self.policy.initial_window
        d_i = self.degree(i)
        return d_i * s + 2 * (self.curve.q - 1) * d_i * i + 16

    def power_sum_series(self, i: int, s: int, window: int) -> LaurentSeries:
        """Sum of a^(-s) over the q^i monic a of degree d_i, `window` coefficients from t^(d_i s)."""
        curve = self.curve
        F = curve.field
        q = F.q
        if q ** i > self.policy.budget:
            raise BudgetExceeded(f"q^i = {q}^{i} monic elements exceeds the budget {self.policy.budget}")
        if i == 0:
            return LaurentSeries.one(F)
        d_i = self.degree(i)
        B = curve.basis_arrays(i, window)
        elems = [F.element(k) for k in range(q)]
        # scaled[j][k] = elems[k] * xi_j, aligned at t^(-d_i)
        scaled = [[scale_array(B[j], c) for c in elems] for j in range(i)]
        top = B[i]

        def chunk(rng):
            acc = np.zeros((window, F.e), dtype=np.int64)
            for k in rng:
                u = top.copy()
                rest = k
                for j in range(i - 1, -1, -1):
                    rest, r = divmod(rest, q)
                    if r:
                        u += scaled[j][r]
                u %= F.p
                acc += trunc_pow(trunc_inv(u, F, window), s, F, window)
                acc %= F.p
            return acc

        total_count = q ** i
        threads = max(1, min(self.policy.threads, total_count))
        if threads == 1:
            total = chunk(range(total_count))
        else:
            bounds = np.linspace(0, total_count, threads + 1).astype(int)
            ranges = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:])]
            with ThreadPoolExecutor(threads) as pool:
                total = sum(pool.map(chunk, ranges)) % F.p
        return LaurentSeries(F, d_i * s, total)

    def power_sum(self, i: int, s: int, min_window: int | None = None) -> PowerSumResult:
        if i < 0 or s < 1:
            raise ValueError("need i >= 0 and s >= 1")
        key = (i, s)
        cached = self._sums.get(key)
        if cached is not None and (min_window is None or cached.precision_used >= min_window):
            return cached
        window = max(self._initial_window(i, s), min_window or 0)
        for _ in range(self.policy.max_doublings + 1):
            series = self.power_sum_series(i, s, window)
            v = series.valuation()
            if not isinstance(v, IndeterminateBeyond):
                result = PowerSumResult(self.curve.curve_id, i, self.degree(i), s, series, v,
                                        self.predicted_valuation(i, s), window, self.condition)
                self._sums[key] = result
                return result
            window *= 2
        raise PrecisionEscalationFailed(
            f"S_{{d_{i}}}({s}) vanished through O(t^{v.bound}) after "
            f"{self.policy.max_doublings} doublings")

    # -- multiple zeta values --

    def mzv(self, s_tuple: Sequence[int], cutoff: int) -> MZVResult:
        s_tuple = tuple(int(s) for s in s_tuple)
        r = len(s_tuple)
        if r < 1 or any(s < 1 for s in s_tuple):
            raise ValueError("the tuple must hold at least one positive integer")
        if cutoff < r - 1:
            raise CutoffTooSmall(f"cutoff {cutoff} < depth-1 = {r - 1}")
        min_window: int | None = None
        for _ in range(self.policy.max_doublings + 1):
            sums = {}
            for j, s in enumerate(s_tuple):
                for i in range(r - 1 - j, cutoff - j + 1):
                    sums[(i, s)] = self.power_sum(i, s, min_window)
            total = None
            for chain in itertools.combinations(range(cutoff, -1, -1), r):
                term = sums[(chain[0], s_tuple[0])].series
                for i, s in zip(chain[1:], s_tuple[1:]):
                    term = ls_mul(term, sums[(i, s)].series)
                total = term if total is None else ls_add(total, term)
            v = total.valuation()
            used = max(res.precision_used for res in sums.values())
            if not isinstance(v, IndeterminateBeyond):
                return MZVResult(s_tuple, cutoff, total, v, used)
            min_window = 2 * used
        raise PrecisionEscalationFailed(f"zeta{s_tuple} vanished through O(t^{v.bound})")

    def certificate(self, s_tuple: Sequence[int], cutoff: int) -> NonvanishingCertificate:
        s_tuple = tuple(int(s) for s in s_tuple)
        r = len(s_tuple)
        if cutoff < r - 1:
            raise CutoffTooSmall(f"cutoff {cutoff} < depth-1 = {r - 1}")
        seq = self.nongaps(cutoff + 1)
        d = seq.terms[:cutoff + 1]
        cls = seq.condition_class
        table, gaps, failures = [], [], []
        observed: dict[tuple[int, int], int] = {}
        g_seqs: dict[int, tuple[int, ...]] = {}
        used = 0
        for s in dict.fromkeys(s_tuple):
            g = g_sequence(s, self.curve.q, cutoff)
            g_seqs[s] = g.terms
            for i in range(cutoff + 1):
                res = self.power_sum(i, s)
                used = max(used, res.precision_used)
                observed[(i, s)] = res.observed_valuation
                row = {"i": i, "d_i": d[i], "s_j": s, "predicted": res.predicted_valuation,
                       "observed": res.observed_valuation}
                table.append(row)
                if not res.matches:
                    failures.append({"check": "observed_equals_predicted", **row})
            for i in range(1, cutoff + 1):
                obs_gap = observed[(i - 1, s)] - observed[(i, s)]
                closed = valuation_gap_closed_form(d, g, i)
                entry = {"s_j": s, "i": i, "observed_gap": obs_gap, "closed_form": closed}
                gaps.append(entry)
                if obs_gap >= 0:
                    failures.append({"check": "strict_increase", **entry})
        chain = tuple(range(r - 1, -1, -1))
        dominant = sum(observed[(i, s)] for i, s in zip(chain, s_tuple))
        value = self.mzv(s_tuple, cutoff)
        used = max(used, value.precision_used)
        if value.valuation != dominant:
            failures.append({"check": "mzv_equals_dominant", "mzv_valuation": value.valuation,
                             "dominant_valuation": dominant})
        checks = {
            "strict_increase": not any(f["check"] == "strict_increase" for f in failures),
            "observed_equals_predicted": not any(f["check"] == "observed_equals_predicted" for f in failures),
            "mzv_equals_dominant": value.valuation == dominant,
        }
        verdict = derive_verdict(cls, checks)
        return NonvanishingCertificate(
            self.curve.to_dict(), self.curve.curve_id, s_tuple, cutoff, cls, d, g_seqs,
            table, gaps, chain, dominant, value.valuation, checks, failures, verdict,
            used, self.policy.budget)


def derive_verdict(cls: ConditionClass, checks: dict[str, bool]) -> str:
    if not cls.certified:
        return "EXPERIMENTAL"
    return "NONZERO" if all(checks.values()) else "FALSIFIED"


def valuation_gap_closed_form(nongaps: Sequence[int], g: GSequence | Sequence[int], i: int) -> int:
    """(d_{i-1} - d_i)(s + G_0 + ... + G_{i-1})."""
    terms = g.terms if isinstance(g, GSequence) else tuple(g)
    s = g.s if isinstance(g, GSequence) else None
    if s is None:
        raise TypeError("closed form needs the GSequence (it carries s)")
    return (nongaps[i - 1] - nongaps[i]) * (s + sum(terms[:i]))


def recheck_certificate(data: dict) -> str:
    """Re-derive a serialised certificate's verdict from its own tables."""
    d = data["nongaps"]
    rows = {(row["i"], row["s_j"]): row for row in data["table"]}
    checks = {"strict_increase": True, "observed_equals_predicted": True,
              "mzv_equals_dominant": True}
    for (i, s), row in rows.items():
        g = data["g_sequences"][str(s)]
        if row["predicted"] != d[i] * s + weighted_sum(d[:i + 1], g[:i]):
            checks["observed_equals_predicted"] = False
        if row["observed"] != row["predicted"]:
            checks["observed_equals_predicted"] = False
        if i >= 1 and rows[(i - 1, s)]["observed"] >= row["observed"]:
            checks["strict_increase"] = False
    s_tuple = data["tuple"]
    r = len(s_tuple)
    dominant = sum(rows[(r - 1 - j, s)]["observed"] for j, s in enumerate(s_tuple))
    if dominant != data["dominant_valuation"] or data["mzv_valuation"] != dominant:
        checks["mzv_equals_dominant"] = False
    return derive_verdict(ConditionClass(data["condition_class"]), checks)


# -- module-level entry points sharing one engine per (curve, policy) --

def engine_for(curve: CurveModel, policy: PrecisionPolicy | None = None) -> ZetaEngine:
    policy = policy or PrecisionPolicy()
    engines = curve._cache.setdefault("engines", {})
    if policy not in engines:
        engines[policy] = ZetaEngine(curve, policy)
    return engines[policy]


def power_sum(curve: CurveModel, i: int, s: int, policy: PrecisionPolicy | None = None) -> PowerSumResult:
    return engine_for(curve, policy).power_sum(i, s)


def predicted_valuation(curve: CurveModel, i: int, s: int) -> int:
    return engine_for(curve).predicted_valuation(i, s)


def valuation_gap(curve: CurveModel, i: int, s: int) -> int:
    return engine_for(curve).valuation_gap(i, s)


def mzv(curve: CurveModel, s_tuple: Sequence[int], cutoff: int,
        policy: PrecisionPolicy | None = None) -> MZVResult:
    return engine_for(curve, policy).mzv(s_tuple, cutoff)


def nonvanishing_certificate(curve: CurveModel, s_tuple: Sequence[int], cutoff: int,
                             policy: PrecisionPolicy | None = None) -> NonvanishingCertificate:
    return engine_for(curve, policy).certificate(s_tuple, cutoff)
