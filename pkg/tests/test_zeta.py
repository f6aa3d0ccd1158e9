import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from ffmzv import (LaurentSeries, agrees, elliptic_curve, hyperelliptic_curve, make_field, mzv,
                   nonvanishing_certificate, power_sum, predicted_valuation, projective_line,
                   recheck_certificate, valuation_gap)
from ffmzv.curves import expand_at_infinity, monic_elements
from ffmzv.errors import BudgetExceeded, CutoffTooSmall, PrecisionEscalationFailed
from ffmzv.series import ls_add, ls_pow
from ffmzv.zeta import PrecisionPolicy, ZetaEngine


def test_power_sum_examples(p1_f3, e_f3):
    assert power_sum(p1_f3, 1, 1).observed_valuation == 3
    assert power_sum(e_f3, 1, 1).observed_valuation == 6
    for curve in (p1_f3, e_f3):
        res = power_sum(curve, 0, 7)
        assert res.observed_valuation == 0 and res.series.known_exact


def test_p1_degree_one_closed_form(p1_f3):
    # sum over c of 1/(theta + c) = -1/(theta^3 - theta) = -t^3 / (1 - t^2)
    got = power_sum(p1_f3, 1, 1).series
    F = p1_f3.field
    expected = LaurentSeries(F, 3, [(-1 if k % 2 == 0 else 0) for k in range(got.window)])
    assert agrees(got, expected)


def test_prediction_examples(p1_f3, e_f3):
    assert predicted_valuation(p1_f3, 1, 1) == 3
    assert predicted_valuation(e_f3, 1, 1) == 6
    for s in (1, 5, 40):
        assert predicted_valuation(projective_line(make_field(5)), 0, s) == 0
    assert valuation_gap(p1_f3, 1, 1) == -3
    assert valuation_gap(e_f3, 1, 1) == -6


GAP_CURVES = {
    "P1/F4": lambda: projective_line(make_field(2, 2)),
    "P1/F5": lambda: projective_line(make_field(5)),
    "E/F2": lambda: elliptic_curve(make_field(2), 0, 0, 1, 0, 0),
    "E/F3": lambda: elliptic_curve(make_field(3), 0, 0, 0, 2, 1),
    "E/F5": lambda: elliptic_curve(make_field(5), 0, 0, 0, 1, 1),
    "H/F2": lambda: hyperelliptic_curve(make_field(2), 2, [0, 0, 0, 0, 0, 1], [1]),
    "H/F3": lambda: hyperelliptic_curve(make_field(3), 2, [1, 2, 0, 0, 0, 1]),
    "H/F5": lambda: hyperelliptic_curve(make_field(5), 2, [1, 1, 0, 0, 0, 1]),
}


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(sorted(GAP_CURVES)), st.integers(1, 4), st.integers(1, 50))
def test_gap_two_ways(name, i, s):
    # valuation_gap itself asserts difference-of-predictions == closed form
    assert valuation_gap(GAP_CURVES[name](), i, s) < 0


def test_brute_force_matches_direct_expansion(e_f3):
    # the engine's power sum equals summing ls_pow(expand(a), -s) element by element
    eng = ZetaEngine(e_f3)
    res = eng.power_sum(2, 2)
    W = res.precision_used
    total = None
    for a in monic_elements(e_f3, 2):
        term = ls_pow(expand_at_infinity(e_f3, a, W), -2)
        total = term if total is None else ls_add(total, term)
    assert agrees(total, res.series)
    assert total.valuation() == res.observed_valuation


def test_mzv_examples(p1_f3, e_f3):
    assert mzv(p1_f3, (1,), 2).valuation == 0
    assert mzv(p1_f3, (2, 1), 3).valuation == 6
    res = mzv(e_f3, (1, 1), 3)
    assert res.valuation == 6 and res.weight == 2 and res.depth == 2
    with pytest.raises(CutoffTooSmall):
        mzv(p1_f3, (1, 1, 1), 1)


def test_mzv_chains_by_hand(p1_f3):
    eng = ZetaEngine(p1_f3)
    total = None
    for i1, i2 in itertools.combinations(range(3, -1, -1), 2):
        term = eng.power_sum(i1, 2).series * eng.power_sum(i2, 1).series
        total = term if total is None else total + term
    assert agrees(total, eng.mzv((2, 1), 3).series)


def test_degree_and_index_sums_agree_on_p1(p1_f3, e_f3):
    # on P1 every degree is a non-gap, so summing over degrees n <= N is the index sum
    eng = ZetaEngine(p1_f3)
    by_index = eng.mzv((1, 2), 3).series
    degrees = {eng.degree(i): i for i in range(4)}
    by_degree = None
    for n1, n2 in itertools.combinations(range(3, -1, -1), 2):
        term = eng.power_sum(degrees[n1], 1).series * eng.power_sum(degrees[n2], 2).series
        by_degree = term if by_degree is None else by_degree + term
    assert agrees(by_index, by_degree)
    # on an elliptic curve degree 1 is a gap: no monic element has a simple pole
    assert 1 not in ZetaEngine(e_f3).nongaps(5).terms


def test_certificate_examples(p1_f3, e_f2):
    cert = nonvanishing_certificate(p1_f3, (2, 1), 3)
    assert cert.verdict == "NONZERO" and cert.dominant_valuation == 6
    cert = nonvanishing_certificate(e_f2, (1, 1), 3)
    assert cert.verdict == "NONZERO"
    assert cert.dominant_valuation == power_sum(e_f2, 1, 1).observed_valuation
    cert = nonvanishing_certificate(e_f2, (4,), 0)
    assert cert.verdict == "NONZERO" and cert.dominant_valuation == 0


def test_certificate_serialisation_round_trip(e_f3, h_f3):
    for curve in (e_f3, h_f3):
        data = nonvanishing_certificate(curve, (2, 1), 3).to_dict()
        text = json.dumps(data, sort_keys=True)
        again = json.loads(text)
        for key in ("curve", "tuple", "condition_class", "table", "gaps",
                    "dominant_valuation", "verdict", "precision_used", "budget"):
            assert key in again
        assert recheck_certificate(again) == again["verdict"] == "NONZERO"


def test_tampered_certificate_is_falsified(p1_f3):
    data = nonvanishing_certificate(p1_f3, (1, 1), 2).to_dict()
    data["table"][2]["observed"] += 1
    assert recheck_certificate(data) == "FALSIFIED"


def test_neither_class_is_experimental(p1_f3):
    data = nonvanishing_certificate(p1_f3, (1,), 1).to_dict()
    data["condition_class"] = "Neither"
    assert recheck_certificate(data) == "EXPERIMENTAL"


def test_budget_and_escalation(p1_f3):
    eng = ZetaEngine(p1_f3, PrecisionPolicy(budget=26))
    with pytest.raises(BudgetExceeded):
        eng.power_sum(3, 1)
    # a window far too small with no room to grow is reported, not treated as zero
    eng = ZetaEngine(p1_f3, PrecisionPolicy(initial_window=1, max_doublings=0))
    with pytest.raises(PrecisionEscalationFailed):
        eng.power_sum(2, 1)
    # the same window with doublings allowed escalates to the right answer
    eng = ZetaEngine(p1_f3, PrecisionPolicy(initial_window=1, max_doublings=6))
    res = eng.power_sum(2, 1)
    assert res.observed_valuation == res.predicted_valuation


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("FFMZV_BUDGET", "5")
    assert PrecisionPolicy().budget == 5


def test_threads_give_identical_series(h_f3):
    serial = ZetaEngine(h_f3, PrecisionPolicy(threads=1)).power_sum(3, 2)
    threaded = ZetaEngine(h_f3, PrecisionPolicy(threads=4)).power_sum(3, 2)
    assert agrees(serial.series, threaded.series)
    assert serial.precision_used == threaded.precision_used


def test_genus_two_over_f2():
    H = hyperelliptic_curve(make_field(2), 2, [0, 0, 0, 0, 0, 1], [1])
    eng = ZetaEngine(H)
    for i in range(4):
        for s in range(1, 8):
            res = eng.power_sum(i, s)
            assert res.observed_valuation == res.predicted_valuation
