import json

import pytest

from ffmzv import (ConditionClass, condition_class, elliptic_curve, expand_at_infinity,
                   hyperelliptic_curve, load_curve, make_field, monic_elements, nongap_sequence,
                   projective_line)
from ffmzv.curves import (basis_element, basis_name, curve_from_dict, evaluate_curve_equation,
                          monic_element)
from ffmzv.errors import (ParseError, PrecisionTooSmall, SequenceTooShort, SingularCurve,
                          UnsupportedModel)


def test_nongap_examples(p1_f3, e_f3, h_f3):
    assert nongap_sequence(p1_f3, 4).terms == (0, 1, 2, 3)
    assert nongap_sequence(e_f3, 4).terms == (0, 2, 3, 4)
    assert nongap_sequence(h_f3, 6).terms == (0, 2, 4, 5, 6, 7)


def test_condition_classes(p1_f3, e_f3, h_f3):
    assert condition_class((0, 1, 2, 3), 0).satisfies_a
    assert condition_class((0, 2, 3, 4), 1) is ConditionClass.A_AND_B
    assert condition_class((0, 2, 4, 5, 6), 2) is ConditionClass.B
    assert condition_class((0, 4, 5, 6, 7, 8, 9), 3) is ConditionClass.A
    assert condition_class((0, 3, 5, 6, 7, 8, 9), 3) is ConditionClass.NEITHER
    with pytest.raises(SequenceTooShort):
        condition_class((0, 2, 4), 2)
    assert nongap_sequence(h_f3, 2).condition_class is ConditionClass.B
    assert nongap_sequence(e_f3, 2).condition_class.certified


def test_genus_three_is_class_b():
    H = hyperelliptic_curve(make_field(7), 3, [1, 0, 0, 0, 0, 0, 3, 1])
    seq = nongap_sequence(H, 8)
    assert seq.terms == (0, 2, 4, 6, 7, 8, 9, 10)
    assert seq.condition_class is ConditionClass.B


def test_basis_examples(p1_f3, e_f3, h_f3):
    assert basis_name(p1_f3, 2) == "theta^2"
    assert basis_element(e_f3, 1).degree == 2 and basis_name(e_f3, 1) == "x"
    assert basis_element(h_f3, 2).degree == 4 and basis_name(h_f3, 2) == "x^2"


def test_monic_elements(p1_f3, e_f2):
    assert [str(a) for a in monic_elements(p1_f3, 1)] == ["theta", "theta + 1", "theta + 2"]
    assert [str(a) for a in monic_elements(e_f2, 0)] == ["1"]
    elems = list(monic_elements(e_f2, 2))
    assert len(elems) == 4 and all(a.degree == 3 for a in elems)
    assert [str(a) for a in elems] == [str(monic_element(e_f2, 2, k)) for k in range(4)]


def test_expansions(p1_f3, e_f3):
    theta = basis_element(p1_f3, 1)
    s = expand_at_infinity(p1_f3, theta, 5)
    assert s.known_exact and s.valuation() == -1 and len(s.coeffs) == 1
    x = expand_at_infinity(e_f3, basis_element(e_f3, 1), 6)
    assert x.valuation() == -2 and x.leading_coefficient() == e_f3.field.one
    y = expand_at_infinity(e_f3, basis_element(e_f3, 2), 6)
    assert y.valuation() == -3 and y.leading_coefficient() == e_f3.field.one
    with pytest.raises(PrecisionTooSmall):
        expand_at_infinity(e_f3, basis_element(e_f3, 1), 0)


CURVES = [
    ("E/F3", lambda: elliptic_curve(make_field(3), 0, 0, 0, 2, 1)),
    ("E/F2", lambda: elliptic_curve(make_field(2), 0, 0, 1, 0, 0)),
    ("E/F4", lambda: elliptic_curve(make_field(2, 2), 1, 0, 0, 0, 1)),
    ("E/F5 a1a3", lambda: elliptic_curve(make_field(5), 1, 2, 3, 1, 1)),
    ("H/F3", lambda: hyperelliptic_curve(make_field(3), 2, [1, 2, 0, 0, 0, 1])),
    ("H/F5", lambda: hyperelliptic_curve(make_field(5), 2, [1, 1, 0, 0, 0, 1])),
    ("H/F2", lambda: hyperelliptic_curve(make_field(2), 2, [0, 0, 0, 0, 0, 1], [1])),
    ("H/F9", lambda: hyperelliptic_curve(make_field(3, 2), 2, [1, 0, 0, 0, 0, 1], [0, 1])),
    ("H3/F7", lambda: hyperelliptic_curve(make_field(7), 3, [1, 0, 0, 0, 0, 0, 3, 1])),
]


@pytest.mark.parametrize("name,build", CURVES, ids=[c[0] for c in CURVES])
def test_expansions_satisfy_curve_equation(name, build):
    curve = build()
    residual = evaluate_curve_equation(curve, 60)
    assert not residual.array.any()
    assert residual.window > 20


def test_singular_models_rejected():
    with pytest.raises(SingularCurve):
        elliptic_curve(make_field(3), 0, 0, 0, 0, 0)
    with pytest.raises(SingularCurve):
        hyperelliptic_curve(make_field(3), 2, [1, 1, 0, 0, 0, 1])      # x^5 + x + 1 has a double root
    with pytest.raises(SingularCurve):
        hyperelliptic_curve(make_field(2), 2, [1, 0, 0, 0, 0, 1])
    with pytest.raises(UnsupportedModel):
        hyperelliptic_curve(make_field(3), 2, [1, 2, 0, 0, 1])


def test_curve_files(tmp_path, e_f3):
    path = tmp_path / "e.curve"
    path.write_text(json.dumps(e_f3.to_dict()))
    again = load_curve(path)
    assert again.curve_id == e_f3.curve_id
    assert curve_from_dict({"field": {"p": 5, "e": 1}, "shape": "p1"}).kind == "p1"
    bad = tmp_path / "bad.curve"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_curve(bad)
    with pytest.raises(ParseError):
        curve_from_dict({"field": {"p": 5, "e": 1}, "shape": "torus"})
    with pytest.raises(ParseError):
        load_curve(tmp_path / "missing.curve")
