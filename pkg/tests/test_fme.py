"""Unit tests for the exact rational inequality engine: coefficients,
normalization, elimination, pruning, LP evaluation, and serialization."""

from fractions import Fraction

import pytest

from nncpdf.errors import NotAffineInB, UnassignedAtom
from nncpdf.symbolic import (
    AffB,
    SymbolicInequality,
    SymbolicRegion,
    eliminate_variable,
    evaluate_region,
    format_region,
    parse_inequality,
    parse_region,
    project_to_R,
)


def test_affb_arithmetic_and_eval():
    a = AffB(Fraction(1), Fraction(2))
    b = AffB(Fraction(3))
    assert (a + b).at(5) == 1 + 2 * 5 + 3
    assert (a - b).c0 == -2
    assert (-a).c1 == -2
    assert a.scale(Fraction(1, 2)).at(4) == Fraction(9, 2)
    assert b.is_const and b.const() == 3
    with pytest.raises(NotAffineInB):
        a.const()


def test_inequality_drops_zero_coefficients():
    ineq = SymbolicInequality({"R": AffB(Fraction(1)), "r": AffB()}, {}, "<")
    assert set(ineq.rates) == {"R"}
    with pytest.raises(ValueError):
        SymbolicInequality({}, {}, "<")


def test_normalized_flips_sense():
    ineq = SymbolicInequality({"r": AffB(Fraction(1))}, {"I(A;B)": AffB(Fraction(2))}, ">")
    norm = ineq.normalized()
    assert norm.sense == "<"
    assert norm.rates["r"].c0 == -1
    assert norm.atoms["I(A;B)"].c0 == -2


def test_eliminate_variable_combines_bounds():
    region = parse_region("r > R\nr < I(A;B)")
    out = eliminate_variable(region, "r")
    assert len(out.inequalities) == 1
    only = out.inequalities[0].normalized()
    assert only.rates["R"].c0 == 1
    assert only.atoms["I(A;B)"].c0 == 1


def test_project_to_R_point_to_point():
    region = parse_region("r > R\nr < I(A;B)")
    out = project_to_R(region)
    assert [str(i) for i in out.inequalities] == ["R < I(A;B)"]


def test_prune_drops_dominated_rows():
    region = parse_region("R < I(A;B)\nR < I(A;B) + I(C;D)\nR < I(A;B)")
    out = project_to_R(region)
    assert [str(i) for i in out.inequalities] == ["R < I(A;B)"]


def test_evaluate_region_lp():
    region = parse_region("r > R\nr < I(A;B)\nR < 2*I(C;D)")
    val = evaluate_region(region, {"I(A;B)": 0.7, "I(C;D)": 0.25})
    assert val == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(UnassignedAtom):
        evaluate_region(region, {"I(A;B)": 0.7})


def test_evaluate_region_infeasible_and_unbounded():
    bad = parse_region("R < I(A;B)\nR > I(A;B) + 1*I(C;D)")
    assert evaluate_region(bad, {"I(A;B)": 0.0, "I(C;D)": 1.0}) == float("-inf")
    free = SymbolicRegion(("R",), (), {})
    assert evaluate_region(free, {}) == float("inf")


def test_serialization_round_trip():
    text = "(0-1*B)*R + r0 > 0\nr0 + 2*r1 < 3/2*I(A;B|C)"
    region = parse_region(text)
    again = parse_region(format_region(region))
    assert {i.key() for i in again.inequalities} == {
        i.normalized().key() for i in region.inequalities
    }


def test_parse_inequality_senses():
    le = parse_inequality("R <= I(A;B)")
    assert le.sense == "<" and not le.strict
    gt = parse_inequality("r0 > 2*R")
    assert gt.sense == ">" and gt.strict
    assert gt.rates["R"].c0 == -2 or gt.rates["R"].c0 == 2


def test_fme_requires_b_free_pivots():
    region = parse_region("(0+1*B)*r + R < I(A;B)\nr > 0")
    with pytest.raises(NotAffineInB):
        eliminate_variable(region, "r")


def test_undeclared_rate_variable_rejected():
    ineq = parse_inequality("R < I(A;B)")
    with pytest.raises(ValueError):
        SymbolicRegion(("x",), (ineq,), {})
