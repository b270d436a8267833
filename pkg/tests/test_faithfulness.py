"""Test cases for the sandwich search and the boundary support scans"""

import pytest

from app.exceptions import ParameterRangeError
from app.faithfulness import (
    banica_min_N, boundary_support_contains_prefix, boundary_support_contains_ubar_initial,
    disjoint_support_check, min_N_table, sandwich_word, strong_faithfulness_witness_norm,
)
from app.fusion import EMPTY, U, UBAR, conjugate, format_word, words_up_to
from app.models import SandwichCertificate, SandwichFailure


def test_sandwich_word():
    assert format_word(sandwich_word(1)) == "ub"
    assert format_word(sandwich_word(3)) == "ububub"


def test_single_letter_needs_one_round(w):
    """uū⊗u⊗uū = uūuuū ⊕ uuū"""
    result = banica_min_N([w("u")], 4)
    assert isinstance(result, SandwichCertificate)
    assert result.N == 1
    assert result.subobjects == {"u": ["uub", "ubuub"]}
    assert result.reverified


def test_negative_control_fails_at_one(w):
    """uū⊗uūū⊗uū contains ū"""
    result = banica_min_N([w("ubb")], 1)
    assert isinstance(result, SandwichFailure)
    assert result.N_max == 1
    witness = result.witnesses[1]["ubb"]
    assert not (witness.startswith("u") and witness.endswith("b"))


def test_min_N_is_conjugation_symmetric():
    for x in words_up_to(4, include_empty=False):
        a = banica_min_N([x], 5)
        b = banica_min_N([conjugate(x)], 5)
        assert type(a) is type(b)
        if isinstance(a, SandwichCertificate):
            assert a.N == b.N


def test_set_N_is_max_over_members(w):
    joint = banica_min_N([w("u"), w("b")], 4)
    assert isinstance(joint, SandwichCertificate)
    assert joint.N == 1
    assert set(joint.subobjects) == {"u", "b"}


def test_sandwich_input_validation(w):
    with pytest.raises(ParameterRangeError):
        banica_min_N([EMPTY], 3)
    with pytest.raises(ParameterRangeError):
        banica_min_N([w("u")], 0)


def test_min_N_table():
    table = min_N_table(2, 4)
    assert list(table.columns) == ["word", "length", "N"]
    assert len(table) == 6
    by_word = dict(zip(table["word"], table["N"]))
    assert by_word["u"] == 1
    assert by_word["b"] == 1


def test_boundary_support_prefix(w):
    assert not boundary_support_contains_ubar_initial([w("ub")], EMPTY)
    assert not boundary_support_contains_ubar_initial([w("ub")], w("b"))
    assert boundary_support_contains_ubar_initial([w("ub")], w("ubb"))
    assert boundary_support_contains_ubar_initial([w("b")], w("uu"))
    assert boundary_support_contains_prefix([w("ub")], w("ub"), EMPTY)
    assert boundary_support_contains_prefix([w("u"), w("b")], EMPTY, U)


def test_supports_disjoint_for_single_letter(w):
    report = disjoint_support_check([w("u")], 1, L=8)
    assert report.disjoint
    assert "ubb" in report.setA
    assert "bb" in report.setB
    assert all(s.startswith("u") for s in report.setA)
    assert all(s.startswith("b") for s in report.setB)


def test_support_overlap_negative_control(w):
    """t = ū lies in uū⊗uūū, so every s is in setB"""
    report = disjoint_support_check([w("ubb")], 1, L=6)
    assert not report.disjoint
    assert len(report.setB) == 2 ** 7 - 1
    first = report.violations[0]
    assert (first.s, first.x, first.t) == ("ubb", "ubb", "b")
    assert first.y.startswith("b")
    assert first.z.startswith("b")


def test_support_scan_independent_of_workers(w):
    serial = disjoint_support_check([w("u"), w("ub")], 2, L=7, workers=1)
    parallel = disjoint_support_check([w("u"), w("ub")], 2, L=7, workers=2)
    assert serial == parallel


def test_support_scan_validation(w):
    with pytest.raises(ParameterRangeError):
        disjoint_support_check([w("u")], 0)
    with pytest.raises(ParameterRangeError):
        disjoint_support_check([EMPTY], 1)


def test_witness_norm(w):
    assert strong_faithfulness_witness_norm([w("u")], N=1, L=8).value == 0
    assert strong_faithfulness_witness_norm([]).value == 0
    bad = strong_faithfulness_witness_norm([w("ubb")], x_cyl=UBAR, N=1, L=5)
    assert bad.value == 1
    assert bad.report is not None
    assert bad.report.violations


@pytest.mark.slow
def test_single_letter_disjoint_at_full_depth(w):
    assert disjoint_support_check([w("u")], 1, L=12, workers=2).disjoint
