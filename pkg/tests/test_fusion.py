"""Test cases for words and fusion rules"""

import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from app.exceptions import WordFormatError
from app.fusion import (
    EMPTY, U, UBAR, Decomposition, Letter, Word, alternating_word, block_decomposition,
    cancellation_depth, conjugate, format_word, is_subobject, iterated_decompose, parse_word,
    tensor_decompose, triple_decompose, words_of_length, words_up_to,
)


def words(max_length=8):
    return st.integers(min_value=0, max_value=max_length).flatmap(
        lambda n: st.integers(min_value=0, max_value=(1 << n) - 1).map(lambda bits: Word(n, bits))
    )


def summands(x, y):
    return {format_word(v) for v in tensor_decompose(parse_word(x), parse_word(y))}


def test_parse_and_format():
    """Test the u/b/e word syntax"""
    assert parse_word("e") == EMPTY
    assert parse_word("") == EMPTY
    assert parse_word("u") == U
    assert parse_word("b") == UBAR
    assert format_word(parse_word("uubu")) == "uubu"
    assert format_word(EMPTY) == "e"
    with pytest.raises(WordFormatError):
        parse_word("uxb")


def test_word_accessors(w):
    """Test letters, prefixes and concatenation"""
    x = w("ubb")
    assert len(x) == 3
    assert x.first_letter == Letter.U
    assert x.last_letter == Letter.UBAR
    assert list(x) == [Letter.U, Letter.UBAR, Letter.UBAR]
    assert x.drop_last() == w("ub")
    assert x.drop_first() == w("bb")
    assert w("ub") + w("bu") == w("ubbu")
    assert x.has_prefix(w("ub"))
    assert not x.has_prefix(w("uu"))
    assert x.has_prefix(EMPTY)


def test_alternating_word():
    assert format_word(alternating_word(Letter.U, 4)) == "ubub"
    assert format_word(alternating_word(Letter.UBAR, 3)) == "bub"
    assert alternating_word(Letter.U, 0) == EMPTY


def test_words_of_length_enumerates_level():
    level = list(words_of_length(3))
    assert len(level) == 8
    assert len(set(level)) == 8
    assert len(list(words_up_to(3))) == 15
    assert len(list(words_up_to(3, include_empty=False))) == 14


def test_conjugate(w):
    """Conjugation reverses and swaps letters"""
    assert conjugate(w("uub")) == w("ubb")
    assert conjugate(w("ub")) == w("ub")
    assert conjugate(EMPTY) == EMPTY


def test_block_decomposition(w):
    """Blocks break exactly where equal letters meet"""
    assert block_decomposition(w("ubuubb")) == [(Letter.U, 3), (Letter.U, 2), (Letter.UBAR, 1)]
    assert block_decomposition(w("uuu")) == [(Letter.U, 1)] * 3
    assert block_decomposition(EMPTY) == []


def test_cancellation_depth(w):
    assert cancellation_depth(w("u"), w("b")) == 1
    assert cancellation_depth(w("u"), w("u")) == 0
    assert cancellation_depth(w("ub"), w("ub")) == 2
    assert cancellation_depth(w("uub"), w("ubu")) == 2
    assert cancellation_depth(w("uub"), w("uu")) == 1


def test_worked_decompositions():
    """Test the basic fusion examples"""
    assert summands("u", "b") == {"ub", "e"}
    assert summands("e", "ubu") == {"ubu"}
    assert summands("ub", "ub") == {"ubub", "ub", "e"}
    assert summands("uu", "uu") == {"uuuu"}
    assert summands("ub", "b") == {"ubb"}


def test_decomposition_mapping_behaviour(w):
    d = tensor_decompose(w("ub"), w("ub"))
    assert isinstance(d, Decomposition)
    assert d.total_multiplicity == 3
    assert d.is_multiplicity_free()
    assert d[w("ub")] == 1
    assert d == Decomposition([w("ubub"), w("ub"), EMPTY])


def test_iterated_decompose_has_multiplicities(w):
    """u⊗ū⊗u contains u twice"""
    d = iterated_decompose([w("u"), w("b"), w("u")])
    assert d[w("u")] == 2
    assert d[w("ubu")] == 1
    assert iterated_decompose([]) == Decomposition({EMPTY: 1})


def test_sandwich_triple(w):
    """uū⊗u⊗uū splits into uūuuū and uuū"""
    d = triple_decompose(w("ub"), w("u"), w("ub"))
    assert {format_word(v) for v in d} == {"ubuub", "uub"}


def test_is_subobject_matches_decomposition():
    for x in words_up_to(3):
        for y in words_up_to(3):
            d = tensor_decompose(x, y)
            for z in words_up_to(6):
                assert is_subobject(z, x, y) == (z in d)


@given(words(), words())
def test_decomposition_is_multiplicity_free(x, y):
    d = tensor_decompose(x, y)
    assert d.is_multiplicity_free()
    assert x + y in d
    for v in d:
        assert (len(x) + len(y) - len(v)) % 2 == 0


@given(words(), words())
def test_conjugation_reverses_tensor_order(x, y):
    """conj(x⊗y) = conj(y)⊗conj(x)"""
    assert {conjugate(v) for v in tensor_decompose(x, y)} == set(tensor_decompose(conjugate(y), conjugate(x)))


@hyp_settings(max_examples=200)
@given(words(5), words(5), words(5))
def test_associativity(x, y, z):
    assert triple_decompose(x, y, z) == triple_decompose(x, y, z, right_associated=True)


@given(words())
def test_unit(x):
    assert tensor_decompose(EMPTY, x) == Decomposition([x])
    assert tensor_decompose(x, EMPTY) == Decomposition([x])


@given(words(12))
def test_parse_format_inverse(x):
    assert parse_word(format_word(x)) == x
