from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orel.christoffel import (Slope, christoffel_word, classify_primitive_rank2, complement_candidates,
                              complement_slope_word, is_primitive_rank2)
from orel.stallings import is_free_basis
from orel.words import Word, WordError, w

from oracles import lattice_path_word, reduced_words, whitehead_is_primitive


def test_figure_word():
    assert str(christoffel_word(Slope(5, 6), w("a"), w("b"))) == "aababababab"


def test_degenerate_and_substitution():
    assert christoffel_word(Slope(0, 1), w("a"), w("b")) == w("a")
    assert christoffel_word(Slope(1, 0), w("a"), w("b")) == w("b")
    assert christoffel_word(Slope(1, 1), w("aaB"), w("bcc")) == w("aacc")
    with pytest.raises(WordError):
        christoffel_word(Slope(1, 1), Word(), w("b"))
    with pytest.raises(WordError):
        Slope(2, 4)


def test_slope_parse():
    assert Slope.parse("5/6") == Slope(5, 6) and Slope.parse("3") == Slope(3, 1)
    assert Slope(3, 1).is_integer and not Slope(1, 2).is_integer


@given(st.integers(1, 25), st.integers(1, 25))
def test_matches_lattice_path(p, q):
    if gcd(p, q) != 1:
        return
    assert str(christoffel_word(Slope(p, q), w("a"), w("b"))) == lattice_path_word(p, q)


def test_primitivity_examples():
    assert is_primitive_rank2(w("aab"), "ab")
    v = classify_primitive_rank2(w("abAB"), "ab")
    assert not v.primitive
    assert not is_primitive_rank2(w("aa"), "ab")
    assert is_primitive_rank2(w("b"), "ab")
    v = classify_primitive_rank2(w("BaBaB"), "ab")
    assert v.primitive and v.slope == Slope(3, 2) and v.signs == (1, -1)
    with pytest.raises(WordError):
        classify_primitive_rank2(w("abc"), "abc")


def test_primitivity_matches_whitehead_short():
    for u in reduced_words("ab", 6):
        assert is_primitive_rank2(u, "ab") == whitehead_is_primitive(u), u


def test_representative_is_conjugate():
    from orel.words import is_conjugate
    for u in reduced_words("ab", 5):
        v = classify_primitive_rank2(u, "ab")
        if v.primitive:
            assert is_conjugate(v.representative(), u)


def test_complement_examples():
    assert complement_slope_word(Slope(5, 6)) == (w("ab"), Slope(1, 1))
    assert complement_slope_word(Slope(1, 1)) == (w("a"), Slope(0, 1))
    assert complement_slope_word(Slope(1, 2)) == (w("ab"), Slope(1, 1))
    assert Slope(1, 1) in complement_candidates(Slope(5, 6))


@given(st.integers(1, 15), st.integers(1, 15))
def test_complement_is_basis(p, q):
    if gcd(p, q) != 1:
        return
    s = Slope(p, q)
    y, c = complement_slope_word(s)
    assert abs(q * c.p - p * c.q) == 1
    assert is_free_basis([christoffel_word(s, w("a"), w("b")), y], "ab")
