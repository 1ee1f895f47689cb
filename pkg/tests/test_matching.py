import random
import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mapsense.matching import (
    QualifierSet,
    SimilarityParams,
    filter_items,
    levenshtein,
    property_similar,
    property_terms,
)

from reference import reference_property_similar, textbook_levenshtein

words = st.text(alphabet=string.ascii_lowercase, min_size=0, max_size=12)


# ---- levenshtein ----


def test_levenshtein_known_values():
    assert levenshtein("ospedale", "ospedali") == 1
    assert levenshtein("primaria", "paritaria") == 2
    assert levenshtein("", "abc") == 3
    assert levenshtein("abc", "") == 3
    assert levenshtein("", "") == 0


@given(words)
def test_levenshtein_zero_iff_equal(a):
    assert levenshtein(a, a) == 0


@given(words, words)
def test_levenshtein_symmetric(a, b):
    assert levenshtein(a, b) == levenshtein(b, a)
    if a != b:
        assert levenshtein(a, b) > 0


@given(words, words, words)
@settings(max_examples=200)
def test_levenshtein_triangle_inequality(a, b, c):
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


@given(words, words)
@settings(max_examples=500)
def test_levenshtein_matches_textbook_dp(a, b):
    assert levenshtein(a, b) == textbook_levenshtein(a, b)


# ---- params ----


@pytest.mark.parametrize("beta,gamma", [(0.0, 0.2), (1.1, 0.2), (0.5, 0.0), (0.5, 1.5)])
def test_params_out_of_range(beta, gamma):
    with pytest.raises(ValueError):
        SimilarityParams(beta=beta, gamma=gamma)


def test_params_unknown_rounding():
    with pytest.raises(ValueError):
        SimilarityParams(rounding="floor")


# ---- property terms ----


def test_property_terms_strips_punctuation_and_lowercases():
    assert property_terms("A.O.U. San Giovanni, Battista!") == ["aou", "san", "giovanni", "battista"]
    assert property_terms("  Ospedale   Infantile ") == ["ospedale", "infantile"]
    assert property_terms("...") == []


# ---- property_similar ----

DEFAULTS = SimilarityParams()


def test_name_matches_through_synonym_qualifier():
    qs = QualifierSet.from_terms([["pediatrico"], ["infantile"]])
    assert property_similar("Ospedale Infantile Regina Margherita", qs, DEFAULTS)


def test_partial_name_overlap_matches():
    # two of three terms match, above half the shorter side
    qs = QualifierSet.from_terms([["san", "giovanni", "bosco"]])
    assert property_similar("AOU San Giovanni Battista", qs, DEFAULTS)


def test_close_but_wrong_word_matches_at_default_gamma():
    # paritaria is within edit distance 2 of primaria; budget round(0.2*9) = 2
    qs = QualifierSet.from_terms([["primaria"]])
    assert property_similar("Scuola paritaria", qs, DEFAULTS)


def test_unrelated_value_does_not_match():
    qs = QualifierSet.from_terms([["pediatrico"], ["infantile"]])
    assert not property_similar("Liceo Classico", qs, DEFAULTS)


def test_empty_qualifier_set_is_a_contract_violation():
    with pytest.raises(ValueError):
        property_similar("anything", QualifierSet(), DEFAULTS)


def test_rounding_modes_disagree_only_at_the_margin():
    qs = QualifierSet.from_terms([["primaria"]])
    value = "Scuola paritaria"
    assert property_similar(value, qs, SimilarityParams(gamma=0.20, rounding="nearest"))
    assert property_similar(value, qs, SimilarityParams(gamma=0.20, rounding="ceil"))
    assert not property_similar(value, qs, SimilarityParams(gamma=0.20, rounding="exact"))
    assert not property_similar(value, qs, SimilarityParams(gamma=0.15, rounding="nearest"))
    assert property_similar(value, qs, SimilarityParams(gamma=0.15, rounding="ceil"))


def _random_instance(rng):
    def word():
        return "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(1, 12)))

    value = " ".join(word() for _ in range(rng.randint(0, 6)))
    qualifiers = [[word() for _ in range(rng.randint(1, 6))] for _ in range(rng.randint(1, 4))]
    return value, qualifiers


def test_agrees_with_reference_on_random_instances():
    rng = random.Random(20240917)
    for _ in range(1500):
        value, term_lists = _random_instance(rng)
        params = SimilarityParams(
            beta=rng.choice([0.3, 0.5, 0.8, 1.0]),
            gamma=rng.choice([0.15, 0.2, 0.3, 0.5]),
            rounding=rng.choice(["nearest", "ceil", "exact"]),
        )
        expected = reference_property_similar(value, term_lists, params.beta, params.gamma, params.rounding)
        got = property_similar(value, QualifierSet.from_terms(term_lists), params)
        assert got == expected, (value, term_lists, params)


# ---- filter_items ----


class FakeItem:
    def __init__(self, item_id, properties):
        self.id = item_id
        self.properties = properties

    def __repr__(self):
        return f"FakeItem({self.id})"


HOSPITALS = [
    FakeItem("regina", {"name": "Ospedale Infantile Regina Margherita"}),
    FakeItem("molinette", {"name": "Presidio Ospedaliero Molinette", "azienda": "AOU San Giovanni Battista"}),
    FakeItem("oftalmico", {"name": "Ospedale Oftalmico"}),
]


def test_filter_keeps_only_similar_items():
    qs = QualifierSet.from_terms([["pediatrico"], ["infantile"]])
    kept = filter_items(HOSPITALS, qs, DEFAULTS)
    assert [item.id for item in kept] == ["regina"]


def test_filter_reaches_secondary_properties():
    qs = QualifierSet.from_terms([["ospedale", "giovanni", "battista"]])
    kept = filter_items(HOSPITALS, qs, DEFAULTS)
    assert "molinette" in [item.id for item in kept]


def test_empty_qualifier_set_keeps_everything():
    assert filter_items(HOSPITALS, QualifierSet(), DEFAULTS) == HOSPITALS


def test_filter_is_idempotent_and_order_preserving():
    qs = QualifierSet.from_terms([["ospedale"]])
    once = filter_items(HOSPITALS, qs, DEFAULTS)
    twice = filter_items(once, qs, DEFAULTS)
    assert once == twice
    ids = [item.id for item in once]
    assert ids == sorted(ids, key=[item.id for item in HOSPITALS].index)


@given(st.data())
@settings(max_examples=300, deadline=None)
def test_filter_monotone_in_gamma(data):
    rng_words = st.text(alphabet="abcdef", min_size=1, max_size=8)
    items = [
        FakeItem(str(i), {"name": data.draw(st.text(alphabet="abcdef ", min_size=1, max_size=30))})
        for i in range(data.draw(st.integers(0, 6)))
    ]
    qs = QualifierSet.from_terms(
        [
            [data.draw(rng_words) for _ in range(data.draw(st.integers(1, 3)))]
        ]
    )
    low = data.draw(st.floats(0.05, 0.95))
    high = data.draw(st.floats(low, 1.0))
    kept_low = {i.id for i in filter_items(items, qs, SimilarityParams(gamma=low))}
    kept_high = {i.id for i in filter_items(items, qs, SimilarityParams(gamma=high))}
    assert kept_low <= kept_high
