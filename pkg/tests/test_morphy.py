"""Rule-based noun lemmatization."""

from __future__ import annotations

from punbench.lexres.morphy import DETACHMENT_RULES, lemmatize


def test_rule_inventory_and_order():
    assert DETACHMENT_RULES == (
        ("s", ""),
        ("ses", "s"),
        ("xes", "x"),
        ("zes", "z"),
        ("ches", "ch"),
        ("shes", "sh"),
        ("men", "man"),
        ("ies", "y"),
    )


def test_indexed_surface_form_is_a_candidate(wordnet):
    assert lemmatize(wordnet, "dog") == ["dog"]
    # "dogs" is itself indexed, so both the surface form and the detached
    # singular come back, surface form first.
    assert lemmatize(wordnet, "dogs") == ["dogs", "dog"]


def test_case_folding(wordnet):
    assert lemmatize(wordnet, "DOGS") == ["dogs", "dog"]


def test_exception_list_takes_priority(wordnet):
    assert lemmatize(wordnet, "men") == ["man"]
    # "feet" is only reachable through the exception list; no detachment
    # rule maps feet -> foot.
    assert lemmatize(wordnet, "feet") == ["foot"]


def test_exception_with_unindexed_target_falls_through_to_rules(wordnet):
    # children -> child is listed, but "child" is not in the mini index and
    # no suffix rule applies, so there is no candidate at all.
    assert lemmatize(wordnet, "children") == []


def test_each_detachment_rule(wordnet):
    assert lemmatize(wordnet, "pears") == ["pear"]        # -s
    assert lemmatize(wordnet, "glasses") == ["glass"]     # -ses
    assert lemmatize(wordnet, "boxes") == ["box"]         # -xes
    assert lemmatize(wordnet, "churches") == ["church"]   # -ches
    assert lemmatize(wordnet, "fishes") == ["fish"]       # -shes
    assert lemmatize(wordnet, "berries") == ["berry"]     # -ies


def test_candidates_must_exist_in_index(wordnet):
    assert lemmatize(wordnet, "zebras") == []
    assert lemmatize(wordnet, "zebra") == []


def test_suffix_must_be_proper(wordnet):
    # A bare suffix never maps to the empty string.
    assert lemmatize(wordnet, "s") == []


def test_unseen_men_suffix(wordnet):
    # Rule ("men" -> "man") applies generically, not just via exceptions.
    db = wordnet
    assert "man" in db.index
    assert lemmatize(db, "abmen") == []  # "abman" not indexed
