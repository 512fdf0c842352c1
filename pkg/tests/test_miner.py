"""Mining pun tuples from the bundled mini lexicon.

Expected outputs below were worked out by hand against the fixture files:
pronunciation groups, Zipf values, sense ranks, lexicographer files, path
similarities, and glosses were each checked independently before freezing
the tuples the miners must produce.
"""

from __future__ import annotations

import pytest

from punbench.errors import ResourceParseError
from punbench.miner import (
    MinerConfig,
    PunTuple,
    dump_tuples,
    gloss_disjoint,
    load_tuples,
    mine_homographs,
    mine_homophones,
    tuple_from_dict,
    tuple_to_dict,
)

CHESS_GLOSS = ("a chessman shaped to resemble the head of a horse; can move "
               "two squares horizontally and one vertically (or vice versa)")
NIGHT_GLOSS = "the time after sunset and before sunrise while it is dark outside"
PEAR_GLOSS = "sweet juicy gritty-textured fruit available in many varieties"
PAIR_GLOSS = "two items of the same kind"
SOLE_GLOSS = "the underside of footwear or a golf club"
SOUL_GLOSS = ("the immaterial part of a person; the actuating cause of an "
              "individual life")
CRANE_BIRD_GLOSS = ("large long-necked wading bird of marshes and plains in "
                    "many parts of the world")
CRANE_MACHINE_GLOSS = ("lifts and moves heavy objects; lifting tackle is "
                       "suspended from a pivoted boom that rotates around a "
                       "vertical axis")
FAN_DEVICE_GLOSS = ("a device for creating a current of air by movement of a "
                    "surface or surfaces")
FAN_PERSON_GLOSS = "an ardent follower and admirer"
KNIGHT_PERSON_GLOSS = ("originally a person of noble birth trained to arms and "
                       "chivalry; today in Great Britain a person honored by "
                       "the sovereign for personal merit")


class TestHomophoneMining:
    def test_frozen_output(self, homophone_tuples):
        got = [(t.w_p, t.w_a, t.s_p, t.s_a) for t in homophone_tuples]
        assert got == [
            ("knight", "night", "03624767-n", "15167027-n"),
            ("pear", "pair", "07767847-n", "07986198-n"),
            ("sole", "soul", "04254777-n", "05943066-n"),
        ]
        assert all(t.kind == "homophonic" for t in homophone_tuples)

    def test_glosses_carried(self, homophone_tuples):
        by_word = {t.w_p: t for t in homophone_tuples}
        assert by_word["knight"].s_p_gloss == CHESS_GLOSS
        assert by_word["knight"].s_a_gloss == NIGHT_GLOSS
        assert by_word["pear"].s_p_gloss == PEAR_GLOSS
        assert by_word["pear"].s_a_gloss == PAIR_GLOSS
        assert by_word["sole"].s_p_gloss == SOLE_GLOSS
        assert by_word["sole"].s_a_gloss == SOUL_GLOSS

    def test_anchor_skips_non_visual_top_sense(self, homophone_tuples):
        # knight's rank-1 sense is a person (not depictable); the anchor must
        # be the rank-2 chess-piece sense, while s_a stays night's top sense.
        knight = homophone_tuples[0]
        assert knight.s_p == "03624767-n"

    def test_reversed_orderings_need_visual_anchor(self, homophone_tuples):
        # night / pair / soul have no depictable sense, so the reversed
        # orderings (night, knight) etc. must not appear.
        anchors = {t.w_p for t in homophone_tuples}
        assert anchors == {"knight", "pear", "sole"}

    def test_low_frequency_pair_rejected(self, homophone_tuples):
        # fair/fare share a pronunciation but fare's Zipf is 2.5 <= 3.0.
        words = {t.w_p for t in homophone_tuples} | {t.w_a for t in homophone_tuples}
        assert "fair" not in words and "fare" not in words

    def test_lemma_overlap_rejected(self, homophone_tuples):
        # dog/dogs share a pronunciation in the mini dictionary, but "dogs"
        # lemmatizes to "dog": same lexeme, not a pun.
        words = {t.w_p for t in homophone_tuples} | {t.w_a for t in homophone_tuples}
        assert "dog" not in words and "dogs" not in words

    def test_zipf_threshold_is_strict(self, prondict, freq, wordnet):
        # pear's Zipf is exactly 3.9; a threshold of 3.9 must drop it
        # (and sole at 3.6) while knight (4.0) and night (5.3) survive.
        cfg = MinerConfig(zipf_min_homophonic=3.9)
        got = mine_homophones(prondict, freq, wordnet, cfg)
        assert [(t.w_p, t.w_a) for t in got] == [("knight", "night")]

    def test_deterministic(self, prondict, freq, wordnet, homophone_tuples):
        assert mine_homophones(prondict, freq, wordnet) == homophone_tuples


class TestHomographMining:
    def test_frozen_output(self, homograph_tuples):
        got = [(t.w_p, t.s_p, t.s_a) for t in homograph_tuples]
        assert got == [
            ("crane", "01519563-n", "02983507-n"),
            ("crane", "02983507-n", "01519563-n"),
            ("fan", "03320046-n", "10112591-n"),
            ("knight", "03624767-n", "10238375-n"),
        ]
        assert all(t.kind == "homographic" for t in homograph_tuples)
        assert all(t.w_p == t.w_a for t in homograph_tuples)

    def test_glosses_carried(self, homograph_tuples):
        crane_bird_first = homograph_tuples[0]
        assert crane_bird_first.s_p_gloss == CRANE_BIRD_GLOSS
        assert crane_bird_first.s_a_gloss == CRANE_MACHINE_GLOSS
        fan = homograph_tuples[2]
        assert fan.s_p_gloss == FAN_DEVICE_GLOSS
        assert fan.s_a_gloss == FAN_PERSON_GLOSS

    def test_doubly_depictable_pair_yields_both_orientations(self, homograph_tuples):
        # crane's bird and machine senses are both depictable, so both
        # orientations pass; fan and knight each have one depictable sense.
        cranes = [t for t in homograph_tuples if t.w_p == "crane"]
        assert {(t.s_p, t.s_a) for t in cranes} == {
            ("01519563-n", "02983507-n"),
            ("02983507-n", "01519563-n"),
        }

    def test_single_orientation_when_one_sense_depictable(self, homograph_tuples):
        fans = [t for t in homograph_tuples if t.w_p == "fan"]
        knights = [t for t in homograph_tuples if t.w_p == "knight"]
        assert len(fans) == 1 and fans[0].s_p == "03320046-n"
        assert len(knights) == 1 and knights[0].s_p == "03624767-n"

    def test_same_lexname_senses_rejected(self, homograph_tuples):
        # apple (fruit/tree) and pear (fruit/tree) are polysemous and
        # frequent enough, but both senses sit in the same lexicographer
        # file, so neither word may appear.
        assert not [t for t in homograph_tuples if t.w_p in ("apple", "pear")]

    def test_both_natural_senses_rejected(self, homograph_tuples, wordnet):
        # kiwi's bird and fruit senses are taxonomically distant (path
        # similarity 1/12) and in different files, yet both are natural
        # kinds, so the pair is metonymy, not a pun.
        from punbench.lexres.wordnetdb import path_similarity
        sim = path_similarity(wordnet, "01456363-n", "07763629-n")
        assert sim == pytest.approx(1 / 12)
        assert not [t for t in homograph_tuples if t.w_p == "kiwi"]

    def test_gloss_leak_rejected(self, homograph_tuples, wordnet):
        # baseball's game/ball pair passes the path filter (similarity 1/15)
        # but the ball gloss contains the word itself.
        from punbench.lexres.wordnetdb import path_similarity
        sim = path_similarity(wordnet, "02799071-n", "00471613-n")
        assert sim == pytest.approx(1 / 15)
        assert not [t for t in homograph_tuples if t.w_p == "baseball"]

    def test_path_similarity_cutoff_is_strict(self, freq, wordnet):
        # glass's container/substance senses sit at path similarity exactly
        # 0.1: rejected by the default cutoff, admitted by a looser one.
        from punbench.lexres.wordnetdb import path_similarity
        assert path_similarity(wordnet, "03438257-n", "14881303-n") == pytest.approx(0.1)

        default = mine_homographs(freq, wordnet)
        assert not [t for t in default if t.w_p == "glass"]

        loose = mine_homographs(freq, wordnet, MinerConfig(path_sim_max=0.11))
        glasses = [t for t in loose if t.w_p == "glass"]
        # Only the container sense is depictable, so one orientation appears.
        assert [(t.s_p, t.s_a) for t in glasses] == [("03438257-n", "14881303-n")]
        assert len(loose) == len(default) + 1

    def test_zipf_threshold_is_strict(self, freq, wordnet):
        # At 4.0 exactly: crane (3.9) and knight (4.0, not strictly above)
        # drop out; fan (4.8) is the only survivor.
        got = mine_homographs(freq, wordnet, MinerConfig(zipf_min_homographic=4.0))
        assert [(t.w_p, t.s_p, t.s_a) for t in got] == [
            ("fan", "03320046-n", "10112591-n"),
        ]

    def test_output_sorted(self, homograph_tuples):
        keys = [(t.w_p, t.s_p, t.s_a) for t in homograph_tuples]
        assert keys == sorted(keys)

    def test_deterministic(self, freq, wordnet, homograph_tuples):
        assert mine_homographs(freq, wordnet) == homograph_tuples


class TestGlossDisjoint:
    def test_exact_token_match_fails(self):
        assert gloss_disjoint("baseball", "a ball used in playing baseball") is False

    def test_substring_token_fails(self):
        assert gloss_disjoint("baseball", "a ball game") is False

    def test_short_tokens_are_exempt_from_substring_check(self):
        # "an" appears inside "fan" but is shorter than min_len.
        assert gloss_disjoint("fan", "an ardent follower") is True

    def test_min_len_configurable(self):
        assert gloss_disjoint("baseball", "a ball game", min_len=5) is True

    def test_case_insensitive(self):
        assert gloss_disjoint("crane", "the CRANE operator sits high up") is False

    def test_splits_on_punctuation(self):
        assert gloss_disjoint("pear", "a pear-shaped fruit") is False

    def test_clean_gloss_passes(self):
        assert gloss_disjoint("crane", "large long-necked wading bird") is True


class TestValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown tuple kind"):
            PunTuple(kind="visual", w_p="a", w_a="b", s_p="1-n", s_a="2-n")

    def test_homographic_words_must_match(self):
        with pytest.raises(ValueError, match="w_p == w_a"):
            PunTuple(kind="homographic", w_p="crane", w_a="cranes",
                     s_p="1-n", s_a="2-n")

    def test_homophonic_words_must_differ(self):
        with pytest.raises(ValueError, match="distinct spellings"):
            PunTuple(kind="homophonic", w_p="Pear", w_a="pear",
                     s_p="1-n", s_a="2-n")

    def test_senses_must_differ(self):
        with pytest.raises(ValueError, match="senses must differ"):
            PunTuple(kind="homophonic", w_p="pear", w_a="pair",
                     s_p="1-n", s_a="1-n")

    def test_config_top_k(self):
        with pytest.raises(ValueError, match="top_k_senses"):
            MinerConfig(top_k_senses=0)

    def test_config_path_sim_range(self):
        with pytest.raises(ValueError, match="path_sim_max"):
            MinerConfig(path_sim_max=0.0)
        with pytest.raises(ValueError, match="path_sim_max"):
            MinerConfig(path_sim_max=1.5)
        MinerConfig(path_sim_max=1.0)  # inclusive upper bound


class TestSerialization:
    def test_dict_roundtrip(self, homophone_tuples):
        t = homophone_tuples[0]
        assert tuple_from_dict(tuple_to_dict(t)) == t

    def test_dict_shape(self, homophone_tuples):
        d = tuple_to_dict(homophone_tuples[1])
        assert d == {
            "kind": "homophonic",
            "w_p": "pear",
            "w_a": "pair",
            "s_p": {"id": "07767847-n", "gloss": PEAR_GLOSS},
            "s_a": {"id": "07986198-n", "gloss": PAIR_GLOSS},
        }

    def test_jsonl_roundtrip(self, homophone_tuples, homograph_tuples):
        everything = homophone_tuples + homograph_tuples
        text = dump_tuples(everything)
        assert text.count("\n") == len(everything)
        assert load_tuples(text) == everything

    def test_blank_lines_ignored(self, homophone_tuples):
        text = "\n" + dump_tuples(homophone_tuples[:1]) + "\n"
        assert load_tuples(text) == homophone_tuples[:1]

    def test_bad_json_reports_line(self, homophone_tuples):
        text = dump_tuples(homophone_tuples[:1]) + "{not json\n"
        with pytest.raises(ResourceParseError, match="line 2"):
            load_tuples(text)

    def test_missing_key_rejected(self):
        with pytest.raises(ResourceParseError, match="bad tuple record"):
            load_tuples('{"kind": "homophonic", "w_p": "pear"}\n')
