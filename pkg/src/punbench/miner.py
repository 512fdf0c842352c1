"""Mining pun word tuples from the lexical resources.

A tuple pairs a visually depictable "anchor" word/sense (w_p, s_p) with a
phonologically or orthographically identical counterpart (w_a, s_a) whose
meaning differs.  Homophonic tuples come from distinct spellings that share a
pronunciation; homographic tuples come from one spelling with two sufficiently
unrelated senses.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import ResourceParseError
from .lexres.frequency import FrequencyTable, zipf
from .lexres.morphy import lemmatize
from .lexres.prondict import PronDict
from .lexres.wordnetdb import (
    NATURAL_LEXNAMES,
    VISUAL_LEXNAMES,
    WordNetDb,
    path_similarity,
)

HOMOPHONIC = "homophonic"
HOMOGRAPHIC = "homographic"

_TOKEN_SPLIT = re.compile(r"[^a-z]+")


@dataclass(frozen=True)
class PunTuple:
    """One mined candidate: kind, both surface words, and both sense ids.

    ``w_p``/``s_p`` is the depictable anchor (what the image will show);
    ``w_a``/``s_a`` is the hidden counterpart the caption plays on.  For
    homographic tuples ``w_p == w_a``.  Glosses are carried along so that
    downstream prompt assembly does not need the lexicon loaded.
    """

    kind: str      # HOMOPHONIC or HOMOGRAPHIC
    w_p: str
    w_a: str
    s_p: str       # synset id of the anchor sense
    s_a: str
    s_p_gloss: str = ""
    s_a_gloss: str = ""

    def __post_init__(self):
        if self.kind not in (HOMOPHONIC, HOMOGRAPHIC):
            raise ValueError(f"unknown tuple kind: {self.kind!r}")
        if self.kind == HOMOGRAPHIC and self.w_p != self.w_a:
            raise ValueError("homographic tuple must have w_p == w_a")
        if self.kind == HOMOPHONIC and self.w_p.lower() == self.w_a.lower():
            raise ValueError("homophonic tuple must have distinct spellings")
        if self.s_p == self.s_a:
            raise ValueError("tuple senses must differ")


@dataclass(frozen=True)
class MinerConfig:
    """Thresholds for both mining passes.  Defaults match the benchmark."""

    zipf_min_homophonic: float = 3.0
    zipf_min_homographic: float = 3.8
    top_k_senses: int = 3
    path_sim_max: float = 0.1
    gloss_substring_min_len: int = 4
    visual_lexnames: frozenset[str] = VISUAL_LEXNAMES
    natural_lexnames: frozenset[str] = NATURAL_LEXNAMES

    def __post_init__(self):
        if self.top_k_senses < 1:
            raise ValueError("top_k_senses must be >= 1")
        if not 0 < self.path_sim_max <= 1:
            raise ValueError("path_sim_max must be in (0, 1]")


def gloss_disjoint(word: str, gloss: str, min_len: int = 4) -> bool:
    """False when the gloss leaks the word it defines.

    A gloss fails when any of its content tokens (lowercased, split on
    non-alphabetic characters) equals the word, or is at least ``min_len``
    characters long and occurs inside the word ("ball" inside "baseball").
    """
    word = word.lower()
    for token in _TOKEN_SPLIT.split(gloss.lower()):
        if not token:
            continue
        if token == word:
            return False
        if len(token) >= min_len and token in word:
            return False
    return True


def _passes_zipf(table: FrequencyTable, word: str, threshold: float) -> bool:
    value = zipf(table, word)
    return value is not None and value > threshold


def _visual_anchor(db: WordNetDb, word: str, cfg: MinerConfig) -> str | None:
    """The word's highest-ranked depictable sense among its top-k, if any."""
    for sid in db.top_senses(word, cfg.top_k_senses):
        if db.synsets[sid].lexname in cfg.visual_lexnames:
            return sid
    return None


def _lemma_overlap(db: WordNetDb, w1: str, w2: str) -> bool:
    l1, l2 = lemmatize(db, w1), lemmatize(db, w2)
    if set(l1) & set(l2):
        return True
    return w1.lower() in l2 or w2.lower() in l1


def mine_homophones(prondict: PronDict, freq: FrequencyTable, db: WordNetDb,
                    cfg: MinerConfig = MinerConfig()) -> list[PunTuple]:
    """Mine homophonic tuples; both orderings of every pair are considered.

    Filter sequence per ordered pair (w_p, w_a):
      1. the words share a full pronunciation but not a spelling;
      2. both clear the homophonic Zipf threshold (strict >);
      3. sense candidates are limited to each word's top-k noun senses;
      4. w_p must have a depictable top-k sense (that sense becomes s_p);
         s_a is w_a's highest-ranked top-k sense;
      5. the words are lemma-disjoint, so plural/singular respellings of one
         lexeme never pair with themselves.
    """
    groups: dict[tuple[str, ...], set[str]] = {}
    for word, prons in prondict.entries.items():
        for pron in prons:
            groups.setdefault(pron, set()).add(word)

    candidate_pairs: set[tuple[str, str]] = set()
    for members in groups.values():
        if len(members) < 2:
            continue
        ordered = sorted(members)
        for i, w1 in enumerate(ordered):
            for w2 in ordered[i + 1:]:
                candidate_pairs.add((w1, w2))
                candidate_pairs.add((w2, w1))

    results: list[PunTuple] = []
    for w_p, w_a in sorted(candidate_pairs):
        if not (_passes_zipf(freq, w_p, cfg.zipf_min_homophonic)
                and _passes_zipf(freq, w_a, cfg.zipf_min_homophonic)):
            continue
        s_p = _visual_anchor(db, w_p, cfg)
        if s_p is None:
            continue
        top_a = db.top_senses(w_a, cfg.top_k_senses)
        if not top_a:
            continue
        s_a = top_a[0]
        if _lemma_overlap(db, w_p, w_a):
            continue
        results.append(PunTuple(
            kind=HOMOPHONIC, w_p=w_p, w_a=w_a, s_p=s_p, s_a=s_a,
            s_p_gloss=db.synsets[s_p].gloss, s_a_gloss=db.synsets[s_a].gloss,
        ))
    return results


def mine_homographs(freq: FrequencyTable, db: WordNetDb,
                    cfg: MinerConfig = MinerConfig()) -> list[PunTuple]:
    """Mine homographic tuples from polysemous nouns.

    Filter sequence per word and ordered sense pair (s_p, s_a):
      1. the word clears the (stricter) homographic Zipf threshold;
      2. s_p has a depictable lexname;
      3. the two senses come from different lexicographer files;
      4. the senses are taxonomically distant (path similarity below
         ``path_sim_max``) and not both from natural-kind categories,
         which would be metonymy rather than wordplay;
      5. neither gloss leaks the word itself.

    When both senses of a pair are depictable, each orientation that passes
    every filter yields its own tuple.
    """
    results: list[PunTuple] = []
    for word in sorted(db.index):
        if not _passes_zipf(freq, word, cfg.zipf_min_homographic):
            continue
        top = db.top_senses(word, cfg.top_k_senses)
        for i, first in enumerate(top):
            for second in top[i + 1:]:
                for s_p, s_a in ((first, second), (second, first)):
                    syn_p, syn_a = db.synsets[s_p], db.synsets[s_a]
                    if syn_p.lexname not in cfg.visual_lexnames:
                        continue
                    if syn_a.lexname == syn_p.lexname:
                        continue
                    if path_similarity(db, s_p, s_a) >= cfg.path_sim_max:
                        continue
                    if (syn_p.lexname in cfg.natural_lexnames
                            and syn_a.lexname in cfg.natural_lexnames):
                        continue
                    if not (gloss_disjoint(word, syn_p.gloss, cfg.gloss_substring_min_len)
                            and gloss_disjoint(word, syn_a.gloss, cfg.gloss_substring_min_len)):
                        continue
                    results.append(PunTuple(
                        kind=HOMOGRAPHIC, w_p=word, w_a=word, s_p=s_p, s_a=s_a,
                        s_p_gloss=syn_p.gloss, s_a_gloss=syn_a.gloss,
                    ))
    results.sort(key=lambda t: (t.w_p, t.s_p, t.s_a))
    return results


def tuple_to_dict(t: PunTuple) -> dict:
    return {
        "kind": t.kind,
        "w_p": t.w_p,
        "w_a": t.w_a,
        "s_p": {"id": t.s_p, "gloss": t.s_p_gloss},
        "s_a": {"id": t.s_a, "gloss": t.s_a_gloss},
    }


def tuple_from_dict(obj: dict) -> PunTuple:
    return PunTuple(
        kind=obj["kind"], w_p=obj["w_p"], w_a=obj["w_a"],
        s_p=obj["s_p"]["id"], s_a=obj["s_a"]["id"],
        s_p_gloss=obj["s_p"].get("gloss", ""),
        s_a_gloss=obj["s_a"].get("gloss", ""),
    )


def dump_tuples(tuples: list[PunTuple]) -> str:
    """One JSON object per line, in list order."""
    return "".join(json.dumps(tuple_to_dict(t), ensure_ascii=False) + "\n"
                   for t in tuples)


def load_tuples(text: str) -> list[PunTuple]:
    tuples = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            tuples.append(tuple_from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ResourceParseError(f"bad tuple record: {exc}", lineno) from None
    return tuples
