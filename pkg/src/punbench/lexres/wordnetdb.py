"""Noun database parser and graph queries over a WordNet-style lexicon.

Two source files are parsed together:

``index.noun``
    One line per lemma: ``lemma pos synset_cnt p_cnt [ptr...] sense_cnt
    tagsense_cnt offset [offset...]``.  Offsets appear in sense order, most
    frequent sense first.

``data.noun``
    One line per synset: ``offset lex_filenum ss_type w_cnt word lex_id
    [word lex_id...] p_cnt [ptr...] | gloss``.  ``w_cnt`` is hexadecimal,
    ``p_cnt`` decimal; each pointer is ``symbol offset pos source/target``.

License headers (lines starting with whitespace) are skipped.  Only the
hypernym pointers ``@`` and ``@i`` are retained; every referenced offset must
resolve and the hypernym graph must be acyclic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..errors import ResourceIntegrityError, ResourceParseError, WordNotFoundError

# Lexicographer file numbers, per the standard lexnames table.
LEXNAMES = {
    0: "adj.all", 1: "adj.pert", 2: "adv.all", 3: "noun.Tops",
    4: "noun.act", 5: "noun.animal", 6: "noun.artifact", 7: "noun.attribute",
    8: "noun.body", 9: "noun.cognition", 10: "noun.communication",
    11: "noun.event", 12: "noun.feeling", 13: "noun.food", 14: "noun.group",
    15: "noun.location", 16: "noun.motive", 17: "noun.object",
    18: "noun.person", 19: "noun.phenomenon", 20: "noun.plant",
    21: "noun.possession", 22: "noun.process", 23: "noun.quantity",
    24: "noun.relation", 25: "noun.shape", 26: "noun.state",
    27: "noun.substance", 28: "noun.time", 29: "verb.body",
    30: "verb.change", 31: "verb.cognition", 32: "verb.communication",
    33: "verb.competition", 34: "verb.consumption", 35: "verb.contact",
    36: "verb.creation", 37: "verb.emotion", 38: "verb.motion",
    39: "verb.perception", 40: "verb.possession", 41: "verb.social",
    42: "verb.stative", 43: "verb.weather", 44: "adj.ppl",
}

# Noun categories whose members are concrete enough to draw: the visual
# anchor sense of every mined tuple must come from one of these.
VISUAL_LEXNAMES = frozenset({
    "noun.animal", "noun.artifact", "noun.body",
    "noun.food", "noun.object", "noun.plant",
})

# Categories treated as literal/taxonomic kin: a sense pair drawn entirely
# from these is metonymy (organism vs. its fruit), not wordplay.
NATURAL_LEXNAMES = frozenset({"noun.plant", "noun.animal"})

_HYPERNYM_SYMBOLS = {"@", "@i"}
_VIRTUAL_ROOT = "*ROOT*"


@dataclass
class Synset:
    """One noun synset: identity, category, member lemmas, gloss, hypernyms."""

    id: str                    # "offset-n", e.g. "07767847-n"
    lexname: str
    lemmas: list[str]
    gloss: str
    hypernyms: list[str] = field(default_factory=list)
    # Per-lemma sense ordinal (1 = the lemma's most frequent sense),
    # filled in from the index side during parsing.
    sense_rank: dict[str, int] = field(default_factory=dict)


@dataclass
class WordNetDb:
    """Parsed noun lexicon: synsets by id, the sense-ordered lemma index,
    and the irregular-plural exception map used by lemmatization."""

    synsets: dict[str, Synset] = field(default_factory=dict)
    index: dict[str, list[str]] = field(default_factory=dict)
    exceptions: dict[str, list[str]] = field(default_factory=dict)

    def synset(self, synset_id: str) -> Synset:
        if synset_id not in self.synsets:
            raise WordNotFoundError(f"unknown synset id: {synset_id!r}")
        return self.synsets[synset_id]

    def senses(self, word: str) -> list[str]:
        """Synset ids for the word, most frequent sense first."""
        key = word.lower()
        if key not in self.index:
            raise WordNotFoundError(f"word not in noun index: {word!r}")
        return list(self.index[key])

    def top_senses(self, word: str, k: int) -> list[str]:
        """The word's ``k`` highest-ranked senses ([] for unindexed words)."""
        return list(self.index.get(word.lower(), ())[:k])


def _skippable(line: str) -> bool:
    return not line.strip() or line[0].isspace()


def _parse_data(text: str) -> dict[str, Synset]:
    synsets: dict[str, Synset] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if _skippable(line):
            continue
        body = line.split("|", 1)
        tokens = body[0].split()
        gloss = body[1].strip() if len(body) > 1 else ""
        try:
            offset, lex_filenum, ss_type = tokens[0], int(tokens[1]), tokens[2]
            if ss_type != "n":
                raise ResourceParseError(
                    f"not a noun synset (ss_type={ss_type!r})", lineno)
            w_cnt = int(tokens[3], 16)
            pos = 4
            lemmas = []
            for _ in range(w_cnt):
                lemmas.append(tokens[pos].replace("_", " "))
                pos += 2  # skip the hex lex_id after each word
            p_cnt = int(tokens[pos])
            pos += 1
            hypernyms = []
            for _ in range(p_cnt):
                symbol, target, target_pos = tokens[pos], tokens[pos + 1], tokens[pos + 2]
                pos += 4  # symbol, offset, pos, source/target
                if symbol in _HYPERNYM_SYMBOLS and target_pos == "n":
                    hypernyms.append(f"{target}-n")
        except (IndexError, ValueError) as exc:
            raise ResourceParseError(f"malformed data line: {exc}", lineno) from None
        sid = f"{offset}-n"
        if lex_filenum not in LEXNAMES:
            raise ResourceParseError(
                f"unknown lexicographer file number {lex_filenum}", lineno)
        if sid in synsets:
            raise ResourceParseError(f"duplicate synset offset {offset}", lineno)
        if not gloss:
            raise ResourceParseError(f"synset {offset} has no gloss", lineno)
        synsets[sid] = Synset(
            id=sid, lexname=LEXNAMES[lex_filenum], lemmas=lemmas, gloss=gloss,
            hypernyms=hypernyms,
        )
    return synsets


def _parse_index(text: str) -> dict[str, list[str]]:
    index: dict[str, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if _skippable(line):
            continue
        tokens = line.split()
        try:
            lemma, pos_tag = tokens[0].lower(), tokens[1]
            if pos_tag != "n":
                raise ResourceParseError(f"not a noun entry ({pos_tag!r})", lineno)
            synset_cnt = int(tokens[2])
            p_cnt = int(tokens[3])
            offsets = tokens[4 + p_cnt + 2:]  # skip ptr symbols + 2 count fields
            if len(offsets) != synset_cnt:
                raise ResourceParseError(
                    f"expected {synset_cnt} offsets, found {len(offsets)}", lineno)
        except (IndexError, ValueError) as exc:
            raise ResourceParseError(f"malformed index line: {exc}", lineno) from None
        if lemma in index:
            raise ResourceParseError(f"duplicate index lemma {lemma!r}", lineno)
        index[lemma] = [f"{off}-n" for off in offsets]
    return index


def _parse_exceptions(text: str) -> dict[str, list[str]]:
    exceptions: dict[str, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if _skippable(line):
            continue
        tokens = line.lower().split()
        if len(tokens) < 2:
            raise ResourceParseError(f"exception needs a base form: {line!r}", lineno)
        exceptions.setdefault(tokens[0], []).extend(tokens[1:])
    return exceptions


def _check_acyclic(synsets: dict[str, Synset]) -> None:
    # Kahn's algorithm over hypernym edges; leftovers form a cycle.
    indegree = {sid: 0 for sid in synsets}
    for syn in synsets.values():
        for hyper in syn.hypernyms:
            indegree[hyper] += 1
    queue = deque(sid for sid, deg in indegree.items() if deg == 0)
    seen = 0
    while queue:
        sid = queue.popleft()
        seen += 1
        for hyper in synsets[sid].hypernyms:
            indegree[hyper] -= 1
            if indegree[hyper] == 0:
                queue.append(hyper)
    if seen != len(synsets):
        cyclic = sorted(sid for sid, deg in indegree.items() if deg > 0)
        raise ResourceIntegrityError(f"hypernym graph has a cycle near: {cyclic[:5]}")


def parse_wordnet(index_text: str, data_text: str,
                  exc_text: str | None = None) -> WordNetDb:
    """Parse index/data text (plus an optional exception list) into a WordNetDb.

    Integrity guarantees enforced here: every offset referenced by the index
    or by a hypernym pointer resolves to a parsed synset, and the hypernym
    graph is acyclic.
    """
    synsets = _parse_data(data_text)
    index = _parse_index(index_text)
    for lemma, sids in index.items():
        for rank, sid in enumerate(sids, start=1):
            if sid not in synsets:
                raise ResourceIntegrityError(
                    f"index entry {lemma!r} references missing synset {sid}")
            synsets[sid].sense_rank.setdefault(lemma, rank)
    for syn in synsets.values():
        for hyper in syn.hypernyms:
            if hyper not in synsets:
                raise ResourceIntegrityError(
                    f"synset {syn.id} has dangling hypernym {hyper}")
    _check_acyclic(synsets)
    exceptions = _parse_exceptions(exc_text) if exc_text else {}
    return WordNetDb(synsets=synsets, index=index, exceptions=exceptions)


def path_similarity(db: WordNetDb, a: str, b: str) -> float:
    """Similarity 1/(d+1) where d is the shortest undirected hypernym path.

    A virtual root node is linked to every synset without hypernyms so that
    any two nouns are connected even across separate taxonomy trees.
    Identical ids score 1.0.
    """
    if a not in db.synsets:
        raise WordNotFoundError(f"unknown synset id: {a!r}")
    if b not in db.synsets:
        raise WordNotFoundError(f"unknown synset id: {b!r}")
    if a == b:
        return 1.0
    adjacency: dict[str, set[str]] = {sid: set() for sid in db.synsets}
    adjacency[_VIRTUAL_ROOT] = set()
    for syn in db.synsets.values():
        if syn.hypernyms:
            for hyper in syn.hypernyms:
                adjacency[syn.id].add(hyper)
                adjacency[hyper].add(syn.id)
        else:
            adjacency[syn.id].add(_VIRTUAL_ROOT)
            adjacency[_VIRTUAL_ROOT].add(syn.id)
    dist = {a: 0}
    queue = deque([a])
    while queue:
        node = queue.popleft()
        if node == b:
            return 1.0 / (dist[node] + 1)
        for nxt in adjacency[node]:
            if nxt not in dist:
                dist[nxt] = dist[node] + 1
                queue.append(nxt)
    # With the virtual root every pair is connected; this is unreachable
    # for a well-formed db but kept as a guard.
    raise ResourceIntegrityError(f"no path between {a} and {b}")
