"""Pronouncing dictionary: parsing, serialization, and homophone tests.

Source format, one entry per line::

    WORD  PH1 PH2 PH3
    WORD(2)  PH1 PH2          ; an alternate pronunciation of WORD
    ;;; comment line

Keys are case-insensitive; alternate-pronunciation suffixes ``(2)``, ``(3)``
are merged into the base word's pronunciation list in file order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import ResourceParseError, WordNotFoundError
from .arpabet import is_valid_phone

Pronunciation = tuple[str, ...]

_ALT_SUFFIX = re.compile(r"\((\d+)\)$")


@dataclass
class PronDict:
    """Mapping from lowercased word to its ordered list of pronunciations."""

    entries: dict[str, list[Pronunciation]] = field(default_factory=dict)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def pronunciations(self, word: str) -> list[Pronunciation]:
        key = word.lower()
        if key not in self.entries:
            raise WordNotFoundError(f"word not in pronouncing dictionary: {word!r}")
        return self.entries[key]


def parse_pron_dict(text: str) -> PronDict:
    """Parse dictionary text into a PronDict.

    Raises ResourceParseError (with the offending line number) for entries
    with no phonemes or with symbols outside the phoneme inventory.
    """
    entries: dict[str, list[Pronunciation]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith(";;;"):
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise ResourceParseError(f"entry has no phonemes: {line!r}", lineno)
        raw_word, phones = tokens[0], tuple(tokens[1:])
        for ph in phones:
            if not is_valid_phone(ph):
                raise ResourceParseError(f"unknown phoneme symbol {ph!r}", lineno)
        word = _ALT_SUFFIX.sub("", raw_word).lower()
        if not word:
            raise ResourceParseError(f"entry has empty word: {line!r}", lineno)
        plist = entries.setdefault(word, [])
        if phones not in plist:
            plist.append(phones)
    return PronDict(entries)


def format_pron_dict(d: PronDict) -> str:
    """Serialize back to dictionary text (sorted words, ``(n)`` alternates)."""
    lines = []
    for word in sorted(d.entries):
        for i, phones in enumerate(d.entries[word]):
            name = word.upper() if i == 0 else f"{word.upper()}({i + 1})"
            lines.append(f"{name}  {' '.join(phones)}")
    return "\n".join(lines) + "\n"


def are_homophones(d: PronDict, w1: str, w2: str) -> bool:
    """True when the spellings differ (case-insensitively) and the words share
    at least one identical phoneme sequence, stress digits included."""
    if w1.lower() == w2.lower():
        return False
    p1 = d.pronunciations(w1)
    p2 = set(d.pronunciations(w2))
    return any(p in p2 for p in p1)
