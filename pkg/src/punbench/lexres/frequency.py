"""Word frequency table keyed on the Zipf scale.

A Zipf value is log10 of occurrences per billion tokens, so everyday words
land around 4-6 and rare words below 3.  Source format is one
``word<TAB>zipf`` pair per line; ``#`` starts a comment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import ResourceParseError


@dataclass
class FrequencyTable:
    values: dict[str, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.values


def parse_frequency_table(text: str) -> FrequencyTable:
    """Parse tab-separated ``word zipf`` lines into a FrequencyTable.

    Values must be finite and non-negative; later duplicates overwrite
    earlier ones.
    """
    values: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) != 2:
            raise ResourceParseError(
                f"expected 'word<TAB>zipf', got {line!r}", lineno
            )
        word, raw = parts[0].strip(), parts[1].strip()
        try:
            value = float(raw)
        except ValueError:
            raise ResourceParseError(f"bad zipf value {raw!r}", lineno) from None
        if not math.isfinite(value) or value < 0:
            raise ResourceParseError(f"zipf value out of range: {raw!r}", lineno)
        if not word:
            raise ResourceParseError("empty word", lineno)
        values[word.lower()] = value
    return FrequencyTable(values)


def zipf(table: FrequencyTable, word: str) -> float | None:
    """The word's Zipf frequency, or None when the word is not tabulated.

    Absence is reported as None, never a default value, so callers decide
    how untabulated words behave in their own filters.
    """
    return table.values.get(word.lower())
