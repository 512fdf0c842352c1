"""Rule-based noun lemmatization against the parsed lexicon.

The irregular-form exception list is consulted first; when it has no entry,
suffix-detachment rules are applied once.  Only candidates actually present
in the noun index are returned (the surface form itself included when it is
indexed), deduplicated in discovery order.
"""

from __future__ import annotations

from .wordnetdb import WordNetDb

# (suffix, replacement), tried in order on the lowercased form.
DETACHMENT_RULES: tuple[tuple[str, str], ...] = (
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
)


def lemmatize(db: WordNetDb, form: str) -> list[str]:
    """Candidate lemmas for ``form`` that exist in the noun index."""
    form = form.lower()
    in_index = form in db.index

    if form in db.exceptions:
        candidates = [form] if in_index else []
        for lemma in db.exceptions[form]:
            if lemma in db.index and lemma not in candidates:
                candidates.append(lemma)
        if candidates:
            return candidates

    candidates = [form] if in_index else []
    for suffix, replacement in DETACHMENT_RULES:
        if form.endswith(suffix) and len(form) > len(suffix):
            lemma = form[: -len(suffix)] + replacement
            if lemma in db.index and lemma not in candidates:
                candidates.append(lemma)
    return candidates
