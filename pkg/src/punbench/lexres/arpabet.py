"""ARPAbet phoneme inventory used by the pronouncing dictionary parser.

The dictionary transcribes words with 39 phonemes; vowels additionally carry
a stress digit (0 = none, 1 = primary, 2 = secondary) appended to the symbol,
e.g. ``EH1``.  Consonants never carry a digit.
"""

from __future__ import annotations

VOWELS = frozenset(
    "AA AE AH AO AW AY EH ER EY IH IY OW OY UH UW".split()
)

CONSONANTS = frozenset(
    "B CH D DH F G HH JH K L M N NG P R S SH T TH V W Y Z ZH".split()
)

PHONEMES = VOWELS | CONSONANTS

STRESS_DIGITS = frozenset("012")


def is_valid_phone(token: str) -> bool:
    """True if ``token`` is a consonant, or a vowel with a stress digit."""
    if token in CONSONANTS:
        return True
    if len(token) >= 2 and token[-1] in STRESS_DIGITS and token[:-1] in VOWELS:
        return True
    return False


def strip_stress(token: str) -> str:
    """The bare phoneme symbol with any stress digit removed."""
    if token and token[-1] in STRESS_DIGITS:
        return token[:-1]
    return token
