"""Lexical resources: pronouncing dictionary, frequency table, noun lexicon."""

from .arpabet import CONSONANTS, PHONEMES, VOWELS, is_valid_phone, strip_stress
from .frequency import FrequencyTable, parse_frequency_table, zipf
from .morphy import DETACHMENT_RULES, lemmatize
from .prondict import (
    PronDict,
    Pronunciation,
    are_homophones,
    format_pron_dict,
    parse_pron_dict,
)
from .wordnetdb import (
    LEXNAMES,
    NATURAL_LEXNAMES,
    VISUAL_LEXNAMES,
    Synset,
    WordNetDb,
    parse_wordnet,
    path_similarity,
)

__all__ = [
    "CONSONANTS", "PHONEMES", "VOWELS", "is_valid_phone", "strip_stress",
    "FrequencyTable", "parse_frequency_table", "zipf",
    "DETACHMENT_RULES", "lemmatize",
    "PronDict", "Pronunciation", "are_homophones", "format_pron_dict",
    "parse_pron_dict",
    "LEXNAMES", "NATURAL_LEXNAMES", "VISUAL_LEXNAMES", "Synset", "WordNetDb",
    "parse_wordnet", "path_similarity",
]
