"""Zipf frequency table parsing and lookups."""

from __future__ import annotations

import pytest

from punbench.errors import ResourceParseError
from punbench.lexres.frequency import parse_frequency_table, zipf


def test_fixture_table_size(freq):
    assert len(freq) == 21


def test_lookup_values(freq):
    assert zipf(freq, "dog") == 5.4
    assert zipf(freq, "fare") == 2.5


def test_lookup_is_case_insensitive(freq):
    assert zipf(freq, "DOG") == 5.4
    assert "Dog" in freq


def test_missing_word_is_none_not_zero(freq):
    assert zipf(freq, "zebra") is None
    assert "zebra" not in freq


def test_comments_and_blanks_skipped():
    table = parse_frequency_table("# header\n\ndog\t5.4\n")
    assert len(table) == 1


def test_later_duplicates_overwrite():
    table = parse_frequency_table("dog\t1.0\ndog\t2.0\n")
    assert zipf(table, "dog") == 2.0


def test_wrong_column_count_rejected_with_line_number():
    with pytest.raises(ResourceParseError, match="line 2"):
        parse_frequency_table("dog\t5.4\ncat\t1.0\t2.0\n")
    with pytest.raises(ResourceParseError):
        parse_frequency_table("dog 5.4\n")  # spaces, not a tab


def test_non_numeric_value_rejected():
    with pytest.raises(ResourceParseError, match="bad zipf value"):
        parse_frequency_table("dog\thigh\n")


def test_out_of_range_values_rejected():
    with pytest.raises(ResourceParseError, match="out of range"):
        parse_frequency_table("dog\t-1.0\n")
    with pytest.raises(ResourceParseError, match="out of range"):
        parse_frequency_table("dog\tinf\n")
    with pytest.raises(ResourceParseError, match="out of range"):
        parse_frequency_table("dog\tnan\n")


def test_tab_only_line_rejected():
    with pytest.raises(ResourceParseError):
        parse_frequency_table("\t4.0\n")
