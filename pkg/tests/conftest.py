"""Shared fixtures: the bundled mini lexicon, mined tuples, mock clients,
and a fully assembled positive/negative sample set."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from punbench.clients import MockEmbedder, MockImageGenerator, MockTextGenerator
from punbench.lexres.frequency import parse_frequency_table
from punbench.lexres.prondict import parse_pron_dict
from punbench.lexres.wordnetdb import parse_wordnet
from punbench.miner import mine_homographs, mine_homophones
from punbench.pipeline import (
    build_es_negative,
    build_positive,
    build_rs_negative,
    load_substitute_pool,
)

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def prondict():
    return parse_pron_dict(fixture_text("mini_prondict.txt"))


@pytest.fixture(scope="session")
def freq():
    return parse_frequency_table(fixture_text("mini_frequency.tsv"))


@pytest.fixture(scope="session")
def wordnet():
    return parse_wordnet(
        fixture_text("mini_index.noun"),
        fixture_text("mini_data.noun"),
        fixture_text("mini_noun.exc"),
    )


@pytest.fixture(scope="session")
def homophone_tuples(prondict, freq, wordnet):
    return mine_homophones(prondict, freq, wordnet)


@pytest.fixture(scope="session")
def homograph_tuples(freq, wordnet):
    return mine_homographs(freq, wordnet)


@pytest.fixture(scope="session")
def reported_rates():
    return json.loads(fixture_text("reported_model_rates.json"))


@pytest.fixture
def textgen():
    return MockTextGenerator()


@pytest.fixture
def imagegen(tmp_path):
    return MockImageGenerator(out_dir=str(tmp_path / "images"))


@pytest.fixture
def embedder():
    return MockEmbedder()


def build_sample_set(tuples, images_dir, seed: int = 7):
    """Positives for the given tuples, each followed by its ES and RS
    negatives (the benchmark's 2:1 layout)."""
    textgen = MockTextGenerator()
    imagegen = MockImageGenerator(out_dir=str(images_dir))
    pool = load_substitute_pool()
    samples = []
    for tup in tuples:
        positive = build_positive(tup, textgen, imagegen, seed=seed)
        samples.append(positive)
        samples.append(build_es_negative(positive, textgen, seed=seed))
        samples.append(build_rs_negative(positive, textgen, imagegen, pool, seed=seed))
    return samples


@pytest.fixture(scope="session")
def sample_set(homophone_tuples, homograph_tuples, tmp_path_factory):
    return build_sample_set(
        [*homophone_tuples, *homograph_tuples],
        tmp_path_factory.mktemp("images"),
    )
