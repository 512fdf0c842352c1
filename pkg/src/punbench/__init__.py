"""Multimodal pun benchmark toolkit.

Mines homophonic and homographic pun tuples from lexical resources, builds
caption+image samples with matched adversarial negatives, prunes
near-duplicates, and scores pun-recognition models across detection,
localization, and explanation tasks.
"""

from .divfilter import EmbeddingMatrix, cosine_distance_matrix, diversity_filter
from .errors import (
    ConfigurationError,
    ExportError,
    GenerationFormatError,
    HarnessError,
    JudgeFormatError,
    PunbenchError,
    ResourceIntegrityError,
    ResourceParseError,
    SampleValidityError,
    SubstitutionError,
    TemplateError,
    TransportError,
    WordNotFoundError,
)
from .evalharness import (
    MetricsReport,
    TaskSpec,
    aggregate_transcript,
    cohens_kappa,
    evaluate,
    parse_response,
    render_text_table,
)
from .miner import (
    HOMOGRAPHIC,
    HOMOPHONIC,
    MinerConfig,
    PunTuple,
    mine_homographs,
    mine_homophones,
)
from .pipeline import (
    Sample,
    build_es_negative,
    build_positive,
    build_rs_negative,
    dedupe_by_diversity,
    render_prompt,
)
from .seeding import rng_from, seed_from, stable_digest
from .store import Manifest, export_sft, load_dataset, save_dataset, split_dataset

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "EmbeddingMatrix",
    "ExportError",
    "GenerationFormatError",
    "HOMOGRAPHIC",
    "HOMOPHONIC",
    "HarnessError",
    "JudgeFormatError",
    "Manifest",
    "MetricsReport",
    "MinerConfig",
    "PunTuple",
    "PunbenchError",
    "ResourceIntegrityError",
    "ResourceParseError",
    "Sample",
    "SampleValidityError",
    "SubstitutionError",
    "TaskSpec",
    "TemplateError",
    "TransportError",
    "WordNotFoundError",
    "aggregate_transcript",
    "build_es_negative",
    "build_positive",
    "build_rs_negative",
    "cohens_kappa",
    "cosine_distance_matrix",
    "dedupe_by_diversity",
    "diversity_filter",
    "evaluate",
    "export_sft",
    "load_dataset",
    "mine_homographs",
    "mine_homophones",
    "parse_response",
    "render_prompt",
    "render_text_table",
    "rng_from",
    "save_dataset",
    "seed_from",
    "split_dataset",
    "stable_digest",
    "__version__",
]
