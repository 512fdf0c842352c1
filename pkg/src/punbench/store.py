"""Dataset persistence, train/test splitting, and fine-tuning export.

A dataset is a JSONL file of samples plus a sibling ``<name>.manifest.json``
recording per-type counts, the pipeline seed, and resource fingerprints.
Loading re-counts the samples and rejects a dataset whose manifest no longer
matches its content.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

from .errors import ExportError, ResourceIntegrityError
from .evalharness import TaskSpec, build_task_prompt
from .miner import HOMOGRAPHIC, HOMOPHONIC
from .pipeline import (
    KIND_NONPUN_ES,
    KIND_NONPUN_RS,
    Sample,
    dump_samples,
    load_samples,
)
from .seeding import rng_from

PUN_TYPES = (HOMOPHONIC, HOMOGRAPHIC)


@dataclass
class Manifest:
    """Counts and fingerprints that pin down a dataset's identity."""

    counts: dict[str, dict[str, int]]   # pun type -> {positive, es, rs}
    seed: int = 0
    resource_fingerprints: dict[str, str] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(sum(c.values()) for c in self.counts.values())

    def is_balanced(self) -> bool:
        """True when every pun type has exactly one ES and one RS negative
        per positive (the benchmark's 2:1 negative ratio)."""
        return all(
            c["positive"] == c["es"] == c["rs"] and c["positive"] > 0
            for c in self.counts.values()
        )

    def to_dict(self) -> dict:
        return {
            "counts": self.counts,
            "seed": self.seed,
            "resource_fingerprints": self.resource_fingerprints,
            "total": self.total,
        }


def fingerprint(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def build_manifest(samples: list[Sample], seed: int = 0,
                   resource_fingerprints: dict[str, str] | None = None) -> Manifest:
    counts: dict[str, dict[str, int]] = {}
    for sample in samples:
        per_type = counts.setdefault(
            sample.pun_type, {"positive": 0, "es": 0, "rs": 0})
        if sample.is_pun:
            per_type["positive"] += 1
        elif sample.kind == KIND_NONPUN_ES:
            per_type["es"] += 1
        elif sample.kind == KIND_NONPUN_RS:
            per_type["rs"] += 1
        else:
            raise ValueError(f"unknown sample kind: {sample.kind!r}")
    return Manifest(counts=counts, seed=seed,
                    resource_fingerprints=resource_fingerprints or {})


def manifest_path(dataset_path: str) -> str:
    return dataset_path + ".manifest.json"


def save_dataset(samples: list[Sample], path: str, seed: int = 0,
                 resource_fingerprints: dict[str, str] | None = None) -> Manifest:
    """Write samples as JSONL with a sibling manifest; returns the manifest."""
    if len({s.id for s in samples}) != len(samples):
        raise ValueError("duplicate sample ids")
    manifest = build_manifest(samples, seed, resource_fingerprints)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_samples(samples))
    with open(manifest_path(path), "w", encoding="utf-8") as fh:
        fh.write(json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n")
    return manifest


def load_dataset(path: str, verify: bool = True) -> tuple[list[Sample], Manifest]:
    """Read a dataset and its manifest; recomputed counts must match."""
    with open(path, encoding="utf-8") as fh:
        samples = load_samples(fh.read())
    with open(manifest_path(path), encoding="utf-8") as fh:
        raw = json.load(fh)
    manifest = Manifest(
        counts=raw["counts"], seed=raw.get("seed", 0),
        resource_fingerprints=raw.get("resource_fingerprints", {}),
    )
    if verify:
        recounted = build_manifest(samples, manifest.seed,
                                   manifest.resource_fingerprints)
        if recounted.counts != manifest.counts:
            raise ResourceIntegrityError(
                f"manifest counts {manifest.counts} do not match dataset "
                f"counts {recounted.counts}")
    return samples, manifest


# ---------------------------------------------------------------------------
# Splitting


@dataclass(frozen=True)
class SplitSpec:
    """Per-type positive counts for the train side; the remainder is test.
    Negatives are not counted here because they follow their positive."""

    train_positives: dict[str, int]
    seed: int = 0


def default_split_spec(samples: list[Sample], seed: int = 0) -> SplitSpec:
    """Half of each type's positives (rounded down) go to train."""
    counts: dict[str, int] = {}
    for sample in samples:
        if sample.is_pun:
            counts[sample.pun_type] = counts.get(sample.pun_type, 0) + 1
    return SplitSpec(
        train_positives={t: n // 2 for t, n in counts.items()}, seed=seed)


def split_dataset(samples: list[Sample],
                  spec: SplitSpec) -> tuple[list[Sample], list[Sample]]:
    """Partition into (train, test) by a seeded shuffle of the positives.

    Each positive carries its ES and RS negatives to the same side, so no
    caption or image derived from a test pun can appear in training.  Output
    preserves the input's sample order.
    """
    positives = [s for s in samples if s.is_pun]
    negatives = [s for s in samples if not s.is_pun]
    by_source: dict[str, list[Sample]] = {}
    orphans = []
    for negative in negatives:
        source = negative.provenance.get("source_sample_id")
        if not source:
            orphans.append(negative.id)
        else:
            by_source.setdefault(source, []).append(negative)
    if orphans:
        raise ValueError(f"negatives without source positives: {orphans[:5]}")
    unknown = set(by_source) - {p.id for p in positives}
    if unknown:
        raise ValueError(f"negatives reference missing positives: {sorted(unknown)[:5]}")

    train_ids: set[str] = set()
    for pun_type, want_train in sorted(spec.train_positives.items()):
        pool = [p for p in positives if p.pun_type == pun_type]
        if not 0 <= want_train <= len(pool):
            raise ValueError(
                f"cannot put {want_train} of {len(pool)} {pun_type} positives "
                "into train")
        ids = sorted(p.id for p in pool)
        rng_from(spec.seed, "split", pun_type).shuffle(ids)
        train_ids.update(ids[:want_train])
    extra_types = {p.pun_type for p in positives} - set(spec.train_positives)
    if extra_types:
        raise ValueError(f"split spec missing pun types: {sorted(extra_types)}")

    def side(sample: Sample) -> bool:
        anchor = sample.id if sample.is_pun else sample.provenance["source_sample_id"]
        return anchor in train_ids

    train = [s for s in samples if side(s)]
    test = [s for s in samples if not side(s)]
    return train, test


# ---------------------------------------------------------------------------
# Fine-tuning export


def export_sft(train: list[Sample]) -> list[dict]:
    """Two fine-tuning records per training sample: the explanation task
    under each bias variant.

    Positives target the full gold JSON (type, rationale, tuple with both
    words and glosses); negatives target exactly {"is_pun": false}.  A
    positive without an interpretation cannot be exported.
    """
    records = []
    for sample in train:
        if sample.is_pun:
            if not (sample.interpretation or "").strip():
                raise ExportError(
                    f"positive {sample.id} has no interpretation to train on")
            tup = sample.tuple
            target_obj = {
                "is_pun": True,
                "type": tup.kind.capitalize(),
                "explanation": sample.interpretation,
                "tuple": {
                    "wp": tup.w_p,
                    "wa": tup.w_a,
                    "Sp": tup.s_p_gloss,
                    "Sa": tup.s_a_gloss,
                },
            }
        else:
            target_obj = {"is_pun": False}
        target = json.dumps(target_obj, ensure_ascii=False)
        for bias in ("to-pun", "to-non-pun"):
            spec = TaskSpec(task="explanation", bias=bias, strategy="vanilla")
            records.append({
                "sample_id": sample.id,
                "kind": sample.kind,
                "bias": bias,
                "image": sample.image.uri,
                "prompt": build_task_prompt(spec, sample.caption),
                "target": target,
            })
    return records


def dump_sft(records: list[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
