"""Sample assembly: positives from mined tuples, adversarial negatives,
and embedding-based deduplication.

Every sample is checked against its content invariants at build time:
a positive's caption must contain the pun word, an explicative rewrite must
remove both words of the tuple, and a random-substitution rewrite must
replace the pun word with the drawn entity in both caption and image prompt.
"""

from __future__ import annotations

import difflib
import json
import re
from dataclasses import dataclass, field
from importlib import resources

from .clients import (
    Embedder,
    ImageGenRequest,
    ImageGenerator,
    ImageRef,
    TextGenRequest,
    TextGenerator,
    generate_text,
    replace_word,
)
from .divfilter import diversity_filter
from .errors import (
    ConfigurationError,
    GenerationFormatError,
    ResourceParseError,
    SampleValidityError,
    SubstitutionError,
    TemplateError,
)
from .miner import HOMOGRAPHIC, HOMOPHONIC, PunTuple, tuple_from_dict, tuple_to_dict
from .prompts import (
    CREATIVE_HOMOGRAPHIC,
    CREATIVE_HOMOPHONIC,
    EXPLICATIVE_SUBSTITUTION,
    RANDOM_SUBSTITUTION,
)
from .seeding import rng_from, seed_from, stable_digest

KIND_PUN_HOMOPHONIC = "pun-homophonic"
KIND_PUN_HOMOGRAPHIC = "pun-homographic"
KIND_NONPUN_ES = "nonpun-es"
KIND_NONPUN_RS = "nonpun-rs"
POSITIVE_KINDS = (KIND_PUN_HOMOPHONIC, KIND_PUN_HOMOGRAPHIC)
NEGATIVE_KINDS = (KIND_NONPUN_ES, KIND_NONPUN_RS)

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")
_GENERATION_LABEL = re.compile(
    r"(?im)^[ \t]*[-*>\s]*(?:\*\*)?"
    r"(?P<label>image description|caption|interpretation)"
    r"(?::\s*\*\*|\*\*\s*:|:)\s*"
)
_RS_OUTPUT_LABEL = re.compile(
    r"(?im)^[ \t]*[-*>\s]*(?:\*\*)?(?P<label>new visual|new caption)"
    r"(?::\s*\*\*|\*\*\s*:|:)\s*"
)


@dataclass(frozen=True)
class SubstitutionRecord:
    """How a negative was derived: strategy, original tuple, and the text
    that took the pun word's place (the drawn entity for random
    substitution; for explicative rewrites, the paraphrase when it can be
    recovered as a single contiguous edit)."""

    strategy: str  # "es" or "rs"
    source_tuple: PunTuple
    replacement: str


@dataclass
class Sample:
    """One benchmark item: caption + image + bookkeeping.

    ``tuple`` is always the underlying pun tuple (for negatives, the tuple of
    the positive they were derived from); ``substitution`` is set only on
    negatives.  ``interpretation`` is the ground-truth rationale and exists
    only on positives.
    """

    id: str
    kind: str
    caption: str
    image_prompt: str
    image: ImageRef
    tuple: PunTuple
    interpretation: str | None = None
    substitution: SubstitutionRecord | None = None
    provenance: dict = field(default_factory=dict)
    human_flags: dict | None = None

    @property
    def is_pun(self) -> bool:
        return self.kind in POSITIVE_KINDS

    @property
    def pun_type(self) -> str:
        return self.tuple.kind


def sample_id(kind: str, tup: PunTuple, caption: str) -> str:
    return stable_digest(kind, tup.kind, tup.w_p, tup.w_a, tup.s_p, tup.s_a, caption)


def render_prompt(template: str, bindings: dict[str, str]) -> str:
    """Substitute ``{name}`` placeholders; literal braces that do not wrap a
    bare identifier (e.g. JSON examples) pass through untouched."""

    def sub(match: re.Match) -> str:
        name = match.group(1)
        if name not in bindings:
            raise TemplateError(f"no binding for placeholder {{{name}}}")
        return str(bindings[name])

    return _PLACEHOLDER.sub(sub, template)


def _split_labeled(text: str, label_rx: re.Pattern,
                   expected: tuple[str, ...]) -> dict[str, str]:
    matches = list(label_rx.finditer(text))
    fields: dict[str, str] = {}
    for pos, match in enumerate(matches):
        label = match.group("label").lower()
        if label in fields:
            continue  # first occurrence wins
        end = matches[pos + 1].start() if pos + 1 < len(matches) else len(text)
        fields[label] = text[match.end():end].strip()
    missing = [label for label in expected if not fields.get(label)]
    if missing:
        raise GenerationFormatError(
            f"generator output is missing field(s): {', '.join(missing)}",
            raw=text)
    return fields


def parse_generation(text: str) -> tuple[str, str, str]:
    """Extract (image_description, caption, interpretation) from generator
    output.  Labels are case-insensitive and tolerate markdown bullets and
    bold; all three fields are required."""
    fields = _split_labeled(
        text, _GENERATION_LABEL, ("image description", "caption", "interpretation"))
    return fields["image description"], fields["caption"], fields["interpretation"]


def contains_word(text: str, word: str) -> bool:
    """Whole-word, case-insensitive containment, accepting the regular
    plural of ``word`` as an occurrence."""
    word = re.escape(word)
    return re.search(rf"\b{word}(?:s|es|ies)?\b", text, re.IGNORECASE) is not None


def _strip_caption_reply(text: str) -> str:
    """Normalize a caption-only generator reply: drop an optional label,
    surrounding quotes, and whitespace."""
    text = text.strip()
    text = re.sub(r"(?i)^(?:output|new caption)\s*:\s*", "", text).strip()
    if len(text) >= 2 and text[0] in "\"'“" and text[-1] in "\"'”":
        text = text[1:-1].strip()
    return text


def build_positive(tup: PunTuple, textgen: TextGenerator,
                   imagegen: ImageGenerator, seed: int = 0) -> Sample:
    """Create one positive sample from a mined tuple.

    The creative prompt is rendered from the tuple's words and glosses, the
    reply parsed into its three fields, and the image rendered from the
    image description.  A caption that fails to contain the pun word, or an
    empty interpretation, raises SampleValidityError.
    """
    if tup.kind == HOMOPHONIC:
        prompt = render_prompt(CREATIVE_HOMOPHONIC, {
            "word_a": tup.w_p, "gloss_a": tup.s_p_gloss,
            "word_b": tup.w_a, "gloss_b": tup.s_a_gloss,
        })
        kind = KIND_PUN_HOMOPHONIC
    else:
        prompt = render_prompt(CREATIVE_HOMOGRAPHIC, {
            "word": tup.w_p, "gloss_p": tup.s_p_gloss, "gloss_a": tup.s_a_gloss,
        })
        kind = KIND_PUN_HOMOGRAPHIC
    gen_seed = seed_from(seed, "creative", tup.kind, tup.w_p, tup.w_a, tup.s_p, tup.s_a)
    reply = generate_text(textgen, TextGenRequest(prompt=prompt, seed=gen_seed))
    image_prompt, caption, interpretation = parse_generation(reply.text)
    if not contains_word(caption, tup.w_p):
        raise SampleValidityError(
            f"positive caption must contain pun word {tup.w_p!r}: {caption!r}")
    if not interpretation.strip():
        raise SampleValidityError("positive sample requires an interpretation")
    image = imagegen.render(ImageGenRequest(scene=image_prompt, seed=gen_seed))
    return Sample(
        id=sample_id(kind, tup, caption),
        kind=kind,
        caption=caption,
        image_prompt=image_prompt,
        image=image,
        tuple=tup,
        interpretation=interpretation,
        provenance={"textgen": textgen.name, "imagegen": imagegen.name,
                    "seed": seed},
    )


def _single_span_diff(old: str, new: str) -> str:
    """The inserted text when ``new`` differs from ``old`` by one contiguous
    replacement; "" otherwise."""
    ops = [op for op in difflib.SequenceMatcher(a=old, b=new).get_opcodes()
           if op[0] != "equal"]
    if len(ops) == 1 and ops[0][0] in ("replace", "insert"):
        _, _, _, lo, hi = ops[0]
        return new[lo:hi].strip()
    return ""


def build_es_negative(positive: Sample, textgen: TextGenerator,
                      seed: int = 0) -> Sample:
    """Create the explicative-substitution negative of a positive sample.

    The caption is rewritten so the hidden meaning is stated outright; the
    image is carried over unchanged, making the perturbation text-only.  The
    rewritten caption must not contain either tuple word.  One regeneration
    is attempted before giving up.
    """
    tup = positive.tuple
    prompt = render_prompt(EXPLICATIVE_SUBSTITUTION, {
        "caption": positive.caption, "word": tup.w_p, "meaning": tup.s_a_gloss,
    })
    last_caption = ""
    for attempt in range(2):
        gen_seed = seed_from(seed, "es", positive.id, attempt)
        reply = generate_text(textgen, TextGenRequest(prompt=prompt, seed=gen_seed))
        caption = _strip_caption_reply(reply.text)
        last_caption = caption
        if (caption and not contains_word(caption, tup.w_p)
                and not contains_word(caption, tup.w_a)):
            record = SubstitutionRecord(
                strategy="es", source_tuple=tup,
                replacement=_single_span_diff(positive.caption, caption))
            return Sample(
                id=sample_id(KIND_NONPUN_ES, tup, caption),
                kind=KIND_NONPUN_ES,
                caption=caption,
                image_prompt=positive.image_prompt,
                image=positive.image,
                tuple=tup,
                substitution=record,
                provenance={"textgen": textgen.name, "seed": seed,
                            "source_sample_id": positive.id},
            )
    raise SubstitutionError(
        f"explicative rewrite kept a tuple word after retry: {last_caption!r}")


def build_rs_negative(positive: Sample, textgen: TextGenerator,
                      imagegen: ImageGenerator, pool: list[str],
                      seed: int = 0) -> Sample:
    """Create the random-substitution negative of a positive sample.

    A concrete noun is drawn (seeded) from the pool, skipping entries that
    collide with either tuple word; the generator rewrites caption and image
    prompt around it and a new image is rendered.
    """
    tup = positive.tuple
    if not pool:
        raise ConfigurationError("substitute noun pool is empty")
    shuffled = list(pool)
    rng_from(seed, "rs", positive.id).shuffle(shuffled)
    forbidden = {tup.w_p.lower(), tup.w_a.lower()}
    entity = next((noun for noun in shuffled if noun.lower() not in forbidden), None)
    if entity is None:
        raise ConfigurationError(
            "substitute noun pool exhausted: every entry collides with the tuple")
    prompt = render_prompt(RANDOM_SUBSTITUTION, {
        "visual_description": positive.image_prompt,
        "caption": positive.caption,
        "word": tup.w_p,
        "entity": entity,
    })
    gen_seed = seed_from(seed, "rs", positive.id)
    reply = generate_text(textgen, TextGenRequest(prompt=prompt, seed=gen_seed))
    fields = _split_labeled(reply.text, _RS_OUTPUT_LABEL, ("new visual", "new caption"))
    new_visual = fields["new visual"].strip()
    new_caption = _strip_caption_reply(fields["new caption"])
    for label, text in (("caption", new_caption), ("image prompt", new_visual)):
        if contains_word(text, tup.w_p):
            raise SubstitutionError(
                f"random substitution left pun word in {label}: {text!r}")
        if not contains_word(text, entity):
            raise SubstitutionError(
                f"random substitution dropped entity {entity!r} from {label}: {text!r}")
    image = imagegen.render(ImageGenRequest(scene=new_visual, seed=gen_seed))
    return Sample(
        id=sample_id(KIND_NONPUN_RS, tup, new_caption),
        kind=KIND_NONPUN_RS,
        caption=new_caption,
        image_prompt=new_visual,
        image=image,
        tuple=tup,
        substitution=SubstitutionRecord(strategy="rs", source_tuple=tup,
                                        replacement=entity),
        provenance={"textgen": textgen.name, "imagegen": imagegen.name,
                    "seed": seed, "source_sample_id": positive.id},
    )


def mechanical_rs_rewrite(text: str, word: str, entity: str) -> str:
    """Deterministic fallback rewrite used by tests and tooling: whole-word
    replacement of the pun word (and its plural) with the entity."""
    return replace_word(text, word, entity)


def dedupe_by_diversity(samples: list[Sample], embedder: Embedder,
                        k: int) -> tuple[list[Sample], float]:
    """Prune the sample list down to its k most diverse members, measured on
    embeddings of their ground-truth interpretations.  Survivors keep their
    original order.  Returns (survivors, minimum surviving pairwise distance).
    """
    missing = [s.id for s in samples if not (s.interpretation or "").strip()]
    if missing:
        raise ValueError(f"samples without interpretations: {missing[:5]}")
    if len({s.id for s in samples}) != len(samples):
        raise ValueError("duplicate sample ids")
    em = embedder.embed([s.interpretation for s in samples])
    em.ids = [s.id for s in samples]
    kept_ids, d_min = diversity_filter(em, k)
    kept = set(kept_ids)
    return [s for s in samples if s.id in kept], d_min


def load_substitute_pool() -> list[str]:
    """The bundled pool of concrete, depictable substitute nouns."""
    text = (resources.files("punbench") / "data" / "substitute_nouns.txt").read_text(
        encoding="utf-8")
    pool = [line.strip() for line in text.splitlines()
            if line.strip() and not line.startswith("#")]
    if not pool:
        raise ConfigurationError("bundled substitute noun pool is empty")
    return pool


# ---------------------------------------------------------------------------
# Serialization


def _image_to_dict(image: ImageRef) -> dict:
    return {"uri": image.uri, "sha256": image.sha256, "num_bytes": image.num_bytes}


def sample_to_dict(sample: Sample) -> dict:
    obj = {
        "id": sample.id,
        "kind": sample.kind,
        "caption": sample.caption,
        "image_prompt": sample.image_prompt,
        "image": _image_to_dict(sample.image),
        "tuple": tuple_to_dict(sample.tuple),
        "interpretation": sample.interpretation,
        "substitution": None,
        "provenance": sample.provenance,
    }
    if sample.substitution is not None:
        obj["substitution"] = {
            "strategy": sample.substitution.strategy,
            "source_tuple": tuple_to_dict(sample.substitution.source_tuple),
            "replacement": sample.substitution.replacement,
        }
    if sample.human_flags is not None:
        obj["human_flags"] = sample.human_flags
    return obj


def sample_from_dict(obj: dict) -> Sample:
    substitution = None
    if obj.get("substitution"):
        sub = obj["substitution"]
        substitution = SubstitutionRecord(
            strategy=sub["strategy"],
            source_tuple=tuple_from_dict(sub["source_tuple"]),
            replacement=sub.get("replacement", ""),
        )
    image = obj["image"]
    return Sample(
        id=obj["id"],
        kind=obj["kind"],
        caption=obj["caption"],
        image_prompt=obj["image_prompt"],
        image=ImageRef(uri=image["uri"], sha256=image["sha256"],
                       num_bytes=image["num_bytes"]),
        tuple=tuple_from_dict(obj["tuple"]),
        interpretation=obj.get("interpretation"),
        substitution=substitution,
        provenance=obj.get("provenance", {}),
        human_flags=obj.get("human_flags"),
    )


def dump_samples(samples: list[Sample]) -> str:
    return "".join(json.dumps(sample_to_dict(s), ensure_ascii=False) + "\n"
                   for s in samples)


def load_samples(text: str) -> list[Sample]:
    samples = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            samples.append(sample_from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ResourceParseError(f"bad sample record: {exc}", lineno) from None
    return samples
