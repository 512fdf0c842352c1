"""Generator, embedder, and judge clients.

Two families implement each protocol: deterministic mocks (pure functions of
their inputs and seed, suitable for tests and offline pipeline runs) and live
HTTP adapters (bearer-token auth, bounded retries with seeded jitter).  The
pipeline and harness only see the protocol, so the families are
interchangeable.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np

from .divfilter import EmbeddingMatrix
from .errors import ConfigurationError, TransportError
from .seeding import rng_from, stable_digest

EMBED_DIM = 64


@dataclass(frozen=True)
class TextGenRequest:
    prompt: str
    seed: int = 0
    max_tokens: int = 1024


@dataclass(frozen=True)
class TextGenResponse:
    text: str
    client: str


@dataclass(frozen=True)
class ImageGenRequest:
    scene: str
    seed: int = 0


@dataclass(frozen=True)
class ImageRef:
    """Opaque handle to a rendered image: content-addressed path and size."""

    uri: str
    sha256: str
    num_bytes: int


class TextGenerator(Protocol):
    name: str

    def generate(self, request: TextGenRequest) -> TextGenResponse: ...


class ImageGenerator(Protocol):
    name: str

    def render(self, request: ImageGenRequest) -> ImageRef: ...


class Embedder(Protocol):
    name: str

    def embed(self, texts: list[str]) -> EmbeddingMatrix: ...


def generate_text(client: TextGenerator, request: TextGenRequest) -> TextGenResponse:
    if not request.prompt:
        raise ValueError("prompt must be non-empty")
    return client.generate(request)


def embed(client: Embedder, texts: list[str]) -> EmbeddingMatrix:
    if not texts:
        raise ValueError("need at least one text to embed")
    return client.embed(list(texts))


# ---------------------------------------------------------------------------
# Mock clients


def _plural(noun: str) -> str:
    if re.search(r"(s|x|z|ch|sh)$", noun):
        return noun + "es"
    if noun.endswith("y") and len(noun) > 1 and noun[-2] not in "aeiou":
        return noun[:-1] + "ies"
    return noun + "s"


_STOPWORDS = frozenset(
    "a an the of and or in on by to for with from its his her their".split()
)


def _paraphrase(meaning: str, forbidden: set[str]) -> str:
    """A crude stand-in paraphrase: the meaning's content words, minus any
    token that would reintroduce a forbidden word."""
    words = []
    for token in re.findall(r"[a-z]+", meaning.lower()):
        if token in _STOPWORDS:
            continue
        if any(token in bad or bad in token for bad in forbidden):
            continue
        words.append(token)
    return " ".join(words[:4]) if words else "something else entirely"


_WORD_A = re.compile(r"^\* Word A: (?P<word>[^:]+): (?P<gloss>.+)$", re.M)
_WORD_B = re.compile(r"^\* Word B: (?P<word>[^:]+): (?P<gloss>.+)$", re.M)
_THE_WORD = re.compile(r"^\* The Word: (?P<word>.+)$", re.M)
_DEF2 = re.compile(r"^\* Definition 2 \(Hidden Context\): (?P<gloss>.+)$", re.M)
_ES_CAPTION = re.compile(r"^Original Caption: (?P<caption>.+)$", re.M)
_ES_WORD = re.compile(r"^Pun Word \(w_p\): (?P<word>.+)$", re.M)
_ES_MEANING = re.compile(r"^Hidden Meaning \(S_a\): (?P<meaning>.+)$", re.M)
_RS_VISUAL = re.compile(r"^Original Image Prompt: (?P<visual>.+)$", re.M)
_RS_ENTITY = re.compile(r"^Random Entity: (?P<entity>.+)$", re.M)


def replace_word(text: str, word: str, replacement: str) -> str:
    """Replace whole-word occurrences of ``word`` (and its regular plural)
    with ``replacement``, carrying the plural over and keeping leading case."""

    def sub(match: re.Match) -> str:
        token = match.group(0)
        out = replacement
        if token.lower() != word.lower():  # matched the plural form
            out = _plural(replacement)
        if token[0].isupper():
            out = out[0].upper() + out[1:]
        return out

    pattern = re.compile(
        rf"\b({re.escape(word)}|{re.escape(_plural(word))})\b", re.IGNORECASE
    )
    return pattern.sub(sub, text)


def _last_section(prompt: str, marker: str) -> str:
    """Text after the final occurrence of ``marker`` (the live-input section,
    past any worked example embedded in the template)."""
    idx = prompt.rfind(marker)
    return prompt[idx:] if idx >= 0 else prompt


@dataclass
class MockTextGenerator:
    """Deterministic text generator.

    Recognizes the package's own prompt families by their field labels and
    answers with well-formed output assembled from the bound values; any
    other prompt gets a tagged echo line.  Responses embed a digest of
    (prompt, seed) so distinct seeds yield distinct texts.

    ``es_replacements`` optionally maps a pun word to the paraphrase the
    explicative rewrite should use, overriding the generic one.
    ``omit_pun_word`` makes creative captions drop the pun word, for
    exercising the pipeline's validity checks.
    """

    es_replacements: dict[str, str] = field(default_factory=dict)
    omit_pun_word: bool = False
    name: str = "mock-textgen"

    def generate(self, request: TextGenRequest) -> TextGenResponse:
        tag = stable_digest(request.prompt, request.seed, size=4)
        prompt = request.prompt
        current = _last_section(prompt, "# Current Input")
        if "Explicative Substitution variant" in prompt:
            text = self._explicative(prompt)
        elif "Random Substitution variant" in prompt:
            text = self._random_sub(prompt)
        elif _WORD_A.search(current) and _WORD_B.search(current):
            text = self._homophonic(current, tag)
        elif _THE_WORD.search(current) and _DEF2.search(current):
            text = self._homographic(current, tag)
        else:
            text = f"mock reply {tag}"
        return TextGenResponse(text=text, client=self.name)

    def _homophonic(self, section: str, tag: str) -> str:
        word_a = _WORD_A.search(section).group("word").strip()
        word_b = _WORD_B.search(section).group("word").strip()
        gloss_b = _WORD_B.search(section).group("gloss").strip()
        shown = "item" if self.omit_pun_word else word_a
        return (
            f"Image Description: Two cartoon {_plural(word_a)} posed together, "
            f"acting out '{gloss_b}'.\n\n"
            f"Caption: We make a great {shown}.\n\n"
            f"Interpretation: Visual depicts {_plural(word_a)} (literal object, S_p) "
            f"behaving like '{gloss_b}' (figurative sense, S_a). The caption plays "
            f"on the sound shared by '{word_a}' (w_p) and '{word_b}' (w_a). "
            f"[variant {tag}]\n"
        )

    def _homographic(self, section: str, tag: str) -> str:
        word = _THE_WORD.search(section).group("word").strip()
        gloss_a = _DEF2.search(section).group("gloss").strip()
        shown = "thing" if self.omit_pun_word else word
        return (
            f"Image Description: A cartoon {word} staged to suggest "
            f"'{gloss_a}'.\n\n"
            f"Caption: I'm your biggest {shown}.\n\n"
            f"Interpretation: Visual shows the literal {word} (S_p) while the "
            f"caption reads it as '{gloss_a}' (S_a); one spelling carries both "
            f"meanings. [variant {tag}]\n"
        )

    def _explicative(self, prompt: str) -> str:
        caption = _ES_CAPTION.search(prompt).group("caption").strip()
        word = _ES_WORD.search(prompt).group("word").strip()
        meaning = _ES_MEANING.search(prompt).group("meaning").strip()
        replacement = self.es_replacements.get(
            word.lower(), _paraphrase(meaning, {word.lower()})
        )
        return replace_word(caption, word, replacement)

    def _random_sub(self, prompt: str) -> str:
        visual = _RS_VISUAL.search(prompt).group("visual").strip()
        caption = _ES_CAPTION.search(prompt).group("caption").strip()
        word = _ES_WORD.search(prompt).group("word").strip()
        entity = _RS_ENTITY.search(prompt).group("entity").strip()
        return (
            f"New Visual: {replace_word(visual, word, entity)}\n"
            f"New Caption: {replace_word(caption, word, entity)}\n"
        )


@dataclass
class MockEmbedder:
    """Hash character trigrams of each text into a fixed-width unit vector.

    The text is padded with sentinel characters so even one-character inputs
    produce trigrams; each trigram's digest picks a bucket and a sign.
    Identical texts always produce identical rows.
    """

    dim: int = EMBED_DIM
    name: str = "mock-embedder"

    def embed(self, texts: list[str]) -> EmbeddingMatrix:
        if not texts:
            raise ValueError("need at least one text to embed")
        rows = np.zeros((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            padded = f"\x02\x02{text}\x03\x03"
            for j in range(len(padded) - 2):
                digest = hashlib.blake2b(
                    padded[j:j + 3].encode("utf-8"), digest_size=8
                ).digest()
                bucket = int.from_bytes(digest[:4], "big") % self.dim
                sign = 1.0 if digest[4] % 2 == 0 else -1.0
                rows[i, bucket] += sign
            norm = np.linalg.norm(rows[i])
            if norm == 0.0:  # all buckets cancelled; fall back to a constant
                rows[i, 0] = 1.0
                norm = 1.0
            rows[i] /= norm
        return EmbeddingMatrix(ids=[str(i) for i in range(len(texts))], rows=rows)


@dataclass
class MockImageGenerator:
    """Write a tiny deterministic PPM image derived from the scene text.

    The file content depends only on (scene, seed); the filename is the
    content hash, so re-rendering an identical request is idempotent.
    """

    out_dir: str
    name: str = "mock-imagegen"
    _SIDE = 8

    def render(self, request: ImageGenRequest) -> ImageRef:
        digest = hashlib.blake2b(
            f"{request.scene}\x1f{request.seed}".encode("utf-8"), digest_size=32
        ).digest()
        pixels = bytes(
            digest[(i + j) % len(digest)]
            for i in range(self._SIDE * self._SIDE)
            for j in range(3)
        )
        content = b"P6\n%d %d\n255\n" % (self._SIDE, self._SIDE) + pixels
        sha = hashlib.sha256(content).hexdigest()
        os.makedirs(self.out_dir, exist_ok=True)
        filename = f"{sha}.ppm"
        path = os.path.join(self.out_dir, filename)
        if not os.path.exists(path):
            with open(path, "wb") as fh:
                fh.write(content)
        return ImageRef(uri=filename, sha256=sha, num_bytes=len(content))


@dataclass
class MockJudge:
    """A judge that calls every comparison a tie."""

    name: str = "mock-judge"

    def generate(self, request: TextGenRequest) -> TextGenResponse:
        return TextGenResponse(text="TIE", client=self.name)


@dataclass
class ScriptedSubject:
    """Test subject answering benchmark prompts under a fixed policy.

    Policies:
      ``always-pun``   every caption is a pun;
      ``never-pun``    nothing is a pun;
      ``bias-follow``  answers whatever the prompt's bias suggests;
      ``gold``         echoes the gold label using the supplied oracle map
                       from caption text to its gold record.
    """

    policy: str = "always-pun"
    gold: dict[str, dict] = field(default_factory=dict)
    name: str = "mock-subject"

    _CAPTION = re.compile(r"^Caption: (?P<caption>.+)$", re.M)

    def generate(self, request: TextGenRequest) -> TextGenResponse:
        if self.policy == "always-pun":
            return TextGenResponse('{"is_pun": true}', self.name)
        if self.policy == "never-pun":
            return TextGenResponse('{"is_pun": false}', self.name)
        if self.policy == "bias-follow":
            verdict = "false" if "Non-Pun" in request.prompt else "true"
            return TextGenResponse(f'{{"is_pun": {verdict}}}', self.name)
        if self.policy == "gold":
            match = self._CAPTION.search(request.prompt)
            record = self.gold.get(match.group("caption").strip()) if match else None
            if not record or not record.get("is_pun"):
                return TextGenResponse('{"is_pun": false}', self.name)
            return TextGenResponse(json.dumps(record), self.name)
        raise ConfigurationError(f"unknown subject policy: {self.policy!r}")


# ---------------------------------------------------------------------------
# Pairwise judging

_VERDICT = re.compile(r"\b(?:WINNER\s*:\s*(?P<slot>[AB])|(?P<tie>TIE))\b", re.I)


def judge_pair(judge: TextGenerator, context: str, candidate: str,
               reference: str, seed: int = 0) -> str:
    """Compare a candidate explanation against the reference one.

    Slot order (which text is shown as A) is randomized per (seed, context)
    to cancel positional bias; the verdict is mapped back to the candidate's
    perspective.  Returns "win", "tie", or "loss"; an unrecognizable judge
    reply raises JudgeFormatError.
    """
    from .errors import JudgeFormatError
    from .pipeline import render_prompt
    from .prompts import PAIRWISE_JUDGE

    if not candidate.strip() or not reference.strip():
        raise ValueError("both explanations must be non-empty")
    candidate_first = rng_from(seed, context, "slot").random() < 0.5
    a, b = (candidate, reference) if candidate_first else (reference, candidate)
    prompt = render_prompt(PAIRWISE_JUDGE, {
        "caption": context, "explanation_a": a, "explanation_b": b,
    })
    reply = generate_text(judge, TextGenRequest(prompt=prompt, seed=seed)).text
    match = _VERDICT.search(reply)
    if not match:
        raise JudgeFormatError(f"no verdict found in judge reply: {reply!r}")
    if match.group("tie"):
        return "tie"
    slot = match.group("slot").upper()
    candidate_won = (slot == "A") == candidate_first
    return "win" if candidate_won else "loss"


# ---------------------------------------------------------------------------
# Live adapters

Transport = Callable[[str, dict, dict, float], dict]


def _default_transport(url: str, headers: dict, payload: dict,
                       timeout: float) -> dict:
    import requests

    response = requests.post(url, headers=headers, json=payload, timeout=timeout)
    response.raise_for_status()
    return response.json()


@dataclass
class LiveClientConfig:
    endpoint: str
    api_key_env: str = "PUNBENCH_API_KEY"
    retries: int = 3
    backoff_base: float = 0.5
    timeout: float = 60.0
    seed: int = 0


class _LiveBase:
    """Shared request machinery: auth header, retries, seeded jitter, audit."""

    def __init__(self, config: LiveClientConfig, transport: Transport | None = None,
                 audit_path: str | None = None, sleep: Callable[[float], None] = time.sleep):
        self.config = config
        self.transport = transport or _default_transport
        self.audit_path = audit_path
        self.sleep = sleep
        self.name = f"live:{config.endpoint}"

    def _headers(self) -> dict:
        token = os.environ.get(self.config.api_key_env)
        if not token:
            raise ConfigurationError(
                f"environment variable {self.config.api_key_env} is not set")
        return {"Authorization": f"Bearer {token}"}

    def _post(self, payload: dict) -> dict:
        headers = self._headers()
        jitter = rng_from(self.config.seed, json.dumps(payload, sort_keys=True))
        last_error: Exception | None = None
        for attempt in range(1, self.config.retries + 1):
            try:
                result = self.transport(
                    self.config.endpoint, headers, payload, self.config.timeout)
                self._audit(payload, result, attempt)
                return result
            except Exception as exc:  # noqa: BLE001 - transport errors vary by backend
                last_error = exc
                if attempt < self.config.retries:
                    delay = self.config.backoff_base * (2 ** (attempt - 1))
                    self.sleep(delay * (1.0 + jitter.random()))
        raise TransportError(str(last_error), attempts=self.config.retries)

    def _audit(self, payload: dict, result: dict, attempt: int) -> None:
        if not self.audit_path:
            return
        with open(self.audit_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({
                "endpoint": self.config.endpoint,
                "payload": payload,
                "result": result,
                "attempt": attempt,
            }, ensure_ascii=False) + "\n")


class LiveTextGenerator(_LiveBase):
    """POSTs {"prompt", "seed", "max_tokens"}; expects {"completion": "..."}.

    The completion string is returned verbatim, no post-processing.
    """

    def generate(self, request: TextGenRequest) -> TextGenResponse:
        result = self._post({
            "prompt": request.prompt,
            "seed": request.seed,
            "max_tokens": request.max_tokens,
        })
        return TextGenResponse(text=str(result["completion"]), client=self.name)


class LiveEmbedder(_LiveBase):
    """POSTs {"texts": [...]}; expects {"embeddings": [[...], ...]}."""

    def embed(self, texts: list[str]) -> EmbeddingMatrix:
        if not texts:
            raise ValueError("need at least one text to embed")
        result = self._post({"texts": list(texts)})
        rows = np.array(result["embeddings"], dtype=np.float64)
        return EmbeddingMatrix(ids=[str(i) for i in range(len(texts))], rows=rows)


class LiveImageGenerator(_LiveBase):
    """POSTs {"scene", "seed"}; expects base64 {"image_b64": "..."} and
    writes the decoded bytes to a content-addressed file."""

    def __init__(self, config: LiveClientConfig, out_dir: str,
                 transport: Transport | None = None, audit_path: str | None = None):
        super().__init__(config, transport, audit_path)
        self.out_dir = out_dir

    def render(self, request: ImageGenRequest) -> ImageRef:
        import base64

        result = self._post({"scene": request.scene, "seed": request.seed})
        content = base64.b64decode(result["image_b64"])
        sha = hashlib.sha256(content).hexdigest()
        os.makedirs(self.out_dir, exist_ok=True)
        filename = f"{sha}.png"
        path = os.path.join(self.out_dir, filename)
        if not os.path.exists(path):
            with open(path, "wb") as fh:
                fh.write(content)
        return ImageRef(uri=filename, sha256=sha, num_bytes=len(content))
