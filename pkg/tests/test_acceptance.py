"""Acceptance gate: one test per release criterion.

Each criterion prints a single ``[acceptance] criterion N (<name>): PASS`` or
``FAIL`` line directly on the real stdout (bypassing pytest capture) so the
gate's outcome is readable from any test log, and any violation fails the
suite through the normal assertion mechanism.
"""

import itertools
import json
import random
import sys
import time
from collections import Counter, deque
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import FIXTURES
from punbench import clients, divfilter, evalharness, miner, pipeline, store
from punbench.cli import cli
from punbench.evalharness import cohens_kappa, parse_response, rates
from punbench.lexres.wordnetdb import Synset, WordNetDb, path_similarity

RESOURCES = (
    "--prondict", FIXTURES / "mini_prondict.txt",
    "--freq", FIXTURES / "mini_frequency.tsv",
    "--wordnet-index", FIXTURES / "mini_index.noun",
    "--wordnet-data", FIXTURES / "mini_data.noun",
    "--wordnet-exc", FIXTURES / "mini_noun.exc",
)


@contextmanager
def criterion(number: int, name: str, capfd):
    """Run one criterion body and print its verdict on the real stdout.

    The print happens inside ``capfd.disabled()`` so the line stays visible
    under pytest's default file-descriptor capture.
    """
    def announce(status: str) -> None:
        with capfd.disabled():
            print(f"[acceptance] criterion {number} ({name}): {status}",
                  file=sys.__stdout__, flush=True)

    try:
        yield
    except BaseException:
        announce("FAIL")
        raise
    announce("PASS")


# --------------------------------------------------------------------------
# 1. Published per-model rates must be internally consistent with `rates`.
# --------------------------------------------------------------------------

def test_criterion_1_published_rate_f1_identity(reported_rates, capfd):
    with criterion(1, "published-rate F1 identity", capfd):
        start = time.perf_counter()
        sizes = reported_rates["class_sizes"]
        rows = reported_rates["rows"]
        assert len(rows) == 66
        hits = 0
        spot = {}
        for row in rows:
            n_pos = sizes[row["pun_type"]]["positives"]
            n_neg = sizes[row["pun_type"]]["negatives"]
            tp = round(row["tpr"] * n_pos)
            tn = round(row["tnr"] * n_neg)
            computed = rates(tp, n_neg - tn, tn, n_pos - tp).f1
            if abs(computed - row["f1"]) <= 0.015:
                hits += 1
            if row["model"] == "GPT-5.1" and row["task"] == "detection":
                spot[row["pun_type"]] = computed
        assert hits / len(rows) >= 0.95
        assert spot["homophonic"] == pytest.approx(0.588, abs=0.01)
        assert spot["homographic"] == pytest.approx(0.551, abs=0.01)
        assert time.perf_counter() - start < 1.0


# --------------------------------------------------------------------------
# 2. Miner behavior on the bundled mini lexicon.
# --------------------------------------------------------------------------

def test_criterion_2_miner_fixture_behavior(prondict, freq, wordnet, capfd):
    with criterion(2, "miner fixture behavior", capfd):
        start = time.perf_counter()
        homophones = miner.mine_homophones(prondict, freq, wordnet)
        pairs = [(t.w_p, t.w_a) for t in homophones]
        assert ("pear", "pair") in pairs
        mentioned = {w for pair in pairs for w in pair}
        # dog/dogs share a pronunciation but also a lemma: rejected.
        assert not mentioned & {"dog", "dogs"}
        # fair/fare are homophones but fare is below the Zipf threshold.
        assert not mentioned & {"fair", "fare"}
        homographs = miner.mine_homographs(freq, wordnet)
        assert ("fan", "fan") in [(t.w_p, t.w_a) for t in homographs]
        words = {t.w_p for t in homographs}
        # Both apple senses live in natural categories (same lexname, too).
        assert "apple" not in words
        # kiwi's bird/fruit senses are distinct lexnames but both natural.
        assert "kiwi" not in words
        # baseball's game gloss names the ball: circular, leaks the answer.
        assert "baseball" not in words
        assert time.perf_counter() - start < 1.0


# --------------------------------------------------------------------------
# 3. Diversity filter equals a naive re-execution of its pseudocode.
# --------------------------------------------------------------------------

def _oracle_diversity_filter(em, k):
    """Literal, unoptimized transcription of the pruning loop."""
    dist = divfilter.cosine_distance_matrix(em)
    active = list(range(len(em)))
    while len(active) > k:
        _, i, j = min((dist[i][j], i, j)
                      for i, j in itertools.combinations(active, 2))
        phi_i = sum(dist[i][m] for m in active if m != i)
        phi_j = sum(dist[j][m] for m in active if m != j)
        active.remove(i if phi_i < phi_j else j)
    if len(active) < 2:
        d_min = float("inf")
    else:
        d_min = min(dist[i][j]
                    for i, j in itertools.combinations(active, 2))
    return [em.ids[i] for i in active], d_min


def _random_matrix(rng, max_n):
    n = rng.randint(1, max_n) if max_n < 10 else rng.randint(2, max_n)
    d = rng.randint(1, 4)
    rows = [[rng.uniform(-1.0, 1.0) for _ in range(d)] for _ in range(n)]
    if n >= 2 and rng.random() < 0.5:
        for _ in range(rng.randint(1, 2)):
            rows[rng.randrange(n)] = list(rows[rng.randrange(n)])
    return divfilter.EmbeddingMatrix(
        ids=[f"id{i}" for i in range(n)], rows=np.array(rows))


def test_criterion_3_diversity_filter_oracle(capfd):
    with criterion(3, "diversity filter oracle", capfd):
        start = time.perf_counter()
        rng = random.Random(20260814)
        for _ in range(200):
            em = _random_matrix(rng, max_n=6)
            k = rng.randint(1, len(em))
            got_ids, got_min = divfilter.diversity_filter(em, k)
            want_ids, want_min = _oracle_diversity_filter(em, k)
            assert got_ids == want_ids
            assert got_min == want_min
        for _ in range(1000):
            em = _random_matrix(rng, max_n=50)
            k = rng.randint(1, len(em))
            dist = divfilter.cosine_distance_matrix(em)
            input_min = min(dist[i][j]
                            for i, j in itertools.combinations(range(len(em)), 2))
            _, d_min = divfilter.diversity_filter(em, k)
            assert d_min >= input_min
        assert time.perf_counter() - start < 10.0


# --------------------------------------------------------------------------
# 4. Cohen's kappa equals a direct integer contingency-table computation.
# --------------------------------------------------------------------------

def _oracle_kappa(a, b):
    n = len(a)
    n11 = sum(1 for x, y in zip(a, b) if x and y)
    n00 = sum(1 for x, y in zip(a, b) if not x and not y)
    n10 = sum(1 for x, y in zip(a, b) if x and not y)
    n01 = sum(1 for x, y in zip(a, b) if not x and y)
    po_num = n11 + n00
    pe_num = (n11 + n10) * (n11 + n01) + (n01 + n00) * (n10 + n00)
    if pe_num == n * n:
        return 1.0 if po_num == n else 0.0
    return (po_num * n - pe_num) / (n * n - pe_num)


def test_criterion_4_kappa_contingency_oracle(capfd):
    with criterion(4, "kappa contingency oracle", capfd):
        rng = random.Random(4242)
        marginals = (0.0, 0.1, 0.5, 0.9, 1.0)
        for _ in range(500):
            n = rng.randint(2, 200)
            pa, pb = rng.choice(marginals), rng.choice(marginals)
            a = [rng.random() < pa for _ in range(n)]
            b = [rng.random() < pb for _ in range(n)]
            assert cohens_kappa(a, b) == pytest.approx(
                _oracle_kappa(a, b), abs=1e-12)
        documented = [
            ([True, True], [True, True], 1.0),
            ([False, False, False], [False, False, False], 1.0),
            ([True, True], [True, False], 0.0),
            ([True, False], [False, True], -1.0),
            ([True, True, True, False], [True, True, False, False], 0.5),
        ]
        for a, b, want in documented:
            assert cohens_kappa(a, b) == pytest.approx(want, abs=1e-12)


# --------------------------------------------------------------------------
# 5. Path similarity equals a hand-rolled BFS oracle on a random DAG.
# --------------------------------------------------------------------------

def _oracle_path_similarity(synsets, a, b):
    if a == b:
        return 1.0
    adjacency = {}
    for sid, syn in synsets.items():
        for parent in syn.hypernyms or ["*root*"]:
            adjacency.setdefault(sid, set()).add(parent)
            adjacency.setdefault(parent, set()).add(sid)
    depth = {a: 0}
    queue = deque([a])
    while queue:
        node = queue.popleft()
        if node == b:
            return 1.0 / (depth[node] + 1)
        for neighbor in adjacency.get(node, ()):
            if neighbor not in depth:
                depth[neighbor] = depth[node] + 1
                queue.append(neighbor)
    raise AssertionError("virtual root should connect every pair")


def test_criterion_5_path_similarity_bfs_oracle(capfd):
    with criterion(5, "path similarity BFS oracle", capfd):
        rng = random.Random(53035)
        synsets = {}
        for i in range(30):
            sid = f"{i:08d}-n"
            if i == 0 or rng.random() < 0.15:
                hypernyms = []
            else:
                hypernyms = [f"{p:08d}-n"
                             for p in rng.sample(range(i), rng.choice((1, 1, 2)))]
            synsets[sid] = Synset(id=sid, lexname="noun.artifact",
                                  lemmas=[f"node{i}"],
                                  gloss=f"synthetic node {i}",
                                  hypernyms=hypernyms)
        db = WordNetDb(synsets=synsets,
                       index={f"node{i}": [f"{i:08d}-n"] for i in range(30)},
                       exceptions={})
        ids = sorted(synsets)
        assert sum(1 for s in synsets.values() if not s.hypernyms) >= 2
        for a, b in itertools.combinations(ids, 2):
            assert path_similarity(db, a, b) == \
                _oracle_path_similarity(synsets, a, b)


# --------------------------------------------------------------------------
# 6. Mock pipeline is byte-reproducible; split arithmetic at full scale.
# --------------------------------------------------------------------------

def _full_mock_run(root) -> dict[str, bytes]:
    def run(*argv):
        assert cli([str(arg) for arg in argv]) == 0

    run("mine-homophones", "--out", root / "homophones.jsonl", *RESOURCES)
    run("mine-homographs", "--out", root / "homographs.jsonl", *RESOURCES)
    tuples = root / "tuples.jsonl"
    tuples.write_text(
        (root / "homophones.jsonl").read_text(encoding="utf-8")
        + (root / "homographs.jsonl").read_text(encoding="utf-8"),
        encoding="utf-8")
    run("generate", "--tuples", tuples, "--out", root / "positives.jsonl",
        "--images-dir", root / "images", "--mock", "--seed", 5, *RESOURCES)
    run("negatives", "--dataset", root / "positives.jsonl",
        "--out", root / "dataset.jsonl", "--images-dir", root / "images",
        "--mock", "--seed", 5)
    run("split", "--dataset", root / "dataset.jsonl",
        "--out-train", root / "train.jsonl", "--out-test", root / "test.jsonl",
        "--seed", 5)
    run("export-sft", "--train", root / "train.jsonl",
        "--out", root / "sft.jsonl")
    run("evaluate", "--dataset", root / "dataset.jsonl", "--mock",
        "--out-report", root / "report.json",
        "--transcript", root / "transcript.jsonl", "--seed", 5, *RESOURCES)

    _, manifest = store.load_dataset(str(root / "dataset.jsonl"))
    assert manifest.is_balanced()
    train_size = len((root / "train.jsonl").read_text(
        encoding="utf-8").splitlines())
    sft_size = len((root / "sft.jsonl").read_text(encoding="utf-8").splitlines())
    assert sft_size == 2 * train_size

    artifacts = {}
    for path in sorted(root.glob("*.json*")):
        artifacts[path.name] = path.read_bytes()
    for path in sorted((root / "images").iterdir()):
        artifacts[f"images/{path.name}"] = path.read_bytes()
    return artifacts


def _synthetic_corpus() -> list[pipeline.Sample]:
    """194 homophonic and 251 homographic positives, each with ES and RS."""
    samples = []
    for kind, positive_kind, count in (
            ("homophonic", pipeline.KIND_PUN_HOMOPHONIC, 194),
            ("homographic", pipeline.KIND_PUN_HOMOGRAPHIC, 251)):
        for i in range(count):
            if kind == "homophonic":
                tup = miner.PunTuple(
                    kind=kind, w_p=f"lit{kind}{i}", w_a=f"hid{kind}{i}",
                    s_p=f"{i:08d}-n", s_a=f"{i + 50000:08d}-n",
                    s_p_gloss="a depictable object",
                    s_a_gloss="a hidden figurative sense")
            else:
                word = f"both{kind}{i}"
                tup = miner.PunTuple(
                    kind=kind, w_p=word, w_a=word,
                    s_p=f"{i:08d}-n", s_a=f"{i + 50000:08d}-n",
                    s_p_gloss="a depictable object",
                    s_a_gloss="a hidden figurative sense")
            caption = f"We make a great {tup.w_p}."
            image = clients.ImageRef(uri=f"{kind}-{i}.ppm", sha256="0" * 64,
                                     num_bytes=1)
            positive_id = pipeline.sample_id(positive_kind, tup, caption)
            samples.append(pipeline.Sample(
                id=positive_id, kind=positive_kind, caption=caption,
                image_prompt="a synthetic scene", image=image, tuple=tup,
                interpretation="synthetic rationale"))
            for negative_kind, strategy in (
                    (pipeline.KIND_NONPUN_ES, "es"),
                    (pipeline.KIND_NONPUN_RS, "rs")):
                negative_caption = caption.replace(tup.w_p, f"other{i}")
                samples.append(pipeline.Sample(
                    id=pipeline.sample_id(negative_kind, tup, negative_caption),
                    kind=negative_kind, caption=negative_caption,
                    image_prompt="a synthetic scene", image=image, tuple=tup,
                    substitution=pipeline.SubstitutionRecord(
                        strategy=strategy, source_tuple=tup,
                        replacement=f"other{i}"),
                    provenance={"source_sample_id": positive_id}))
    return samples


def test_criterion_6_mock_pipeline_reproducibility(tmp_path, capfd):
    with criterion(6, "mock pipeline reproducibility", capfd):
        first = tmp_path / "first"
        second = tmp_path / "second"
        first.mkdir()
        second.mkdir()
        assert _full_mock_run(first) == _full_mock_run(second)

        corpus = _synthetic_corpus()
        assert store.build_manifest(corpus).is_balanced()
        spec = store.default_split_spec(corpus, seed=5)
        assert spec.train_positives == {"homographic": 125, "homophonic": 97}
        train, test = store.split_dataset(corpus, spec)
        assert (len(train), len(test)) == (666, 669)
        train_positives = Counter(s.pun_type for s in train if s.is_pun)
        test_positives = Counter(s.pun_type for s in test if s.is_pun)
        assert train_positives == {"homophonic": 97, "homographic": 125}
        assert test_positives == {"homophonic": 97, "homographic": 126}
        assert len(store.export_sft(train)) == 1332


# --------------------------------------------------------------------------
# 7. Response parser robustness corpus plus the canonical output formats.
# --------------------------------------------------------------------------

# (raw reply, parse_ok, verdict) under the detection task.
PARSER_CORPUS = [
    ('{"is_pun": true}', True, True),
    ('{"is_pun": false}', True, False),
    ('```json\n{"is_pun": true}\n```', True, True),
    ('```\n{"is_pun": false}\n```', True, False),
    ('Sure, here is my analysis: {"is_pun": true}.', True, True),
    ('Verdict below.\n\n{"is_pun": false}\n\nThanks!', True, False),
    ('first {not json} then {"is_pun": false} done', True, False),
    ('{"meta": {"model": "x"}, "is_pun": true}', True, True),
    ('[{"is_pun": true}]', True, True),
    ('{"is_pun": true, "type": "Homophonic"}', True, True),
    ('{"is_pun": true, "tuple": {"wp": "pear", "wa": "pair"}}', True, True),
    ('{"explanation": "brace } in string", "is_pun": true}', True, True),
    ('{"is_pun":false}', True, False),
    ('  {"is_pun" :  true }  ', True, True),
    ('{"is_pun": "true"}', False, None),
    ('{"is_pun": "false"}', False, None),
    ('{"is_pun": 1}', False, None),
    ('{"is_pun": null}', False, None),
    ('{"type": "Homophonic"}', False, None),
    ('certainly a pun!', False, None),
    ('', False, None),
    ('{"is_pun": tru', False, None),
]


def test_criterion_7_response_parser_corpus(capfd):
    with criterion(7, "response parser corpus", capfd):
        assert len(PARSER_CORPUS) >= 20
        for raw, ok, verdict in PARSER_CORPUS:
            got = parse_response(raw)
            assert got.parse_ok is ok, raw
            assert got.verdict is verdict, raw

        # Canonical non-pun output (all three tasks share it).
        got = parse_response('{"is_pun": false}')
        assert got.parse_ok and got.verdict is False

        # Canonical localization output: type plus the bare word pair.
        localization = json.dumps({
            "is_pun": True,
            "type": "Homophonic",
            "tuple": {"wp": "pear", "wa": "pair"},
        })
        got = parse_response(localization, task="localization")
        assert got.parse_ok and got.verdict is True
        assert got.pun_type == "homophonic"
        assert (got.pred_wp, got.pred_wa) == ("pear", "pair")
        assert got.pred_sp is None and got.pred_sa is None

        # Canonical explanation output: rationale plus the full tuple.
        explanation = json.dumps({
            "is_pun": True,
            "type": "Homographic",
            "explanation": "The caption reads the word in its hidden sense "
                           "while the image depicts the literal one.",
            "tuple": {"wp": "fan", "wa": "fan",
                      "Sp": "a device for producing a current of air",
                      "Sa": "an enthusiastic devotee of sports"},
        })
        got = parse_response(explanation, task="explanation")
        assert got.parse_ok and got.verdict is True
        assert got.pun_type == "homographic"
        assert (got.pred_wp, got.pred_wa) == ("fan", "fan")
        assert got.pred_sp == "a device for producing a current of air"
        assert got.pred_sa == "an enthusiastic devotee of sports"
        assert got.pred_explanation.startswith("The caption reads")
