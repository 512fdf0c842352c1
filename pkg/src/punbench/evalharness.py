"""Benchmark evaluation: task prompts, response parsing, and metrics.

Each sample is posed as three recognition tasks (detection, localization,
explanation), each under two bias variants (the prompt asks "is this a pun?"
or "is this a non-pun?").  Verdict semantics never flip: ``is_pun: true``
always means the model thinks the caption is a pun, in both variants.
Metrics are reported under the biased-to-pun prompt; deltas measure how much
each rate moves when the bias flips, and Cohen's kappa measures agreement
between the two variants' verdicts.
"""

from __future__ import annotations

import json
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

from .clients import TextGenerator, TextGenRequest, generate_text, judge_pair
from .errors import HarnessError, JudgeFormatError, TransportError
from .miner import HOMOGRAPHIC, HOMOPHONIC, PunTuple, tuple_from_dict, tuple_to_dict
from .pipeline import Sample, render_prompt
from .prompts import (
    BIAS_NOTE,
    DETECTION,
    EXPLANATION,
    LOCALIZATION,
    PUN_COT,
    task_sentence,
)
from .seeding import seed_from

TASKS = ("detection", "localization", "explanation")
BIASES = ("to-pun", "to-non-pun")
STRATEGIES = ("vanilla", "pun-cot")

_TASK_SUFFIX = {
    "detection": "",
    "localization": (
        " If yes, categorize the pun type and extract ONLY the word pair "
        "(w_p and w_a)."
    ),
    "explanation": (
        " If yes, categorize the pun type and extract the linguistic "
        "components following the formal notation P = <w_p, w_a, S_p, S_a>."
    ),
}


@dataclass(frozen=True)
class TaskSpec:
    """One evaluation condition: task x bias x prompting strategy."""

    task: str
    bias: str
    strategy: str = "vanilla"

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task: {self.task!r}")
        if self.bias not in BIASES:
            raise ValueError(f"unknown bias: {self.bias!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy: {self.strategy!r}")
        if self.strategy == "pun-cot" and self.task != "explanation":
            raise ValueError("the pun-cot strategy applies only to explanation")

    @property
    def key(self) -> str:
        return f"{self.task}/{self.bias}/{self.strategy}"


def build_task_prompt(spec: TaskSpec, caption: str) -> str:
    """Render the full prompt for one task condition and caption."""
    if spec.strategy == "pun-cot":
        template, suffix = PUN_COT, ""
    else:
        template = {"detection": DETECTION, "localization": LOCALIZATION,
                    "explanation": EXPLANATION}[spec.task]
        suffix = _TASK_SUFFIX[spec.task]
    return render_prompt(template, {
        "task_sentence": task_sentence(spec.bias, suffix),
        "bias_note": BIAS_NOTE if spec.bias == "to-non-pun" else "",
        "caption": caption,
    })


# ---------------------------------------------------------------------------
# Response parsing


@dataclass
class ModelResponse:
    """A parsed model reply.  ``parse_ok`` is False when no JSON object with
    a boolean ``is_pun`` could be found; the raw text is always retained."""

    raw: str
    parse_ok: bool = False
    verdict: bool | None = None
    pun_type: str | None = None
    pred_wp: str | None = None
    pred_wa: str | None = None
    pred_sp: str | None = None
    pred_sa: str | None = None
    pred_explanation: str | None = None


def _first_json_object(text: str) -> dict | None:
    """The first balanced, parseable JSON object in the text, scanning past
    code fences, prose, and malformed candidates."""
    start = text.find("{")
    while start != -1:
        depth, in_str, escaped = 0, False, False
        for i in range(start, len(text)):
            ch = text[i]
            if in_str:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_str = False
            elif ch == '"':
                in_str = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    try:
                        obj = json.loads(text[start:i + 1])
                        if isinstance(obj, dict):
                            return obj
                    except json.JSONDecodeError:
                        pass
                    break
        start = text.find("{", start + 1)
    return None


def _clean_str(value: object) -> str | None:
    if isinstance(value, str) and value.strip():
        return value.strip()
    return None


def parse_response(text: str, task: str = "detection") -> ModelResponse:
    """Parse a model reply for the given task.

    The verdict comes from the ``is_pun`` field, which must be a JSON
    boolean; a missing object, missing field, or string-typed boolean all
    leave ``parse_ok`` False.  Tuple fields are extracted for localization
    and explanation when present.
    """
    response = ModelResponse(raw=text)
    obj = _first_json_object(text)
    if obj is None or not isinstance(obj.get("is_pun"), bool):
        return response
    response.parse_ok = True
    response.verdict = obj["is_pun"]
    kind = _clean_str(obj.get("type"))
    if kind and kind.lower() in (HOMOPHONIC, HOMOGRAPHIC):
        response.pun_type = kind.lower()
    if task in ("localization", "explanation"):
        tup = obj.get("tuple")
        if isinstance(tup, dict):
            fields = {str(k).lower(): v for k, v in tup.items()}
            response.pred_wp = _clean_str(fields.get("wp"))
            response.pred_wa = _clean_str(fields.get("wa"))
            response.pred_sp = _clean_str(fields.get("sp"))
            response.pred_sa = _clean_str(fields.get("sa"))
    if task == "explanation":
        response.pred_explanation = _clean_str(obj.get("explanation"))
    return response


# ---------------------------------------------------------------------------
# Records and metric primitives


@dataclass
class EvalRecord:
    """All per-sample evaluation state: gold facts plus one parsed response
    per task condition (keyed by TaskSpec.key)."""

    sample_id: str
    pun_type: str
    gold_is_pun: bool
    caption: str
    gold_tuple: PunTuple | None = None
    gold_interpretation: str | None = None
    responses: dict[str, ModelResponse] = field(default_factory=dict)


def effective_verdict(record: EvalRecord, response: ModelResponse) -> bool:
    """The verdict used for scoring.  Unparseable replies are penalized:
    they count against the model's side (a miss on gold puns, a false alarm
    on gold non-puns)."""
    if response.parse_ok:
        return bool(response.verdict)
    return not record.gold_is_pun


def confusion(records: list[EvalRecord], spec: TaskSpec) -> tuple[int, int, int, int, int]:
    """(tp, fp, tn, fn, unparsed) over the records' responses for ``spec``.

    Unparseable replies are tallied separately *and* folded into fn/fp via
    the penalty rule.  Records without a response for the spec are an error,
    as is an empty record list.
    """
    if not records:
        raise HarnessError("no records to score")
    tp = fp = tn = fn = unparsed = 0
    for record in records:
        response = record.responses.get(spec.key)
        if response is None:
            raise HarnessError(
                f"record {record.sample_id} has no response for {spec.key}")
        if not response.parse_ok:
            unparsed += 1
        predicted = effective_verdict(record, response)
        if record.gold_is_pun:
            tp, fn = (tp + 1, fn) if predicted else (tp, fn + 1)
        else:
            fp, tn = (fp + 1, tn) if predicted else (fp, tn + 1)
    return tp, fp, tn, fn, unparsed


@dataclass(frozen=True)
class Rates:
    tpr: float
    tnr: float
    precision: float
    f1: float


def rates(tp: int, fp: int, tn: int, fn: int) -> Rates:
    """Sensitivity, specificity, precision, and F1 from confusion counts.

    Both classes must be represented (tp+fn >= 1 and tn+fp >= 1).  Precision
    is 0 when nothing was predicted positive, and F1 is 0 when precision and
    recall are both 0.
    """
    if min(tp, fp, tn, fn) < 0:
        raise ValueError("confusion counts must be non-negative")
    if tp + fn < 1 or tn + fp < 1:
        raise ValueError("need at least one gold positive and one gold negative")
    tpr = tp / (tp + fn)
    tnr = tn / (tn + fp)
    precision = tp / (tp + fp) if tp + fp else 0.0
    f1 = 2 * precision * tpr / (precision + tpr) if precision + tpr else 0.0
    return Rates(tpr=tpr, tnr=tnr, precision=precision, f1=f1)


def bias_delta(value_nonpun_bias: float, value_pun_bias: float) -> float:
    """How much a metric moves when the prompt bias flips from pun-seeking
    to non-pun-seeking: value under non-pun bias minus value under pun bias."""
    return value_nonpun_bias - value_pun_bias


def cohens_kappa(a: list[bool], b: list[bool]) -> float:
    """Chance-corrected agreement between two boolean verdict vectors.

    kappa = (p_o - p_e) / (1 - p_e).  When expected agreement is exactly 1
    (both raters constant and identical marginals), the result is defined as
    1.0 for perfect observed agreement and 0.0 otherwise.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if not a:
        raise ValueError("need at least one paired verdict")
    n = len(a)
    p_o = sum(x == y for x, y in zip(a, b)) / n
    pa = sum(a) / n
    pb = sum(b) / n
    p_e = pa * pb + (1 - pa) * (1 - pb)
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else 0.0
    return (p_o - p_e) / (1 - p_e)


_PUNCT = string.punctuation + "‘’“”"

Lemmatizer = Callable[[str], list[str]]


def normalize_word(word: str, lemmer: Lemmatizer | None = None) -> str:
    """Lowercase, trim, strip boundary punctuation, then lemmatize (when a
    lemmatizer is supplied and knows the word)."""
    word = word.strip().lower().strip(_PUNCT)
    if lemmer is not None and word:
        lemmas = lemmer(word)
        if lemmas:
            return lemmas[0]
    return word


def mention_ratio(records: list[EvalRecord], spec: TaskSpec, which: str,
                  lemmer: Lemmatizer | None = None) -> float | None:
    """Fraction of correctly parsed true-positive responses whose predicted
    word matches the gold word (after normalization).

    ``which`` is "wp" or "wa".  The denominator is records that are gold
    puns, predicted puns, and parsed cleanly; None when that set is empty.
    """
    if which not in ("wp", "wa"):
        raise ValueError(f"which must be 'wp' or 'wa', got {which!r}")
    hits = total = 0
    for record in records:
        if not record.gold_is_pun or record.gold_tuple is None:
            continue
        response = record.responses.get(spec.key)
        if response is None or not response.parse_ok or not response.verdict:
            continue
        total += 1
        gold = record.gold_tuple.w_p if which == "wp" else record.gold_tuple.w_a
        predicted = response.pred_wp if which == "wp" else response.pred_wa
        if predicted and normalize_word(predicted, lemmer) == normalize_word(gold, lemmer):
            hits += 1
    if total == 0:
        return None
    return hits / total


@dataclass(frozen=True)
class PairwiseRates:
    """Win/tie/loss fractions of model explanations judged against the
    ground-truth rationale.  Fractions are over successfully judged pairs;
    ``format_errors`` counts judge replies with no recognizable verdict."""

    win: float
    tie: float
    loss: float
    judged: int
    format_errors: int


def pairwise_rates(records: list[EvalRecord], spec: TaskSpec,
                   judge: TextGenerator, seed: int = 0) -> PairwiseRates | None:
    """Judge each true-positive explanation against the gold interpretation.

    Only records with a gold rationale and a non-empty predicted explanation
    are judgeable.  Returns None when no pair could be judged.
    """
    outcomes = {"win": 0, "tie": 0, "loss": 0}
    errors = 0
    for record in records:
        if not record.gold_is_pun or not record.gold_interpretation:
            continue
        response = record.responses.get(spec.key)
        if (response is None or not response.parse_ok or not response.verdict
                or not response.pred_explanation):
            continue
        try:
            outcome = judge_pair(
                judge, context=record.caption,
                candidate=response.pred_explanation,
                reference=record.gold_interpretation,
                seed=seed_from(seed, record.sample_id),
            )
            outcomes[outcome] += 1
        except JudgeFormatError:
            errors += 1
    judged = sum(outcomes.values())
    if judged == 0:
        return None
    return PairwiseRates(
        win=outcomes["win"] / judged,
        tie=outcomes["tie"] / judged,
        loss=outcomes["loss"] / judged,
        judged=judged,
        format_errors=errors,
    )


# ---------------------------------------------------------------------------
# Full harness


@dataclass
class MetricRow:
    """Aggregated metrics for one (pun type, task, strategy) cell.

    Primary rates come from the biased-to-pun variant; deltas and kappa need
    both variants and are None when only one was run.
    """

    pun_type: str
    task: str
    strategy: str
    n_pos: int
    n_neg: int
    tpr: float
    tnr: float
    precision: float
    f1: float
    delta_tpr: float | None = None
    delta_tnr: float | None = None
    kappa: float | None = None
    mention_wp: float | None = None
    mention_wa: float | None = None
    win: float | None = None
    tie: float | None = None
    loss: float | None = None
    judged: int | None = None
    judge_errors: int | None = None
    unparsed_to_pun: int | None = None
    unparsed_to_non_pun: int | None = None


@dataclass
class MetricsReport:
    seed: int
    repeats: int
    rows: list[MetricRow]                 # mean over runs
    per_run: list[list[MetricRow]]        # one row list per run

    def to_json(self) -> str:
        payload = {
            "seed": self.seed,
            "repeats": self.repeats,
            "rows": [asdict(row) for row in self.rows],
            "per_run": [[asdict(row) for row in run] for run in self.per_run],
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _sample_gold_record(sample: Sample) -> dict:
    return {
        "sample_id": sample.id,
        "pun_type": sample.pun_type,
        "gold_is_pun": sample.is_pun,
        "caption": sample.caption,
        "gold_tuple": tuple_to_dict(sample.tuple),
        "gold_interpretation": sample.interpretation,
    }


def run_queries(samples: list[Sample], subject: TextGenerator,
                specs: list[TaskSpec], seed: int = 0, repeats: int = 1,
                max_workers: int = 1) -> list[dict]:
    """Query the subject once per (run, sample, spec) and return transcript
    lines carrying the raw replies plus the gold facts needed to re-score.

    Queries are issued in sorted (run, sample id, spec) order and each gets
    a seed derived from (seed, run, sample id, spec), so a deterministic
    subject yields a byte-identical transcript.  Transport failures record
    an empty raw reply, which scores as unparseable.
    """
    if not samples:
        raise HarnessError("no samples to evaluate")
    if not specs:
        raise HarnessError("no task specs given")
    if len({spec.key for spec in specs}) != len(specs):
        raise HarnessError("duplicate task specs")
    if repeats < 1:
        raise HarnessError("repeats must be >= 1")
    ordered = sorted(samples, key=lambda s: s.id)
    if len({s.id for s in ordered}) != len(ordered):
        raise HarnessError("duplicate sample ids")
    queries = [
        (run, sample, spec)
        for run in range(repeats)
        for sample in ordered
        for spec in sorted(specs, key=lambda sp: sp.key)
    ]

    def ask(item: tuple[int, Sample, TaskSpec]) -> dict:
        run, sample, spec = item
        prompt = build_task_prompt(spec, sample.caption)
        qseed = seed_from(seed, run, sample.id, spec.key)
        try:
            raw = generate_text(
                subject, TextGenRequest(prompt=prompt, seed=qseed)).text
        except TransportError:
            raw = ""
        line = _sample_gold_record(sample)
        line.update({"run": run, "spec": spec.key, "raw": raw})
        return line

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(ask, queries))
    return [ask(query) for query in queries]


def _records_from_lines(lines: list[dict]) -> list[EvalRecord]:
    records: dict[str, EvalRecord] = {}
    for line in lines:
        sid = line["sample_id"]
        record = records.get(sid)
        if record is None:
            gold_tuple = (tuple_from_dict(line["gold_tuple"])
                          if line.get("gold_tuple") else None)
            record = EvalRecord(
                sample_id=sid,
                pun_type=line["pun_type"],
                gold_is_pun=line["gold_is_pun"],
                caption=line["caption"],
                gold_tuple=gold_tuple,
                gold_interpretation=line.get("gold_interpretation"),
            )
            records[sid] = record
        task = line["spec"].split("/", 1)[0]
        record.responses[line["spec"]] = parse_response(line["raw"], task)
    return [records[sid] for sid in sorted(records)]


def _aggregate_run(lines: list[dict], specs: list[TaskSpec],
                   lemmer: Lemmatizer | None, judge: TextGenerator | None,
                   seed: int) -> list[MetricRow]:
    records = _records_from_lines(lines)
    by_cell: dict[tuple[str, str], dict[str, TaskSpec]] = {}
    for spec in specs:
        by_cell.setdefault((spec.task, spec.strategy), {})[spec.bias] = spec
    pun_types = sorted({r.pun_type for r in records})
    rows: list[MetricRow] = []
    for pun_type in pun_types:
        subset = [r for r in records if r.pun_type == pun_type]
        n_pos = sum(r.gold_is_pun for r in subset)
        n_neg = len(subset) - n_pos
        for (task, strategy) in sorted(by_cell):
            variants = by_cell[(task, strategy)]
            primary = variants.get("to-pun") or next(iter(variants.values()))
            tp, fp, tn, fn, unparsed_primary = confusion(subset, primary)
            primary_rates = rates(tp, fp, tn, fn)
            row = MetricRow(
                pun_type=pun_type, task=task, strategy=strategy,
                n_pos=n_pos, n_neg=n_neg,
                tpr=primary_rates.tpr, tnr=primary_rates.tnr,
                precision=primary_rates.precision, f1=primary_rates.f1,
            )
            if primary.bias == "to-pun":
                row.unparsed_to_pun = unparsed_primary
            else:
                row.unparsed_to_non_pun = unparsed_primary
            if len(variants) == 2:
                other = variants["to-non-pun"]
                tp2, fp2, tn2, fn2, unparsed_other = confusion(subset, other)
                other_rates = rates(tp2, fp2, tn2, fn2)
                row.delta_tpr = bias_delta(other_rates.tpr, primary_rates.tpr)
                row.delta_tnr = bias_delta(other_rates.tnr, primary_rates.tnr)
                row.unparsed_to_non_pun = unparsed_other
                verdicts_pun = [effective_verdict(r, r.responses[primary.key])
                                for r in subset]
                verdicts_nonpun = [effective_verdict(r, r.responses[other.key])
                                   for r in subset]
                row.kappa = cohens_kappa(verdicts_pun, verdicts_nonpun)
            if task in ("localization", "explanation"):
                row.mention_wp = mention_ratio(subset, primary, "wp", lemmer)
                row.mention_wa = mention_ratio(subset, primary, "wa", lemmer)
            if task == "explanation" and judge is not None:
                pair = pairwise_rates(subset, primary, judge, seed)
                if pair is not None:
                    row.win, row.tie, row.loss = pair.win, pair.tie, pair.loss
                    row.judged = pair.judged
                    row.judge_errors = pair.format_errors
            rows.append(row)
    return rows


def _mean_rows(per_run: list[list[MetricRow]]) -> list[MetricRow]:
    if len(per_run) == 1:
        return per_run[0]
    first = per_run[0]
    means: list[MetricRow] = []
    numeric = [f for f in MetricRow.__dataclass_fields__
               if f not in ("pun_type", "task", "strategy", "n_pos", "n_neg")]
    for i, base in enumerate(first):
        values = {}
        for name in numeric:
            samples = [getattr(run[i], name) for run in per_run]
            values[name] = (None if any(v is None for v in samples)
                            else sum(samples) / len(samples))
        means.append(MetricRow(
            pun_type=base.pun_type, task=base.task, strategy=base.strategy,
            n_pos=base.n_pos, n_neg=base.n_neg, **values))
    return means


def aggregate_transcript(lines: list[dict], specs: list[TaskSpec], *,
                         seed: int = 0, lemmer: Lemmatizer | None = None,
                         judge: TextGenerator | None = None) -> MetricsReport:
    """Score a transcript (as produced by run_queries) without re-querying."""
    if not lines:
        raise HarnessError("empty transcript")
    runs = sorted({line.get("run", 0) for line in lines})
    per_run = []
    for run in runs:
        run_lines = [line for line in lines if line.get("run", 0) == run]
        per_run.append(_aggregate_run(run_lines, specs, lemmer, judge, seed))
    return MetricsReport(seed=seed, repeats=len(runs),
                         rows=_mean_rows(per_run), per_run=per_run)


def evaluate(samples: list[Sample], subject: TextGenerator,
             specs: list[TaskSpec], *, seed: int = 0, repeats: int = 1,
             lemmer: Lemmatizer | None = None,
             judge: TextGenerator | None = None,
             max_workers: int = 1) -> tuple[MetricsReport, list[dict]]:
    """Run the benchmark end to end: query, parse, and aggregate.

    Returns the metrics report and the raw transcript, which is sufficient
    to re-aggregate later via ``aggregate_transcript``.
    """
    transcript = run_queries(samples, subject, specs, seed=seed,
                             repeats=repeats, max_workers=max_workers)
    report = aggregate_transcript(transcript, specs, seed=seed,
                                  lemmer=lemmer, judge=judge)
    return report, transcript


def default_specs(strategy: str = "vanilla") -> list[TaskSpec]:
    """Both bias variants of every task compatible with the strategy."""
    tasks = TASKS if strategy == "vanilla" else ("explanation",)
    return [TaskSpec(task=task, bias=bias, strategy=strategy)
            for task in tasks for bias in BIASES]


_TABLE_COLUMNS = ("TPR", "dTPR", "TNR", "dTNR", "F1", "kappa")


def render_text_table(report: MetricsReport) -> str:
    """Plain-text metric table, one row per cell, rounded to 3 decimals.

    Column order mirrors the benchmark's reporting convention:
    TPR, delta-TPR, TNR, delta-TNR, F1, kappa.
    """

    def fmt(value: float | None) -> str:
        return "-" if value is None else f"{value:.3f}"

    header = ["type", "task", "strategy", *(_TABLE_COLUMNS)]
    table = [header]
    for row in report.rows:
        table.append([
            row.pun_type, row.task, row.strategy,
            fmt(row.tpr), fmt(row.delta_tpr), fmt(row.tnr),
            fmt(row.delta_tnr), fmt(row.f1), fmt(row.kappa),
        ])
    widths = [max(len(line[i]) for line in table) for i in range(len(header))]
    rendered = []
    for line in table:
        rendered.append("  ".join(cell.ljust(width)
                                  for cell, width in zip(line, widths)).rstrip())
    return "\n".join(rendered) + "\n"
