"""Turn query counts into the extraposition verdict and aggregate per sentence."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any

from .corpus import Backend, HitResult, execute, validate_what_cleft
from .filters import (
    DEFAULT_KIND_EXCEPTIONS,
    FilterFlags,
    SyntacticVerdict,
    Verdict,
    WeatherTimeLexicon,
    syntactic_verdict,
)
from .querygen import EngineCaps, QueryBundle, StubSet, build_bundle
from .tree import DepTree, NoGoverningVerb, Reading, find_it_instances, generate_readings


class ItLabel(str, enum.Enum):
    NOMINAL = "nominal"
    CLAUSE = "clause"
    EXTRAPOSITION = "extraposition"
    CLEFT = "cleft"
    WEATHER_TIME = "weather_time"
    IDIOM = "idiom"
    OTHER = "other"
    REFERENTIAL = "referential"

    @property
    def pleonastic(self) -> bool:
        return self in (ItLabel.EXTRAPOSITION, ItLabel.CLEFT, ItLabel.WEATHER_TIME)


PLEONASTIC = frozenset({ItLabel.EXTRAPOSITION, ItLabel.CLEFT, ItLabel.WEATHER_TIME})


@dataclass(frozen=True)
class DecisionConstants:
    n_min: int = 10
    r_exp: float = 0.15
    r_scarce: float = 1000.0
    r_zero: float = 100.0
    p3_ratio: float = 2.0

    def __post_init__(self) -> None:
        if self.n_min < 1:
            raise ValueError("N_min must be >= 1")
        if not (0 < self.r_exp < self.r_zero < self.r_scarce):
            raise ValueError("constants must satisfy 0 < R_exp < R_zero < R_scarce")


def compute_ratio(n_num: int, n_den: int, c: DecisionConstants = DecisionConstants()) -> float:
    """n_num / n_den with the scarce and zero-denominator sentinels."""
    if max(n_num, n_den) < c.n_min:
        return c.r_scarce
    if n_num >= c.n_min and n_den == 0:
        return c.r_zero
    return n_num / n_den


def synthesize_R(r: float, r_step: float, n_it: int, n_x: int, c: DecisionConstants = DecisionConstants()) -> float:
    return r if max(n_it, n_x) >= c.n_min else r_step


@dataclass(frozen=True)
class EvidenceRecord:
    n_w: int
    v_w: float
    n_it: int
    n_x: int
    n_it_step: int
    n_x_step: int
    s: bool
    W: float
    r: float
    r_step: float
    R: float
    E: bool
    p3_prep: int | None = None
    p3_det: int | None = None
    queries: dict[str, str] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def classify_reading(ev: EvidenceRecord, c: DecisionConstants = DecisionConstants()) -> bool:
    """E from R, W and S with strict inequalities."""
    if ev.s:
        return ev.R < c.r_exp and ev.W > c.n_min
    return ev.R < c.r_exp


def make_evidence(n_w: int, v_w: float, n_it: int, n_x: int, n_it_step: int | None, n_x_step: int | None,
                  s: bool, c: DecisionConstants = DecisionConstants(), **extra: Any) -> EvidenceRecord:
    """Derive W, r, r', R and E from raw counts; missing stepped-down counts reuse the full pair."""
    if n_it_step is None or n_x_step is None:
        n_it_step, n_x_step = n_it, n_x
    r = compute_ratio(n_x, n_it, c)
    r_step = compute_ratio(n_x_step, n_it_step, c)
    R = synthesize_R(r, r_step, n_it, n_x, c)
    W = n_w * v_w
    partial = EvidenceRecord(n_w, v_w, n_it, n_x, n_it_step, n_x_step, s, W, r, r_step, R, False, **extra)
    E = classify_reading(partial, c)
    p3_prep, p3_det = extra.get("p3_prep"), extra.get("p3_det")
    if E and p3_prep is not None and p3_det is not None and p3_det > 0 and p3_det >= c.p3_ratio * p3_prep:
        E = False
    return EvidenceRecord(n_w, v_w, n_it, n_x, n_it_step, n_x_step, s, W, r, r_step, R, E, **extra)


def gather_evidence(bundle: QueryBundle, backend: Backend, c: DecisionConstants = DecisionConstants()) -> EvidenceRecord:
    """Execute a bundle's queries and compute the evidence record."""
    hits: dict[str, HitResult] = {}
    for q in bundle.queries:
        hits[q.purpose] = execute(backend, q)
    queries = {q.purpose: q.serialize() for q in bundle.queries}
    provenance = {p: h.source for p, h in hits.items()}
    p3 = {}
    if "P3_gerund_prep" in hits and "P3_gerund_det" in hits:
        p3 = {"p3_prep": hits["P3_gerund_prep"].count, "p3_det": hits["P3_gerund_det"].count}
    if bundle.is_object:
        return make_evidence(0, 0.0, hits["ObjectIt"].count, hits["ObjectThem"].count, None, None, False, c,
                             queries=queries, provenance=provenance)
    pattern_i = bundle.get("PatternI")
    n_w = hits["PatternI"].count
    k = getattr(backend, "caps").snippet_batch
    v_w = validate_what_cleft(list(hits["PatternI"].snippets[:k]), pattern_i) if pattern_i else 0.0
    step_it = hits["PatternII'_it"].count if "PatternII'_it" in hits else None
    step_x = hits["PatternII'_others"].count if "PatternII'_others" in hits else None
    return make_evidence(n_w, v_w, hits["PatternII_it"].count, hits["PatternII_others"].count, step_it, step_x,
                         bundle.candidate.s_flag, c, queries=queries, provenance=provenance, **p3)


# --------------------------------------------------------------------------
# pipeline


@dataclass
class PipelineConfig:
    constants: DecisionConstants = field(default_factory=DecisionConstants)
    flags: FilterFlags = field(default_factory=FilterFlags)
    stubs: StubSet = field(default_factory=StubSet.default)
    lexicon: WeatherTimeLexicon = field(default_factory=WeatherTimeLexicon.load)
    pattern3: bool = False
    kind_exceptions: frozenset[str] = DEFAULT_KIND_EXCEPTIONS
    workers: int = 1


@dataclass(frozen=True)
class ReadingResult:
    reading: Reading
    verdict: SyntacticVerdict
    evidence: EvidenceRecord | None = None

    @property
    def E(self) -> bool:
        return self.evidence is not None and self.evidence.E


@dataclass(frozen=True)
class SentenceVerdict:
    sentence_id: str
    token_index: int
    label: ItLabel
    readings: tuple[ReadingResult, ...] = ()
    note: str = ""

    def to_record(self, system: str = "main") -> dict[str, Any]:
        out: dict[str, Any] = {
            "system": system,
            "sentence_id": self.sentence_id,
            "token_index": self.token_index,
            "label": self.label.value,
        }
        if self.note:
            out["note"] = self.note
        rs = []
        for k, rr in enumerate(self.readings):
            r = rr.reading
            item: dict[str, Any] = {
                "reading": k,
                "matrix_verb": r.matrix_verb.token,
                "matrix_verb_tag": r.matrix_verb.tag,
                "matrix_object": r.matrix_object.token if r.matrix_object is not None else None,
                "clause_form": r.clause.form if r.clause else None,
                "complementizer": r.complementizer,
                "virtual_copula": r.virtual_copula,
                "verdict": rr.verdict.kind.value,
            }
            if rr.verdict.cleft_cue is not None:
                item["cleft_cue"] = rr.verdict.cleft_cue.value
            if rr.verdict.candidate is not None:
                item["matrix_kind"] = rr.verdict.candidate.matrix_kind
            if rr.evidence is not None:
                item["evidence"] = rr.evidence.to_dict()
            rs.append(item)
        out["readings"] = rs
        return out


def classify_sentence(sentence_id: str, token_index: int, results: list[ReadingResult]) -> SentenceVerdict:
    """Weather/time beats cleft beats extraposition; otherwise referential."""
    kinds = {rr.verdict.kind for rr in results}
    if Verdict.WEATHER_TIME in kinds:
        label = ItLabel.WEATHER_TIME
    elif Verdict.CLEFT in kinds:
        label = ItLabel.CLEFT
    elif any(rr.E for rr in results):
        label = ItLabel.EXTRAPOSITION
    else:
        label = ItLabel.REFERENTIAL
    return SentenceVerdict(sentence_id, token_index, label, tuple(results))


def analyze_reading(reading: Reading, backend: Backend | None, cfg: PipelineConfig,
                    caps: EngineCaps | None = None) -> tuple[ReadingResult, QueryBundle | None]:
    verdict = syntactic_verdict(reading, cfg.lexicon, cfg.flags, cfg.kind_exceptions)
    if verdict.candidate is None:
        return ReadingResult(reading, verdict), None
    if caps is None and backend is not None:
        caps = EngineCaps(backend.caps.supports_alternation)
    bundle = build_bundle(verdict.candidate, cfg.stubs, caps, cfg.pattern3)
    if backend is None:
        return ReadingResult(reading, verdict), bundle
    return ReadingResult(reading, verdict, gather_evidence(bundle, backend, cfg.constants)), bundle


def classify_dep(sentence_id: str, dep: DepTree, backend: Backend | None, cfg: PipelineConfig) -> list[SentenceVerdict]:
    """Classify every *it* in one dependency tree."""
    out = []
    for inst in find_it_instances(dep, sentence_id):
        try:
            readings = generate_readings(inst, dep)
        except NoGoverningVerb as exc:
            out.append(SentenceVerdict(sentence_id, inst.token_index, ItLabel.REFERENTIAL, (), f"no governing verb: {exc}"))
            continue
        if cfg.workers > 1 and len(readings) > 1:
            with ThreadPoolExecutor(cfg.workers) as pool:
                results = [r for r, _ in pool.map(lambda rd: analyze_reading(rd, backend, cfg), readings)]
        else:
            results = [analyze_reading(rd, backend, cfg)[0] for rd in readings]
        out.append(classify_sentence(sentence_id, inst.token_index, results))
    return out
