"""Syntactic filtering: weather/time, cleft and extraposition candidacy."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

from .morph import HAVE_FORMS, noun_lemma, verb_lemma
from .tree import (
    CLAUSE_FORMS,
    Clause,
    DepNode,
    DepTree,
    Reading,
    is_copula,
    is_punct,
    is_verb,
)

CLEFT_COMPLEMENTIZERS = {None, "that", "who", "which", "whom", "whose"}
ADVERBIAL_WORDS = {"here", "there", "today", "yesterday", "tomorrow", "now", "then", "tonight"}
DEFAULT_KIND_EXCEPTIONS = frozenset({"kind", "sort", "type", "variety"})
DEMONSTRATIVES = {"this", "that", "these", "those"}
SINGULAR_COPULAS = {"is", "was", "'s"}
CLAUSE_PUNCT = {",", "-", "--", ":"}
PREDICATE_KIND = {"NP": "NP", "WHNP": "NP", "QP": "NP", "ADJP": "ADJP", "WHADJP": "ADJP", "PP": "PP", "WHPP": "PP"}


class Verdict(str, enum.Enum):
    CLEFT = "cleft"
    WEATHER_TIME = "weather_time"
    EXTRAPOSITION_CANDIDATE = "extraposition_candidate"
    NONE = "none"


class CleftCue(str, enum.Enum):
    PROPER_OR_PRONOUN = "1-proper-noun-or-pronoun"
    BARE_COMMON_NOUN = "2-determinerless-common-noun"
    NUMBER_MISMATCH = "3-plural-with-singular-copula"
    GROUNDED_NP = "4-demonstrative-possessive-or-relative"
    THE_OF_NP = "5-the-np-of-grounded"
    ADVERBIAL = "6-adverbial-constituent"
    CLAUSAL = "7-clausal-constituent"
    AWKWARD_RRC = "8-awkward-relative-clause"
    PP_FULL_CLAUSE = "9-pp-with-full-clause"
    WH_ADVERB = "10-wh-adverb-before-it"


@dataclass(frozen=True)
class WeatherTimeLexicon:
    weather_heads: frozenset[str]
    time_heads: frozenset[str]
    weather_verbs: frozenset[str]

    def __post_init__(self) -> None:
        if not (self.weather_heads and self.time_heads and self.weather_verbs):
            raise ValueError("weather/time lexicon sets must be non-empty")

    @staticmethod
    def _read(text: str) -> frozenset[str]:
        return frozenset(
            line.split("#", 1)[0].strip().lower()
            for line in text.splitlines()
            if line.split("#", 1)[0].strip()
        )

    @classmethod
    def load(cls, directory: str | Path | None = None) -> "WeatherTimeLexicon":
        def read(name: str) -> frozenset[str]:
            if directory is None:
                return cls._read(resources.files("pleonastic").joinpath(f"data/{name}").read_text("utf-8"))
            return cls._read((Path(directory) / name).read_text("utf-8"))

        return cls(read("weather_heads.txt"), read("time_heads.txt"), read("weather_verbs.txt"))


@dataclass(frozen=True)
class FilterFlags:
    """Optional additional filters; the punctuation rule is always on."""

    perfect: bool = True
    multiple_vp: bool = True
    np_relative: bool = True
    modal: bool = True

    @classmethod
    def none(cls) -> "FilterFlags":
        return cls(False, False, False, False)

    @classmethod
    def from_list(cls, spec: str) -> "FilterFlags":
        """Parse ``perfect,modal`` / ``all`` / ``none`` into flags."""
        spec = spec.strip().lower()
        if spec in ("all", ""):
            return cls()
        if spec == "none":
            return cls.none()
        names = {f.name for f in fields(cls)}
        chosen = {s.strip().replace("-", "_") for s in spec.split(",") if s.strip()}
        unknown = chosen - names
        if unknown:
            raise ValueError(f"unknown filter flag(s): {', '.join(sorted(unknown))}")
        return cls(**{n: n in chosen for n in names})

    @classmethod
    def from_file(cls, path: str | Path) -> "FilterFlags":
        values = {}
        for line in Path(path).read_text("utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip().lower() in ("1", "true", "yes", "on")
        return cls(**values)


@dataclass(frozen=True)
class ExtrapositionCandidate:
    reading: Reading
    matrix_kind: str  # copula-with-predicate | general-verb | object-of-verb | object-of-preposition
    predicate_phrase: DepNode | None
    extraposed_clause: Clause
    s_flag: bool

    def __post_init__(self) -> None:
        if self.matrix_kind == "copula-with-predicate":
            assert self.predicate_phrase is not None and predicate_kind(self.predicate_phrase) in ("NP", "ADJP", "PP")
        assert self.extraposed_clause.form in CLAUSE_FORMS

    @property
    def clause_form(self) -> str:
        return self.extraposed_clause.form

    @property
    def dep(self) -> DepTree:
        assert self.reading.dep is not None
        return self.reading.dep


@dataclass(frozen=True)
class SyntacticVerdict:
    kind: Verdict
    candidate: ExtrapositionCandidate | None = None
    cleft_cue: CleftCue | None = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        assert (self.kind is Verdict.EXTRAPOSITION_CANDIDATE) == (self.candidate is not None)
        assert (self.kind is Verdict.CLEFT) == (self.cleft_cue is not None)


def predicate_kind(node: DepNode) -> str | None:
    for label in (node.label, *reversed(node.chain)):
        if label in PREDICATE_KIND:
            return PREDICATE_KIND[label]
    if node.tag.startswith("JJ"):
        return "ADJP"
    if node.tag.startswith("NN") or node.tag in ("PRP", "CD"):
        return "NP"
    return None


# --------------------------------------------------------------------------
# extraposition


def filter_extraposition(reading: Reading) -> ExtrapositionCandidate | None:
    """Match a reading against the subject and object extraposition frames."""
    clause = reading.clause
    if clause is None or clause.form not in CLAUSE_FORMS:
        return None
    if clause.relative and clause.complementizer != "that":
        return None
    role = reading.instance.role
    if role == "preposition-object" or (role == "verb-object" and not reading.virtual_copula):
        if clause.form != "full-with-complementizer" or clause.complementizer != "that" or clause.relative:
            return None
        kind = "object-of-preposition" if role == "preposition-object" else "object-of-verb"
        return ExtrapositionCandidate(reading, kind, None, clause, False)
    verb = reading.matrix_verb
    pred = reading.matrix_object
    if is_copula(verb):
        if pred is None or predicate_kind(pred) not in ("NP", "ADJP", "PP"):
            return None
        return ExtrapositionCandidate(reading, "copula-with-predicate", pred, clause, False)
    s_flag = clause.form == "infinitive"
    return ExtrapositionCandidate(reading, "general-verb", pred, clause, s_flag)


def _punct_between(dep: DepTree, it_index: int, clause: Clause) -> int:
    start = clause.span[0]
    if start <= it_index:
        return 0
    return sum(1 for n in dep.nodes[it_index + 1:start] if n.token in CLAUSE_PUNCT)


def punctuation_ok(dep: DepTree, it_index: int, clause: Clause) -> bool:
    return _punct_between(dep, it_index, clause) != 1


def _is_perfect(dep: DepTree, verb: DepNode) -> bool:
    return verb.tag == "VBN" and any(
        d.lower in HAVE_FORMS and is_verb(d.tag) and d.index < verb.index for d in dep.dependents(verb.index)
    )


def _multiple_vps(dep: DepTree, verb: DepNode) -> bool:
    """True if the matrix verb heads or joins a VP coordination."""
    kids = dep.dependents(verb.index)
    if any(d.tag == "CC" and d.attach == "VP" for d in kids) and any(
        d.label == "VP" and d.attach == "VP" and is_verb(d.tag) and d.index > verb.index for d in kids
    ):
        return True
    if verb.label == "VP" and verb.attach == "VP" and verb.head >= 0:
        host = dep.nodes[verb.head]
        siblings = dep.dependents(host.index)
        return is_verb(host.tag) and any(d.tag == "CC" and d.attach == "VP" and d.index < verb.index for d in siblings)
    return False


def _has_modal(dep: DepTree, verb: DepNode, words: set[str]) -> bool:
    return any(d.tag == "MD" and d.lower in words for d in dep.dependents(verb.index))


def rejecting_filter(candidate: ExtrapositionCandidate, flags: FilterFlags = FilterFlags()) -> str | None:
    """Name of the first additional filter that rejects the candidate, or None."""
    reading = candidate.reading
    dep = candidate.dep
    clause = candidate.extraposed_clause
    if not punctuation_ok(dep, reading.instance.token_index, clause):
        return "punctuation"
    verb = reading.governor if reading.virtual_copula else reading.matrix_verb
    assert verb is not None
    if flags.perfect and not is_copula(reading.matrix_verb) and _is_perfect(dep, verb):
        return "perfect"
    if flags.multiple_vp and verb.index >= 0 and _multiple_vps(dep, verb):
        return "multiple_vp"
    pred = candidate.predicate_phrase
    if flags.np_relative and pred is not None and predicate_kind(pred) == "NP" and clause.relative:
        return "np_relative"
    if flags.modal and clause.complementizer in ({"if"} | {"how", "why", "when", "where", "whether"}):
        if verb.index >= 0 and _has_modal(dep, verb, {"could", "would", "'d"}):
            return "modal"
    return None


def apply_additional_filters(candidate: ExtrapositionCandidate, flags: FilterFlags = FilterFlags()) -> bool:
    """Return False if the candidate is rejected by the extra filters."""
    return rejecting_filter(candidate, flags) is None


# --------------------------------------------------------------------------
# cleft


def _det_words(dep: DepTree, n: DepNode) -> list[DepNode]:
    return [d for d in dep.dependents(n.index) if d.index < n.index and d.tag in ("DT", "PDT", "PRP$", "WDT", "CD", "WP$")]


def _has_possessive(dep: DepTree, n: DepNode) -> bool:
    for d in dep.dependents(n.index):
        if d.index > n.index:
            continue
        if d.tag == "PRP$" or any(x.tag == "POS" for x in dep.dependents(d.index)) or d.tag == "POS":
            return True
    return False


def _of_object(dep: DepTree, n: DepNode) -> DepNode | None:
    for d in dep.dependents(n.index):
        if d.index > n.index and d.lower == "of" and d.label == "PP":
            objs = [x for x in dep.dependents(d.index) if x.index > d.index]
            return objs[0] if objs else None
    return None


def _cleft_constituent(dep: DepTree, verb: DepNode, it: DepNode, clause: Clause) -> DepNode | None:
    best = None
    for d in dep.dependents(verb.index):
        if d.index <= max(verb.index, it.index) or d.index >= clause.span[0] and d.index != clause.head:
            continue
        if d.index == clause.head or is_punct(d.tag) or d.lower in ("not", "n't") or d.tag in ("RB", "CC"):
            continue
        if d.label == "ADVP" and d.lower not in ADVERBIAL_WORDS:
            continue
        best = d
    return best


def _awkward_rrc(dep: DepTree, clause: Clause) -> bool:
    head = dep.nodes[clause.head]
    others = []
    for d in dep.dependents(head.index):
        if d.attach in ("SBAR",) or is_punct(d.tag) or d.tag in ("RB", "TO"):
            continue
        if d.index < head.index and (d.attach in ("S", "SQ", "SINV") or is_verb(d.tag) or d.tag == "MD"):
            continue
        others.append(d)
    if not others:
        return True
    if is_copula(head) and len(others) == 1 and predicate_kind(others[0]) == "ADJP":
        return True
    return False


def filter_cleft(reading: Reading, kind_exceptions: frozenset[str] = DEFAULT_KIND_EXCEPTIONS) -> CleftCue | None:
    """Return the first cleft cue that fires for a subject-it copula reading."""
    dep = reading.dep
    clause = reading.clause
    verb = reading.matrix_verb
    if dep is None or clause is None or reading.instance.role != "subject" or reading.virtual_copula:
        return None
    if verb.tag == "VBX" or not is_copula(verb):
        return None
    if not clause.finite or clause.complementizer not in CLEFT_COMPLEMENTIZERS:
        return None
    if not punctuation_ok(dep, reading.instance.token_index, clause):
        return None
    it = dep.nodes[reading.instance.token_index]
    c = _cleft_constituent(dep, verb, it, clause)
    if c is not None:
        ckind = predicate_kind(c)
        if ckind == "NP":
            dets = _det_words(dep, c)
            if c.tag in ("NNP", "NNPS", "PRP"):
                return CleftCue.PROPER_OR_PRONOUN
            if c.tag in ("NN", "NNS") and not dets and not _has_possessive(dep, c):
                return CleftCue.BARE_COMMON_NOUN
            if c.tag in ("NNS", "NNPS") and verb.lower in SINGULAR_COPULAS:
                return CleftCue.NUMBER_MISMATCH
            relatives = [
                d for d in dep.dependents(c.index)
                if d.index > c.index and d.label == "SBAR" and d.index != clause.head
            ]
            if any(d.lower in DEMONSTRATIVES and d.tag == "DT" for d in dets) or _has_possessive(dep, c) or relatives:
                return CleftCue.GROUNDED_NP
            if any(d.lower == "the" for d in dets) and c.lower not in kind_exceptions:
                obj = _of_object(dep, c)
                if obj is not None and (obj.tag in ("NNS", "NNPS") or any(d.lower == "the" for d in _det_words(dep, obj))):
                    return CleftCue.THE_OF_NP
        if c.lower in ADVERBIAL_WORDS or (c.label == "SBAR" and any(d.lower == "when" for d in dep.dependents(c.index))):
            return CleftCue.ADVERBIAL
        if c.label in ("S", "SBAR", "VP") or c.tag == "VBG":
            return CleftCue.CLAUSAL
        if _awkward_rrc(dep, clause):
            return CleftCue.AWKWARD_RRC
        if ckind == "PP" and clause.finite:
            return CleftCue.PP_FULL_CLAUSE
    it_index = reading.instance.token_index
    if it_index > 0 and dep.nodes[it_index - 1].tag == "WRB":
        return CleftCue.WH_ADVERB
    return None


# --------------------------------------------------------------------------
# weather / time


def detect_weather_time(reading: Reading, lex: WeatherTimeLexicon) -> bool:
    if reading.instance.role != "subject":
        return False
    verb = reading.matrix_verb
    if not is_verb(verb.tag):
        return False
    if not is_copula(verb):
        return verb_lemma(verb.token, verb.tag) in lex.weather_verbs
    pred = reading.matrix_object
    if pred is None:
        return False
    lemma = noun_lemma(pred.token) if pred.tag.startswith("NN") else pred.token.lower()
    return lemma in lex.weather_heads or lemma in lex.time_heads


# --------------------------------------------------------------------------


def syntactic_verdict(
    reading: Reading,
    lex: WeatherTimeLexicon,
    flags: FilterFlags = FilterFlags(),
    kind_exceptions: frozenset[str] = DEFAULT_KIND_EXCEPTIONS,
) -> SyntacticVerdict:
    """Weather/time, then cleft, then extraposition candidacy for one reading."""
    if detect_weather_time(reading, lex):
        return SyntacticVerdict(Verdict.WEATHER_TIME)
    cue = filter_cleft(reading, kind_exceptions)
    if cue is not None:
        if not (flags.multiple_vp and _multiple_vps(reading.dep, reading.matrix_verb)):  # type: ignore[arg-type]
            return SyntacticVerdict(Verdict.CLEFT, cleft_cue=cue)
    cand = filter_extraposition(reading)
    if cand is None:
        return SyntacticVerdict(Verdict.NONE, notes=("no-frame",))
    rejected = rejecting_filter(cand, flags)
    if rejected is not None:
        return SyntacticVerdict(Verdict.NONE, notes=(f"filtered:{rejected}",))
    return SyntacticVerdict(Verdict.EXTRAPOSITION_CANDIDATE, candidate=cand)
