"""Query patterns built from an extraposition candidate.

A :class:`Query` is a sequence of slots, each slot an ordered tuple of
alternative words.  Serialization joins alternatives with ``|`` and slots with
single spaces, all lowercase.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .filters import ExtrapositionCandidate, predicate_kind
from .morph import adjective_base, gerund, past, third_person, verb_lemma
from .tree import Clause, DepNode, DepTree, is_copula, is_verb

PURPOSES = (
    "PatternI",
    "PatternII_it",
    "PatternII_others",
    "PatternII'_it",
    "PatternII'_others",
    "ObjectIt",
    "ObjectThem",
    "P3_compound",
    "P3_gerund_prep",
    "P3_gerund_det",
)

DTA_WORDS = {"a", "an", "any", "no", "some", "another", "every", "each", "either", "neither"}
DTTS_WORDS = {"the", "this", "that"}
DTTP_WORDS = {"these", "those"}


class UnsupportedClauseForm(ValueError):
    pass


class NoMatrixVerb(ValueError):
    pass


class NotApplicable(ValueError):
    pass


Slot = tuple[str, ...]


def _dedupe(words) -> Slot:
    out: list[str] = []
    for w in words:
        w = w.lower()
        if w not in out:
            out.append(w)
    return tuple(out)


@dataclass(frozen=True)
class Query:
    slots: tuple[Slot, ...]
    purpose: str = "PatternII_it"
    quoted: bool = True

    def __post_init__(self) -> None:
        slots = tuple(_dedupe(s) for s in self.slots)
        object.__setattr__(self, "slots", slots)
        if len(slots) < 2:
            raise ValueError("a query needs at least two slots")
        if any(not s or any(not w or " " in w or "|" in w for w in s) for s in slots):
            raise ValueError(f"empty or malformed slot in {slots!r}")
        if self.purpose not in PURPOSES:
            raise ValueError(f"unknown purpose {self.purpose!r}")

    def serialize(self) -> str:
        return " ".join("|".join(s) for s in self.slots)

    def __str__(self) -> str:
        return self.serialize()

    @classmethod
    def parse(cls, text: str, purpose: str = "PatternII_it") -> "Query":
        text = text.replace("’", "'").strip().strip('"')
        return cls(tuple(tuple(tok.split("|")) for tok in text.lower().split()), purpose)

    @property
    def has_alternation(self) -> bool:
        return any(len(s) > 1 for s in self.slots)


def explode(query: Query) -> list[Query]:
    """All single-form queries covered by an alternation query."""
    return [Query(tuple((w,) for w in combo), query.purpose) for combo in itertools.product(*query.slots)]


# --------------------------------------------------------------------------
# stubs


@dataclass(frozen=True)
class StubSet:
    lists: dict[str, Slot] = field(default_factory=dict)
    simple: bool = False

    def __getitem__(self, name: str) -> Slot:
        return self.lists[name]

    @classmethod
    def load(cls, path: str | Path | None = None) -> "StubSet":
        if path is None:
            text = resources.files("pleonastic").joinpath("data/stubs.tsv").read_text("utf-8")
        else:
            text = Path(path).read_text("utf-8")
        lists = {}
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            name, words = line.split("\t", 1)
            lists[name.strip()] = _dedupe(words.split())
        for required in ("PRPS", "DTA", "DTTS", "DTTP", "PRP", "THE"):
            if not lists.get(required):
                raise ValueError(f"stub list {required} missing or empty")
        return cls(lists)

    @classmethod
    def default(cls) -> "StubSet":
        return cls.load()

    def simplest(self) -> "StubSet":
        """Single-word lists for engines without alternation support."""
        lists = {k: v[:1] for k, v in self.lists.items()}
        for name in ("DTA", "STUB_DTA"):
            if name in lists:
                lists[name] = self.lists["THE"]
        lists["STUB_PRP"] = ()
        lists["STUB_PRPS"] = ()
        lists["ALT_SUBJ"] = self.lists["ALT_SUBJ"]
        return StubSet(lists, simple=True)

    def nominal(self) -> Slot:
        return _dedupe(self.lists["DTA"] + self.lists.get("STUB_PRPS", ()))

    def subject(self) -> Slot:
        return _dedupe(self.lists["DTA"] + self.lists.get("STUB_PRP", ()) + self.lists.get("STUB_PRPS", ()))


@dataclass(frozen=True)
class Stub:
    kind: str  # nominal | subject | word | null
    word: str | None = None

    def slot(self, stubs: StubSet) -> list[Slot]:
        if self.kind == "nominal":
            return [stubs.nominal()]
        if self.kind == "subject":
            return [stubs.subject()]
        if self.kind == "word":
            return [(self.word,)]  # type: ignore[list-item]
        return []


@dataclass(frozen=True)
class EngineCaps:
    supports_alternation: bool = True


# --------------------------------------------------------------------------
# clause simplification


def _has_nominal_object(dep: DepTree, v: DepNode) -> bool:
    return any(d.index > v.index and d.attach == "VP" and predicate_kind(d) == "NP" and d.label != "ADJP"
               for d in dep.dependents(v.index))


def _embedded_comp(dep: DepTree, v: DepNode) -> str | None:
    from .tree import clause_form

    for d in dep.dependents(v.index):
        if d.index > v.index and d.label in ("SBAR", "S"):
            c = clause_form(dep, d.index)
            if c is not None and c.form == "full-with-complementizer" and c.complementizer and not c.relative:
                return c.complementizer
    return None


def _object_stub(dep: DepTree, v: DepNode) -> Stub:
    comp = _embedded_comp(dep, v)
    if comp is not None:
        return Stub("word", comp)
    if _has_nominal_object(dep, v):
        return Stub("nominal")
    return Stub("null")


def _particles(dep: DepTree, v: DepNode) -> list[str]:
    return [d.lower for d in dep.dependents(v.index) if (d.label == "PRT" or d.tag == "RP") and d.index > v.index]


def _has_subject(dep: DepTree, v: DepNode) -> bool:
    return any(d.index < v.index and d.attach in ("S", "SQ", "SINV") and d.label in ("NP", "S", "SBAR")
               for d in dep.dependents(v.index))


def simplify_clause(dep: DepTree, clause: Clause) -> tuple[list[str], Stub]:
    """Reduce an extraposed clause to its leading words plus a stub."""
    v = dep.nodes[clause.head]
    form = clause.form
    if form in ("infinitive", "for-infinitive"):
        words = ["to", v.lower]
        stub = _object_stub(dep, v)
        if form == "for-infinitive" and v.tag == "VBN":
            be = [d for d in dep.dependents(v.index) if d.index < v.index and d.lower == "be"]
            if be:
                words = ["to", verb_lemma(v.token, "VBN")]
                stub = Stub("nominal")
        return words + _particles(dep, v), stub
    if form == "gerund":
        return [v.lower] + _particles(dep, v), _object_stub(dep, v)
    if form == "full-with-complementizer":
        return [clause.complementizer or "that"], Stub("subject") if _has_subject(dep, v) else Stub("null")
    if form == "full-bare":
        return ["that"], Stub("subject") if _has_subject(dep, v) else Stub("null")
    raise UnsupportedClauseForm(form)


# --------------------------------------------------------------------------
# truncation and expansion


def _simple_pick(options: Slot, original: str, stubs: StubSet) -> Slot:
    if not stubs.simple:
        return options
    return (original,) if original in options else options[:1]


def truncate_object(dep: DepTree, phrase: DepNode | None, stubs: StubSet | None = None,
                    modifiers: tuple[DepNode, ...] = ()) -> list[Slot]:
    """Shrink the matrix predicate to its head plus a grounding alternation."""
    stubs = stubs or StubSet.default()
    if phrase is None:
        return []
    kind = predicate_kind(phrase)
    if phrase.label == "QP" or phrase.tag == "CD":
        return [("a",), ("lot",)]
    if kind == "ADJP" or phrase.label == "ADVP":
        return [(m.lower,) for m in modifiers] + [(phrase.lower,)]
    if kind == "PP":
        objs = [d for d in dep.dependents(phrase.index) if d.index > phrase.index and not d.tag in (",", ".")]
        return [(phrase.lower,)] + (truncate_object(dep, objs[0], stubs) if objs else [])
    if kind != "NP":
        return [(phrase.lower,)]
    if phrase.tag in ("NNP", "NNPS", "PRP"):
        return [stubs["PRP"]]
    head = (phrase.lower,)
    kids = [d for d in dep.dependents(phrase.index) if d.index < phrase.index]
    possessive = any(d.tag in ("PRP$", "WP$") or any(x.tag == "POS" for x in dep.dependents(d.index)) for d in kids)
    of_pp = any(d.lower == "of" and d.label == "PP" and d.index > phrase.index for d in dep.dependents(phrase.index))
    if possessive or of_pp:
        det = next((d.lower for d in kids if d.tag == "PRP$"), "its")
        return [_simple_pick(stubs["PRPS"], det, stubs), head]
    for d in kids:
        if d.tag in ("DT", "PDT"):
            w = d.lower
            if w in DTTP_WORDS:
                return [_simple_pick(stubs["DTTP"], w, stubs), head]
            if w in DTTS_WORDS:
                return [_simple_pick(stubs["DTTS"], w, stubs), head]
            if w in DTA_WORDS:
                return [_simple_pick(stubs["DTA"], w, stubs), head]
    return [head]


def expand_verb(lemma: str, surface: str | None = None, particle: str | None = None,
                alternation: bool = True) -> list[Slot]:
    """3sg-present and simple-past alternation; be -> is|was|'s."""
    lemma = lemma.lower()
    if lemma == "be":
        slot: Slot = ("is", "was", "'s") if alternation else ("is",)
    elif alternation:
        slot = (third_person(lemma), past(lemma))
    else:
        slot = (third_person(lemma),)
    out = [slot]
    if particle:
        out.append((particle.lower(),))
    return out


# --------------------------------------------------------------------------
# bundles


@dataclass(frozen=True)
class QueryBundle:
    candidate: ExtrapositionCandidate
    queries: tuple[Query, ...]

    def get(self, purpose: str) -> Query | None:
        for q in self.queries:
            if q.purpose == purpose:
                return q
        return None

    @property
    def has_stepped_down(self) -> bool:
        return self.get("PatternII'_it") is not None

    @property
    def is_object(self) -> bool:
        return self.get("ObjectIt") is not None


def _verb_phrase(cand: ExtrapositionCandidate, stubs: StubSet, alternation: bool) -> list[Slot]:
    r = cand.reading
    dep = cand.dep
    v = r.matrix_verb
    if v is None:
        raise NoMatrixVerb("candidate has no matrix verb")
    if r.virtual_copula or is_copula(v):
        slots = expand_verb("be", alternation=alternation)
    else:
        lemma = verb_lemma(v.token, v.tag)
        slots = expand_verb(lemma, v.token, r.particle.lower if r.particle is not None else None, alternation)
    return slots + truncate_object(dep, r.matrix_object, stubs, r.negation_or_too)


def build_bundle(cand: ExtrapositionCandidate, stubs: StubSet | None = None,
                 caps: EngineCaps | None = None, pattern3: bool = False) -> QueryBundle:
    """Instantiate every query pattern for one candidate."""
    stubs = stubs or StubSet.default()
    caps = caps or EngineCaps()
    alternation = caps.supports_alternation
    if not alternation and not stubs.simple:
        stubs = stubs.simplest()
    dep = cand.dep
    r = cand.reading
    queries: list[Query] = []
    if cand.matrix_kind in ("object-of-verb", "object-of-preposition"):
        v = r.matrix_verb
        if v is None:
            raise NoMatrixVerb("object candidate without verb")
        head: list[Slot] = [(v.lower,)]
        if r.particle is not None:
            head.append((r.particle.lower,))
        if r.preposition is not None:
            head.append((r.preposition.lower,))
        _, stub = simplify_clause(dep, cand.extraposed_clause)
        tail = [("that",)] + stub.slot(stubs)
        queries.append(Query(tuple(head + [("it",)] + tail), "ObjectIt"))
        queries.append(Query(tuple(head + [stubs["ALT_OBJ"]] + tail), "ObjectThem"))
        return QueryBundle(cand, tuple(queries))

    vp = _verb_phrase(cand, stubs, alternation)
    words, stub = simplify_clause(dep, cand.extraposed_clause)
    clause_slots = [(w,) for w in words] + stub.slot(stubs)
    cop2: Slot = ("is", "was") if alternation else ("is",)
    first = words[0]
    queries.append(Query(tuple([("what",)] + vp + [cop2, (first,)]), "PatternI"))
    queries.append(Query(tuple([("it",)] + vp + clause_slots), "PatternII_it"))
    queries.append(Query(tuple([stubs["ALT_SUBJ"]] + vp + clause_slots), "PatternII_others"))
    if cand.clause_form in ("infinitive", "for-infinitive", "gerund"):
        queries.append(Query(tuple([("it",)] + vp + [("to",)]), "PatternII'_it"))
        queries.append(Query(tuple([stubs["ALT_SUBJ"]] + vp + [("to",)]), "PatternII'_others"))
    if pattern3:
        try:
            queries.extend(build_pattern3(cand))
        except NotApplicable:
            pass
    return QueryBundle(cand, tuple(queries))


def build_pattern3(cand: ExtrapositionCandidate, stubs: StubSet | None = None) -> list[Query]:
    """Compound-adjective and gerund-transitivity queries for tough-type candidates."""
    stubs = stubs or StubSet.default()
    pred = cand.predicate_phrase
    if pred is None or predicate_kind(pred) != "ADJP":
        raise NotApplicable("predicate is not adjectival")
    if cand.clause_form not in ("infinitive", "for-infinitive"):
        raise NotApplicable("extraposed clause is not an infinitive")
    dep = cand.dep
    v = dep.nodes[cand.extraposed_clause.head]
    if _has_nominal_object(dep, v) or _embedded_comp(dep, v) is not None:
        raise NotApplicable("infinitive verb has an object")
    lemma = verb_lemma(v.token, v.tag) if is_verb(v.tag) else v.lower
    base = adjective_base(pred.token, pred.tag)
    article = "an" if base[:1] in "aeiou" else "a"
    ger = gerund(lemma)
    return [
        Query(((article,), (f"{base}-to-{lemma}",)), "P3_compound"),
        Query((("that",), (ger,), stubs.lists.get("GERUND_PREP", ("in", "from"))), "P3_gerund_prep"),
        Query((("that",), (ger,), stubs.lists.get("GERUND_DET", ("the",))), "P3_gerund_det"),
    ]


def normalize_query_text(text: str) -> str:
    """Whitespace/alternation-insensitive form used to compare with printed queries."""
    return " ".join(text.replace("|", " ").replace("’", "'").lower().split())


def with_purpose(q: Query, purpose: str) -> Query:
    return replace(q, purpose=purpose)
