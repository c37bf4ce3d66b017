"""Penn-Treebank trees, head percolation and readings of *it*.

A bracketed parse is read into an immutable :class:`ParseTree`, converted to a
head-marked :class:`DepTree`, and every *it* token is decomposed into one or
more :class:`Reading` objects (matrix verb, predicate, subordinate clause).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .morph import BE_FORMS, HAVE_FORMS, verb_lemma

PUNCT_TAGS = {",", ".", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "NFP"}
CLAUSE_LABELS = {"S", "SBAR", "SQ", "SINV", "SBARQ", "VP"}
PRED_LABELS = {"NP", "ADJP", "PP", "WHADJP", "WHNP", "WHPP", "QP"}
FRONTED_PRED_LABELS = {"ADJP", "WHADJP", "WHNP"}
CLAUSE_LEVEL = {"S", "SINV", "SQ", "SBAR", "SBARQ", "PRN", "FRAG", "UCP"}
SUBJECT_ATTACH = {"S", "SQ", "SINV"}
WH_ADVERBS = frozenset({"how", "why", "when", "where", "whether"})
EXTRAPOSITION_COMPS = frozenset({"that", "whether", "if"}) | WH_ADVERBS
RELATIVE_WORDS = frozenset({"that", "who", "which", "whom", "whose"})
CLAUSE_FORMS = ("infinitive", "for-infinitive", "gerund", "full-with-complementizer", "full-bare")


class MalformedTree(ValueError):
    pass


class UnbalancedBrackets(MalformedTree):
    def __init__(self, position: int):
        super().__init__(f"unbalanced brackets at character {position}")
        self.position = position


class EmptySentence(MalformedTree):
    pass


class NoGoverningVerb(ValueError):
    pass


def is_verb(tag: str) -> bool:
    return tag.startswith("VB") or tag == "MD"


def is_punct(tag: str) -> bool:
    return tag in PUNCT_TAGS


def strip_function_tags(label: str) -> str:
    """NP-SBJ-1 -> NP, S=2 -> S; tags such as -LRB- are left alone."""
    if not label or label.startswith("-"):
        return label
    return re.split(r"[-=]", label)[0] or label


# --------------------------------------------------------------------------
# constituency trees


@dataclass(frozen=True)
class ParseTree:
    label: str
    children: tuple["ParseTree", ...] = ()
    token: str | None = None
    span: tuple[int, int] = (0, 0)

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> list["ParseTree"]:
        if self.is_leaf:
            return [self]
        out: list[ParseTree] = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def tokens(self) -> list[str]:
        return [leaf.token for leaf in self.leaves()]  # type: ignore[misc]

    def __str__(self) -> str:
        if self.is_leaf:
            return f"({self.label} {self.token})"
        return "(" + self.label + " " + " ".join(str(c) for c in self.children) + ")"


ID_MARK = "\x00id:"
_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def _tokenize(text: str) -> Iterable[tuple[str, int, int]]:
    """Yield (token, char offset, line number); `#` lines outside trees are comments."""
    depth = 0
    offset = 0
    for lineno, line in enumerate(text.splitlines(keepends=True), start=1):
        stripped = line.lstrip()
        if depth == 0 and stripped.startswith("#"):
            if stripped.startswith("# id:"):
                yield ID_MARK + stripped[5:].strip(), offset, lineno
            offset += len(line)
            continue
        for m in _TOKEN_RE.finditer(line):
            tok = m.group()
            if tok == "(":
                depth += 1
            elif tok == ")":
                depth -= 1
            yield tok, offset + m.start(), lineno
        offset += len(line)


def _clean(raw: tuple) -> ParseTree | None:
    label, kids, token = raw
    if token is not None:
        if label == "-NONE-":
            return None
        return ParseTree(label, (), token)
    cleaned = [c for c in (_clean(k) for k in kids) if c is not None]
    if not cleaned:
        return None
    return ParseTree(strip_function_tags(label), tuple(cleaned))


def _with_spans(tree: ParseTree, start: int = 0) -> ParseTree:
    if tree.is_leaf:
        return ParseTree(tree.label, (), tree.token, (start, start + 1))
    kids = []
    pos = start
    for child in tree.children:
        kid = _with_spans(child, pos)
        kids.append(kid)
        pos = kid.span[1]
    return ParseTree(tree.label, tuple(kids), None, (start, pos))


def _finish(raw: tuple) -> ParseTree:
    tree = _clean(raw)
    if tree is None:
        raise EmptySentence("sentence has no tokens after removing empty elements")
    while tree.label in ("", "ROOT", "TOP") and len(tree.children) == 1 and not tree.children[0].is_leaf:
        tree = tree.children[0]
    return _with_spans(tree)


def parse_bracketed_with_lines(text: str) -> list[tuple[ParseTree, int, str | None]]:
    """Like :func:`parse_bracketed` but also return each tree's start line and `# id:` tag."""
    out: list[tuple[ParseTree, int, str | None]] = []
    stack: list[list] = []
    pending_id: str | None = None
    start_line = 0
    tokens = list(_tokenize(text))
    i = 0
    while i < len(tokens):
        tok, pos, lineno = tokens[i]
        if tok.startswith(ID_MARK):
            pending_id = tok[len(ID_MARK):]
            i += 1
            continue
        if tok == "(":
            if not stack:
                start_line = lineno
            label = ""
            if i + 1 < len(tokens) and tokens[i + 1][0] not in "()":
                label = tokens[i + 1][0]
                i += 1
            frame = [label, [], None]
            if label and i + 1 < len(tokens) and tokens[i + 1][0] not in "()":
                frame[2] = tokens[i + 1][0]
                i += 1
            stack.append(frame)
        elif tok == ")":
            if not stack:
                raise UnbalancedBrackets(pos)
            label, kids, token = stack.pop()
            raw = (label, kids, token)
            if stack:
                stack[-1][1].append(raw)
            else:
                out.append((_finish(raw), start_line, pending_id))
                pending_id = None
        else:
            raise MalformedTree(f"unexpected token {tok!r} at character {pos}")
        i += 1
    if stack:
        raise UnbalancedBrackets(len(text))
    return out


def parse_bracketed(text: str) -> list[ParseTree]:
    """Read every top-level bracketed sentence in ``text``.

    Function tags are stripped, ``-NONE-`` leaves are removed together with any
    phrase left empty, and an unlabeled (or ROOT/TOP) wrapper is unwrapped.
    """
    return [tree for tree, _, _ in parse_bracketed_with_lines(text)]


def read_treebank(path: str | Path, id_map: str | Path | None = None) -> list[tuple[str, ParseTree]]:
    """Load ``path`` into (sentence_id, tree) pairs.

    Ids come from a sidecar TSV (line_number -> id), then from ``# id:`` comment
    lines, and otherwise default to ``<file>:<line>``.
    """
    path = Path(path)
    mapping: dict[int, str] = {}
    side = Path(id_map) if id_map else path.with_name(path.name + ".ids")
    if side.exists():
        for line in side.read_text("utf-8").splitlines():
            if line.strip() and not line.startswith("#"):
                num, sid = line.split("\t")[:2]
                mapping[int(num)] = sid.strip()
    out = []
    for tree, line, tag in parse_bracketed_with_lines(path.read_text("utf-8")):
        sid = mapping.get(line) or tag or f"{path.name}:{line}"
        out.append((sid, tree))
    return out


# --------------------------------------------------------------------------
# head table


@dataclass(frozen=True)
class HeadRule:
    direction: str
    labels: tuple[str, ...]

    def find(self, labels: Sequence[str]) -> int | None:
        order = range(len(labels)) if self.direction.startswith("left") else range(len(labels) - 1, -1, -1)
        if not self.labels:
            for i in order:
                if not is_punct(labels[i]):
                    return i
            return None
        if self.direction.endswith("dis"):
            for i in order:
                if labels[i] in self.labels:
                    return i
            return None
        for wanted in self.labels:
            for i in order:
                if labels[i] == wanted:
                    return i
        return None


@dataclass(frozen=True)
class HeadTable:
    rules: dict[str, tuple[HeadRule, ...]]
    default: tuple[HeadRule, ...] = (HeadRule("left", ()),)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "HeadTable":
        if path is None:
            text = resources.files("pleonastic").joinpath("data/head_rules.tsv").read_text("utf-8")
        else:
            text = Path(path).read_text("utf-8")
        rules: dict[str, list[HeadRule]] = {}
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            label, direction = parts[0].strip(), parts[1].strip()
            if direction not in ("left", "right", "leftdis", "rightdis"):
                raise ValueError(f"bad head-rule direction {direction!r} for {label}")
            labels = tuple(parts[2].split()) if len(parts) > 2 else ()
            rules.setdefault(label, []).append(HeadRule(direction, labels))
        default = tuple(rules.pop("*", [HeadRule("left", ())]))
        return cls({k: tuple(v) for k, v in rules.items()}, default)

    def head_child(self, label: str, child_labels: Sequence[str]) -> int:
        rules = self.rules.get(label, self.default)
        for rule in rules:
            k = rule.find(child_labels)
            if k is not None:
                return k
        fallback = HeadRule(rules[0].direction if rules else "left", ())
        k = fallback.find(child_labels)
        return 0 if k is None else k


@lru_cache(maxsize=1)
def default_head_table() -> HeadTable:
    return HeadTable.load()


# --------------------------------------------------------------------------
# dependency trees


@dataclass(frozen=True)
class DepNode:
    index: int
    token: str
    tag: str
    head: int
    label: str
    attach: str | None
    span: tuple[int, int]
    chain: tuple[str, ...] = ()

    @property
    def lower(self) -> str:
        return self.token.lower()

    @property
    def lemma(self) -> str:
        return verb_lemma(self.token, self.tag) if is_verb(self.tag) else self.token.lower()


@dataclass(frozen=True)
class DepTree:
    nodes: tuple[DepNode, ...]
    root: int
    _kids: tuple[tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        kids: list[list[int]] = [[] for _ in self.nodes]
        for node in self.nodes:
            if node.head >= 0:
                kids[node.head].append(node.index)
        object.__setattr__(self, "_kids", tuple(tuple(k) for k in kids))

    def __len__(self) -> int:
        return len(self.nodes)

    def dependents(self, i: int) -> list[DepNode]:
        return [self.nodes[k] for k in self._kids[i]]

    def text(self, span: tuple[int, int] | None = None) -> str:
        lo, hi = span or (0, len(self.nodes))
        return " ".join(n.token for n in self.nodes[lo:hi])

    @property
    def words(self) -> list[str]:
        return [n.token for n in self.nodes]


def to_dependency(tree: ParseTree, table: HeadTable | None = None) -> DepTree:
    """Convert a constituency tree to dependencies by head percolation."""
    table = table or default_head_table()
    leaves = tree.leaves()
    n = len(leaves)
    head = [-1] * n
    attach: list[str | None] = [None] * n
    chain: list[list[str]] = [[leaf.label] for leaf in leaves]
    spans = [leaf.span for leaf in leaves]

    def walk(node: ParseTree) -> int:
        if node.is_leaf:
            return node.span[0]
        heads = [walk(c) for c in node.children]
        k = table.head_child(node.label, [c.label for c in node.children])
        h = heads[k]
        for j, hj in enumerate(heads):
            if j != k:
                head[hj] = h
                attach[hj] = node.label
        chain[h].append(node.label)
        spans[h] = node.span
        return h

    root = walk(tree)
    nodes = tuple(
        DepNode(i, leaves[i].token, leaves[i].label, head[i], chain[i][-1], attach[i], spans[i], tuple(chain[i]))  # type: ignore[arg-type]
        for i in range(n)
    )
    return DepTree(nodes, root)


# --------------------------------------------------------------------------
# it instances


@dataclass(frozen=True)
class ItInstance:
    sentence_id: str
    token_index: int
    role: str  # subject | verb-object | preposition-object


def _role(dep: DepTree, it: DepNode) -> str:
    if it.head < 0:
        return "subject"
    h = dep.nodes[it.head]
    if it.attach in SUBJECT_ATTACH:
        # a verbless small clause (it a crime / it up to them) makes it an object
        return "subject" if is_verb(h.tag) else "verb-object"
    if it.attach in ("PP", "WHPP") or h.tag in ("IN", "TO"):
        return "preposition-object"
    if it.attach == "VP":
        return "verb-object"
    return "subject" if is_verb(h.tag) and it.index < h.index else "verb-object"


def find_it_instances(dep: DepTree, sentence_id: str = "") -> list[ItInstance]:
    return [
        ItInstance(sentence_id, n.index, _role(dep, n))
        for n in dep.nodes
        if n.tag == "PRP" and n.lower == "it"
    ]


# --------------------------------------------------------------------------
# clauses and readings


@dataclass(frozen=True)
class Clause:
    head: int
    span: tuple[int, int]
    form: str
    complementizer: str | None = None
    comp_tag: str | None = None

    @property
    def relative(self) -> bool:
        return self.comp_tag in ("WDT", "WP", "WP$", "WHNP")

    @property
    def finite(self) -> bool:
        return self.form in ("full-with-complementizer", "full-bare")


def is_copula(node: DepNode) -> bool:
    return node.tag == "VBX" or (is_verb(node.tag) and node.lower in BE_FORMS and node.tag != "MD")


def _is_aux(dep: DepTree, d: DepNode, v: DepNode) -> bool:
    return d.index < v.index and (d.tag == "MD" or (is_verb(d.tag) and (d.lower in BE_FORMS or d.lower in HAVE_FORMS or d.lemma == "do")))


def _wh_word(dep: DepTree, d: DepNode) -> DepNode:
    lo, hi = d.span
    for node in dep.nodes[lo:hi]:
        if node.tag.startswith("W"):
            return node
    return d


def clause_form(dep: DepTree, i: int) -> Clause | None:
    """Classify the clause headed by node ``i`` into one of the five forms, or None."""
    v = dep.nodes[i]
    if not is_verb(v.tag):
        return None
    deps = dep.dependents(i)
    comp: DepNode | None = None
    has_to = has_subject = finite = False
    for d in deps:
        if d.index > v.index:
            continue
        if d.attach == "SBAR" and (d.tag in ("IN", "DT", "WDT", "WP", "WP$", "WRB") or d.label.startswith("WH")):
            comp = _wh_word(dep, d) if d.label.startswith("WH") else d
        elif d.tag == "TO" and d.attach == "VP":
            has_to = True
        elif d.attach in SUBJECT_ATTACH and d.label in ("NP", "S", "SBAR") and not is_punct(d.tag):
            has_subject = True
        elif _is_aux(dep, d, v) and d.tag in ("MD", "VBZ", "VBD", "VBP"):
            finite = True
    if v.tag in ("VBZ", "VBD", "VBP", "MD"):
        finite = True
    cword = comp.lower if comp is not None else None
    ctag = comp.tag if comp is not None else None
    if comp is not None and comp.label == "WHNP" and ctag not in ("WDT", "WP", "WP$"):
        ctag = "WHNP"
    if has_to and not finite:
        if cword == "for" and has_subject:
            return Clause(i, v.span, "for-infinitive", "for", ctag)
        if not has_subject and comp is None:
            return Clause(i, v.span, "infinitive")
        return None
    if finite:
        if comp is None:
            return Clause(i, v.span, "full-bare")
        return Clause(i, v.span, "full-with-complementizer", cword, ctag)
    if v.tag == "VBG" and comp is None:
        return Clause(i, v.span, "gerund")
    return None


def _acceptable(clause: Clause) -> bool:
    if clause.form != "full-with-complementizer":
        return True
    if clause.relative:
        return clause.complementizer in RELATIVE_WORDS
    return clause.complementizer in EXTRAPOSITION_COMPS


@dataclass(frozen=True)
class Reading:
    instance: ItInstance
    matrix_verb: DepNode
    matrix_object: DepNode | None = None
    clause: Clause | None = None
    virtual_copula: bool = False
    governor: DepNode | None = None
    preposition: DepNode | None = None
    particle: DepNode | None = None
    negation_or_too: tuple[DepNode, ...] = ()
    parenthetical: bool = False
    dep: DepTree | None = field(default=None, repr=False, compare=False)

    @property
    def subordinate_clause(self) -> Clause | None:
        return self.clause

    @property
    def complementizer(self) -> str | None:
        return self.clause.complementizer if self.clause else None

    @property
    def it(self) -> DepNode:
        assert self.dep is not None
        return self.dep.nodes[self.instance.token_index]


def _governing_verb(dep: DepTree, i: int) -> DepNode:
    node = dep.nodes[i]
    while node.head >= 0:
        node = dep.nodes[node.head]
        if is_verb(node.tag):
            return node
    raise NoGoverningVerb(f"no verb above token {i} ({dep.nodes[i].token})")


def _first_clause(dep: DepTree, it: DepNode, hosts: Sequence[DepNode]) -> Clause | None:
    best: Clause | None = None
    for host in hosts:
        verbal = is_verb(host.tag) and host.tag != "VBX"
        for d in dep.dependents(host.index):
            if d.index <= it.index or d.label not in CLAUSE_LABELS:
                continue
            if verbal and d.attach == "S":
                continue
            if d.label == "VP" and not any(x.tag == "TO" for x in dep.dependents(d.index)):
                continue
            clause = clause_form(dep, d.index)
            if clause is None or not _acceptable(clause):
                continue
            if best is None or clause.span[0] < best.span[0]:
                best = clause
    return best


def _predicate(dep: DepTree, v: DepNode, it: DepNode) -> DepNode | None:
    deps = dep.dependents(v.index)
    for d in deps:
        if d.index > max(v.index, it.index) and d.label in PRED_LABELS and d.attach in ("VP", "SQ", "SINV", "S"):
            return d
    for d in deps:
        if d.index < it.index and d.label in FRONTED_PRED_LABELS and d.attach in CLAUSE_LEVEL:
            return d
    return None


def _not_too(dep: DepTree, v: DepNode, pred: DepNode | None) -> tuple[DepNode, ...]:
    if pred is None or pred.label not in ("ADJP", "WHADJP") and not pred.tag.startswith("JJ"):
        return ()
    words = {"not", "n't", "too"}
    found = [d for d in dep.dependents(pred.index) if d.lower in words and d.index < pred.index]
    found += [d for d in dep.dependents(v.index) if d.lower in words and v.index < d.index < pred.index]
    return tuple(sorted(found, key=lambda d: d.index))


def _verb_object(dep: DepTree, v: DepNode, it: DepNode) -> DepNode | None:
    for d in dep.dependents(v.index):
        if d.index > max(v.index, it.index) and d.attach == "VP" and d.label in ("NP", "ADJP", "PP", "QP"):
            return d
        if d.index > v.index and d.label in CLAUSE_LABELS:
            return None
    return None


def _particle(dep: DepTree, v: DepNode) -> DepNode | None:
    for d in dep.dependents(v.index):
        if d.label == "PRT" or d.tag == "RP":
            return d
    return None


def _verbal_complement(dep: DepTree, v: DepNode) -> DepNode | None:
    for d in dep.dependents(v.index):
        if d.index <= v.index or d.attach not in ("VP", "SQ", "SINV") or not is_verb(d.tag):
            continue
        clause = clause_form(dep, d.index)
        if clause is not None and clause.form == "infinitive":
            return d
        if d.label == "VP" and d.tag == "VB" and not any(x.tag == "TO" for x in dep.dependents(d.index)):
            return d
    return None


def _bare_enough(dep: DepTree, v: DepNode, it: DepNode, nxt: DepNode) -> bool:
    """True if v carries only verbal or adverbial material besides ``nxt``."""
    for d in dep.dependents(v.index):
        if d.index in (it.index, nxt.index):
            continue
        if d.attach in CLAUSE_LEVEL and d.attach != "VP":
            continue
        if is_punct(d.tag) or d.tag in ("MD", "TO", "RB", "RBR", "RBS", "CC", "UH"):
            continue
        if d.label in ("ADVP", "PRN") or _is_aux(dep, d, v):
            continue
        return False
    return True


def _subject_reading(inst: ItInstance, dep: DepTree, it: DepNode, v: DepNode) -> Reading:
    if is_copula(v):
        pred = _predicate(dep, v, it)
        mods = _not_too(dep, v, pred)
    else:
        pred = _verb_object(dep, v, it)
        mods = ()
    hosts = [v] + ([pred] if pred is not None else [])
    clause = _first_clause(dep, it, hosts)
    parenthetical = False
    if clause is None and "PRN" in v.chain and v.head >= 0:
        host = dep.nodes[v.head]
        if is_verb(host.tag):
            clause = Clause(host.index, host.span, "full-bare")
            parenthetical = True
    return Reading(inst, v, pred, clause, particle=_particle(dep, v), negation_or_too=mods,
                   parenthetical=parenthetical, dep=dep)


def _virtual(inst: ItInstance, dep: DepTree, it: DepNode, pred: DepNode, gov: DepNode) -> Reading:
    vbx = DepNode(-1, "be", "VBX", pred.index, "VP", None, (it.index, it.index))
    hosts = [pred, gov]
    clause = _first_clause(dep, it, hosts)
    mods = tuple(d for d in dep.dependents(pred.index) if d.lower in ("not", "n't", "too") and d.index < pred.index)
    return Reading(inst, vbx, pred, clause, virtual_copula=True, governor=gov, negation_or_too=mods, dep=dep)


def generate_readings(inst: ItInstance, dep: DepTree) -> list[Reading]:
    """Decompose one *it* instance into readings, outermost verb first."""
    it = dep.nodes[inst.token_index]
    if inst.role == "preposition-object":
        prep = dep.nodes[it.head]
        v = _governing_verb(dep, prep.index)
        clause = _first_clause(dep, it, [v, prep])
        return [Reading(inst, v, None, clause, preposition=prep, particle=_particle(dep, v), dep=dep)]
    if it.head < 0:
        raise NoGoverningVerb("it is the root of the sentence")
    h = dep.nodes[it.head]
    if inst.role == "verb-object":
        if not is_verb(h.tag):
            return [_virtual(inst, dep, it, h, _governing_verb(dep, h.index))]
        for d in dep.dependents(h.index):
            if d.index > it.index and d.attach == "VP" and d.label in ("ADJP", "NP", "PP"):
                return [_virtual(inst, dep, it, d, h)]
            if d.index > it.index and d.label in CLAUSE_LABELS:
                break
        clause = _first_clause(dep, it, [h])
        return [Reading(inst, h, None, clause, particle=_particle(dep, h), dep=dep)]
    if not is_verb(h.tag):
        raise NoGoverningVerb(f"subject it attached to non-verb {h.token!r}")
    readings = []
    v = h
    seen = set()
    while v.index not in seen:
        seen.add(v.index)
        readings.append(_subject_reading(inst, dep, it, v))
        nxt = _verbal_complement(dep, v)
        if nxt is None or not _bare_enough(dep, v, it, nxt):
            break
        v = nxt
    return readings
