"""Hit-count backends: a local phrase index and a recorded-fixture store."""

from __future__ import annotations

import gzip
import json
import re
import threading
import warnings
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import numpy as np

from .querygen import Query, explode


class EmptyCorpus(UserWarning):
    pass


class FixtureMiss(KeyError):
    def __init__(self, query: str):
        super().__init__(query)
        self.query = query

    def __str__(self) -> str:
        return f"query not in fixture: {self.query}"


@dataclass(frozen=True)
class HitResult:
    count: int
    snippets: tuple[str, ...] = ()
    source: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("negative hit count")
        if self.count == 0 and self.snippets:
            raise ValueError("snippets without hits")


@dataclass(frozen=True)
class BackendCapabilities:
    supports_alternation: bool = True
    snippet_batch: int = 10
    exact_counts: bool = True

    def __post_init__(self) -> None:
        if self.snippet_batch < 1:
            raise ValueError("snippet_batch must be >= 1")


class Backend(Protocol):
    caps: BackendCapabilities
    name: str

    def count(self, query: Query) -> HitResult: ...

    def snippets(self, query: Query, k: int) -> list[str]: ...


def is_punct_token(tok: str) -> bool:
    return not any(ch.isalnum() for ch in tok)


def word_tokens(sentence: str) -> list[str]:
    """Lowercased word tokens of a tokenized sentence; punctuation dropped."""
    return [t.lower().replace("’", "'") for t in sentence.split() if not is_punct_token(t)]


def naive_matches(sentences: Sequence[str], query: Query) -> list[int]:
    """Reference implementation: scan every sentence for the slot sequence."""
    out = []
    n = len(query.slots)
    for sid, sent in enumerate(sentences):
        words = word_tokens(sent)
        for start in range(len(words) - n + 1):
            if all(words[start + j] in query.slots[j] for j in range(n)):
                out.append(sid)
                break
    return out


def naive_count(sentences: Sequence[str], query: Query) -> int:
    return len(naive_matches(sentences, query))


class LocalIndex:
    """Inverted positional index over tokenized sentences.

    Counts are numbers of matching sentences; punctuation tokens are
    transparent to phrase matching.
    """

    name = "local-index"

    def __init__(self, sentences: Iterable[str], snippet_batch: int = 10):
        self.sentences: tuple[str, ...] = tuple(s.strip() for s in sentences)
        self.caps = BackendCapabilities(True, snippet_batch, True)
        postings: dict[str, dict[int, list[int]]] = {}
        for sid, sent in enumerate(self.sentences):
            for pos, w in enumerate(word_tokens(sent)):
                postings.setdefault(w, {}).setdefault(sid, []).append(pos)
        self._postings = {w: {s: frozenset(p) for s, p in d.items()} for w, d in postings.items()}
        if not self.sentences:
            warnings.warn("local index built from an empty corpus", EmptyCorpus, stacklevel=2)

    def __len__(self) -> int:
        return len(self.sentences)

    def _positions(self, slot: Sequence[str], sid: int) -> set[int]:
        out: set[int] = set()
        for w in slot:
            out |= self._postings.get(w, {}).get(sid, frozenset())
        return out

    def matches(self, query: Query) -> list[int]:
        candidates: set[int] | None = None
        for slot in query.slots:
            ids: set[int] = set()
            for w in slot:
                ids.update(self._postings.get(w, {}))
            candidates = ids if candidates is None else candidates & ids
            if not candidates:
                return []
        hits = []
        for sid in sorted(candidates or ()):
            per_slot = [self._positions(slot, sid) for slot in query.slots]
            if any(all(p + j in per_slot[j] for j in range(1, len(per_slot))) for p in per_slot[0]):
                hits.append(sid)
        return hits

    def count(self, query: Query) -> HitResult:
        ids = self.matches(query)
        snips = tuple(self.sentences[i] for i in ids[: self.caps.snippet_batch])
        return HitResult(len(ids), snips, self.name)

    def snippets(self, query: Query, k: int) -> list[str]:
        return [self.sentences[i] for i in self.matches(query)[:k]]

    @classmethod
    def from_file(cls, path: str | Path, snippet_batch: int = 10) -> "LocalIndex":
        with open(path, encoding="utf-8") as fh:
            return cls((line for line in fh if line.strip()), snippet_batch)

    def save(self, path: str | Path) -> None:
        """Persist sentences and postings as gzipped JSON."""
        postings = {w: {str(s): sorted(p) for s, p in d.items()} for w, d in self._postings.items()}
        payload = {"format": "pleonastic-index/1", "sentences": list(self.sentences), "postings": postings}
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            json.dump(payload, fh)

    @classmethod
    def load(cls, path: str | Path) -> "LocalIndex":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"index file {path} does not exist; build it with `pleonastic corpus build`")
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            payload = json.load(fh)
        obj = cls.__new__(cls)
        obj.sentences = tuple(payload["sentences"])
        obj.caps = BackendCapabilities(True, 10, True)
        obj._postings = {w: {int(s): frozenset(p) for s, p in d.items()} for w, d in payload["postings"].items()}
        return obj


# --------------------------------------------------------------------------
# fixtures


def _parse_count(text: str) -> int:
    text = text.strip()
    return int(text) if text.isdigit() else int(round(float(text)))


def canonical(text: str) -> str:
    return Query.parse(text).serialize()


def read_fixture(path: str | Path) -> dict[str, HitResult]:
    counts: dict[str, int] = {}
    snips: dict[str, list[str]] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3 or parts[0] not in ("Q", "S"):
            raise ValueError(f"{path}:{lineno}: expected 'Q|S<TAB>query<TAB>value'")
        key = canonical(parts[1])
        if parts[0] == "Q":
            counts[key] = _parse_count(parts[2])
        else:
            snips.setdefault(key, []).append(parts[2])
    return {k: HitResult(c, tuple(snips.get(k, ())) if c else ()) for k, c in counts.items()}


def write_fixture(path: str | Path, entries: dict[str, HitResult]) -> None:
    lines = []
    for key in entries:
        hit = entries[key]
        lines.append(f"Q\t{key}\t{hit.count}")
        lines.extend(f"S\t{key}\t{s}" for s in hit.snippets)
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


class FixtureStore:
    """Replays recorded counts and snippets keyed by canonical query."""

    name = "fixture"

    def __init__(self, entries: dict[str, HitResult] | None = None, strict: bool = False,
                 caps: BackendCapabilities | None = None):
        self.entries = {canonical(k): v for k, v in (entries or {}).items()}
        self.strict = strict
        self.caps = caps or BackendCapabilities(True, 10, False)

    @classmethod
    def load(cls, path: str | Path, strict: bool = False) -> "FixtureStore":
        return cls(read_fixture(path), strict)

    def dump(self, path: str | Path) -> None:
        write_fixture(path, self.entries)

    def count(self, query: Query) -> HitResult:
        key = query.serialize()
        if key in self.entries:
            hit = self.entries[key]
            return HitResult(hit.count, hit.snippets[: self.caps.snippet_batch], self.name)
        if self.strict:
            raise FixtureMiss(key)
        return HitResult(0, (), self.name + ":miss")

    def snippets(self, query: Query, k: int) -> list[str]:
        return list(self.count(query).snippets[:k])


class CachingBackend:
    """Write-through cache in fixture format in front of another backend."""

    def __init__(self, inner: Backend, path: str | Path):
        self.inner = inner
        self.caps = inner.caps
        self.name = inner.name
        self.path = Path(path)
        self._lock = threading.Lock()
        self.cache: dict[str, HitResult] = read_fixture(self.path) if self.path.exists() else {}

    def count(self, query: Query) -> HitResult:
        key = query.serialize()
        with self._lock:
            hit = self.cache.get(key)
        if hit is not None:
            return HitResult(hit.count, hit.snippets, self.name + ":cached")
        hit = self.inner.count(query)
        with self._lock:
            if key not in self.cache:
                self.cache[key] = hit
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(f"Q\t{key}\t{hit.count}\n")
                    for s in hit.snippets:
                        fh.write(f"S\t{key}\t{s}\n")
        return hit

    def snippets(self, query: Query, k: int) -> list[str]:
        return list(self.count(query).snippets[:k])


class NoisyBackend:
    """Multiplicative log-normal jitter on counts, for robustness experiments only."""

    def __init__(self, inner: Backend, sigma: float = 0.1, seed: int = 0):
        self.inner = inner
        self.sigma = sigma
        self.seed = seed
        self.name = inner.name + ":noisy"
        self.caps = BackendCapabilities(inner.caps.supports_alternation, inner.caps.snippet_batch, False)

    def count(self, query: Query) -> HitResult:
        hit = self.inner.count(query)
        if hit.count == 0:
            return hit
        rng = np.random.default_rng([self.seed, zlib.crc32(query.serialize().encode("utf-8"))])
        noisy = max(1, int(round(hit.count * float(np.exp(rng.normal(0.0, self.sigma))))))
        return HitResult(noisy, hit.snippets, self.name)

    def snippets(self, query: Query, k: int) -> list[str]:
        return self.inner.snippets(query, k)


def execute(backend: Backend, query: Query) -> HitResult:
    """Run a query, exploding alternations for backends that lack them."""
    if backend.caps.supports_alternation or not query.has_alternation:
        return backend.count(query)
    total = 0
    snips: list[str] = []
    for single in explode(query):
        hit = backend.count(single)
        total += hit.count
        snips.extend(hit.snippets)
    return HitResult(total, tuple(snips[: backend.caps.snippet_batch]) if total else (), backend.name + ":exploded")


# --------------------------------------------------------------------------
# what-cleft validation


def what_cleft_regex(query: Query) -> re.Pattern[str]:
    parts = []
    for i, slot in enumerate(query.slots):
        words = ["What" if (i == 0 and w == "what") else w for w in slot]
        alt = "|".join(re.escape(w) for w in words)
        alt = f"(?:{alt})" if len(words) > 1 else alt
        if i == 0:
            parts.append(alt)
        elif all(w.startswith("'") for w in slot):
            parts.append(r"\s*" + alt)
        elif any(w.startswith("'") for w in slot):
            parts.append(r"(?:\s*(?:" + "|".join(re.escape(w) for w in slot if w.startswith("'")) + r")|\s+(?:"
                         + "|".join(re.escape(w) for w in slot if not w.startswith("'")) + "))")
        else:
            parts.append(r"\s+" + alt)
    body = "".join(parts)
    return re.compile(r"(?:^|[.!?][\"'”’)\]]*\s+)(?:[\"“‘'(\[]+\s*)?" + body + r"\b")


def validate_what_cleft(snippets: Sequence[str], query: Query) -> float:
    """Fraction of snippets in which the what-cleft starts a sentence."""
    if not snippets:
        return 0.0
    rx = what_cleft_regex(query)
    good = sum(1 for s in snippets if rx.search(s.strip().replace("’", "'")))
    return good / len(snippets)
