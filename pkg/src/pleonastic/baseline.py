"""Word-list and bracketing-pattern baseline (no tagging, no parsing)."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

COPULAS = frozenset({"is", "was", "'s", "be", "been", "being", "are", "were", "isn't", "wasn't"})
BREAK_PUNCT = frozenset({",", "-", "--", ":", "—", "–"})
HARD_STOPS = frozenset({".", "!", "?", ";"})


def _read_words(path: str | Path | None, name: str) -> frozenset[str]:
    text = Path(path).read_text("utf-8") if path else resources.files("pleonastic").joinpath(f"data/{name}").read_text("utf-8")
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip() and not line.startswith("#"))


@dataclass(frozen=True)
class PHAConfig:
    task_status_words: frozenset[str]
    that_words: frozenset[str]
    idioms: frozenset[str] = frozenset()
    right_markers: dict[str, str] = field(default_factory=lambda: {
        "to": "task", "that": "that", "whether": "that", "who": "cleft", "which": "cleft"})
    max_construct_length: int = 25
    forbidden_intervening_punctuation: frozenset[str] = BREAK_PUNCT

    def __post_init__(self) -> None:
        if not self.task_status_words or not self.that_words:
            raise ValueError("word lists must be non-empty")
        if self.max_construct_length < 2:
            raise ValueError("max_construct_length must be >= 2")

    @classmethod
    def load(cls, task_status: str | Path | None = None, that_words: str | Path | None = None,
             idioms: str | Path | None = None, max_construct_length: int = 25) -> "PHAConfig":
        return cls(_read_words(task_status, "pha_task_status.txt"), _read_words(that_words, "pha_that_words.txt"),
                   _read_words(idioms, "pha_idioms.txt"), max_construct_length=max_construct_length)


def _norm(tok: str) -> str:
    return tok.lower().replace("’", "'")


def _idiom(words: list[str], i: int, idioms: frozenset[str]) -> bool:
    for idiom in idioms:
        parts = idiom.split()
        if words[i + 1: i + 1 + len(parts)] == parts:
            return True
    return False


def pha_match(sentence: Sequence[str], it_index: int, cfg: PHAConfig) -> str | None:
    """Kind of the first it ... marker construct that passes, or None."""
    words = [_norm(t) for t in sentence]
    if not 0 <= it_index < len(words) or words[it_index] != "it":
        raise ValueError(f"token {it_index} is not 'it'")
    if _idiom(words, it_index, cfg.idioms):
        return None
    end = min(len(words), it_index + cfg.max_construct_length)
    for j in range(it_index + 1, end):
        w = words[j]
        if w in HARD_STOPS:
            break
        kind = cfg.right_markers.get(w)
        if kind is None:
            continue
        between = words[it_index + 1: j]
        # a single comma, dash or colon splits the construct; zero or several are fine
        if sum(t in cfg.forbidden_intervening_punctuation for t in between) == 1:
            continue
        if kind == "task" and any(t in cfg.task_status_words for t in between):
            return kind
        if kind == "that" and any(t in cfg.that_words or t in cfg.task_status_words for t in between):
            return kind
        if kind == "cleft" and between and between[0] in COPULAS and len(between) >= 2:
            return kind
    return None


def pha_classify(sentence: Sequence[str], it_index: int, cfg: PHAConfig) -> bool:
    """True when some it ... marker construct passes the word-list and punctuation checks."""
    return pha_match(sentence, it_index, cfg) is not None


def pha_records(sentence_id: str, tokens: Sequence[str], cfg: PHAConfig) -> list[dict]:
    """Output records for every *it* in a token list, tagged system=pha."""
    out = []
    for i, tok in enumerate(tokens):
        if _norm(tok) != "it":
            continue
        kind = pha_match(tokens, i, cfg)
        label = "referential" if kind is None else ("cleft" if kind == "cleft" else "extraposition")
        out.append({"system": "pha", "sentence_id": sentence_id, "token_index": i, "label": label,
                    "pattern": kind})
    return out
