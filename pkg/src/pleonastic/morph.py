"""Small English inflector: verb lemmas and forms, noun and adjective bases.

Rule-based, backed by the editable ``data/irregular_verbs.tsv`` table.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

VOWELS = set("aeiou")

BE_FORMS = {"be", "is", "was", "were", "are", "am", "'s", "'re", "'m", "been", "being", "ai"}
HAVE_FORMS = {"have", "has", "had", "having", "'ve", "'d"}

# Multi-syllable verbs that double their final consonant.
DOUBLING = {
    "admit", "commit", "compel", "control", "equip", "expel", "omit", "occur", "permit",
    "patrol", "prefer", "program", "propel", "rebel", "recur", "refer", "regret",
    "repel", "submit", "transfer", "incur", "concur", "deter", "kidnap", "worship",
    "acquit", "abet", "embed", "forget", "begin", "confer", "defer", "infer", "outwit",
}

NO_E_STEMS = {"focus", "bias", "canvas", "chorus", "nonplus"}
US_E_STEMS = {"caus", "paus", "abus", "accus", "amus", "refus", "confus", "diffus", "excus", "fus", "mus", "us"}

# Stem endings after which a dropped final -e is restored (indicat -> indicate).
ADD_E = (
    r"([^aeiou]at|[iu]at|[^aeiou]ut|[^aeiou]id|[^aeiou]ad|[^aeiou]od|[^aeiou]ud|[^aeiou]ed"
    r"|[^aeiou]ib|[^aeiou][aiuo]k|[^aeiou]ir|uir|[^aeiou]ar|[^aeiou]ur|[^aeiou]il|[^aeiou]ol"
    r"|[^aeiou]ul|hal|sum|[^aeiou]in|plet|[^aeiou]pet|[bcdfgkpstz]l)$"
)

IRREGULAR_ADJ = {
    "better": "good", "best": "good", "worse": "bad", "worst": "bad",
    "further": "far", "farther": "far", "furthest": "far", "farthest": "far",
    "more": "much", "most": "much", "less": "little", "least": "little",
}


@lru_cache(maxsize=None)
def verb_table() -> tuple[dict[str, tuple[str, str]], dict[str, str], dict[str, str]]:
    """Return (base -> (past, participle), past -> base, participle -> base)."""
    forms: dict[str, tuple[str, str]] = {}
    past_rev: dict[str, str] = {}
    part_rev: dict[str, str] = {}
    text = resources.files("pleonastic").joinpath("data/irregular_verbs.tsv").read_text("utf-8")
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        base, past, part = line.split("\t")
        forms[base] = (past, part)
        past_rev.setdefault(past, base)
        part_rev.setdefault(part, base)
    return forms, past_rev, part_rev


def _syllables(word: str) -> int:
    return len(re.findall(r"[aeiou]+|(?<=[^aeiou])y", word)) or 1


def _doubles(base: str) -> bool:
    if base in DOUBLING:
        return True
    if len(base) < 3 or _syllables(base) != 1:
        return False
    a, b, c = base[-3], base[-2], base[-1]
    return a not in VOWELS and b in VOWELS and c not in VOWELS and c not in "wxy"


def third_person(base: str) -> str:
    base = base.lower()
    special = {"be": "is", "have": "has", "do": "does", "go": "goes"}
    if base in special:
        return special[base]
    if re.search(r"(s|x|z|ch|sh|o)$", base):
        return base + "es"
    if re.search(r"[^aeiou]y$", base):
        return base[:-1] + "ies"
    return base + "s"


def past(base: str) -> str:
    base = base.lower()
    forms, _, _ = verb_table()
    if base in forms:
        return forms[base][0]
    if base.endswith("e"):
        return base + "d"
    if re.search(r"[^aeiou]y$", base):
        return base[:-1] + "ied"
    if _doubles(base):
        return base + base[-1] + "ed"
    return base + "ed"


def participle(base: str) -> str:
    forms, _, _ = verb_table()
    base = base.lower()
    return forms[base][1] if base in forms else past(base)


def gerund(base: str) -> str:
    base = base.lower()
    if base == "be":
        return "being"
    if base.endswith("ie"):
        return base[:-2] + "ying"
    if base.endswith("e") and not base.endswith(("ee", "ye", "oe")):
        return base[:-1] + "ing"
    if _doubles(base):
        return base + base[-1] + "ing"
    return base + "ing"


def _needs_e(stem: str) -> bool:
    if stem in NO_E_STEMS:
        return False
    if stem.endswith(("v", "c")) or re.search(r"[^z]z$", stem):
        return True
    if re.search(r"[rld]g$", stem) or len(stem) > 4 and re.search(r"([aeiou]g|ang|eng|ung|[aeiou]th)$", stem):
        return True
    if re.search(r"[aeiou]s$", stem) and not stem.endswith("ss"):
        return not stem.endswith("us") or stem in US_E_STEMS
    if re.search(ADD_E, stem):
        return True
    if len(stem) == 2 and stem[0] in VOWELS and stem[1] not in VOWELS and stem[1] not in "wxy":
        return True
    if len(stem) >= 3 and _syllables(stem) == 1:
        a, b, c = stem[-3], stem[-2], stem[-1]
        return a not in VOWELS and b in VOWELS and c not in VOWELS and c not in "wxy"
    return False


def _strip_suffix(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in "lsfz" and stem[-1] not in VOWELS and len(stem) > 3:
        return stem[:-1]
    if stem.endswith("i"):
        return stem[:-1] + "y"
    if _needs_e(stem):
        return stem + "e"
    return stem


@lru_cache(maxsize=None)
def _gerund_table() -> dict[str, str]:
    return {gerund(base): base for base in verb_table()[0]}


def verb_lemma(word: str, tag: str = "VB") -> str:
    """Base form of a verb token given its Penn tag."""
    w = word.lower()
    if w in BE_FORMS or w == "ai":
        return "be"
    if w in {"has", "had", "having", "'ve"}:
        return "have"
    if w in {"does", "did", "done", "doing"}:
        return "do"
    if w == "'d":
        return "would"
    if tag in ("VB", "VBP", "MD", "VBX"):
        return w
    forms, past_rev, part_rev = verb_table()
    if tag == "VBD" and w in past_rev:
        return past_rev[w]
    if tag == "VBN" and w in part_rev:
        return part_rev[w]
    if w in past_rev and tag in ("VBD", "VBN"):
        return past_rev[w]
    if w in part_rev and tag in ("VBD", "VBN"):
        return part_rev[w]
    if tag == "VBZ":
        if w in ("goes", "does"):
            return w[:-2]
        if re.search(r"[^aeiou]ies$", w):
            return w[:-3] + "y"
        if re.search(r"(ss|sh|ch|x|zz|o)es$", w):
            return w[:-2]
        if w.endswith("s") and not w.endswith("ss"):
            return w[:-1]
        return w
    if tag in ("VBD", "VBN") and w.endswith("ed") and len(w) > 3:
        if w.endswith("ied") and len(w) > 4:
            return w[:-3] + "y"
        if w.endswith("eed"):
            return w[:-1]
        stem = w[:-2]
        if stem.endswith("e") and _syllables(stem) > 1 and stem[-2] in VOWELS:
            return stem
        return _strip_suffix(stem)
    if tag == "VBG" and w.endswith("ing") and len(w) > 4:
        known = _gerund_table()
        if w in known:
            return known[w]
        stem = w[:-3]
        if stem.endswith("y") and len(stem) > 1 and stem[-2] not in VOWELS and stem[:-1] + "ie" in {"lie", "die", "tie", "vie"}:
            return stem[:-1] + "ie"
        return _strip_suffix(stem)
    return w


def noun_lemma(word: str) -> str:
    w = word.lower()
    if len(w) <= 3 or w.endswith(("ss", "us", "is")):
        return w
    if w.endswith("ies"):
        return w[:-3] + "y"
    if re.search(r"(ches|shes|xes|sses)$", w):
        return w[:-2]
    if w.endswith("s"):
        return w[:-1]
    return w


def adjective_base(word: str, tag: str | None = None) -> str:
    """Strip comparative/superlative morphology: easier -> easy, biggest -> big.

    With a tag other than JJR/JJS/RBR/RBS the word is returned lowercased.
    """
    w = word.lower()
    if tag is not None and tag not in ("JJR", "JJS", "RBR", "RBS"):
        return w
    if w in IRREGULAR_ADJ:
        return IRREGULAR_ADJ[w]
    for suffix in ("est", "er"):
        if not w.endswith(suffix) or len(w) <= len(suffix) + 2:
            continue
        stem = w[: -len(suffix)]
        if stem.endswith("i"):
            return stem[:-1] + "y"
        if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in VOWELS and stem[-1] not in "ls":
            return stem[:-1]
        if re.search(r"([^aeiou][aeiou][^aeiouwxy]|[aeiour][cgsv]|ns|[^aeioul]l)$", stem) and _syllables(stem) == 1:
            return stem + "e"
        return stem
    return w
