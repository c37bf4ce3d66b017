import pytest
from hypothesis import given, strategies as st

from pleonastic.filters import WeatherTimeLexicon, syntactic_verdict
from pleonastic.querygen import (
    EngineCaps,
    NotApplicable,
    Query,
    build_bundle,
    build_pattern3,
    expand_verb,
    explode,
    normalize_query_text,
)
from pleonastic.tree import find_it_instances, generate_readings

# printed query strings, one row per pattern, keyed by (sentence, reading)
PRINTED = {
    ("0231:015", 0): {
        "PatternI": "what is was ’s difficult is was to",
        "PatternII_it": "it is was ’s difficult to read the a an no this these their his our",
        "PatternII_others": "which this who he is was ’s difficult to read the a an no this these their his our",
        "PatternII'_it": "it is was ’s difficult to",
        "PatternII'_others": "which this who he is was ’s difficult to",
    },
    ("0331:033", 0): {
        "PatternI": "what appears appeared is was to",
        "PatternII_it": "it appears appeared to be the a an no this these their his our",
        "PatternII_others": "which this who he appears appeared to be the a an no this these their his our",
        "PatternII'_it": "it appears appeared to",
        "PatternII'_others": "which this who he appears appeared to",
    },
    ("0331:033", 1): {
        "PatternI": "what is was 's its my our his her their your sort is was that",
        "PatternII_it": "it is was 's its my our his her their your sort that the a an no this these they we he their his our",
        "PatternII_others": "which this who he is was 's its my our his her their your sort that the a an no this these "
                            "they we he their his our",
    },
}


def candidates(trees, sid):
    lex = WeatherTimeLexicon.load()
    dep = trees[sid]
    readings = generate_readings(find_it_instances(dep)[0], dep)
    return [syntactic_verdict(r, lex).candidate for r in readings]


@pytest.mark.parametrize("key", list(PRINTED), ids=[f"{k[0]}#{k[1]}" for k in PRINTED])
def test_printed_queries(case_trees, key):
    bundle = build_bundle(candidates(case_trees, key[0])[key[1]])
    got = {q.purpose: normalize_query_text(q.serialize()) for q in bundle.queries}
    assert got == {p: normalize_query_text(t) for p, t in PRINTED[key].items()}


def test_exact_serialization(case_trees):
    b = build_bundle(candidates(case_trees, "0231:015")[0])
    assert b.get("PatternII_it").serialize() == "it is|was|'s difficult to read the|a|an|no|this|these|their|his|our"
    assert b.get("PatternI").serialize() == "what is|was|'s difficult is|was to"
    assert b.has_stepped_down and not b.is_object


def test_reading_b_has_no_stepped_down_pair(case_trees):
    assert not build_bundle(candidates(case_trees, "0331:033")[1]).has_stepped_down


def test_object_pattern(example_trees):
    (cand,) = candidates(example_trees, "0114:007")
    b = build_bundle(cand)
    assert b.is_object
    assert b.get("ObjectIt").serialize().startswith("had it that the")
    assert b.get("ObjectThem").serialize().startswith("had them that the")


def test_pattern3(example_trees, case_trees):
    (cand,) = candidates(example_trees, "0258:024")
    assert [q.serialize() for q in build_pattern3(cand)] == [
        "an easy-to-program", "that programming in|from", "that programming the"]
    with pytest.raises(NotApplicable):
        build_pattern3(candidates(case_trees, "0231:015")[0])  # infinitive has an object


def test_no_alternation_uses_simplest_forms(case_trees):
    b = build_bundle(candidates(case_trees, "0231:015")[0], caps=EngineCaps(supports_alternation=False))
    assert b.get("PatternII_it").serialize().split()[:4] == ["it", "is", "difficult", "to"]
    assert b.get("PatternI").serialize() == "what is difficult is to"


@pytest.mark.parametrize("lemma,surface,expected", [
    ("be", None, [("is", "was", "'s")]),
    ("appear", "appears", [("appears", "appeared")]),
    ("make", "make", [("makes", "made")]),
])
def test_expand_verb(lemma, surface, expected):
    assert expand_verb(lemma, surface) == expected


def test_query_validation():
    with pytest.raises(ValueError):
        Query((("it",),))
    with pytest.raises(ValueError):
        Query((("it",), ("",)))
    with pytest.raises(ValueError):
        Query((("it",), ("is",)), purpose="nope")
    assert Query((("It", "it"), ("is",))).slots[0] == ("it",)


words = st.text(alphabet="abcdefg'", min_size=1, max_size=5)
slots = st.lists(words, min_size=1, max_size=3).map(tuple)


@given(st.lists(slots, min_size=2, max_size=5))
def test_serialize_roundtrip(raw):
    q = Query(tuple(raw))
    assert Query.parse(q.serialize()) == q
    assert Query.parse(f'"{q.serialize()}"') == q


@given(st.lists(slots, min_size=2, max_size=4))
def test_explode_size_and_content(raw):
    q = Query(tuple(raw))
    parts = explode(q)
    n = 1
    for s in q.slots:
        n *= len(s)
    assert len(parts) == n == len({p.serialize() for p in parts})
    assert all(not p.has_alternation for p in parts)
    assert all(w in s for p in parts for w, s in zip((x[0] for x in p.slots), q.slots))
