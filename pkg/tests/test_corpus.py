import random
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from pleonastic.corpus import (
    BackendCapabilities,
    CachingBackend,
    EmptyCorpus,
    FixtureMiss,
    FixtureStore,
    HitResult,
    LocalIndex,
    NoisyBackend,
    execute,
    naive_count,
    naive_matches,
    read_fixture,
    validate_what_cleft,
    write_fixture,
)
from pleonastic.querygen import Query, explode
from oracle_corpora import random_corpus, random_query

TABLE3_II_IT = "it is|was|'s difficult to read the|a|an|no|this|these|their|his|our"


def test_small_example():
    idx = LocalIndex(["it is easy to see why", "he is easy to fool"])
    assert idx.count(Query.parse("it|he is easy to")).count == 2
    assert idx.count(Query.parse("it is hard")).count == 0


def test_empty_corpus_warns_and_counts_zero():
    with pytest.warns(EmptyCorpus):
        idx = LocalIndex([])
    assert idx.count(Query.parse("it is")).count == 0


def test_punctuation_is_transparent_and_case_folded():
    idx = LocalIndex(["It , is easy .", "What ’s easy"])
    assert idx.count(Query.parse("it is easy")).count == 1
    assert idx.count(Query.parse("what 's easy")).count == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_index_matches_naive_scan(seed):
    rng = random.Random(seed)
    sents = random_corpus(rng, rng.randint(0, 60))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyCorpus)
        idx = LocalIndex(sents)
    for _ in range(10):
        q = random_query(rng)
        assert idx.matches(q) == naive_matches(sents, q)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_monotone_under_added_sentences(seed):
    rng = random.Random(seed)
    sents = random_corpus(rng, 30)
    q = random_query(rng)
    before = naive_count(sents, q)
    assert LocalIndex(sents + random_corpus(rng, 5)).count(q).count >= before


def test_save_load_roundtrip(tmp_path):
    sents = random_corpus(random.Random(3), 200)
    idx = LocalIndex(sents)
    idx.save(tmp_path / "c.idx.gz")
    back = LocalIndex.load(tmp_path / "c.idx.gz")
    for q in [random_query(random.Random(k)) for k in range(20)]:
        assert back.count(q) == idx.count(q)


def test_missing_index_is_named(tmp_path):
    with pytest.raises(FileNotFoundError, match="nope.idx.gz"):
        LocalIndex.load(tmp_path / "nope.idx.gz")


def test_fixture_sci_notation_and_snippets(tmp_path, case_backend):
    assert case_backend.count(Query.parse(TABLE3_II_IT)).count == 3960
    assert case_backend.count(Query.parse("it is|was|'s difficult to")).count == 6_300_000
    f = tmp_path / "f.tsv"
    f.write_text("Q\tit is  EASY\t1.5E5\nS\tit is easy\tIt is easy .\n# comment\n", encoding="utf-8")
    entries = read_fixture(f)
    assert entries == {"it is easy": HitResult(150000, ("It is easy .",))}
    write_fixture(tmp_path / "g.tsv", entries)
    assert read_fixture(tmp_path / "g.tsv") == entries


def test_fixture_rejects_malformed_lines(tmp_path):
    f = tmp_path / "bad.tsv"
    f.write_text("X\tit is\t3\n")
    with pytest.raises(ValueError, match="bad.tsv:1"):
        read_fixture(f)


def test_fixture_strict_miss_names_query():
    store = FixtureStore({"it is": HitResult(3)}, strict=True)
    assert store.count(Query.parse("it is")).count == 3
    with pytest.raises(FixtureMiss, match="it was"):
        store.count(Query.parse("it was"))
    assert FixtureStore({}).count(Query.parse("it was")).count == 0


def test_caching_backend_writes_through(tmp_path):
    idx = LocalIndex(["it is easy to see", "he is easy"])
    path = tmp_path / "cache.tsv"
    cached = CachingBackend(idx, path)
    q = Query.parse("it|he is easy")
    assert cached.count(q).count == 2
    assert read_fixture(path)["it|he is easy"].count == 2
    again = CachingBackend(LocalIndex(["unrelated"]), path)
    hit = again.count(q)
    assert hit.count == 2 and hit.source.endswith(":cached")


def test_noisy_backend_is_deterministic():
    store = FixtureStore({"it is": HitResult(1000), "it was": HitResult(0)})
    a, b = NoisyBackend(store, 0.3, seed=5), NoisyBackend(store, 0.3, seed=5)
    q = Query.parse("it is")
    assert a.count(q) == b.count(q)
    assert a.count(Query.parse("it was")).count == 0
    assert not a.caps.exact_counts


class NoAlternation(LocalIndex):
    def __init__(self, sentences):
        super().__init__(sentences)
        self.caps = BackendCapabilities(False, 10, True)


def test_execute_explodes_and_sums():
    sents = ["it is easy", "he was easy", "it was easy", "this is hard"]
    q = Query.parse("it|he is|was easy")
    plain = NoAlternation(sents)
    hit = execute(plain, q)
    assert hit.count == 3 and hit.source.endswith(":exploded")
    assert hit.count == sum(naive_count(sents, s) for s in explode(q))
    assert execute(LocalIndex(sents), q).count == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_explosion_sum_counts_form_matches(seed):
    rng = random.Random(seed)
    sents = random_corpus(rng, 40)
    q = random_query(rng)
    per_sentence = [sum(naive_count([s], e) for e in explode(q)) for s in sents]
    assert execute(NoAlternation(sents), q).count == sum(per_sentence)
    if max(per_sentence, default=0) <= 1:
        assert execute(NoAlternation(sents), q).count == LocalIndex(sents).count(q).count


@pytest.mark.parametrize("snips,expected", [
    ([], 0.0),
    (["What is easy is to read it ."] * 7 + ["They said what is easy is to read ."] * 3, 0.7),
    (["I know what is easy is to go"] * 10, 0.0),
    (["He left . What was easy was to stay ."], 1.0),
    (["\" What 's easy is to stay"], 1.0),
])
def test_validate_what_cleft(snips, expected):
    q = Query.parse("what is|was|'s easy is|was to")
    assert validate_what_cleft(snips, q) == pytest.approx(expected)


def test_case_study_snippets_give_seventy_percent(case_backend):
    q = Query.parse("what is|was|'s difficult is|was to")
    assert validate_what_cleft(case_backend.snippets(q, 10), q) == pytest.approx(0.7)


