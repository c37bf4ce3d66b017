import pytest

from pleonastic.baseline import PHAConfig, pha_classify, pha_match, pha_records


@pytest.fixture(scope="module")
def cfg():
    return PHAConfig.load()


@pytest.mark.parametrize("text,kind", [
    ("it is easy to see why", "task"),
    ("It is clear that he left .", "that"),
    ("It is unclear whether he left .", "that"),
    ("It was John who left .", "cleft"),
    ("It remains to be seen .", None),
    ("He read it to me .", None),
    ("It is clear , that he left .", None),   # one comma splits the construct
    ("It is , of course , clear that he left .", "that"),
    ("It is easy . To see is hard .", None),
])
def test_pha_match(cfg, text, kind):
    toks = text.split()
    i = [t.lower() for t in toks].index("it")
    assert pha_match(toks, i, cfg) == kind
    assert pha_classify(toks, i, cfg) is (kind is not None)


def test_window_limit(cfg):
    toks = ["It", "is", "easy"] + ["very"] * 30 + ["to", "go"]
    assert pha_match(toks, 0, cfg) is None
    wide = PHAConfig(cfg.task_status_words, cfg.that_words, cfg.idioms, max_construct_length=40)
    assert pha_match(toks, 0, wide) == "task"


def test_rejects_non_it(cfg):
    with pytest.raises(ValueError):
        pha_match(["He", "is"], 0, cfg)


def test_config_validation(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    with pytest.raises(ValueError):
        PHAConfig.load(task_status=empty)
    with pytest.raises(ValueError):
        PHAConfig(frozenset({"easy"}), frozenset({"clear"}), max_construct_length=1)


def test_records(cfg):
    recs = pha_records("s1", "It is easy to say it was Mary who did it .".split(), cfg)
    assert [(r["token_index"], r["label"]) for r in recs] == [(0, "extraposition"), (5, "cleft"), (10, "referential")]
    assert all(r["system"] == "pha" for r in recs)
