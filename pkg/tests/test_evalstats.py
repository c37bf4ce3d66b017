import pytest
from hypothesis import given, settings, strategies as st

from pleonastic.evalstats import (
    ALL_PLEONASTIC,
    ConfusionCounts,
    DegenerateMarginals,
    EmptySample,
    GoldAnnotation,
    MisalignedOutputs,
    UndefinedMetric,
    adjusted_wald,
    align,
    approx_randomization,
    bootstrap_ci,
    category_report,
    cohen_kappa,
    comparison_report,
    kappa_from_table,
    outcome_matrix,
    prf,
    read_gold,
)


@pytest.mark.parametrize("tp,fp,fn,expected", [
    (113, 3, 5, "97.41 95.76 96.58"),
    (105, 89, 35, "54.12 75.00 62.87"),
    (13, 0, 0, "100.00 100.00 100.00"),
    (0, 0, 4, "n/a 0.00 n/a"),
    (0, 2, 2, "0.00 0.00 0.00"),
])
def test_prf_values(tp, fp, fn, expected):
    assert prf(ConfusionCounts.single("x", tp, fp, fn), "x").format() == expected


@given(st.integers(1, 500), st.integers(0, 500), st.integers(0, 500), st.integers(2, 9))
def test_prf_is_scale_free(tp, fp, fn, k):
    a = prf(ConfusionCounts.single("x", tp, fp, fn), "x")
    b = prf(ConfusionCounts.single("x", k * tp, k * fp, k * fn), "x")
    assert a.precision == pytest.approx(b.precision)
    assert a.recall == pytest.approx(b.recall)
    assert a.f == pytest.approx(b.f)
    assert min(a.precision, a.recall) - 1e-9 <= a.f <= max(a.precision, a.recall) + 1e-9


@pytest.mark.parametrize("x,n,lo", [(13, 13, 79.74), (9, 9, 73.07)])
def test_adjusted_wald_table_endpoints(x, n, lo):
    iv = adjusted_wald(x, n)
    assert abs(iv.lo - lo) < 0.1 and iv.hi == 100.0 and iv.method == "adjusted-wald"


@given(st.integers(1, 300).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))))
def test_adjusted_wald_symmetry(xn):
    x, n = xn
    a, b = adjusted_wald(x, n), adjusted_wald(n - x, n)
    assert a.lo == pytest.approx(100 - b.hi, abs=1e-9)
    assert 0 <= a.lo <= a.point <= a.hi <= 100


def test_adjusted_wald_rejects_bad_input():
    with pytest.raises(ValueError):
        adjusted_wald(3, 2)
    with pytest.raises(ValueError):
        adjusted_wald(0, 0)


def rows(tp, fp, fn):
    return [(1, 0, 0)] * tp + [(0, 1, 0)] * fp + [(0, 0, 1)] * fn


def test_bootstrap_contains_point_and_is_deterministic():
    data = rows(40, 7, 9) + [(0, 0, 0)] * 30
    a = bootstrap_ci(data, "F", B=999, seed=3)
    b = bootstrap_ci(data, "F", B=999, seed=3, workers=4)
    assert a == b
    assert a.lo <= a.point <= a.hi and a.method == "bootstrap-percentile"
    assert bootstrap_ci(data, "F", B=999, seed=4) != a


def test_bootstrap_extremes_fall_back_to_wald():
    iv = bootstrap_ci(rows(13, 0, 0), "precision")
    assert iv.method == "adjusted-wald" and abs(iv.lo - 79.74) < 0.1
    f = bootstrap_ci(rows(5, 0, 0), "F")
    assert f == adjusted_wald(10, 10)
    assert bootstrap_ci([1, 1, 1], "accuracy").method == "adjusted-wald"


def test_bootstrap_errors():
    with pytest.raises(EmptySample):
        bootstrap_ci([], "F")
    with pytest.raises(UndefinedMetric):
        bootstrap_ci(rows(0, 0, 3), "precision")
    with pytest.raises(ValueError):
        bootstrap_ci(rows(1, 1, 1), "F", B=0)


GOLD = ["extraposition"] * 30 + ["cleft"] * 10 + ["nominal"] * 40 + ["weather_time"] * 5
SYS_A = ["extraposition"] * 25 + ["referential"] * 5 + ["cleft"] * 9 + ["referential"] + ["referential"] * 37 \
    + ["extraposition"] * 3 + ["weather_time"] * 5
SYS_B = ["extraposition"] * 20 + ["referential"] * 10 + ["cleft"] * 5 + ["referential"] * 5 + ["referential"] * 30 \
    + ["extraposition"] * 10 + ["weather_time"] * 4 + ["referential"]


def test_randomization_identical_systems():
    res = approx_randomization(SYS_A, SYS_A, GOLD, shuffles=999)
    assert res.p == 1.0 and res.observed == 0.0


def test_randomization_deterministic_across_workers():
    a = approx_randomization(SYS_A, SYS_B, GOLD, shuffles=2000, seed=9)
    b = approx_randomization(SYS_A, SYS_B, GOLD, shuffles=2000, seed=9, workers=3)
    assert a == b
    assert a.sign == "+" and 0 < a.p <= 1


def test_randomization_extreme_accuracy():
    wrong = ["cleft" if g != "cleft" else "extraposition" for g in GOLD]
    res = approx_randomization(GOLD, wrong, GOLD, "accuracy", None, shuffles=9999)
    assert res.p == pytest.approx(1 / 10000)
    assert res.format() == "Accuracy^+ / p < .001"


def test_randomization_misaligned():
    with pytest.raises(MisalignedOutputs):
        approx_randomization(SYS_A, SYS_B[:-1], GOLD)


def test_kappa():
    assert kappa_from_table([[20, 5], [10, 65]]) == pytest.approx(0.625, abs=1e-6)
    labels = ["a", "b", "b", "c", "a"]
    assert cohen_kappa(labels, labels) == 1.0
    expanded_1 = ["y"] * 25 + ["n"] * 75
    expanded_2 = ["y"] * 20 + ["n"] * 5 + ["y"] * 10 + ["n"] * 65
    assert cohen_kappa(expanded_1, expanded_2) == pytest.approx(0.625, abs=1e-6)
    with pytest.raises(DegenerateMarginals):
        cohen_kappa(["a", "a"], ["a", "a"])
    with pytest.raises(EmptySample):
        cohen_kappa([], [])


@settings(max_examples=50)
@given(st.lists(st.sampled_from("abc"), min_size=2, max_size=40), st.lists(st.sampled_from("abc"), min_size=40, max_size=40))
def test_kappa_symmetric_and_bounded(a, b):
    b = b[: len(a)]
    try:
        k = cohen_kappa(a, b)
    except DegenerateMarginals:
        return
    assert k == pytest.approx(cohen_kappa(b, a))
    assert -1 - 1e-9 <= k <= 1 + 1e-9


def test_outcome_matrix_accuracy_treats_referential_alike():
    m = outcome_matrix(["nominal", "clause", "cleft"], ["referential", "referential", "extraposition"], None)
    assert m.tolist() == [[1, 0, 0], [1, 0, 0], [0, 1, 0]]
    pleo = outcome_matrix(["cleft", "nominal", "weather_time"], ["extraposition", "cleft", "referential"], ALL_PLEONASTIC)
    assert pleo.sum(axis=0).tolist() == [1, 1, 1]


def test_gold_io_and_align(tmp_path):
    f = tmp_path / "gold.tsv"
    f.write_text("s1\t0\textraposition\n# c\ns2\t3\tnominal\n")
    gold = read_gold(f)
    assert gold == [GoldAnnotation("s1", 0, "extraposition"), GoldAnnotation("s2", 3, "nominal")]
    recs = [{"sentence_id": "s2", "token_index": 3, "label": "referential"},
            {"sentence_id": "s1", "token_index": 0, "label": "extraposition"}]
    assert align(gold, recs) == ["extraposition", "referential"]
    with pytest.raises(MisalignedOutputs):
        align(gold, recs[:1])
    f.write_text("s1\t0\textraposition\ns1\t0\tnominal\n")
    with pytest.raises(ValueError, match="duplicate"):
        read_gold(f)
    with pytest.raises(ValueError):
        GoldAnnotation("s", 0, "pleonastic")


def test_reports():
    lines = category_report(GOLD, GOLD, B=99)
    assert len(lines) == 6
    assert all("100.00" in line and "adjusted-wald" in line for line in lines[1:])
    cmp = comparison_report(GOLD, SYS_A, SYS_A, shuffles=99)
    assert all(line.endswith("p = 1.000") for line in cmp)
