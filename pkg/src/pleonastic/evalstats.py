"""Precision/recall/F, bootstrap and adjusted-Wald intervals, randomization tests, kappa."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from statistics import NormalDist
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .decision import PLEONASTIC

GOLD_LABELS = frozenset({"nominal", "clause", "extraposition", "cleft", "weather_time", "idiom", "other"})
ALL_PLEONASTIC = "pleonastic"
BLOCK = 256
Z_ONE_SIDED_95 = NormalDist().inv_cdf(0.95)


class UndefinedMetric(ArithmeticError):
    pass


class EmptySample(ValueError):
    pass


class MisalignedOutputs(ValueError):
    pass


class DegenerateMarginals(ArithmeticError):
    pass


@dataclass(frozen=True)
class GoldAnnotation:
    sentence_id: str
    token_index: int
    label: str

    def __post_init__(self) -> None:
        if self.label not in GOLD_LABELS:
            raise ValueError(f"unknown gold label {self.label!r}; expected one of {sorted(GOLD_LABELS)}")

    @property
    def key(self) -> tuple[str, int]:
        return (self.sentence_id, self.token_index)


def read_gold(path: str | Path) -> list[GoldAnnotation]:
    out: list[GoldAnnotation] = []
    seen: set[tuple[str, int]] = set()
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected sentence_id<TAB>token_index<TAB>label")
        ann = GoldAnnotation(parts[0], int(parts[1]), parts[2].strip())
        if ann.key in seen:
            raise ValueError(f"{path}:{lineno}: duplicate annotation for {ann.key}")
        seen.add(ann.key)
        out.append(ann)
    return out


def _in_category(label: str, category: str | None) -> bool:
    if category == ALL_PLEONASTIC:
        return label in {l.value for l in PLEONASTIC}
    return label == category


def outcome_matrix(gold: Sequence[str], pred: Sequence[str], category: str | None) -> np.ndarray:
    """Per-instance (tp, fp, fn) indicators.

    With category=None each instance is scored for accuracy: tp when the
    labels agree and fp otherwise, so "precision" is plain accuracy.
    """
    if len(gold) != len(pred):
        raise MisalignedOutputs(f"{len(gold)} gold labels vs {len(pred)} predictions")
    rows = np.zeros((len(gold), 3), dtype=np.int64)
    for i, (g, p) in enumerate(zip(gold, pred)):
        if category is None:
            rows[i, 0 if _same(g, p) else 1] = 1
            continue
        ig, ip = _in_category(g, category), _in_category(p, category)
        rows[i] = (ig and ip, ip and not ig, ig and not ip)
    return rows


def _same(g: str, p: str) -> bool:
    pleo = {l.value for l in PLEONASTIC}
    if g in pleo or p in pleo:
        return g == p
    return True  # both referential, whatever the fine-grained gold category


@dataclass(frozen=True)
class ConfusionCounts:
    tp: dict[str, int]
    fp: dict[str, int]
    fn: dict[str, int]
    correct: int
    total: int

    @classmethod
    def from_labels(cls, gold: Sequence[str], pred: Sequence[str],
                    categories: Iterable[str] = ("extraposition", "cleft", "weather_time", ALL_PLEONASTIC)) -> "ConfusionCounts":
        tp, fp, fn = {}, {}, {}
        for c in categories:
            m = outcome_matrix(gold, pred, c).sum(axis=0)
            tp[c], fp[c], fn[c] = int(m[0]), int(m[1]), int(m[2])
        acc = outcome_matrix(gold, pred, None).sum(axis=0)
        return cls(tp, fp, fn, int(acc[0]), len(gold))

    @classmethod
    def single(cls, category: str, tp: int, fp: int, fn: int) -> "ConfusionCounts":
        return cls({category: tp}, {category: fp}, {category: fn}, 0, 0)

    def reference(self, category: str) -> int:
        return self.tp[category] + self.fn[category]

    def identified(self, category: str) -> int:
        return self.tp[category] + self.fp[category]


@dataclass(frozen=True)
class PRF:
    """Percentages; None marks an undefined (n/a) value."""

    precision: float | None
    recall: float | None
    f: float | None

    def format(self) -> str:
        return " ".join("n/a" if v is None else f"{v:.2f}" for v in (self.precision, self.recall, self.f))


def _pct(num: float, den: float) -> float:
    if den == 0:
        raise UndefinedMetric("zero denominator")
    return 100.0 * num / den


def precision(tp: float, fp: float) -> float:
    return _pct(tp, tp + fp)


def recall(tp: float, fn: float) -> float:
    return _pct(tp, tp + fn)


def f_measure(tp: float, fp: float, fn: float) -> float:
    p, r = precision(tp, fp), recall(tp, fn)
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def prf(counts: ConfusionCounts, category: str) -> PRF:
    tp, fp, fn = counts.tp[category], counts.fp[category], counts.fn[category]
    p = r = f = None
    if tp + fp:
        p = precision(tp, fp)
    if tp + fn:
        r = recall(tp, fn)
    if p is not None and r is not None:
        f = 0.0 if p + r == 0 else 2 * p * r / (p + r)
    return PRF(p, r, f)


# --------------------------------------------------------------------------
# intervals


@dataclass(frozen=True)
class IntervalEstimate:
    point: float
    lo: float
    hi: float
    method: str  # "bootstrap-percentile" | "adjusted-wald"

    def format(self) -> str:
        return f"{self.point:.2f} [{self.lo:.2f}-{self.hi:.2f}] ({self.method})"


def adjusted_wald(x: int, n: int, z: float = Z_ONE_SIDED_95) -> IntervalEstimate:
    """Agresti-Coull interval in percent, clipped to [0, 100]."""
    if n < 1 or not 0 <= x <= n:
        raise ValueError("need 0 <= x <= n and n >= 1")
    z2 = z * z
    p = (x + z2 / 2) / (n + z2)
    half = z * math.sqrt(p * (1 - p) / (n + z2))
    return IntervalEstimate(100.0 * x / n, 100.0 * max(0.0, p - half), 100.0 * min(1.0, p + half), "adjusted-wald")


def _vec_metric(name: str, tp: np.ndarray, fp: np.ndarray, fn: np.ndarray) -> np.ndarray:
    """Vectorized metric in percent; NaN where undefined."""
    tp, fp, fn = (np.asarray(a, dtype=float) for a in (tp, fp, fn))
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(tp + fp > 0, 100.0 * tp / (tp + fp), np.nan)
        r = np.where(tp + fn > 0, 100.0 * tp / (tp + fn), np.nan)
        if name in ("precision", "P", "accuracy"):
            return p
        if name in ("recall", "R"):
            return r
        if name in ("f", "F"):
            f = np.where(p + r > 0, 2 * p * r / (p + r), 0.0)
            return np.where(np.isnan(p) | np.isnan(r), np.nan, f)
    raise ValueError(f"unknown metric {name!r}")


def _wald_counts(metric: str, tp: int, fp: int, fn: int) -> tuple[int, int]:
    if metric in ("precision", "P", "accuracy"):
        return tp, tp + fp
    if metric in ("recall", "R"):
        return tp, tp + fn
    return 2 * tp, 2 * tp + fp + fn


def _as_outcomes(instances: Sequence[Sequence[int]] | np.ndarray) -> np.ndarray:
    arr = np.asarray(instances, dtype=np.int64)
    if arr.size == 0:
        raise EmptySample("no instances to resample")
    if arr.ndim == 1:  # plain correctness flags
        arr = np.stack([arr, 1 - arr, np.zeros_like(arr)], axis=1)
    return arr


def _blocks(total: int) -> list[tuple[int, int]]:
    return [(b, min(BLOCK, total - b * BLOCK)) for b in range((total + BLOCK - 1) // BLOCK)]


def _run_blocks(fn: Callable[[int, int], np.ndarray], total: int, workers: int) -> np.ndarray:
    blocks = _blocks(total)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda bs: fn(*bs), blocks))
    else:
        parts = [fn(b, size) for b, size in blocks]
    return np.concatenate(parts) if parts else np.empty(0)


def bootstrap_ci(instances: Sequence[Sequence[int]] | np.ndarray, metric: str = "F", B: int = 9999, seed: int = 0,
                 workers: int = 1, z: float = Z_ONE_SIDED_95) -> IntervalEstimate:
    """Percentile bootstrap over per-instance (tp, fp, fn) rows.

    Replicate block k draws from default_rng([seed, k]) so the result does
    not depend on how blocks are spread across workers. Replicates where the
    metric is undefined are dropped.
    """
    if B < 1:
        raise ValueError("B must be >= 1")
    out = _as_outcomes(instances)
    tp, fp, fn = (int(v) for v in out.sum(axis=0))
    point = float(_vec_metric(metric, tp, fp, fn))
    if math.isnan(point):
        raise UndefinedMetric(f"{metric} undefined on this sample")
    if point in (0.0, 100.0):
        x, n = _wald_counts(metric, tp, fp, fn)
        return adjusted_wald(x, n, z)
    n = len(out)

    def block(k: int, size: int) -> np.ndarray:
        rng = np.random.default_rng([seed, k])
        idx = rng.integers(0, n, size=(size, n))
        sums = out[idx].sum(axis=1)
        return _vec_metric(metric, sums[:, 0], sums[:, 1], sums[:, 2])

    reps = _run_blocks(block, B, workers)
    reps = np.sort(reps[~np.isnan(reps)])
    lo, hi = np.percentile(reps, [2.5, 97.5])
    return IntervalEstimate(point, float(lo), float(hi), "bootstrap-percentile")


@dataclass(frozen=True)
class RandomizationResult:
    statistic: str
    observed: float
    sign: str
    p: float
    shuffles: int

    def format(self) -> str:
        name = {"F": "F-measure", "P": "Precision", "R": "Recall", "accuracy": "Accuracy"}.get(self.statistic, self.statistic)
        pv = "< .001" if self.p < 0.001 else f"= {self.p:.3f}"
        return f"{name}^{self.sign} / p {pv}"


def approx_randomization(outputs_a: Sequence[str], outputs_b: Sequence[str], gold: Sequence[str],
                         statistic: str = "F", category: str | None = ALL_PLEONASTIC, shuffles: int = 9999,
                         seed: int = 0, workers: int = 1) -> RandomizationResult:
    """Two-sided paired randomization test with add-one smoothing.

    Each shuffle swaps every instance's A/B output independently with
    probability one half. The sign is + when A scores higher.
    """
    if not (len(outputs_a) == len(outputs_b) == len(gold)):
        raise MisalignedOutputs(f"lengths differ: A={len(outputs_a)} B={len(outputs_b)} gold={len(gold)}")
    if shuffles < 1:
        raise ValueError("shuffles must be >= 1")
    if category is None and statistic != "accuracy":
        statistic = "accuracy"
    ma = outcome_matrix(gold, outputs_a, category)
    mb = outcome_matrix(gold, outputs_b, category)
    sa, sb = ma.sum(axis=0), mb.sum(axis=0)
    va, vb = (float(_vec_metric(statistic, *s)) for s in (sa, sb))
    observed = abs(np.nan_to_num(va) - np.nan_to_num(vb))
    delta = mb - ma
    n = len(gold)

    def block(k: int, size: int) -> np.ndarray:
        rng = np.random.default_rng([seed, k])
        mask = rng.integers(0, 2, size=(size, n))
        a = sa + mask @ delta
        b = sb - mask @ delta
        da = np.nan_to_num(_vec_metric(statistic, a[:, 0], a[:, 1], a[:, 2]))
        db = np.nan_to_num(_vec_metric(statistic, b[:, 0], b[:, 1], b[:, 2]))
        return np.abs(da - db)

    diffs = _run_blocks(block, shuffles, workers)
    hits = int(np.count_nonzero(diffs >= observed - 1e-9))
    sign = "+" if np.nan_to_num(va) >= np.nan_to_num(vb) else "-"
    return RandomizationResult(statistic, float(observed), sign, (hits + 1) / (shuffles + 1), shuffles)


# --------------------------------------------------------------------------
# agreement


def cohen_kappa(ann1: Sequence[Hashable], ann2: Sequence[Hashable]) -> float:
    if len(ann1) != len(ann2):
        raise MisalignedOutputs(f"{len(ann1)} vs {len(ann2)} labels")
    if not ann1:
        raise EmptySample("no annotations")
    n = len(ann1)
    p_o = sum(a == b for a, b in zip(ann1, ann2)) / n
    m1, m2 = Counter(ann1), Counter(ann2)
    p_e = sum(m1[c] * m2[c] for c in m1) / (n * n)
    if math.isclose(p_e, 1.0):
        raise DegenerateMarginals("expected agreement is 1; kappa undefined")
    return (p_o - p_e) / (1 - p_e)


def kappa_from_table(table: Sequence[Sequence[int]]) -> float:
    """Kappa from a square contingency table (rows: annotator 1)."""
    t = np.asarray(table, dtype=float)
    n = t.sum()
    if n == 0:
        raise EmptySample("empty table")
    p_o = np.trace(t) / n
    p_e = float((t.sum(axis=1) * t.sum(axis=0)).sum() / (n * n))
    if math.isclose(p_e, 1.0):
        raise DegenerateMarginals("expected agreement is 1; kappa undefined")
    return float((p_o - p_e) / (1 - p_e))


# --------------------------------------------------------------------------
# reports


REPORT_CATEGORIES = ("extraposition", "cleft", "weather_time", ALL_PLEONASTIC)


def align(gold: Sequence[GoldAnnotation], records: Iterable[dict]) -> list[str]:
    """Predicted labels in gold order; every gold key must have a prediction."""
    by_key = {(str(r["sentence_id"]), int(r["token_index"])): r["label"] for r in records}
    missing = [g.key for g in gold if g.key not in by_key]
    if missing:
        raise MisalignedOutputs(f"{len(missing)} gold instances lack predictions, e.g. {missing[0]}")
    return [by_key[g.key] for g in gold]


def category_report(gold: Sequence[str], pred: Sequence[str], B: int = 9999, seed: int = 0,
                    workers: int = 1) -> list[str]:
    lines = [f"{'category':<15}{'ref':>5}{'ident':>7}{'TP':>5}  {'precision':<46}{'recall':<46}F"]
    counts = ConfusionCounts.from_labels(gold, pred, REPORT_CATEGORIES)
    for c in REPORT_CATEGORIES:
        out = outcome_matrix(gold, pred, c)
        cols = []
        for metric in ("precision", "recall", "F"):
            try:
                cols.append(bootstrap_ci(out, metric, B, seed, workers).format())
            except UndefinedMetric:
                cols.append("n/a")
        lines.append(f"{c:<15}{counts.reference(c):>5}{counts.identified(c):>7}{counts.tp[c]:>5}  "
                     f"{cols[0]:<46}{cols[1]:<46}{cols[2]}")
    acc = outcome_matrix(gold, pred, None)
    lines.append(f"{'accuracy':<15}{counts.total:>5}{'':>7}{counts.correct:>5}  "
                 + bootstrap_ci(acc, "accuracy", B, seed, workers).format())
    return lines


def comparison_report(gold: Sequence[str], pred_a: Sequence[str], pred_b: Sequence[str],
                      shuffles: int = 9999, seed: int = 0, workers: int = 1) -> list[str]:
    """Randomization tests per category; F when both P and R are comparable."""
    lines = []
    for c in REPORT_CATEGORIES:
        ca = ConfusionCounts.from_labels(gold, pred_a, [c])
        cb = ConfusionCounts.from_labels(gold, pred_b, [c])
        pa, pb = prf(ca, c), prf(cb, c)
        if None not in (pa.precision, pa.recall, pb.precision, pb.recall):
            stat = "F"
        elif pa.precision is not None and pb.precision is not None:
            stat = "P"
        elif pa.recall is not None and pb.recall is not None:
            stat = "R"
        else:
            lines.append(f"{c:<15}n/a")
            continue
        res = approx_randomization(pred_a, pred_b, gold, stat, c, shuffles, seed, workers)
        lines.append(f"{c:<15}{res.format()}")
    return lines

