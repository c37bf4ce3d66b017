"""Classify the two worked-example sentences against the recorded ten-query fixture."""

import time
from pathlib import Path

from pleonastic.corpus import FixtureStore
from pleonastic.decision import PipelineConfig, classify_dep
from pleonastic.tree import read_treebank, to_dependency

DATA = Path(__file__).resolve().parent.parent / "data"


def main() -> None:
    t0 = time.perf_counter()
    backend = FixtureStore.load(DATA / "case_study_fixture.tsv")
    cfg = PipelineConfig()
    for sid, tree in read_treebank(DATA / "case_study.mrg"):
        for verdict in classify_dep(sid, to_dependency(tree), backend, cfg):
            print(f"[{sid}] it@{verdict.token_index}: {verdict.label.value}")
            for k, rr in enumerate(verdict.readings):
                ev = rr.evidence
                if ev is None:
                    print(f"  reading {k}: {rr.verdict.kind.value}")
                    continue
                print(f"  reading {k}: W={ev.W:g} r={ev.r:.4f} r'={ev.r_step:.4f} R={ev.R:.4f} "
                      f"S={ev.s} E={'YES' if ev.E else 'NO'}")
                for purpose, q in ev.queries.items():
                    print(f"    {purpose:<18} {q}")
    print(f"elapsed {time.perf_counter() - t0:.3f}s")


if __name__ == "__main__":
    main()
