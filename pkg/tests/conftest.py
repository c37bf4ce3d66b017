from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
TEST_DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def case_backend():
    from pleonastic.corpus import FixtureStore

    return FixtureStore.load(DATA / "case_study_fixture.tsv")


@pytest.fixture(scope="session")
def case_trees():
    from pleonastic.tree import read_treebank, to_dependency

    return {sid: to_dependency(t) for sid, t in read_treebank(DATA / "case_study.mrg")}


@pytest.fixture(scope="session")
def example_trees():
    from pleonastic.tree import read_treebank, to_dependency

    return {sid: to_dependency(t) for sid, t in read_treebank(DATA / "example_sentences.mrg")}
