"""Smoke run: classify the mini-treebank against the mini-corpus and score both systems."""

import argparse
import subprocess
import sys
import tempfile
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*args: str) -> None:
    subprocess.run([sys.executable, "-m", "pleonastic.cli", *args], check=True)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bootstrap", default="999")
    ap.add_argument("--shuffles", default="999")
    ap.add_argument("--seed", default="0")
    args = ap.parse_args()
    with tempfile.TemporaryDirectory() as tmp:
        main_out, pha_out = Path(tmp) / "main.jsonl", Path(tmp) / "pha.jsonl"
        run("classify", "--input", str(DATA / "minibank.mrg"), "--backend", f"local-index:{DATA / 'minicorpus.txt'}",
            "--cache", "off", "--out", str(main_out))
        run("classify", "--system", "pha", "--input", str(DATA / "minibank.mrg"), "--out", str(pha_out))
        run("eval", "--gold", str(DATA / "minibank_gold.tsv"), "--pred", str(main_out), str(pha_out),
            "--bootstrap", args.bootstrap, "--shuffles", args.shuffles, "--seed", args.seed)


if __name__ == "__main__":
    main()
