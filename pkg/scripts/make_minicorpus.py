"""Write a seeded synthetic mini-corpus for the local-index backend.

Pleonastic frames (it is easy to ..., what is easy is to ...) are common and
their which/this/who/he substitutes are rare; referential frames get the
opposite profile. Everything else is filler.
"""

import argparse
import random
from pathlib import Path

ADJ = ["easy", "hard", "difficult", "important", "possible", "necessary", "wise", "dangerous",
       "clear", "obvious", "likely"]
VERBS = [("read", "read"), ("fix", "fixed"), ("sell", "sold"), ("find", "found"), ("build", "built"),
         ("test", "tested"), ("ship", "shipped"), ("price", "priced")]
NOUNS = ["report", "machine", "contract", "plan", "bridge", "engine", "market", "budget", "team", "deal"]
COP = ["is", "was", "'s"]
SUBST = ["which", "this", "who", "he"]


def sentences(r: random.Random, scale: int):
    def n():
        return r.choice(NOUNS)

    def v():
        return r.choice(VERBS)

    for _ in range(40 * scale):
        yield f"It {r.choice(COP)} {r.choice(ADJ)} to {v()[0]} the {n()} ."
        yield f"It {r.choice(COP[:2])} {r.choice(ADJ)} that the {n()} {v()[1]} the {n()} ."
    for _ in range(10 * scale):
        yield f"What {r.choice(COP[:2])} {r.choice(ADJ)} {r.choice(COP[:2])} to {v()[0]} the {n()} ."
        yield f"It helps to {v()[0]} the {n()} ."
        yield f"What helps is to {v()[0]} the {n()} ."
        yield f"He wants to {v()[0]} the {n()} ."
        yield f"{r.choice(['Which', 'This', 'Who'])} wants to {v()[0]} the {n()} ."
    for _ in range(2 * scale):
        yield f"It wants to {v()[0]} the {n()} ."
    for _ in range(scale):
        yield f"{r.choice(SUBST).capitalize()} {r.choice(COP[:2])} {r.choice(ADJ)} to {v()[0]} the {n()} ."
    for _ in range(60 * scale):
        yield f"The {n()} {v()[1]} the {n()} after the {n()} ."


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--scale", type=int, default=12)
    ap.add_argument("--out", default="data/minicorpus.txt")
    args = ap.parse_args()
    r = random.Random(args.seed)
    lines = list(sentences(r, args.scale))
    r.shuffle(lines)
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} sentences to {args.out}")


if __name__ == "__main__":
    main()
