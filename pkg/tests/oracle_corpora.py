"""Random small corpora and queries for index-vs-scan comparisons."""

import random

from pleonastic.querygen import Query

VOCAB = ["it", "is", "was", "'s", "easy", "hard", "to", "read", "the", "a", "he", "this", "which", "that", "what"]
PUNCT = [",", ".", "--", ":"]


def random_corpus(rng: random.Random, n_sent: int) -> list[str]:
    out = []
    for _ in range(n_sent):
        toks = [rng.choice(VOCAB) if rng.random() > 0.1 else rng.choice(PUNCT) for _ in range(rng.randint(0, 12))]
        if toks and rng.random() < 0.3:
            toks[0] = toks[0].capitalize()
        out.append(" ".join(toks))
    return out


def random_query(rng: random.Random) -> Query:
    slots = []
    for _ in range(rng.randint(2, 4)):
        slots.append(tuple(rng.sample(VOCAB, rng.randint(1, 3))))
    return Query(tuple(slots))
