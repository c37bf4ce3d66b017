"""Write the synthetic mini-treebank and its gold labels from fixed templates."""

import argparse
import random
from pathlib import Path

from pleonastic.tree import parse_bracketed

ADJ = ["easy", "hard", "difficult", "important", "possible", "necessary", "wise", "dangerous"]
VERBS = [("read", "read"), ("fix", "fixed"), ("sell", "sold"), ("find", "found"), ("build", "built"),
         ("test", "tested"), ("ship", "shipped"), ("price", "priced")]
NOUNS = ["report", "machine", "contract", "plan", "bridge", "engine", "market", "budget"]
NAMES = ["Smith", "Jones", "Brown", "Miller"]


def extrap_adj_inf(r):
    a, (v, _), n = r.choice(ADJ), r.choice(VERBS), r.choice(NOUNS)
    return (f"(S (NP-SBJ (PRP It)) (VP (VBZ is) (ADJP-PRD (JJ {a}) (S (NP-SBJ (-NONE- *)) "
            f"(VP (TO to) (VP (VB {v}) (NP (DT the) (NN {n}))))))) (. .))", "extraposition")


def extrap_that(r):
    a = r.choice(["clear", "obvious", "likely", "possible"])
    (_, vd), n1, n2 = r.choice(VERBS), r.choice(NOUNS), r.choice(NOUNS)
    return (f"(S (NP-SBJ (PRP It)) (VP (VBZ is) (ADJP-PRD (JJ {a})) (SBAR (IN that) (S (NP-SBJ (DT the) (NN {n1})) "
            f"(VP (VBD {vd}) (NP (DT the) (NN {n2})))))) (. .))", "extraposition")


def extrap_helps(r):
    (v, _), n = r.choice(VERBS), r.choice(NOUNS)
    return (f"(S (NP-SBJ (PRP It)) (VP (VBZ helps) (S (NP-SBJ (-NONE- *)) (VP (TO to) (VP (VB {v}) "
            f"(NP (DT the) (NN {n})))))) (. .))", "extraposition")


def extrap_object(r):
    a = r.choice(["clear", "obvious"])
    (_, vd), n1, n2 = r.choice(VERBS), r.choice(NOUNS), r.choice(NOUNS)
    return (f"(S (NP-SBJ (PRP They)) (VP (VBD made) (S (NP-SBJ (PRP it)) (ADJP-PRD (JJ {a})) (SBAR (IN that) "
            f"(S (NP-SBJ (DT the) (NN {n1})) (VP (VBD {vd}) (NP (DT the) (NN {n2}))))))) (. .))", "extraposition")


def referential_subject(r):
    (_, vd), n1, n2 = r.choice(VERBS), r.choice(NOUNS), r.choice(NOUNS)
    return (f"(S (NP-SBJ (DT The) (NN {n1})) (VP (VBD said) (SBAR (-NONE- 0) (S (NP-SBJ (PRP it)) "
            f"(VP (VBD {vd}) (NP (DT the) (NN {n2})))))) (. .))", "nominal")


def referential_wants(r):
    (v, _), n = r.choice(VERBS), r.choice(NOUNS)
    return (f"(S (NP-SBJ-1 (PRP It)) (VP (VBZ wants) (S (NP-SBJ (-NONE- *-1)) (VP (TO to) (VP (VB {v}) "
            f"(NP (DT the) (NN {n})))))) (. .))", "nominal")


def referential_object(r):
    (_, vd) = r.choice(VERBS)
    return f"(S (NP-SBJ (PRP She)) (VP (VBD {vd}) (NP (PRP it)) (NP-TMP (NN yesterday))) (. .))", "nominal"


def referential_copula(r):
    a = r.choice(["red", "new", "old", "broken"])
    return f"(S (NP-SBJ (PRP It)) (VP (VBZ is) (ADJP-PRD (JJ {a}))) (. .))", "nominal"


def cleft_name(r):
    name, (_, vd), n = r.choice(NAMES), r.choice(VERBS), r.choice(NOUNS)
    return (f"(S (NP-SBJ (PRP It)) (VP (VBD was) (NP-PRD (NNP {name})) (SBAR (WHNP-1 (WP who)) "
            f"(S (NP-SBJ (-NONE- *T*-1)) (VP (VBD {vd}) (NP (DT the) (NN {n})))))) (. .))", "cleft")


def weather(r):
    if r.random() < 0.5:
        w = r.choice(["raining", "snowing"])
        return f"(S (NP-SBJ (PRP It)) (VP (VBD was) (VP (VBG {w}))) (. .))", "weather_time"
    t = r.choice(["morning", "evening", "night"])
    return f"(S (NP-SBJ (PRP It)) (VP (VBD was) (NP-PRD (DT a) (JJ cold) (NN {t}))) (. .))", "weather_time"


TEMPLATES = [extrap_adj_inf, extrap_adj_inf, extrap_that, extrap_helps, extrap_object, referential_subject,
             referential_wants, referential_object, referential_copula, cleft_name, weather]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="data/minibank.mrg")
    ap.add_argument("--gold", default="data/minibank_gold.tsv")
    args = ap.parse_args()
    r = random.Random(args.seed)
    trees, gold = ["# Synthetic mini-treebank (scripts/make_minibank.py)."], []
    for k in range(args.n):
        tree, label = TEMPLATES[k % len(TEMPLATES)](r)
        sid = f"mini:{k:03d}"
        trees.append(f"# id: {sid}")
        trees.append(f"( {tree} )")
        gold.append((sid, tree, label))
    Path(args.out).write_text("\n".join(trees) + "\n", encoding="utf-8")
    lines = []
    for sid, tree, label in gold:
        toks = parse_bracketed(f"( {tree} )")[0].tokens()
        lines.append(f"{sid}\t{[t.lower() for t in toks].index('it')}\t{label}")
    Path(args.gold).write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
