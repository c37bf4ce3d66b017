"""Command-line entry points: classify, eval, agree, corpus build/query."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .baseline import PHAConfig, pha_records
from .corpus import Backend, CachingBackend, FixtureMiss, FixtureStore, LocalIndex, NoisyBackend, execute
from .decision import DecisionConstants, PipelineConfig, analyze_reading, classify_dep
from .evalstats import (
    MisalignedOutputs,
    align,
    category_report,
    cohen_kappa,
    comparison_report,
    read_gold,
)
from .filters import FilterFlags
from .querygen import EngineCaps, Query
from .tree import MalformedTree, find_it_instances, generate_readings, parse_bracketed, read_treebank, to_dependency

log = logging.getLogger("pleonastic")

ENV_PREFIX = "PLEONASTIC_"
# option name -> (type, default); flags > env > config file > defaults
SETTINGS: dict[str, tuple[type, Any]] = {
    "backend": (str, None),
    "nmin": (int, 10),
    "rexp": (float, 0.15),
    "rscarce": (float, 1000.0),
    "rzero": (float, 100.0),
    "filters": (str, "all"),
    "pattern3": (bool, False),
    "seed": (int, 0),
    "workers": (int, 1),
    "bootstrap": (int, 9999),
    "shuffles": (int, 9999),
    "cache": (str, None),
    "noise": (float, 0.0),
}


class ConfigError(ValueError):
    pass


def _coerce(name: str, raw: Any) -> Any:
    kind = SETTINGS[name][0]
    if raw is None or isinstance(raw, kind):
        return raw
    if kind is bool:
        return str(raw).strip().lower() in ("1", "true", "yes", "on")
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {raw!r}") from exc


def read_config_file(path: str | Path) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_").lower()
        if not sep or key not in SETTINGS:
            raise ConfigError(f"{path}:{lineno}: unknown setting {key!r}")
        out[key] = value.strip()
    return out


def resolve(args: argparse.Namespace, env: dict[str, str] | None = None) -> dict[str, Any]:
    """Merge settings with precedence flags > environment > config file > defaults."""
    env = dict(os.environ) if env is None else env
    cfg_path = getattr(args, "config", None) or env.get(ENV_PREFIX + "CONFIG")
    from_file = read_config_file(cfg_path) if cfg_path else {}
    out = {}
    for name, (_, default) in SETTINGS.items():
        flag = getattr(args, name, None)
        if flag is not None and flag is not False:
            out[name] = _coerce(name, flag)
        elif ENV_PREFIX + name.upper() in env:
            out[name] = _coerce(name, env[ENV_PREFIX + name.upper()])
        elif name in from_file:
            out[name] = _coerce(name, from_file[name])
        else:
            out[name] = default
    return out


@dataclass
class RunConfig:
    inputs: list[Path]
    backend: str | None
    constants: DecisionConstants
    flags: FilterFlags
    pattern3: bool = False
    seed: int = 0
    workers: int = 1
    out: str = "-"
    cache: str | None = None
    noise: float = 0.0
    system: str = "main"
    extra: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace, env: dict[str, str] | None = None) -> "RunConfig":
        s = resolve(args, env)
        try:
            constants = DecisionConstants(s["nmin"], s["rexp"], s["rscarce"], s["rzero"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        flags = FilterFlags.from_file(args.filters_file) if getattr(args, "filters_file", None) \
            else FilterFlags.from_list(s["filters"])
        return cls([Path(p) for p in args.input], s["backend"], constants, flags, s["pattern3"], s["seed"],
                   max(1, s["workers"]), args.out, s["cache"], s["noise"], args.system)


def open_backend(spec: str, cache: str | None = None, noise: float = 0.0, seed: int = 0) -> Backend:
    """Resolve ``local-index:<path>`` or ``fixture:<path>[,strict]``."""
    kind, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise ConfigError(f"backend must be local-index:<path> or fixture:<path>[,strict], got {spec!r}")
    backend: Backend
    if kind == "fixture":
        path, _, opt = rest.partition(",")
        if opt not in ("", "strict"):
            raise ConfigError(f"unknown fixture option {opt!r}")
        if not Path(path).exists():
            raise ConfigError(f"fixture file {path} does not exist")
        backend = FixtureStore.load(path, strict=opt == "strict")
    elif kind == "local-index":
        path = Path(rest)
        if path.suffix == ".gz":
            backend = LocalIndex.load(path)
        elif path.exists():
            backend = LocalIndex.from_file(path)
        else:
            raise ConfigError(f"corpus file {path} does not exist")
        if cache != "off":
            backend = CachingBackend(backend, cache or str(path) + ".cache.tsv")
    else:
        raise ConfigError(f"unknown backend kind {kind!r}")
    if noise > 0:
        backend = NoisyBackend(backend, noise, seed)
    return backend


class LoggingBackend:
    """Logs each issued query with its purpose tag."""

    def __init__(self, inner: Backend):
        self.inner = inner
        self.caps = inner.caps
        self.name = inner.name

    def count(self, query: Query):
        hit = self.inner.count(query)
        log.debug("%-20s %-8d %s", query.purpose, hit.count, query.serialize())
        return hit

    def snippets(self, query: Query, k: int) -> list[str]:
        return self.inner.snippets(query, k)


def _emit(records: Sequence[dict], out: str) -> None:
    text = "".join(json.dumps(r, sort_keys=True, ensure_ascii=False) + "\n" for r in records)
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def classify_records(cfg: RunConfig) -> list[dict]:
    sentences = []
    for path in cfg.inputs:
        sentences.extend(read_treebank(path))
    if cfg.system == "pha":
        pha = PHAConfig.load()
        return [r for sid, tree in sentences for r in pha_records(sid, tree.tokens(), pha)]
    if not cfg.backend:
        raise ConfigError("no backend given; use --backend or PLEONASTIC_BACKEND")
    backend = open_backend(cfg.backend, cfg.cache, cfg.noise, cfg.seed)
    if log.isEnabledFor(logging.DEBUG):
        backend = LoggingBackend(backend)
    pcfg = PipelineConfig(constants=cfg.constants, flags=cfg.flags, pattern3=cfg.pattern3)

    def one(item) -> list[dict]:
        sid, tree = item
        return [v.to_record() for v in classify_dep(sid, to_dependency(tree), backend, pcfg)]

    # map keeps input order whatever the worker count
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            chunks = list(pool.map(one, sentences))
    else:
        chunks = [one(s) for s in sentences]
    return [r for chunk in chunks for r in chunk]


def cmd_classify(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    records = classify_records(cfg)
    _emit(records, cfg.out)
    log.info("%d records written", len(records))
    return 0


def _read_predictions(path: str) -> list[dict]:
    out = []
    for line in Path(path).read_text("utf-8").splitlines():
        if line.strip():
            out.append(json.loads(line))
    return out


def cmd_eval(args: argparse.Namespace) -> int:
    s = resolve(args)
    gold = read_gold(args.gold)
    gold_labels = [g.label for g in gold]
    preds = [align(gold, _read_predictions(p)) for p in args.pred]
    lines = []
    for path, pred in zip(args.pred, preds):
        lines.append(f"# {path}")
        lines.extend(category_report(gold_labels, pred, s["bootstrap"], s["seed"], s["workers"]))
    if len(preds) == 2:
        lines.append(f"# significance: {args.pred[0]} vs {args.pred[1]}")
        lines.extend(comparison_report(gold_labels, preds[0], preds[1], s["shuffles"], s["seed"], s["workers"]))
    _emit_text(lines, args.out)
    return 0


def cmd_agree(args: argparse.Namespace) -> int:
    a, b = read_gold(args.first), read_gold(args.second)
    if [x.key for x in a] != [x.key for x in b]:
        raise MisalignedOutputs("annotation files cover different instances")
    _emit_text([f"kappa {cohen_kappa([x.label for x in a], [x.label for x in b]):.4f} n={len(a)}"], args.out)
    return 0


def _emit_text(lines: list[str], out: str) -> None:
    text = "\n".join(lines) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_corpus_build(args: argparse.Namespace) -> int:
    if not Path(args.corpus).exists():
        raise FileNotFoundError(f"corpus file {args.corpus} does not exist")
    index = LocalIndex.from_file(args.corpus)
    index.save(args.index)
    print(f"indexed {len(index)} sentences into {args.index}")
    return 0


def _dump_bundle(args: argparse.Namespace) -> int:
    target = args.dump_bundle
    if target.lstrip().startswith("("):
        trees = [("cli", t) for t in parse_bracketed(target)]
    else:
        if not args.input:
            raise ConfigError("--dump-bundle with a sentence id needs --input")
        trees = [(sid, t) for path in args.input for sid, t in read_treebank(path) if sid == target]
        if not trees:
            raise ConfigError(f"sentence {target!r} not found in {', '.join(args.input)}")
    s = resolve(args)
    pcfg = PipelineConfig(flags=FilterFlags.from_list(s["filters"]), pattern3=s["pattern3"])
    caps = EngineCaps(not args.no_alternation)
    for sid, tree in trees:
        dep = to_dependency(tree)
        for inst in find_it_instances(dep, sid):
            for k, reading in enumerate(generate_readings(inst, dep)):
                result, bundle = analyze_reading(reading, None, pcfg, caps)
                print(f"[{sid}] it@{inst.token_index} reading {k}: {result.verdict.kind.value}")
                for q in bundle.queries if bundle else ():
                    print(f"  {q.purpose:<20} {q.serialize()}")
    return 0


def cmd_corpus_query(args: argparse.Namespace) -> int:
    if args.dump_bundle:
        return _dump_bundle(args)
    if not args.query:
        raise ConfigError("give a query string or --dump-bundle")
    index = LocalIndex.load(args.index)
    hit = execute(index, Query.parse(args.query))
    print(hit.count)
    for s in hit.snippets[: args.k]:
        print(f"  {s}")
    return 0


def _add_settings(p: argparse.ArgumentParser, names: Sequence[str]) -> None:
    helps = {
        "backend": "local-index:<corpus.txt|index.gz> or fixture:<file.tsv>[,strict]",
        "nmin": "N_min (default 10)", "rexp": "R_exp (default 0.15)", "rscarce": "R_scarce (default 1000)",
        "rzero": "R_zero (default 100)", "filters": "optional filters: all | none | comma list of "
                                                   "perfect,multiple_vp,np_relative,modal",
        "seed": "RNG seed (default 0)", "workers": "worker threads (default 1)",
        "bootstrap": "bootstrap replicates B (default 9999)", "shuffles": "randomization shuffles R (default 9999)",
        "cache": "query cache file for local-index backends, or 'off'", "noise": "log-normal count jitter sigma",
    }
    for name in names:
        if SETTINGS[name][0] is bool:
            p.add_argument(f"--{name}", action="store_true", default=None)
        else:
            p.add_argument(f"--{name}", type=str, default=None, help=helps.get(name))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pleonastic", description="Detect pleonastic it in parsed sentences.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv log every query")
    parser.add_argument("--config", help="key=value settings file (also PLEONASTIC_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify every it in bracketed parses")
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--system", choices=("main", "pha"), default="main")
    p.add_argument("--filters-file", help="key=value filter flag file")
    _add_settings(p, ["backend", "nmin", "rexp", "rscarce", "rzero", "filters", "pattern3", "seed", "workers",
                      "cache", "noise"])
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", help="score predictions against gold annotations")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", nargs="+", required=True)
    p.add_argument("--out", default="-")
    _add_settings(p, ["bootstrap", "shuffles", "seed", "workers"])
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("agree", help="Cohen's kappa between two annotation files")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_agree)

    p = sub.add_parser("corpus", help="build or query a local phrase index")
    csub = p.add_subparsers(dest="corpus_command", required=True)
    b = csub.add_parser("build")
    b.add_argument("--corpus", required=True, help="one tokenized sentence per line")
    b.add_argument("--index", required=True)
    b.set_defaults(func=cmd_corpus_build)
    q = csub.add_parser("query")
    q.add_argument("query", nargs="?")
    q.add_argument("--index", default="corpus.idx.gz")
    q.add_argument("-k", type=int, default=10, help="snippets to print")
    q.add_argument("--dump-bundle", metavar="PARSE_OR_ID", help="print generated queries without running them")
    q.add_argument("--input", nargs="*", help="treebank files for --dump-bundle ids")
    q.add_argument("--no-alternation", action="store_true", help="generate queries for an engine without OR")
    _add_settings(q, ["filters", "pattern3"])
    q.set_defaults(func=cmd_corpus_query)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except FixtureMiss as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, MisalignedOutputs, MalformedTree, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
