"""Command-line interface.

Subcommands: ``stats``, ``expand``, ``induce``, ``embed-synsets``, ``merge``,
``eval`` and ``pipeline``.  Data goes to files (or stdout where noted);
progress and warnings go to stderr.

Exit codes: 0 success, 1 usage error, 2 data error, 3 partial grid failure.
"""

import argparse
import io
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from itertools import product

from . import __version__
from ._backend import BACKEND
from .embed import SynsetVectorIndex, load_embeddings, mutual_pairs, write_embeddings
from .errors import DataError, SynsetKitError
from .evaluate import paired_prf
from .expand import ExpansionParams, expand_graph
from .graph import graph_stats, load_edge_list, write_edge_list
from .io import atomic_write_text
from .merge import MergeParams, apply_merges, plan_merges
from .watset import GLOBAL_ALGORITHMS, LOCAL_ALGORITHMS, format_synsets, induce_synsets, read_synsets

log = logging.getLogger("synsetkit")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3

# default sweep grids for the pipeline
DEFAULT_MIN_PATHS = list(range(1, 11))
DEFAULT_LENGTHS = [2, 3]
DEFAULT_MAX_MERGES = [1, 2, 3, 5, 10]


class UsageError(SynsetKitError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def int_list(text):
    try:
        values = [int(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


# -- pipeline configuration -------------------------------------------------


@dataclass
class PipelineConfig:
    graph: str = None
    vectors: str = None
    gold: str = None
    expand: bool = False
    merge: bool = False
    min_paths: list = field(default_factory=lambda: list(DEFAULT_MIN_PATHS))
    min_len: list = field(default_factory=lambda: list(DEFAULT_LENGTHS))
    max_len: list = field(default_factory=lambda: list(DEFAULT_LENGTHS))
    max_merges: list = field(default_factory=lambda: list(DEFAULT_MAX_MERGES))
    knn: int = 10
    local: str = "cw"
    global_: str = "cw"
    seed: int = 0
    jobs: int = 1
    out_dir: str = "out"

    def validate(self):
        if not self.graph:
            raise UsageError("pipeline needs an input graph")
        if self.merge and not self.vectors:
            raise UsageError("merge stage requires vectors")
        if self.expand and not (self.min_paths and self.min_len and self.max_len):
            raise UsageError("expansion grid is empty")
        if self.merge and not self.max_merges:
            raise UsageError("merge grid is empty")
        if self.local not in LOCAL_ALGORITHMS:
            raise UsageError(f"local must be one of {LOCAL_ALGORITHMS}")
        if self.global_ not in GLOBAL_ALGORITHMS:
            raise UsageError(f"global must be one of {GLOBAL_ALGORITHMS}")
        if self.expand and not self.expansion_grid():
            raise UsageError("expansion grid has no point with min_len <= max_len")
        return self

    def expansion_grid(self):
        if not self.expand:
            return [None]
        return [ExpansionParams(k, i, j)
                for i, j, k in product(self.min_len, self.max_len, self.min_paths) if i <= j]

    def merge_grid(self):
        if not self.merge:
            return [None]
        return [MergeParams(t, self.knn) for t in self.max_merges]


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}
_LIST_KEYS = {"min_paths", "min_len", "max_len", "max_merges"}
_INT_KEYS = {"knn", "seed", "jobs"}
_BOOL_KEYS = {"expand", "merge"}


def parse_config(text, path="<config>"):
    """Parse flat ``key = value`` lines (``#`` comments; lists comma-separated)."""
    known = {f.name for f in fields(PipelineConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        if key == "global":
            key = "global_"
        if key not in known:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            if key in _LIST_KEYS:
                values[key] = int_list(value)
            elif key in _INT_KEYS:
                values[key] = int(value)
            elif key in _BOOL_KEYS:
                values[key] = _BOOL[value.lower()]
            else:
                values[key] = value
        except (ValueError, KeyError, argparse.ArgumentTypeError):
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return PipelineConfig(**values)


# -- pipeline execution -----------------------------------------------------


def point_tag(ep, mp):
    parts = [f"expand-{ep.tag}" if ep else "original"]
    if mp:
        parts.append(f"merge-{mp.tag}")
    return ".".join(parts)


SWEEP_HEADER = "tag\tk\ti\tj\tt\tknn\tprecision\trecall\tf1\ttp\tpp\tpg\tlexicon\tstatus\n"


def _sweep_row(ep, mp, report=None, status="ok"):
    cells = [point_tag(ep, mp)]
    cells += [str(ep.k), str(ep.i), str(ep.j)] if ep else ["-", "-", "-"]
    cells += [str(mp.t), str(mp.k)] if mp else ["-", "-"]
    cells += report.line().split("\t") if report else ["-"] * 7
    cells.append(status)
    return "\t".join(cells) + "\n"


def _run_group(args):
    """Run one expansion setting and every merge setting on top of it."""
    cfg, ep, merge_grid, graph, table, gold, jobs = args
    rows = []
    out = cfg.out_dir
    try:
        g = graph
        if ep is not None:
            # hand the expanded graph on through its file, exactly as the
            # expand and induce subcommands would
            expanded, report = expand_graph(graph, ep)
            tag = point_tag(ep, None)
            atomic_write_text(os.path.join(out, f"expansion.{tag}.tsv"), report.format())
            buf = io.StringIO()
            write_edge_list(expanded, buf)
            path = os.path.join(out, f"graph.{tag}.tsv")
            atomic_write_text(path, buf.getvalue())
            g = load_edge_list(path)
        synsets = induce_synsets(g, cfg.local, cfg.global_, seed=cfg.seed, jobs=jobs)
        index = pairs_cache = None
        if merge_grid[0] is not None:
            index = SynsetVectorIndex.build(synsets, table)
    except Exception as exc:  # recorded per grid point; the sweep goes on
        log.error("grid point %s failed: %s", point_tag(ep, None), exc)
        return [_sweep_row(ep, mp, status=f"error: {exc}") for mp in merge_grid]
    for mp in merge_grid:
        tag = point_tag(ep, mp)
        try:
            result = synsets
            if mp is not None:
                if pairs_cache is None:
                    pairs_cache = mutual_pairs(index, mp.k)
                plan = plan_merges(synsets, index, mp, pairs=pairs_cache)
                result = apply_merges(synsets, plan)
                atomic_write_text(os.path.join(out, f"audit.{tag}.tsv"), plan.format_audit())
            atomic_write_text(os.path.join(out, f"synsets.{tag}.tsv"), format_synsets(result))
            report = None
            if gold is not None:
                report = paired_prf([set(s.words) for s in result], gold)
            rows.append(_sweep_row(ep, mp, report))
        except Exception as exc:
            log.error("grid point %s failed: %s", tag, exc)
            rows.append(_sweep_row(ep, mp, status=f"error: {exc}"))
    return rows


def run_pipeline(cfg):
    """Run every grid point; returns ``(rows, n_failed)``.

    Writes ``synsets.<tag>.tsv`` per grid point and a ``sweep.tsv`` summary to
    ``cfg.out_dir``, plus ``graph.<tag>.tsv`` and ``expansion.<tag>.tsv`` per
    expansion setting and ``audit.<tag>.tsv`` per merge setting.
    """
    cfg.validate()
    os.makedirs(cfg.out_dir, exist_ok=True)
    graph = load_edge_list(cfg.graph)
    table = load_embeddings(cfg.vectors) if cfg.merge else None
    gold = [set(s.words) for s in read_synsets(cfg.gold)] if cfg.gold else None
    egrid = cfg.expansion_grid()
    mgrid = cfg.merge_grid()
    group_jobs = min(cfg.jobs, len(egrid))
    inner_jobs = cfg.jobs if group_jobs <= 1 else 1
    tasks = [(cfg, ep, mgrid, graph, table, gold, inner_jobs) for ep in egrid]
    if group_jobs > 1:
        with ProcessPoolExecutor(max_workers=group_jobs) as ex:
            results = list(ex.map(_run_group, tasks))
    else:
        results = [_run_group(t) for t in tasks]
    rows = [r for group in results for r in group]
    atomic_write_text(os.path.join(cfg.out_dir, "sweep.tsv"), SWEEP_HEADER + "".join(rows))
    failed = sum(1 for r in rows if not r.rstrip("\n").endswith("\tok"))
    return rows, failed


# -- subcommands ------------------------------------------------------------


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


def cmd_stats(args):
    _write(args.out, graph_stats(load_edge_list(args.input)).format())
    return EXIT_OK


def cmd_expand(args):
    g = load_edge_list(args.input)
    grid = [ExpansionParams(k, i, j)
            for i, j, k in product(args.min_len, args.max_len, args.min_paths) if i <= j]
    if not grid:
        raise UsageError("no (min-len <= max-len) combination")
    multi = len(grid) > 1
    for params in grid:
        out, rep = args.out, args.report
        if multi:
            out = _tagged(out, params.tag)
            rep = _tagged(rep, params.tag) if rep else None
        expanded, report = expand_graph(g, params, inserted_weight=args.inserted_weight)
        buf = io.StringIO()
        write_edge_list(expanded, buf)
        _write(out, buf.getvalue())
        if rep:
            _write(rep, report.format())
        log.warning("%s: added %d edges (%d candidates)", params.tag,
                    report.edges_added, report.candidates_considered)
    return EXIT_OK


def _tagged(path, tag):
    if path in (None, "-"):
        return path
    stem, ext = os.path.splitext(path)
    return f"{stem}.{tag}{ext}"


def cmd_induce(args):
    g = load_edge_list(args.input)
    synsets = induce_synsets(g, args.local, args.global_, seed=args.seed, jobs=args.jobs)
    _write(args.out, format_synsets(synsets, plain=args.plain))
    log.warning("induced %d synsets from %d words", len(synsets), len(g))
    return EXIT_OK


def cmd_embed_synsets(args):
    synsets = read_synsets(args.synsets)
    index = SynsetVectorIndex.build(synsets, load_embeddings(args.vectors))
    buf = io.StringIO()
    write_embeddings([str(i) for i in index.ids.tolist()], index.matrix, buf)
    _write(args.out, buf.getvalue())
    if index.skipped:
        log.warning("%d synset(s) without in-vocabulary words skipped", len(index.skipped))
    return EXIT_OK


def cmd_merge(args):
    synsets = read_synsets(args.synsets)
    table = load_embeddings(args.vectors)
    index = SynsetVectorIndex.build(synsets, table)
    pairs = None
    for t in args.max_merges:
        params = MergeParams(t, args.knn)
        if pairs is None:
            pairs = mutual_pairs(index, params.k)
        plan = plan_merges(synsets, index, params, pairs=pairs)
        merged = apply_merges(synsets, plan)
        multi = len(args.max_merges) > 1
        out = _tagged(args.out, params.tag) if multi else args.out
        _write(out, format_synsets(merged, plain=args.plain))
        if args.audit:
            _write(_tagged(args.audit, params.tag) if multi else args.audit, plan.format_audit())
        log.warning("%s: %d groups, %d -> %d synsets", params.tag, len(plan),
                    len(synsets), len(merged))
    return EXIT_OK


def cmd_eval(args):
    predicted = [set(s.words) for s in read_synsets(args.synsets)]
    gold = [set(s.words) for s in read_synsets(args.gold)]
    report = paired_prf(predicted, gold)
    sys.stderr.write(report.text())
    _write(args.out, report.line() + "\n")
    return EXIT_OK


_CONFIG_FLAGS = ("graph", "vectors", "gold", "min_paths", "min_len", "max_len",
                 "max_merges", "knn", "local", "global_", "seed", "jobs", "out_dir")


def cmd_pipeline(args):
    cfg = PipelineConfig()
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read(), args.config)
    overrides = {k: getattr(args, k) for k in _CONFIG_FLAGS if getattr(args, k, None) is not None}
    if args.expand is not None:
        overrides["expand"] = args.expand
    if args.merge is not None:
        overrides["merge"] = args.merge
    cfg = replace(cfg, **overrides)
    rows, failed = run_pipeline(cfg)
    log.warning("pipeline: %d grid point(s), %d failed", len(rows), failed)
    return EXIT_PARTIAL if failed else EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("--local", choices=LOCAL_ALGORITHMS, default=None)
    common.add_argument("--global", dest="global_", choices=GLOBAL_ALGORITHMS, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="synsetkit", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version",
                   version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("stats", parents=[common], help="graph summary")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("expand", parents=[common], help="transitivity expansion")
    s.add_argument("--min-paths", type=int_list, default=[5],
                   help="k, minimum number of supporting paths (list sweeps)")
    s.add_argument("--min-len", type=int_list, default=[2])
    s.add_argument("--max-len", type=int_list, default=[2])
    s.add_argument("--inserted-weight", type=float, default=1.0)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--report")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("induce", parents=[common], help="Watset synset induction")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--plain", action="store_true", help="drop #sense suffixes")
    s.set_defaults(func=cmd_induce)

    s = sub.add_parser("embed-synsets", parents=[common], help="synset vectors")
    s.add_argument("--synsets", required=True)
    s.add_argument("--vectors", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_embed_synsets)

    s = sub.add_parser("merge", parents=[common], help="mutual-kNN synset merging")
    s.add_argument("--max-merges", type=int_list, default=[1])
    s.add_argument("--knn", type=int, default=10)
    s.add_argument("--synsets", required=True)
    s.add_argument("--vectors", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--audit")
    s.add_argument("--plain", action="store_true")
    s.set_defaults(func=cmd_merge)

    s = sub.add_parser("eval", parents=[common], help="paired precision/recall/F")
    s.add_argument("--synsets", required=True)
    s.add_argument("--gold", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("pipeline", parents=[common], help="run a configuration grid")
    s.add_argument("--config")
    s.add_argument("--graph")
    s.add_argument("--vectors")
    s.add_argument("--gold")
    s.add_argument("--expand", action=argparse.BooleanOptionalAction, default=None)
    s.add_argument("--merge", action=argparse.BooleanOptionalAction, default=None)
    s.add_argument("--min-paths", type=int_list)
    s.add_argument("--min-len", type=int_list)
    s.add_argument("--max-len", type=int_list)
    s.add_argument("--max-merges", type=int_list)
    s.add_argument("--knn", type=int)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command != "pipeline":
        args.seed = 0 if args.seed is None else args.seed
        args.jobs = 1 if args.jobs is None else args.jobs
        args.local = args.local or "cw"
        args.global_ = args.global_ or "cw"
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"synsetkit: error: {exc}\n")
        return EXIT_USAGE
    except (DataError, OSError, UnicodeDecodeError) as exc:
        sys.stderr.write(f"synsetkit: data error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
