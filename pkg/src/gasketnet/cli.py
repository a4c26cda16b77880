"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or cap error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass

from . import __version__
from . import asymptotics as asy
from .distance import (CSV_HEADER, MAX_ALL_PAIRS_T, SAMPLED_HEADER, all_pairs_summary,
                       bfs_distance, distance_to_root, geodesic_distance, sampled_apl)
from .network import EXPORT_FORMATS, MAX_BUILD_T, CapExceeded, build, export
from .report import EXACT_HEADER, MC_HEADER, exact_row
from .verify import SUITES, run_suite
from .words import ROOT, parse_word

THREADS_ENV = "GASKETNET_THREADS"
REFERENCE_TABLE = (300, 800, 100)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    threads: int = 1
    seed: int = 0
    build_cap: int = MAX_BUILD_T
    all_pairs_cap: int = MAX_ALL_PAIRS_T
    out: str | None = None
    meta: str | None = None


def read_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def resolve_config(args) -> RunConfig:
    """Flags win over the config file; the environment only supplies threads."""
    file_values = read_config_file(args.config) if args.config else {}
    known = {"threads", "seed", "build_cap", "all_pairs_cap", "out", "meta"}
    unknown = set(file_values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(args.command)
    for key in known:
        flag = getattr(args, key, None)
        if flag is not None:
            value = flag
        elif key in file_values:
            value = file_values[key]
        elif key == "threads" and os.environ.get(THREADS_ENV):
            value = os.environ[THREADS_ENV]
        else:
            continue
        if key not in ("out", "meta"):
            try:
                value = int(value)
            except ValueError:
                raise UsageError(f"{key} must be an integer, got {value!r}") from None
        setattr(cfg, key, value)
    if cfg.threads < 1:
        raise UsageError("threads must be >= 1")
    if not 0 <= cfg.seed < 2 ** 64:
        raise UsageError("seed must fit in 64 bits")
    return cfg


def _word(text: str) -> str:
    try:
        return parse_word(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _in_vertex_set(word: str, t: int):
    if len(word) > t:
        raise UsageError(f"word {word or '-'} is not in V_{t} (length {len(word)} > {t})")


# -- commands --------------------------------------------------------------------

def cmd_generate(args, cfg: RunConfig) -> tuple:
    net = build(args.t, cap=cfg.build_cap)
    extra = {"vertex_count": net.vertex_count, "edge_count": net.edge_count}
    return export(net, args.format), 0, extra


def cmd_distance(args, cfg: RunConfig) -> tuple:
    a, b = _word(args.source), _word(args.target)
    _in_vertex_set(a, args.t)
    _in_vertex_set(b, args.t)
    if args.method == "symbolic":
        if b != ROOT:
            raise UsageError("--method symbolic needs --to - (distance to the root)")
        d = distance_to_root(a)
    elif args.method == "recursive":
        d = geodesic_distance(a, b)
    else:
        d = bfs_distance(build(args.t, cap=cfg.build_cap), a, b)
    return f"{d}\n".encode(), 0, {}


def cmd_apl(args, cfg: RunConfig) -> tuple:
    if args.t < 1:
        raise UsageError("average path length needs t >= 1")
    if args.mode == "sampled":
        if args.pairs < 1:
            raise UsageError("--pairs must be >= 1")
        est = sampled_apl(args.t, args.pairs, cfg.seed)
        return f"{SAMPLED_HEADER}\n{est.csv_row()}\n".encode(), 0, {}
    if args.t > cfg.all_pairs_cap:
        raise CapExceeded(f"exact all-pairs: t={args.t} exceeds the cap of "
                          f"{cfg.all_pairs_cap}; use --mode sampled")
    s = all_pairs_summary(build(args.t, cap=cfg.build_cap), threads=cfg.threads,
                          cap=cfg.all_pairs_cap)
    if not args.check_identity:
        return f"{CSV_HEADER}\n{s.csv_row()}\n".encode(), 0, {}
    if args.t >= 2:
        prev = all_pairs_summary(build(args.t - 1), threads=cfg.threads).pi
    else:
        prev = 0
    holds = s.pi == 3 * prev + s.lam + s.nu and s.mu == 3 * prev
    text = f"{CSV_HEADER},pi_prev,identity_holds\n{s.csv_row()},{prev},{str(holds).lower()}\n"
    return text.encode(), 0 if holds else 1, {}


_QUANTITIES = {
    "alpha_bar": asy.alpha_bar,
    "alpha_over_t": lambda t: asy.alpha_bar(t) / t,
    "kappa": asy.kappa,
    "chi": asy.chi,
}


def _range(args) -> range:
    if args.t is not None:
        return range(args.t, args.t + 1)
    if args.start is None or args.stop is None:
        raise UsageError("give --t or both --from and --to")
    if args.step < 1 or args.start > args.stop:
        raise UsageError("need --from <= --to and --step >= 1")
    return range(args.start, args.stop + 1, args.step)


def cmd_alpha(args, cfg: RunConfig) -> tuple:
    ts = _range(args)
    if args.quantity in ("alpha_over_t", "chi") and ts.start < 1:
        raise UsageError(f"{args.quantity} needs t >= 1")
    if ts.start < 0:
        raise UsageError("t must be non-negative")
    fn = _QUANTITIES[args.quantity]
    lines = [EXACT_HEADER] + [exact_row(t, fn(t)) for t in ts]
    return ("\n".join(lines) + "\n").encode(), 0, {}


def cmd_renewal(args, cfg: RunConfig) -> tuple:
    ts = _range(args)
    if ts.start < (0 if args.raw else 1):
        raise UsageError("E(Y_t)/t needs t >= 1 (use --raw for E(Y_t))")
    if args.mc:
        if args.samples < 1:
            raise UsageError("--samples must be >= 1")
        lines = [MC_HEADER]
        for t in ts:
            est = asy.renewal_mc(t, args.samples, cfg.seed, threads=cfg.threads)
            if not args.raw:
                est.estimate /= t
                est.std_err /= t
            lines.append(est.csv_row())
    else:
        ey = asy.renewal_expectations(ts[-1])
        lines = [EXACT_HEADER] + [
            exact_row(t, ey[t] if args.raw else ey[t] / t) for t in ts]
    return ("\n".join(lines) + "\n").encode(), 0, {}


def cmd_table(args, cfg: RunConfig) -> tuple:
    if args.paper:
        start, stop, step = REFERENCE_TABLE
    else:
        ts = _range(args)
        start, stop, step = ts.start, ts[-1], ts.step
    rows = asy.alpha_table(start, stop, step)
    lines = ["t,alpha_over_t_truncated"] + [f"{t},{s}" for t, _, s in rows]
    return ("\n".join(lines) + "\n").encode(), 0, {}


def cmd_verify(args, cfg: RunConfig) -> tuple:
    checks = run_suite(args.suite, args.tmax)
    failed = [c for c in checks if not c.passed]
    lines = [c.line() for c in checks]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return ("\n".join(lines) + "\n").encode(), 1 if failed else 0, {}


# -- parser ----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker count (default: config file, ${THREADS_ENV}, then 1)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--meta", default=None,
                   help="metadata sidecar path (default: OUT.meta.json when --out is set)")
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--build-cap", dest="build_cap", type=int, default=None)
    p.add_argument("--all-pairs-cap", dest="all_pairs_cap", type=int, default=None)


def _range_flags(p: argparse.ArgumentParser):
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--from", dest="start", type=int, default=None)
    p.add_argument("--to", dest="stop", type=int, default=None)
    p.add_argument("--step", type=int, default=1)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gasketnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build G_t and export it")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--format", choices=EXPORT_FORMATS, default="edge-list-tsv")
    _common(p)

    p = sub.add_parser("distance", help="geodesic distance between two words")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--from", dest="source", required=True, help="word, '-' for the root")
    p.add_argument("--to", dest="target", required=True, help="word, '-' for the root")
    p.add_argument("--method", choices=("bfs", "symbolic", "recursive"), default="bfs")
    _common(p)

    p = sub.add_parser("apl", help="average path length of G_t")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--pairs", type=int, default=100_000)
    p.add_argument("--check-identity", action="store_true",
                   help="also verify pi_t = 3 pi_(t-1) + lambda_t + nu_t")
    _common(p)

    p = sub.add_parser("alpha", help="exact alpha_bar, kappa and chi series")
    _range_flags(p)
    p.add_argument("--quantity", choices=tuple(_QUANTITIES), default="alpha_bar")
    _common(p)

    p = sub.add_parser("renewal", help="E(Y_t) of the renewal model")
    _range_flags(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact recursion (default)")
    mode.add_argument("--mc", action="store_true", help="Monte Carlo estimate")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--raw", action="store_true", help="report E(Y_t) instead of E(Y_t)/t")
    _common(p)

    p = sub.add_parser("table", help="alpha_bar_t / t truncated to 4 decimals")
    p.add_argument("--paper", action="store_true", help="t = 300, 400, ..., 800")
    _range_flags(p)
    _common(p)

    p = sub.add_parser("verify", help="run oracle suites")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--tmax", type=int, default=6)
    _common(p)
    return parser


COMMANDS = {
    "generate": cmd_generate,
    "distance": cmd_distance,
    "apl": cmd_apl,
    "alpha": cmd_alpha,
    "renewal": cmd_renewal,
    "table": cmd_table,
    "verify": cmd_verify,
}


def _write_meta(cfg: RunConfig, elapsed_ms: float, extra: dict):
    path = cfg.meta or (cfg.out + ".meta.json" if cfg.out else None)
    if not path:
        return
    meta = {"command": cfg.command, "version": __version__, "seed": cfg.seed,
            "threads": cfg.threads, "elapsed_ms": round(elapsed_ms, 3)}
    meta.update(extra)
    meta["config"] = {k: v for k, v in asdict(cfg).items() if k not in ("out", "meta")}
    text = json.dumps(meta, sort_keys=True, indent=2) + "\n"
    if path == "-":
        sys.stderr.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = resolve_config(args)
        payload, code, extra = COMMANDS[args.command](args, cfg)
    except (UsageError, CapExceeded) as exc:
        print(f"gasketnet {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"gasketnet {args.command}: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    _write_meta(cfg, (time.perf_counter() - start) * 1000, extra)
    return code


if __name__ == "__main__":
    sys.exit(main())
