"""gridhom command line: info, lambda, homology, obstruct, verify, batch.

Exit codes: 0 success, 2 unreadable or invalid grid, 10 obstructed, 1 anything
else (including a failed verification suite).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .complex import Theory, gradings
from .grid_core import GridError, canonical_states, classical_invariants, load_grid
from .homology import homology_dims, lambda_report, resolve_jobs

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_OBSTRUCTED = 10

CSV_COLUMNS = ["path", "n", "components", "tb", "rot", "M_plus", "M_minus", "twoA_plus",
               "twoA_minus", "lambda_plus_big", "lambda_minus_big", "lambda_plus",
               "lambda_minus", "seconds"]

GRID_SUFFIXES = (".json", ".txt", ".grid")


@dataclass
class RunConfig:
    command: str
    paths: list
    fmt: str = "json"
    v_cutoff: int = None
    jobs: int = 1
    seed: int = 0
    max_n: int = 5
    verbose: bool = False


def info_dict(G):
    ci = classical_invariants(G)
    xp, xm = canonical_states(G)
    mp, ap = gradings(G, xp)
    mm, am = gradings(G, xm)
    return {"grid": G.to_dict(), "n": G.n, "components": ci.components, "tb": ci.tb,
            "rot": ci.rot, "sl": ci.sl,
            "x_plus": {"state": list(xp), "M": mp, "twoA": ap},
            "x_minus": {"state": list(xm), "M": mm, "twoA": am}}


def _emit(obj, fmt, out):
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        for k, v in obj.items():
            out.write(f"{k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}\n")


def cmd_info(cfg, out):
    G = load_grid(cfg.paths[0])
    _emit(info_dict(G), cfg.fmt, out)
    return EXIT_OK


def _lambda_dict(G, cfg, dims=False):
    rep = lambda_report(G, jobs=cfg.jobs, v_cutoff=cfg.v_cutoff)
    table = []
    if dims:
        table = homology_dims(G, Theory.TildeOXBig, rep.v_cutoff, cfg.jobs).as_list()
    return rep.to_dict(table, Theory.TildeOXBig)


def cmd_lambda(cfg, out):
    G = load_grid(cfg.paths[0])
    _emit(_lambda_dict(G, cfg), "json" if cfg.fmt == "csv" else cfg.fmt, out)
    return EXIT_OK


def cmd_homology(cfg, out, theory="TildeOX"):
    G = load_grid(cfg.paths[0])
    th = Theory(theory)
    hd = homology_dims(G, th, cfg.v_cutoff, cfg.jobs)
    if cfg.fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["M", "twoA", "dim"])
        w.writerows(hd.as_list())
        return EXIT_OK
    obj = _lambda_dict(G, cfg)
    obj["theory"] = th.value
    obj["dims"] = hd.as_list()
    obj["v_cutoff"] = hd.v_cutoff if th.big else obj["v_cutoff"]
    _emit(obj, cfg.fmt, out)
    return EXIT_OK


def cmd_obstruct(cfg, out):
    from .cob_maps import obstruct_cobordism

    G_from = load_grid(cfg.paths[0])
    G_to = load_grid(cfg.paths[1])
    rep = obstruct_cobordism(G_from, G_to, jobs=cfg.jobs)
    _emit(rep.to_dict(), "json" if cfg.fmt == "csv" else cfg.fmt, out)
    return EXIT_OBSTRUCTED if rep.obstructed else EXIT_OK


def cmd_verify(cfg, out, suite="all", mutate=False):
    from .suites import SUITES, run_suites

    names = SUITES if suite == "all" else (suite,)
    checks = run_suites(names, cfg.seed, cfg.max_n, mutate=mutate)
    failed = [c for c in checks if not c.ok]
    for c in checks:
        out.write(f"{'PASS' if c.ok else 'FAIL'} {c.suite}: {c.label}"
                  + (f" ({c.detail})" if c.detail else "") + "\n")
        for x, res in c.residue:
            out.write(f"    residue at {list(x)}: {res}\n")
    out.write(f"{len(checks) - len(failed)} passed, {len(failed)} failed\n")
    return EXIT_OK if not failed else EXIT_INTERNAL


def _batch_row(args):
    path, rel, v_cutoff, timing = args
    t0 = time.perf_counter()
    G = load_grid(path)
    info = info_dict(G)
    rep = lambda_report(G, jobs=1, v_cutoff=v_cutoff)
    secs = time.perf_counter() - t0
    return [rel, G.n, info["components"], info["tb"], info["rot"], info["x_plus"]["M"],
            info["x_minus"]["M"], info["x_plus"]["twoA"], info["x_minus"]["twoA"],
            int(rep.plus["enhanced_vanishes"]), int(rep.minus["enhanced_vanishes"]),
            int(rep.plus["classical_vanishes"]), int(rep.minus["classical_vanishes"]),
            f"{secs:.3f}" if timing else ""]


def cmd_batch(cfg, out, timing=False):
    root = Path(cfg.paths[0])
    if not root.is_dir():
        raise FileNotFoundError(f"{root} is not a directory")
    files = sorted(p for p in root.rglob("*") if p.is_file() and p.suffix in GRID_SUFFIXES)
    tasks = [(str(p), p.relative_to(root).as_posix(), cfg.v_cutoff, timing) for p in files]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            rows = list(ex.map(_batch_row, tasks))
    else:
        rows = [_batch_row(t) for t in tasks]
    if cfg.fmt == "json":
        for r in rows:
            out.write(json.dumps(dict(zip(CSV_COLUMNS, r)), sort_keys=True) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(rows)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="gridhom", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default=None)
    common.add_argument("--v-cutoff", type=int, default=None,
                        help="highest power of v kept when listing enhanced homology")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $GRIDHOM_JOBS or 1)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("info", parents=[common], help="size, classical invariants, canonical gradings")
    s.add_argument("path")
    s = sub.add_parser("lambda", parents=[common], help="vanishing of the canonical classes")
    s.add_argument("path")
    s = sub.add_parser("homology", parents=[common], help="bigraded homology dimensions")
    s.add_argument("path")
    s.add_argument("--theory", choices=("TildeOX", "TildeOXBig"), default="TildeOX")
    s = sub.add_parser("obstruct", parents=[common], help="cobordism obstruction from FROM up to TO")
    s.add_argument("path_from")
    s.add_argument("path_to")
    s = sub.add_parser("verify", parents=[common], help="run chain-level verification suites")
    s.add_argument("--suite", choices=("all", "comm", "stab", "pinch", "birth", "d2"), default="all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-n", type=int, default=5)
    s.add_argument("--mutate", action="store_true", help=argparse.SUPPRESS)
    s = sub.add_parser("batch", parents=[common], help="one report row per grid file in DIR")
    s.add_argument("dir")
    s.add_argument("--timing", action="store_true", help="fill the seconds column")
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    cmd = args.command
    default_fmt = {"batch": "csv", "verify": "text"}.get(cmd, "json")
    paths = [getattr(args, k) for k in ("path", "path_from", "path_to", "dir") if hasattr(args, k)]
    cfg = RunConfig(cmd, paths, args.fmt or default_fmt, args.v_cutoff, resolve_jobs(args.jobs),
                    getattr(args, "seed", 0), getattr(args, "max_n", 5), args.verbose)
    try:
        if cmd == "info":
            return cmd_info(cfg, out)
        if cmd == "lambda":
            return cmd_lambda(cfg, out)
        if cmd == "homology":
            return cmd_homology(cfg, out, args.theory)
        if cmd == "obstruct":
            return cmd_obstruct(cfg, out)
        if cmd == "verify":
            return cmd_verify(cfg, out, args.suite, args.mutate)
        if cmd == "batch":
            return cmd_batch(cfg, out, args.timing)
    except (GridError, OSError) as e:
        sys.stderr.write(f"gridhom: error: {e}\n")
        return EXIT_PARSE
    except Exception as e:  # noqa: BLE001
        if cfg.verbose:
            raise
        sys.stderr.write(f"gridhom: internal error: {type(e).__name__}: {e}\n")
        return EXIT_INTERNAL
    return EXIT_INTERNAL


def run(argv=None):
    """Run a command and return (exit code, captured stdout)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
