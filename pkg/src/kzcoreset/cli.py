"""Command-line front door: build, certify and solve coresets, decompose
planar graphs.

Exit status: 0 success or pass, 1 certification failure, 2 bad input,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import PipelineConfig
from .embedding import build_embedding, embedded_metric
from .errors import BudgetError, DomainError, EmbeddingError, ParseError, UnsupportedConfiguration
from .harness import Certifier, CoresetReport
from .io import dumps, euclidean_instance, graph_points, read_graph, read_points
from .metric import EuclideanMetric, cost
from .planar import (
    PlanarGraph,
    check_decomposition,
    decompose,
    decomposition_paths,
    separator_metric,
    sweep_path,
)
from .reduction import iterative_reduce, sampling_base
from .rng import child_seed
from .sensitivity import Coreset, build_coreset
from .solvers import fpt_solve

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
ALGOS = ("multiplicative", "additive", "iterative")
# keeps the embedding stream apart from every seed the pipelines derive
_EMBED_LABEL = 1 << 20

# flag name -> PipelineConfig key
_PARAM_FLAGS = {
    "k": ("--k", int), "z": ("--z", float), "epsilon": ("--eps", float), "delta": ("--delta", float),
    "seed": ("--seed", int), "rho": ("--rho", float), "s_of_k": ("--s-of-k", str),
    "sdim_proxy": ("--sdim-proxy", float), "sdim_coef": ("--sdim-coef", float),
    "constant": ("--constant", float), "hoeffding_constant": ("--hoeffding-constant", float),
    "alpha": ("--alpha", float), "c_jl": ("--c-jl", float), "max_retries": ("--max-retries", int),
    "enum_budget": ("--enum-budget", int), "workers": ("--workers", int),
}


def _add_params(sp):
    g = sp.add_argument_group("parameters (override --config and the packaged calibration)")
    for key, (flag, typ) in _PARAM_FLAGS.items():
        g.add_argument(flag, dest=key, type=typ, default=None)
    sp.add_argument("--config", help="JSON file with parameter keys")


def _add_instance(sp):
    sp.add_argument("points", help="point CSV: id,weight,c1..cm or id,weight,vertex")
    sp.add_argument("--graph", help="graph file for vertex-attached points")
    sp.add_argument("--ambient", help="extra candidate centers (Euclidean CSV)")
    sp.add_argument("--out", help="write the JSON/CSV result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kzcoreset", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coreset", help="build a coreset")
    _add_instance(c)
    _add_params(c)
    c.add_argument("--algo", choices=ALGOS, default="multiplicative")
    c.add_argument("--embed", type=float, metavar="EPS",
                   help="sample in a random projection with distortion EPS (Euclidean only)")
    c.add_argument("--embedding-out", help="write the projection here")
    c.add_argument("--schedule-out", help="write the iterative schedule dump here")

    r = sub.add_parser("certify", help="exhaustively certify one coreset or a seed range")
    _add_instance(r)
    _add_params(r)
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--coreset", help="coreset JSON to certify")
    src.add_argument("--seeds", help="batch mode: build and certify for seeds a:b (half open)")
    r.add_argument("--algo", choices=ALGOS, default="multiplicative")
    r.add_argument("--embed", type=float, metavar="EPS")
    r.add_argument("--target-eps", type=float,
                   help="error to certify at; default eps, 13 eps for iterative, plus 3 EPS with --embed")
    r.add_argument("--format", choices=("json", "csv"), default="json")
    r.add_argument("--plot", help="batch mode: error histogram PNG")
    r.add_argument("--min-pass-rate", type=float, default=1.0)

    s = sub.add_parser("solve", help="exact k-clustering of a coreset, evaluated on the data")
    _add_instance(s)
    _add_params(s)
    s.add_argument("--coreset", help="coreset JSON; built with --algo when absent")
    s.add_argument("--algo", choices=ALGOS, default="multiplicative")
    s.add_argument("--emit-report", action="store_true", help="include the certification report")
    s.add_argument("--target-eps", type=float)

    d = sub.add_parser("decompose", help="shortest-path separator decomposition of a planar graph")
    d.add_argument("graph", help="graph file with rotation lines")
    d.add_argument("--terminals", default="", help="comma separated terminal vertices")
    d.add_argument("--terminals-file", help="vertex-attached point CSV whose vertices are terminals")
    d.add_argument("--root", type=int, default=0)
    d.add_argument("--check-portals", action="store_true", help="run the exhaustive portal sweep")
    d.add_argument("--eps", type=float, default=0.2)
    d.add_argument("--plot", help="histogram PNG of f/d over terminal-vertex pairs")
    d.add_argument("--out")
    return p


# --- shared helpers -------------------------------------------------------

def _config(args) -> PipelineConfig:
    flags = {k: getattr(args, k) for k in _PARAM_FLAGS}
    if flags.get("s_of_k") not in (None, "auto"):
        try:
            flags["s_of_k"] = float(flags["s_of_k"])
        except ValueError:
            raise DomainError("--s-of-k must be a number or 'auto'") from None
    return PipelineConfig.resolve(flags, args.config)


def load_instance(args):
    pts = read_points(args.points)
    if pts.vertices is not None:
        if not args.graph:
            raise DomainError("vertex-attached points need --graph")
        if args.ambient:
            raise DomainError("--ambient applies to Euclidean points only")
        gf = read_graph(args.graph)
        return gf.metric(), graph_points(pts, gf.n)
    amb = read_points(args.ambient) if args.ambient else None
    return euclidean_instance(pts, amb)


def load_coreset(path) -> Coreset:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return Coreset.from_dict(data)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"{path}: not a coreset file ({exc})") from None


def make_coreset(X, metric, cfg: PipelineConfig, algo: str, embed=None, seed=None):
    """Coreset for one seed; returns ``(coreset, schedule dump or None, embedding or None)``."""
    seed = cfg.seed if seed is None else seed
    params = cfg.params()
    work, emb = metric, None
    if embed is not None:
        if not isinstance(metric, EuclideanMetric):
            raise DomainError("--embed needs a Euclidean instance")
        emb = build_embedding(X, metric, np.arange(metric.size), embed, child_seed(seed, _EMBED_LABEL),
                              int(cfg.max_retries), cfg.c_jl)
        work = embedded_metric(emb, metric)
    schedule = None
    if algo == "iterative":
        base = sampling_base(work, params, cfg.constant, cfg.sdim_coef, cfg.alpha)
        run = iterative_reduce(X, work, params, base, cfg.rho, cfg.resolved_s_of_k(), seed)
        D, schedule = run.coreset, run.dump()
    else:
        D = build_coreset(X, work, params, seed, algo, cfg.sdim_proxy, cfg.constant,
                          cfg.hoeffding_constant, alpha=cfg.alpha)
    D.provenance.update({"k": params.k, "z": params.z, "size": D.size})
    if emb is not None:
        D.provenance["embedding"] = {"epsilon": emb.epsilon, "epsilon_eff": emb.epsilon_eff,
                                     "target_dim": emb.target_dim, "attempt": emb.attempt,
                                     "post_scale": emb.post_scale}
    return D, schedule, emb


def _seeded_coreset(job):
    X, metric, cfg, algo, embed, seed = job
    D, _, _ = make_coreset(X, metric, cfg, algo, embed, seed)
    return D


def target_epsilon(cfg: PipelineConfig, algo: str, embed, given) -> float:
    if given is not None:
        return given
    eps = 13 * cfg.epsilon if algo == "iterative" else cfg.epsilon
    return eps + (3 * embed if embed is not None else 0.0)


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_seeds(text: str) -> range:
    try:
        a, b = (int(x) for x in text.split(":"))
    except ValueError:
        raise DomainError(f"--seeds expects a:b, got {text!r}") from None
    if b <= a:
        raise DomainError("--seeds range is empty")
    return range(a, b)


# --- commands -------------------------------------------------------------

def cmd_coreset(args) -> int:
    cfg = _config(args)
    metric, X = load_instance(args)
    D, schedule, emb = make_coreset(X, metric, cfg, args.algo, args.embed)
    doc = D.to_dict()
    doc["provenance"]["config"] = cfg.to_dict()
    if schedule is not None:
        doc["schedule"] = schedule
        if args.schedule_out:
            _emit(dumps(schedule), args.schedule_out)
    if emb is not None and args.embedding_out:
        _emit(dumps(emb.to_dict()), args.embedding_out)
    _emit(dumps(doc), args.out)
    return EXIT_OK


def _report_csv(rows, header) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def cmd_certify(args) -> int:
    cfg = _config(args)
    metric, X = load_instance(args)
    target = target_epsilon(cfg, args.algo, args.embed, args.target_eps)
    cert = Certifier(X, metric, int(cfg.k), float(cfg.z), budget=int(cfg.enum_budget))
    if args.coreset:
        rep = cert.certify(load_coreset(args.coreset), target)
        if args.format == "csv":
            _emit(_report_csv([rep.csv_row()], CoresetReport.CSV_FIELDS), args.out)
        else:
            _emit(dumps(rep.to_dict()), args.out)
        return EXIT_OK if rep.passed else EXIT_FAIL

    seeds = _parse_seeds(args.seeds)
    jobs = [(X, metric, cfg, args.algo, args.embed, s) for s in seeds]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=int(cfg.workers)) as ex:
            cores = list(ex.map(_seeded_coreset, jobs))
    else:
        cores = [_seeded_coreset(j) for j in jobs]
    trials = []
    for s, D in zip(seeds, cores):
        rep = cert.certify(D, target)
        rep.extra = {"seed": s, "size": D.size}
        if "weak_coreset_ratio" in D.provenance:
            rep.extra["weak_coreset_ratio"] = D.provenance["weak_coreset_ratio"]
        trials.append(rep)
    rate = sum(r.passed for r in trials) / len(trials)
    ok = rate >= args.min_pass_rate
    if args.plot:
        from .plotting import error_histogram
        error_histogram([r.max_relative_error for r in trials], target, args.plot)
    if args.format == "csv":
        header = ("seed", "size") + CoresetReport.CSV_FIELDS
        rows = [[str(r.extra["seed"]), str(r.extra["size"])] + r.csv_row() for r in trials]
        _emit(_report_csv(rows, header), args.out)
    else:
        _emit(dumps({"trials": [r.to_dict() for r in trials], "pass_rate": rate,
                     "min_pass_rate": args.min_pass_rate, "epsilon_target": target,
                     "algorithm": args.algo, "pass": ok}), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_solve(args) -> int:
    cfg = _config(args)
    metric, X = load_instance(args)
    if args.coreset:
        D, source = load_coreset(args.coreset), args.coreset
    else:
        D, _, _ = make_coreset(X, metric, cfg, args.algo)
        source = args.algo
    k, z = int(cfg.k), float(cfg.z)
    sol = fpt_solve(D.as_weighted_set(), metric, k, z, budget=int(cfg.enum_budget))
    doc = {"solution": sol.to_dict(), "cost_on_data": cost(X, sol.centers, metric, z),
           "coreset_size": D.size, "coreset_source": source}
    status = EXIT_OK
    if args.emit_report:
        target = target_epsilon(cfg, args.algo, None, args.target_eps)
        rep = Certifier(X, metric, k, z, budget=int(cfg.enum_budget)).certify(D, target)
        doc["report"] = rep.to_dict()
        status = EXIT_OK if rep.passed else EXIT_FAIL
    _emit(dumps(doc), args.out)
    return status


def _terminals(args, n) -> list[int]:
    S = set()
    if args.terminals.strip():
        try:
            S |= {int(t) for t in args.terminals.split(",") if t.strip()}
        except ValueError:
            raise DomainError(f"--terminals expects comma separated integers, got {args.terminals!r}") from None
    if args.terminals_file:
        pts = read_points(args.terminals_file)
        if pts.vertices is None:
            raise DomainError("--terminals-file needs a vertex column")
        S |= set(pts.vertices)
    bad = [s for s in S if not 0 <= s < n]
    if bad:
        raise DomainError(f"terminal {bad[0]} outside 0..{n - 1}")
    return sorted(S)


def cmd_decompose(args) -> int:
    gf = read_graph(args.graph)
    if gf.rotation is None and gf.edges:
        raise DomainError(f"{args.graph}: planar decomposition needs rotation lines 'r <v> <e1> <e2> ...'")
    rot = gf.rotation or {}
    G = PlanarGraph.from_edge_rotation(gf.n, gf.edges, {v: rot.get(v, []) for v in range(gf.n)})
    S = _terminals(args, G.n)
    if not 0 < args.eps <= 0.5:
        raise DomainError("--eps must lie in (0, 1/2]")
    dec = decompose(G, S, args.root)
    metric = G.metric()
    inv = check_decomposition(dec, metric)
    doc = dec.to_dict()
    doc["invariants"] = inv
    ok = all(inv.values())

    if args.check_portals or args.plot:
        eps = args.eps
        sweeps = [sweep_path(sp, metric, eps) for sp in decomposition_paths(dec)]
        pc = {
            "epsilon": eps,
            "paths": len(sweeps),
            "pairs": sum(s.pairs for s in sweeps),
            "l_violations": sum(s.l_violations for s in sweeps),
            "f_violations": sum(s.f_violations for s in sweeps),
            "portal_violations": sum(s.portal_violations for s in sweeps),
            "restricted_mismatches": sum(s.restricted_mismatches for s in sweeps),
            "max_portals": max((s.max_portals for s in sweeps), default=0),
            "portal_bound": 2 * eps ** -2 + 3,
        }
        ratios = np.empty(0)
        upper = (1 + eps) / (1 - eps)
        if S:
            sm = separator_metric(dec, eps, S, metric)
            exact = metric.pairwise(S)
            f = sm.pairwise(S, np.arange(G.n))
            pos = exact > 0
            ratios = f[pos] / exact[pos]
            zero_ok = bool(np.all(f[~pos] == 0))
            pc["separator_metric"] = {
                "min_ratio": float(ratios.min(initial=1.0)),
                "max_ratio": float(ratios.max(initial=1.0)),
                "upper_bound": upper,
                "pass": bool(zero_ok and ratios.min(initial=1.0) >= 1.0 and ratios.max(initial=1.0) <= upper * (1 + 1e-12)),
            }
        pc["pass"] = (pc["l_violations"] == 0 and pc["f_violations"] == 0 and pc["portal_violations"] == 0
                      and pc["restricted_mismatches"] == 0 and pc.get("separator_metric", {}).get("pass", True))
        if args.check_portals:
            doc["portal_check"] = pc
            ok = ok and pc["pass"]
        if args.plot:
            from .plotting import distortion_histogram
            distortion_histogram(ratios, upper, args.plot)
    doc["pass"] = bool(ok)
    _emit(dumps(doc), args.out)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"coreset": cmd_coreset, "certify": cmd_certify, "solve": cmd_solve, "decompose": cmd_decompose}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except EmbeddingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ParseError, DomainError, UnsupportedConfiguration, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
