"""Command-line interface: solve, generate, verify, and bench.

Output is line-oriented key=value (plus one CSV block for bench).  Exit
codes: 0 ok, 1 verification mismatch, 2 usage/input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import sparse as sparse_mod
from .config import DEFAULT_BUDGET, DEFAULT_OMEGA, ENV_BUDGET, ENV_OMEGA, RunConfig
from .errors import InputError, ParseError, ResourceLimitError
from .hardness import (
    ReductionOutput,
    khov_opt,
    reduce_to_cover,
    reduce_to_pds,
    regularize_full,
    verify_cover_reduction,
    verify_pds_reduction,
)
from .instances import CoverInstance, PdsGraph, SolveResult, coverage_value, pds_to_cover
from .oracles import brute_force, mm_baseline
from .randgen import random_cover_instance, random_khov, random_pds_graph
from .solvers import max_k_cover, partial_k_dominating_set
from .stats import OpStats
from .textio import (
    emit_certificate,
    emit_edge_list,
    emit_set_family,
    parse_certificate,
    parse_edge_list,
    parse_set_family,
)

COVER_REGIMES = ("large-universe", "intermediate", "small-universe")


def _solve_cover(inst: CoverInstance, cfg: RunConfig) -> SolveResult:
    if cfg.algorithm == "oracle":
        return brute_force(inst, cfg.k)
    if cfg.algorithm == "mm":
        return mm_baseline(inst, cfg.k, budget_entries=cfg.budget)
    if cfg.algorithm in COVER_REGIMES:
        return max_k_cover(inst, cfg.k, omega=cfg.omega, budget=cfg.budget, force_regime=cfg.algorithm)
    if cfg.algorithm == "auto":
        return max_k_cover(inst, cfg.k, omega=cfg.omega, budget=cfg.budget)
    raise InputError(f"algorithm {cfg.algorithm!r} does not apply to coverage instances")


def _solve_pds(g: PdsGraph, cfg: RunConfig) -> SolveResult:
    k = cfg.k
    if cfg.algorithm == "oracle":
        return brute_force(pds_to_cover(g), k)
    if cfg.algorithm == "mm":
        return mm_baseline(pds_to_cover(g), k, budget_entries=cfg.budget)
    if cfg.algorithm in COVER_REGIMES:
        return max_k_cover(pds_to_cover(g), k, omega=cfg.omega, budget=cfg.budget, force_regime=cfg.algorithm)
    if cfg.algorithm == "pds2-table":
        if k != 2:
            raise InputError("pds2-table solves k = 2 only")
        return sparse_mod.pds2_table(g)
    if cfg.algorithm == "pds2-sparse":
        if k != 2:
            raise InputError("pds2-sparse solves k = 2 only")
        return sparse_mod.pds2_sparse(g, omega=cfg.omega)
    if cfg.algorithm == "sparse":
        if k < 2:
            raise InputError("sparse solver needs k >= 2")
        return sparse_mod.pds_sparse(g, k, omega=cfg.omega)
    if cfg.algorithm == "auto":
        if k == 1:
            stats = OpStats(regime="single")
            best = max(range(g.n), key=lambda v: (g.degree(v), -v)) if g.n else None
            return SolveResult(g.degree(best) + 1 if best is not None else 0, (best,) if best is not None else (), stats)
        return sparse_mod.pds_sparse(g, k, omega=cfg.omega) if g.n else SolveResult(0, (), OpStats())
    raise InputError(f"algorithm {cfg.algorithm!r} does not apply to domination instances")


def _print_result(res: SolveResult, cfg: RunConfig, extra: dict[str, str] | None = None) -> None:
    lines = []
    if extra:
        lines.extend(f"{k}={v}" for k, v in extra.items())
    lines.append(f"k={cfg.k}")
    lines.append(f"algo={cfg.algorithm}")
    lines.extend(res.report_lines())
    print("\n".join(lines))


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        k=args.k,
        algorithm=getattr(args, "algo", "auto"),
        omega=args.omega if args.omega is not None else RunConfig().omega,
        budget=args.budget if args.budget is not None else RunConfig().budget,
        seed=getattr(args, "seed", 0),
        output=getattr(args, "format", "human"),
    )


def _cmd_solve_cover(args) -> int:
    cfg = _config_from_args(args)
    inst = parse_set_family(Path(args.file).read_text())
    res = _solve_cover(inst, cfg)
    _print_result(res, cfg, {"kind": "cover", "n": str(inst.n), "u": str(inst.u)})
    return 0


def _cmd_solve_pds(args) -> int:
    cfg = _config_from_args(args)
    g = parse_edge_list(Path(args.file).read_text())
    res = _solve_pds(g, cfg)
    _print_result(res, cfg, {"kind": "pds", "n": str(g.n), "m": str(g.m)})
    return 0


def _cmd_gen(args) -> int:
    if args.what == "random-cover":
        inst = random_cover_instance(args.seed, n_max=args.n, u_max=args.u)
        text = f"# seed={args.seed}\n" + emit_set_family(inst)
        _write_or_print(args.out, text)
        return 0
    if args.what == "random-graph":
        g = random_pds_graph(args.seed, n_max=args.n)
        text = f"# seed={args.seed}\n" + emit_edge_list(g)
        _write_or_print(args.out, text)
        return 0
    if args.what == "reduction":
        if args.out is None:
            print("gen reduction requires --out BASE", file=sys.stderr)
            return 2
        raw = random_khov(args.seed, args.k, args.h, args.nvec, args.d)
        reg = regularize_full(raw)
        base = Path(args.out)
        if args.kind == "cover":
            out = reduce_to_cover(reg, max_frequency=args.nvec)
            inst_path = base.with_suffix(".cover")
            inst_path.write_text(f"# seed={args.seed}\n" + emit_set_family(out.cover))
        else:
            out = reduce_to_pds(reg, degree=args.nvec)
            inst_path = base.with_suffix(".graph")
            inst_path.write_text(f"# seed={args.seed}\n" + emit_edge_list(out.graph))
        cert_path = base.with_suffix(".cert")
        cert_path.write_text(emit_certificate(out, reg))
        print(f"kind={args.kind}")
        print(f"seed={args.seed}")
        print(f"instance={inst_path}")
        print(f"certificate={cert_path}")
        print(f"t={out.t}")
        print(f"alpha={out.alpha}")
        print(f"predicted={out.predicted}")
        return 0
    raise InputError(f"unknown generator {args.what!r}")


def _write_or_print(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _pds_algo(algo: str) -> bool:
    return algo in ("sparse", "pds2-table", "pds2-sparse")


def _cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    problem = args.problem or ("pds" if _pds_algo(cfg.algorithm) else "cover")
    mismatches = 0
    for trial in range(args.trials):
        seed = args.seed + trial
        if problem == "cover":
            inst = random_cover_instance(seed, n_max=args.n, u_max=args.u or args.n)
            res = _solve_cover(inst, cfg)
            truth = brute_force(inst, cfg.k)
            ok = res.value == truth.value and coverage_value(inst, res.witness) == res.value
        else:
            g = random_pds_graph(seed, n_max=args.n)
            res = _solve_pds(g, cfg)
            truth = brute_force(pds_to_cover(g), cfg.k)
            ok = res.value == truth.value and len(set(res.witness)) == len(res.witness)
            if ok and res.witness:
                got = 0
                for v in res.witness:
                    got |= g.closed_masks[v]
                ok = got.bit_count() == res.value
        if not ok:
            mismatches += 1
            print(f"mismatch seed={seed} got={res.value} expected={truth.value}")
    print(f"problem={problem}")
    print(f"algo={cfg.algorithm}")
    print(f"k={cfg.k}")
    print(f"trials={args.trials}")
    print(f"mismatches={mismatches}")
    return 0 if mismatches == 0 else 1


def _cmd_verify_certificate(args) -> int:
    fields, inst = parse_certificate(Path(args.certificate).read_text())
    kind = fields["kind"]
    direction = fields["direction"]
    alpha, _ = khov_opt(inst, direction)
    ok = alpha == fields["alpha"]
    sign = 1 if fields["h"] % 2 == 1 else -1
    ok = ok and fields["predicted"] == fields["t"] + sign * fields["alpha"]
    if kind == "cover":
        cover = parse_set_family(Path(args.instance).read_text())
        out = ReductionOutput(
            "cover", fields["k"], fields["h"], direction, fields["t"], fields["alpha"],
            fields["predicted"], cover, None, fields["mapping"], fields["x_ids"], fields["inventory"],
        )
        ok = ok and verify_cover_reduction(out)
    else:
        graph = parse_edge_list(Path(args.instance).read_text())
        out = ReductionOutput(
            "pds", fields["k"], fields["h"], direction, fields["t"], fields["alpha"],
            fields["predicted"], None, graph, fields["mapping"], fields["x_ids"], fields["inventory"],
        )
        ok = ok and verify_pds_reduction(out)
    print(f"kind={kind}")
    print(f"alpha={fields['alpha']}")
    print(f"predicted={fields['predicted']}")
    print(f"verified={'yes' if ok else 'no'}")
    return 0 if ok else 1


def _cmd_bench(args) -> int:
    cfg = _config_from_args(args)
    problem = args.problem or ("pds" if _pds_algo(cfg.algorithm) else "cover")
    rows = ["algo,problem,n,u,k,seed,value,counter_total,wall_ms"]
    for trial in range(args.trials):
        seed = args.seed + trial
        start = time.perf_counter()
        if problem == "cover":
            inst = random_cover_instance(seed, n_max=args.n, u_max=args.u or args.n)
            res = _solve_cover(inst, cfg)
            n, u = inst.n, inst.u
        else:
            g = random_pds_graph(seed, n_max=args.n)
            res = _solve_pds(g, cfg)
            n, u = g.n, g.m
        wall = (time.perf_counter() - start) * 1000.0
        total = sum(res.stats.counters.values())
        rows.append(f"{cfg.algorithm},{problem},{n},{u},{cfg.k},{seed},{res.value},{total},{wall:.3f}")
    print("\n".join(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxkcover",
        description="Exact maximum k-coverage and partial k-domination solvers with verification tooling.",
    )
    parser.add_argument("--omega", type=float, default=None, help=f"matrix exponent knob (env {ENV_OMEGA}, default {DEFAULT_OMEGA})")
    parser.add_argument("--budget", type=int, default=None, help=f"memory/work budget (env {ENV_BUDGET}, default {DEFAULT_BUDGET})")
    sub = parser.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("solve-cover", help="solve a set-family file")
    sc.add_argument("--k", type=int, required=True)
    sc.add_argument("--algo", default="auto")
    sc.add_argument("--format", default="structured", choices=("human", "structured"))
    sc.add_argument("file")
    sc.set_defaults(func=_cmd_solve_cover)

    sp = sub.add_parser("solve-pds", help="solve an edge-list file")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--algo", default="auto")
    sp.add_argument("--format", default="structured", choices=("human", "structured"))
    sp.add_argument("file")
    sp.set_defaults(func=_cmd_solve_pds)

    gen = sub.add_parser("gen", help="generate instances")
    gen.add_argument("what", choices=("random-cover", "random-graph", "reduction"))
    gen.add_argument("--n", type=int, default=10)
    gen.add_argument("--u", type=int, default=10)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--h", type=int, default=2)
    gen.add_argument("--nvec", type=int, default=3)
    gen.add_argument("--d", type=int, default=3)
    gen.add_argument("--kind", choices=("cover", "pds"), default="cover")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=_cmd_gen)

    ver = sub.add_parser("verify", help="compare a solver against the exhaustive oracle on random instances")
    ver.add_argument("--algo", default="auto")
    ver.add_argument("--k", type=int, required=True)
    ver.add_argument("--trials", type=int, default=100)
    ver.add_argument("--n", type=int, default=10)
    ver.add_argument("--u", type=int, default=None)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--problem", choices=("cover", "pds"), default=None)
    ver.set_defaults(func=_cmd_verify)

    vc = sub.add_parser("verify-certificate", help="check a reduction certificate by double brute force")
    vc.add_argument("instance")
    vc.add_argument("certificate")
    vc.set_defaults(func=_cmd_verify_certificate)

    bench = sub.add_parser("bench", help="emit counters and wall time as CSV")
    bench.add_argument("--algo", default="auto")
    bench.add_argument("--k", type=int, required=True)
    bench.add_argument("--trials", type=int, default=5)
    bench.add_argument("--n", type=int, default=10)
    bench.add_argument("--u", type=int, default=None)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--problem", choices=("cover", "pds"), default=None)
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (InputError, ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
