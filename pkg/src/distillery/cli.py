"""Command line interface.

Subcommands: solve-extra, schedule, bench, mc, gen, render. Machine-readable
outputs come first (JSON/CSV); figures and SVG are written alongside them.
The environment variable DISTILLERY_COSTS may point to a cost-model JSON
override; an explicit --costs flag wins.

Exit codes: 0 success, 2 parse/validation error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

from .bench.montecarlo import monte_carlo, run_policy
from .bench.revlib import RealFormatError, parse_real
from .bench.skeleton import expand_to_icm_skeleton, synthetic_mct
from .bench.reference import check_reference_results, load_reference_results
from .bench.toffoli import decompose_mct
from .icm import (
    CircuitError,
    CostModel,
    IcmCircuit,
    circuit_stats,
    parse_circuit,
    parse_cost_model,
    serialize_circuit,
)
from .layout import CapacityError, export_schedule, parse_schedule, validate_schedule
from .reliability import ReliabilityParams, extra_online, min_extra_offline, min_extra_online
from .render import render
from .schedulers import OracleError, ScriptedOracle, StochasticOracle, WorstCaseOracle

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAPACITY = 3


def _load_costs(path: str | None) -> CostModel:
    path = path or os.environ.get("DISTILLERY_COSTS")
    if not path:
        return CostModel()
    return parse_cost_model(Path(path).read_bytes())


def _load_circuit(path: str) -> IcmCircuit:
    return parse_circuit(Path(path).read_bytes())


def _build_oracle(spec: str, rel: ReliabilityParams):
    if spec == "worst":
        return WorstCaseOracle(extra_online(rel).n_t)
    if spec.startswith("stochastic:"):
        return StochasticOracle(int(spec.split(":", 1)[1]), rel.p_f)
    if spec.startswith("scripted:"):
        doc = json.loads(Path(spec.split(":", 1)[1]).read_text())
        return ScriptedOracle({k: [bool(v) for v in vals] for k, vals in doc.items()})
    raise CircuitError(f"unknown oracle spec {spec!r}")


def _write_json(path: str, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def cmd_solve_extra(args) -> int:
    rel = ReliabilityParams(args.pf, args.pc)
    if args.online:
        extra = min_extra_online(rel)
    else:
        extra = min_extra_offline(args.ni, rel)
    print(json.dumps({
        "mode": "online" if args.online else "offline",
        "n_i": 1 if args.online else args.ni,
        "s": extra.s,
        "n_t": extra.n_t,
    }, sort_keys=True))
    return EXIT_OK


def cmd_schedule(args) -> int:
    from .schedulers import SchedulerLimits

    rel = ReliabilityParams(args.pf, args.pc)
    cm = _load_costs(args.costs)
    circuit = _load_circuit(args.circuit)
    oracle = _build_oracle(args.oracle, rel)
    limits = SchedulerLimits(m=args.m)
    started = time.perf_counter()
    schedule, mets, trace = run_policy(
        circuit, cm, rel, args.algo, strategy=args.strategy, oracle=oracle,
        limits=limits, matrix_rows=args.rows, use_pool=not args.no_pool,
    )
    elapsed = time.perf_counter() - started
    problems = validate_schedule(schedule, circuit, cm)
    Path(args.out).write_bytes(export_schedule(schedule))
    if args.svg:
        Path(args.svg).write_bytes(render(schedule, "svg"))
    if args.report:
        stats = circuit_stats(circuit)
        _write_json(args.report, {
            "config": {
                "algo": args.algo,
                "strategy": args.strategy,
                "oracle": oracle.spec,
                "p_f": rel.p_f,
                "p_c": rel.p_c,
                "m": args.m,
                "rows": args.rows,
                "pool": not args.no_pool,
                "costs": cm.to_json_dict(),
                "circuit": {
                    "name": circuit.name,
                    "width": stats.width,
                    "ops": stats.n_ops,
                    "inject_a": stats.n_inject_a,
                    "inject_y": stats.n_inject_y,
                },
            },
            "metrics": {"T": mets.T, "S": mets.S, "BB": mets.BB},
            "trace": {
                "batches": trace.counts.batches,
                "trials": trace.counts.trials,
                "failures": trace.counts.failures,
                "pool_hits": trace.counts.pool_hits,
                "pool_stored": trace.counts.pool_stored,
                "exhausted_batches": trace.counts.exhausted_batches,
                "ops_placed": trace.counts.ops_placed,
            },
            "valid": not problems,
            "violations": problems,
            "timing": {"seconds": elapsed},
        })
    if problems:
        print(f"schedule INVALID: {problems[0]}", file=sys.stderr)
        return EXIT_INVALID
    print(f"{circuit.name}: T={mets.T} S={mets.S} BB={mets.BB} -> {args.out}")
    return EXIT_OK


def _schedule_skeleton_row(name: str, circuit: IcmCircuit, cm: CostModel,
                           rel: ReliabilityParams) -> dict:
    stats = circuit_stats(circuit)
    row = {"circuit": name, "A": stats.n_inject_a, "Y": stats.n_inject_y}
    for policy in ("asap", "alapt", "alaps"):
        _, mets, _ = run_policy(circuit, cm, rel, policy, strategy="fixed")
        row[f"{policy}_T"] = mets.T
        row[f"{policy}_S"] = mets.S
        row[f"{policy}_BB"] = mets.BB
    return row


def cmd_bench(args) -> int:
    rel = ReliabilityParams(args.pf, args.pc)
    cm = _load_costs(args.costs)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = load_reference_results()
    reports = check_reference_results(rows, rel, cm)
    checks_path = out_dir / "fixture_checks.csv"
    with checks_path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["circuit", "bb_identity", "y_ratio", "asap_space",
                         "online_gap", "expected_asap_s", "details"])
        for r in reports:
            writer.writerow([r.circuit, r.bb_identity, r.y_ratio, r.asap_space,
                             r.online_gap, r.expected_asap_s, "; ".join(r.details)])
    passed = sum(1 for r in reports if r.ok)
    print(f"fixture: {passed}/{len(reports)} rows pass all checks -> {checks_path}")

    if not args.no_figures:
        from .plots import save_fixture_figure

        save_fixture_figure(rows, str(out_dir / "fixture_bb.png"))

    if args.corpus:
        corpus_dir = Path(args.corpus)
        real_files = sorted(corpus_dir.glob("*.real"))
        results = []
        for path in real_files:
            mct = parse_real(path.read_bytes(), name=path.stem)
            skeleton = expand_to_icm_skeleton(decompose_mct(mct))
            results.append(_schedule_skeleton_row(path.stem, skeleton, cm, rel))
        corpus_path = out_dir / "corpus_schedule.csv"
        with corpus_path.open("w", newline="") as f:
            fieldnames = ["circuit", "A", "Y"] + [
                f"{p}_{c}" for p in ("asap", "alapt", "alaps") for c in ("T", "S", "BB")
            ]
            writer = csv.DictWriter(f, fieldnames=fieldnames)
            writer.writeheader()
            writer.writerows(results)
        print(f"corpus: scheduled {len(results)} circuit(s) -> {corpus_path}")
        if results and not args.no_figures:
            from .plots import save_corpus_figure

            save_corpus_figure(results, str(out_dir / "corpus_bb.png"))

    return EXIT_OK if passed == len(reports) else 1


def cmd_mc(args) -> int:
    rel = ReliabilityParams(args.pf, args.pc)
    cm = _load_costs(args.costs)
    circuit = _load_circuit(args.circuit)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stats = monte_carlo(
        circuit, cm, rel, algo=args.algo, strategy=args.strategy,
        runs=args.runs, base_seed=args.seed, workers=args.workers,
        keep_samples=not args.no_figures,
    )
    _write_json(str(out_dir / "mc_stats.json"), stats.to_json_dict())
    flat = {
        "runs": stats.runs, "algo": stats.algo, "strategy": stats.strategy,
        "seed": stats.base_seed,
        "mean_trials_per_init": stats.mean_trials_per_init,
        "exhaustion_frequency": stats.exhaustion_frequency,
        "worst_BB": stats.worst_case["BB"],
    }
    for metric in ("T", "S", "BB"):
        for key, value in getattr(stats, metric).items():
            flat[f"{metric}_{key}"] = value
    with (out_dir / "mc_stats.csv").open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(flat))
        writer.writeheader()
        writer.writerow(flat)
    if not args.no_figures:
        from .plots import save_mc_figure

        save_mc_figure(stats, str(out_dir / "mc_hist.png"))
    print(f"{args.runs} runs: mean BB={stats.BB['mean']:.1f} "
          f"(worst case {stats.worst_case['BB']}), "
          f"mean trials/init={stats.mean_trials_per_init:.4f}")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.real:
        mct = parse_real(Path(args.real).read_bytes(), name=Path(args.real).stem)
        mct = decompose_mct(mct)
    else:
        mct = synthetic_mct(args.toffoli, args.width, seed=args.seed)
    skeleton = expand_to_icm_skeleton(
        mct, a_per_toffoli=args.a_per_toffoli,
        internal_cnots_per_toffoli=args.internal_cnots,
        name=args.name,
    )
    Path(args.out).write_bytes(serialize_circuit(skeleton))
    stats = circuit_stats(skeleton)
    print(f"{skeleton.name}: width={stats.width} ops={stats.n_ops} "
          f"A={stats.n_inject_a} Y={stats.n_inject_y} -> {args.out}")
    return EXIT_OK


def cmd_render(args) -> int:
    schedule = parse_schedule(Path(args.schedule).read_bytes())
    Path(args.out).write_bytes(render(schedule, args.format))
    print(f"rendered {args.schedule} -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distillery", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_reliability(p):
        p.add_argument("--pf", type=float, default=0.2, help="per-trial failure probability")
        p.add_argument("--pc", type=float, default=0.001, help="computation failure budget")

    p = sub.add_parser("solve-extra", help="solve the minimal redundancy count")
    p.add_argument("--ni", type=int, default=1, help="initialisations to protect")
    p.add_argument("--online", action="store_true", help="per-request batch size instead")
    add_reliability(p)
    p.set_defaults(func=cmd_solve_extra)

    p = sub.add_parser("schedule", help="schedule one circuit")
    p.add_argument("--circuit", required=True)
    p.add_argument("--algo", choices=["asap", "asap-matrix", "alapt", "alaps"], default="asap")
    p.add_argument("--strategy", choices=["rus", "fixed"], default="rus")
    p.add_argument("--oracle", default="worst",
                   help="worst | stochastic:SEED | scripted:FILE")
    p.add_argument("--rows", type=int, default=1, help="lanes for asap-matrix")
    p.add_argument("--m", type=int, default=None, help="hard wire limit")
    p.add_argument("--no-pool", action="store_true", help="disable success pooling")
    p.add_argument("--costs", default=None, help="cost model JSON (or DISTILLERY_COSTS)")
    p.add_argument("--out", required=True, help="schedule JSON output")
    p.add_argument("--svg", default=None, help="also render an SVG")
    p.add_argument("--report", default=None, help="also write a run report JSON")
    add_reliability(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("bench", help="verify the reference fixture; schedule a corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--corpus", default=None, help="directory of .real files")
    p.add_argument("--costs", default=None)
    p.add_argument("--no-figures", action="store_true")
    add_reliability(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("mc", help="Monte Carlo over stochastic runs")
    p.add_argument("--circuit", required=True)
    p.add_argument("--algo", choices=["asap", "asap-matrix", "alapt", "alaps"], default="alaps")
    p.add_argument("--strategy", choices=["rus", "fixed"], default="rus")
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--costs", default=None)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--no-figures", action="store_true")
    add_reliability(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("gen", help="generate an ICM skeleton circuit")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--real", default=None, help="RevLib .real input")
    group.add_argument("--toffoli", type=int, default=1, help="synthetic Toffoli count")
    p.add_argument("--width", type=int, default=3, help="synthetic data-wire count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--a-per-toffoli", type=int, default=7)
    p.add_argument("--internal-cnots", type=int, default=6)
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("render", help="render an exported schedule")
    p.add_argument("--schedule", required=True)
    p.add_argument("--format", choices=["svg", "ascii"], default="svg")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (CircuitError, RealFormatError, OracleError, json.JSONDecodeError,
            FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
