"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 internal invariant violation,
4 resource limit (an exact search above its size threshold without
``--force-heuristic``).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .analyze import check_stabilizable, generic_controllable_dim, is_structurally_controllable, mdim_bounds
from .attack import (attack_exact, attack_via_reduction, build_min_k_union_instance, min_k_union_via_attack,
                     parse_set_system, reduce_min_k_union_to_attack, solve_min_k_union)
from .errors import AssumptionError, PatternError, SearchLimitError
from .graphcore import build_graph
from .oracle import RANK_TOL, STAB_TOL, cycle_realization, monte_carlo_mdim, stabilizable_dim
from .pattern import check_candidates, dump_system, parse_candidates, parse_system
from .recovery import greedy_recover, recover_exact, recovery_objective

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3
EXIT_LIMIT = 4

log = logging.getLogger("netstab")


class InvariantViolation(RuntimeError):
    pass


def _check(cond, message):
    if not cond:
        raise InvariantViolation(message)


def _read(path):
    data = Path(path).read_bytes()
    return data, {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}


def _on_limit(args):
    return "heuristic" if args.force_heuristic else "raise"


def _mdim_dict(est):
    return {
        "lower": est.lower,
        "upper": est.upper,
        "exact": est.exact,
        "search_exact": est.search_exact,
        "reachable_trank": est.reachable_trank,
        "cycle_packing": [
            {"vertices": list(c), "length": len(c), "parity": "odd" if len(c) % 2 else "even",
             "value": (len(c) + 1) // 2}
            for c in est.cycle_packing
        ],
        "independent_set": sorted(est.independent_set),
        "components": [
            {"vertices": sorted(c.vertices), "lower": c.lower, "upper": c.upper, "trank": c.trank,
             "exact_search": c.exact_search}
            for c in est.components
        ],
    }


# ---------------------------------------------------------------------------
# Commands; each returns (result dict, approximate flag, exit code)

def cmd_analyze(args):
    data, info = _read(args.system)
    pattern = parse_system(data)
    verdict = check_stabilizable(pattern)
    est = mdim_bounds(pattern, args.exact_limit, _on_limit(args))
    graph = build_graph(pattern)
    _check(est.lower <= est.upper <= pattern.n, "m-dim bounds out of order")
    _check(verdict.stabilizable == (est.lower == est.upper == pattern.n),
           "stabilizability verdict disagrees with m-dim bounds")
    result = {
        "n": pattern.n,
        "m": pattern.m,
        "reachable": sorted(graph.reachable),
        "unreachable": sorted(graph.unreachable),
        "stabilizable": verdict.stabilizable,
        "missing_selfloops": sorted(verdict.missing_selfloops),
        "hall_deficiency": verdict.hall_deficiency,
        "deficient_witness": sorted(verdict.deficient_witness) if verdict.deficient_witness else None,
        "structurally_controllable": is_structurally_controllable(pattern),
        "generic_controllable_dim": generic_controllable_dim(pattern),
        "mdim": _mdim_dict(est),
    }
    return [info], result, not (est.exact and est.search_exact), EXIT_OK


def cmd_attack(args):
    data, info = _read(args.system)
    pattern = parse_system(data)
    on_limit = _on_limit(args)
    result = {"budget": args.budget, "method": args.method, "estimator": args.estimator}
    if args.method == "exact":
        res = attack_exact(pattern, args.budget, args.estimator, args.exact_limit, on_limit)
    else:
        res = attack_via_reduction(pattern, args.budget, args.estimator, "exact", args.exact_limit, on_limit)
        system = build_min_k_union_instance(pattern, args.estimator, args.exact_limit, on_limit)
        result["set_system"] = system.to_dict()
        result["base_value"] = system.base_value
    before = mdim_bounds(pattern, args.exact_limit, on_limit).value(args.estimator)
    _check(res.objective <= before, "attack increased m-dim")
    result.update({
        "mdim_before": before,
        "removed": sorted(res.removed),
        "kept": [j for j in range(1, pattern.m + 1) if j not in res.removed],
        "objective": res.objective,
        "clamped": res.clamped,
    })
    return [info], result, res.approximate, EXIT_OK


def cmd_recover(args):
    data, info = _read(args.system)
    cdata, cinfo = _read(args.candidates)
    pattern = parse_system(data)
    cand = parse_candidates(cdata)
    check_candidates(pattern, cand)
    f = recovery_objective(pattern, cand, args.estimator, args.exact_limit, _on_limit(args))
    if args.method == "greedy":
        res = greedy_recover(pattern, cand, args.budget, objective=f)
    else:
        res = recover_exact(pattern, cand, args.budget, objective=f)
    _check(res.final == f(res.chosen), "reported value differs from the objective")
    _check(res.final <= pattern.n, "objective exceeds the state count")
    result = {
        "budget": args.budget,
        "method": args.method,
        "estimator": args.estimator,
        "base": res.base,
        "picks": list(res.picks),
        "pick_labels": [cand.label(j) for j in res.picks],
        "chosen": sorted(res.chosen),
        "trace": list(res.trace),
        "final": res.final,
        "clamped": res.clamped,
    }
    return [info, cinfo], result, res.approximate, EXIT_OK


def cmd_verify(args):
    data, info = _read(args.system)
    pattern = parse_system(data)
    est = mdim_bounds(pattern, args.exact_limit, _on_limit(args))
    report = monte_carlo_mdim(pattern, args.samples, args.seed, args.tol, args.stab_tol)
    expected = generic_controllable_dim(pattern)
    mode = report.modal_rank
    generic_ok = mode == expected and report.rank_histogram[mode] >= 0.95 * report.samples
    violations = sum(1 for d in report.stabdims if d > est.upper)
    attained = report.best_stabdim >= est.lower
    witness_dim = None
    if not attained:
        witness_dim = stabilizable_dim(cycle_realization(pattern, args.seed, est), args.stab_tol, args.tol)
    result = {
        "samples": report.samples,
        "seed": args.seed,
        "tol": args.tol,
        "stab_tol": args.stab_tol,
        "rank_histogram": {str(k): v for k, v in report.rank_histogram.items()},
        "stabdim_histogram": {str(k): v for k, v in report.stabdim_histogram.items()},
        "best_stabdim": report.best_stabdim,
        "modal_rank": mode,
        "generic_controllable_dim": expected,
        "generic_dim_verified": generic_ok,
        "mdim": {"lower": est.lower, "upper": est.upper},
        "sandwich": {
            "upper_violations": violations,
            "lower_attained_by_sampling": attained,
            "witness_stabdim": witness_dim,
        },
    }
    code = EXIT_INVARIANT if violations else EXIT_OK
    return [info], result, not est.exact, code


def cmd_reduce(args):
    data, info = _read(args.sets)
    system = parse_set_system(data)
    if not 0 <= args.keep <= len(system.sets):
        raise PatternError(f"--keep must be in 0..{len(system.sets)}, got {args.keep}")
    pattern, budget = reduce_min_k_union_to_attack(system, args.keep)
    if args.output:
        Path(args.output).write_text(dump_system(pattern) + "\n")
    result = {
        "keep": args.keep,
        "budget": budget,
        "universe": system.universe_size,
        "sets": [sorted(s) for s in system.sets],
        "system": pattern.to_dict(),
        "output": args.output,
    }
    if args.solve:
        via_attack = min_k_union_via_attack(system, args.keep)
        direct = solve_min_k_union(system, args.keep, "exact")
        result["selection"] = list(via_attack)
        result["union_size"] = system.union_size(via_attack)
        result["set_solver_union_size"] = system.union_size(direct)
        _check(result["union_size"] == result["set_solver_union_size"],
               "gadget round trip disagrees with the set solver")
    return [info], result, False, EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "attack": cmd_attack,
    "recover": cmd_recover,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netstab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"netstab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--no-timings", action="store_true", help="omit wall-clock timings from the report")
    common.add_argument("--exact-limit", type=int, default=None,
                        help="vertex limit for exact searches (default: NETSTAB_EXACT_LIMIT or 24/18)")
    common.add_argument("--force-heuristic", action="store_true",
                        help="fall back to heuristics above the exact limit instead of exiting with 4")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="stabilizability verdict and m-dim bounds")
    p.add_argument("system")

    p = sub.add_parser("attack", parents=[common], help="optimal actuator-disabling attack")
    p.add_argument("system")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--method", choices=("exact", "reduction"), default="exact")
    p.add_argument("--estimator", choices=("lower", "upper"), default="lower")

    p = sub.add_parser("recover", parents=[common], help="actuator recovery")
    p.add_argument("system")
    p.add_argument("--candidates", required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--method", choices=("greedy", "exact"), default="greedy")
    p.add_argument("--estimator", choices=("lower", "upper"), default="lower")

    p = sub.add_parser("verify", parents=[common], help="Monte-Carlo check against realizations")
    p.add_argument("system")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=RANK_TOL, help="relative rank tolerance")
    p.add_argument("--stab-tol", type=float, default=STAB_TOL, help="absolute eigenvalue tolerance")

    p = sub.add_parser("reduce", parents=[common], help="embed a Min-k-Union instance as an attack")
    p.add_argument("sets")
    p.add_argument("--keep", type=int, required=True)
    p.add_argument("--output", help="write the gadget system file here")
    p.add_argument("--solve", action="store_true", help="also solve through the gadget and compare")
    return parser


def _render_text(report) -> str:
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for k, v in enumerate(value):
                walk(f"{prefix}[{k}]", v)
        else:
            lines.append(f"{prefix}: {json.dumps(value)}")

    walk("", report)
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.exact_limit is not None and args.exact_limit < 0:
        parser.error("--exact-limit must be non-negative")
    logging.basicConfig(level=logging.WARNING, format="netstab: %(message)s")
    start = time.perf_counter()
    try:
        inputs, result, approximate, code = COMMANDS[args.command](args)
    except (PatternError, AssumptionError, OSError, ValueError) as exc:
        print(f"netstab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SearchLimitError as exc:
        print(f"netstab: resource limit: {exc} (use --force-heuristic)", file=sys.stderr)
        return EXIT_LIMIT
    except InvariantViolation as exc:
        print(f"netstab: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    report = {
        "tool": "netstab",
        "version": __version__,
        "command": args.command,
        "options": {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "format", "no_timings")},
        "inputs": inputs,
        "approximate": bool(approximate),
        "result": result,
    }
    if not args.no_timings:
        report["timings"] = {"total_seconds": round(time.perf_counter() - start, 6)}
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(_render_text(report))
    if code == EXIT_INVARIANT:
        print("netstab: sampled stabilizable dimension exceeds the upper bound", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
