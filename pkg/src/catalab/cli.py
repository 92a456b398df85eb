"""Batch experiment runner and report emitter.

One command produces one report.  Reports are deterministic given the config
and seed (the timestamp field is excluded from golden comparisons).  Exit
codes: 0 all checks passed, 1 check failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

import numpy as np

from . import __version__
from . import acceptance as acc
from . import dense as dn
from .cohomology import (
    FiniteAbelianGroup,
    bilinear_cocycle,
    cohomology_group,
    normalize_cocycle,
)
from .models import RegistryError, build_catalyst, build_model
from .pauli import PauliOperator
from .protocols import (
    RecipeError,
    audit_schedule,
    catalyzed_pipeline,
    execute_schedule,
    measurement_prepare_catalyst,
    register_a_matches,
)
from .verify import (
    disorder_parameter,
    fidelity_correlator,
    spt_invariant,
    strong_localization,
    verify_catalysis,
    weak_localization,
)
from .stabilizer import renyi_correlator


class UsageError(Exception):
    pass


def _model_params(args) -> dict:
    params = {}
    for key in ("n", "lx", "ly", "l", "sites"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params


def _envelope(command: str, config: dict, results, passed: bool) -> dict:
    return {
        "tool": "catalab",
        "version": __version__,
        "command": command,
        "config": config,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "results": results,
        "passed": passed,
    }


def _emit(envelope: dict, out: Optional[str], fmt: str, csv_rows=None) -> None:
    payload = json.dumps(envelope, indent=2, sort_keys=True, default=str)
    if out:
        if fmt == "csv":
            if csv_rows is None:
                raise UsageError("csv output is only available for tabular payloads")
            buf = io.StringIO()
            writer = csv.writer(buf)
            for row in csv_rows:
                writer.writerow(row)
            with open(out, "w") as fh:
                fh.write(buf.getvalue())
        else:
            with open(out, "w") as fh:
                fh.write(payload + "\n")
        print(f"{'PASS' if envelope['passed'] else 'FAIL'} report written to {out}")
    else:
        print(payload)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_catalyze(args) -> int:
    bundle = build_model(args.model, **_model_params(args))
    catalyst = build_catalyst(bundle, args.catalyst)
    if args.engine == "stabilizer" and catalyst.engine != "stabilizer":
        raise UsageError(f"catalyst {args.catalyst!r} has no stabilizer realization")
    if args.engine == "dense" and catalyst.engine == "stabilizer":
        if catalyst.mixed:
            raise UsageError("mixed catalysts are verified exactly, not densely")
        catalyst.engine = "dense"
        catalyst.dense_state = dn.stabilizer_to_dense(catalyst.stab)
    report = verify_catalysis(bundle, catalyst)
    envelope = _envelope(
        "catalyze",
        {
            "model": args.model,
            "catalyst": args.catalyst,
            "engine": args.engine,
            "seed": args.seed,
            **_model_params(args),
        },
        report.to_json_dict(),
        report.passed,
    )
    _emit(envelope, args.out, args.format)
    return 0 if report.passed else 1


def cmd_invariant(args) -> int:
    if args.n < 12:
        raise UsageError("the invariant needs a ring of at least 12 sites")
    bundle = build_model(args.model, n=args.n)
    table = spt_invariant(bundle.entangler, bundle.symmetry, args.n)
    payload = table.to_json_dict()
    nontrivial = any(v != 1 for v in table.entries.values())
    envelope = _envelope(
        "invariant",
        {"model": args.model, "n": args.n},
        {**payload, "nontrivial": nontrivial},
        True,
    )
    rows = [["g", "h", "re", "im", "ipower"]]
    for entry in payload["entries"]:
        rows.append([entry["g"], entry["h"], entry["re"], entry["im"], entry.get("ipower")])
    _emit(envelope, args.out, args.format, csv_rows=rows)
    return 0


def cmd_localization(args) -> int:
    bundle = build_model(args.model, n=args.n)
    catalyst = build_catalyst(bundle, args.catalyst)
    if catalyst.engine != "stabilizer":
        raise UsageError("localization diagnostics need a stabilizer catalyst")
    lengths = [int(v) for v in args.lengths.split(",")]
    results = []
    for gen in bundle.symmetry.generators:
        for length in lengths:
            gamma = (0, length - 1)
            if length < 4 * args.radius or (args.n - length) < 4 * args.radius:
                continue
            solver = strong_localization if args.mode == "strong" else weak_localization
            witness = solver(catalyst.stab, gamma, gen.pauli, args.radius)
            results.append(
                {
                    "generator": gen.name,
                    "interval": list(gamma),
                    "radius": args.radius,
                    "witness": None
                    if witness is None
                    else [str(witness[0]), str(witness[1])],
                }
            )
    envelope = _envelope(
        "localization",
        {
            "model": args.model,
            "catalyst": args.catalyst,
            "n": args.n,
            "mode": args.mode,
            "radius": args.radius,
            "lengths": lengths,
        },
        results,
        True,
    )
    _emit(envelope, args.out, args.format)
    return 0


def cmd_correlators(args) -> int:
    bundle = build_model(args.model, **_model_params(args))
    catalyst = build_catalyst(bundle, args.catalyst)
    if catalyst.engine != "stabilizer":
        raise UsageError("correlator diagnostics need a stabilizer catalyst")
    state = catalyst.stab
    results = []
    if bundle.name == "lieb-2d":
        lat = bundle.lattice
        for tag, loop in zip(("dual-loop-h", "dual-loop-v"), lat.dual_loops()):
            w = PauliOperator.z_at(bundle.n, *loop)
            exp, fid = disorder_parameter(state, w)
            results.append(
                {"observable": tag, "expectation": exp, "fidelity": str(fid)}
            )
        string = PauliOperator.x_at(bundle.n, *lat.open_string(lat.lx - 1))
        exp, fid = disorder_parameter(state, string)
        results.append(
            {"observable": "open-string", "expectation": exp, "fidelity": str(fid)}
        )
    else:
        pairs = [(0, 2), (0, 1), (0, 4)]
        for i, j in pairs:
            o_i = PauliOperator.z_at(bundle.n, i)
            o_j = PauliOperator.z_at(bundle.n, j)
            results.append(
                {
                    "observable": f"z{i}-z{j}",
                    "expectation": state.expectation(o_i * o_j),
                    "fidelity": str(fidelity_correlator(state, o_i, o_j)),
                    "renyi2": str(renyi_correlator(state, o_i, o_j, 2)),
                }
            )
    envelope = _envelope(
        "correlators",
        {"model": args.model, "catalyst": args.catalyst, **_model_params(args)},
        results,
        True,
    )
    rows = [["observable", "expectation", "fidelity", "renyi2"]]
    for r in results:
        rows.append(
            [r["observable"], r["expectation"], r["fidelity"], r.get("renyi2", "")]
        )
    _emit(envelope, args.out, args.format, csv_rows=rows)
    return 0


def _measure_prep_worker(item):
    """Top-level worker so process pools can pickle it; merged by index."""
    idx, n, child = item
    rng = np.random.default_rng(child)
    record = measurement_prepare_catalyst(n, rng)
    return idx, {
        "outcomes": list(record.outcomes),
        "parity_even": record.parity_even,
        "parity_odd": record.parity_odd,
        "invariant": record.invariant_under_entangler,
    }


def cmd_measure_prep(args) -> int:
    seeds = np.random.SeedSequence(args.seed).spawn(args.runs)
    items = [(i, args.n, child) for i, child in enumerate(seeds)]
    results: list[Optional[dict]] = [None] * args.runs
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for idx, payload in pool.map(_measure_prep_worker, items):
                results[idx] = payload
    else:
        for item in items:
            idx, payload = _measure_prep_worker(item)
            results[idx] = payload
    all_ok = all(
        r["parity_even"] == 1 and r["parity_odd"] == 1 and r["invariant"]
        for r in results
    )
    envelope = _envelope(
        "measure-prep",
        {"n": args.n, "runs": args.runs, "seed": args.seed, "jobs": args.jobs},
        {"runs": results, "all_valid": all_ok},
        all_ok,
    )
    _emit(envelope, args.out, args.format)
    return 0 if all_ok else 1


def cmd_pipeline(args) -> int:
    bundle = build_model(args.model, **_model_params(args))
    catalyst = build_catalyst(bundle, args.catalyst)
    schedule = catalyzed_pipeline(bundle, catalyst, args.mode)
    audited = audit_schedule(schedule, bundle.symmetry)
    rng = np.random.default_rng(args.seed)
    final, outcomes = execute_schedule(schedule, rng)
    if schedule.ancilla_offset is not None:
        reached = register_a_matches(final, bundle.target, schedule.ancilla_offset)
    else:
        reached = final.same_state(bundle.target)
    passed = audited and reached
    envelope = _envelope(
        "pipeline",
        {
            "model": args.model,
            "catalyst": args.catalyst,
            "mode": args.mode,
            "seed": args.seed,
            **_model_params(args),
        },
        {
            **schedule.to_json_dict(),
            "audited": audited,
            "target_reached": reached,
            "measurement_outcomes": [list(o) for o in outcomes],
        },
        passed,
    )
    _emit(envelope, args.out, args.format)
    return 0 if passed else 1


_GROUPS = {
    "Z2": (2,),
    "Z3": (3,),
    "Z4": (4,),
    "Z2xZ2": (2, 2),
    "Z2xZ4": (2, 4),
    "Z3xZ3": (3, 3),
}


def cmd_cohomology(args) -> int:
    factors = _GROUPS.get(args.group)
    if factors is None:
        raise UsageError(f"unknown group {args.group!r}; known: {sorted(_GROUPS)}")
    group = FiniteAbelianGroup(factors)
    result = cohomology_group(group, args.degree)
    payload = {
        "group": args.group,
        "degree": args.degree,
        "modulus": result.modulus,
        "invariant_factors": list(result.invariant_factors),
        "representatives": [rep.to_json_dict() for rep in result.representatives],
    }
    if args.normalize and args.group == "Z2xZ2" and args.degree == 2:
        nu = normalize_cocycle(bilinear_cocycle(group, 0, 1))
        payload["normalized_entangler_class"] = nu.to_json_dict()
    envelope = _envelope(
        "cohomology", {"group": args.group, "degree": args.degree}, payload, True
    )
    _emit(envelope, args.out, args.format)
    return 0


def cmd_selftest(args) -> int:
    keys = args.criteria.split(",") if args.criteria else None
    results = acc.run_all(keys)
    for result in results:
        print(result.line())
    passed = all(r.passed for r in results)
    envelope = _envelope(
        "selftest",
        {"criteria": keys or "all"},
        [
            {
                "criterion": r.key,
                "title": r.title,
                "passed": r.passed,
                "seconds": round(r.seconds, 3),
                "details": r.details,
            }
            for r in results
        ],
        passed,
    )
    if args.out:
        _emit(envelope, args.out, "json")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catalab",
        description="Exact desk-scale verification of catalyzed transformations "
        "between phases of matter.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sizes(p):
        p.add_argument("--n", type=int, default=None, help="ring size (1D models)")
        p.add_argument("--lx", type=int, default=None)
        p.add_argument("--ly", type=int, default=None)
        p.add_argument("--l", type=int, default=None, help="square torus size")
        p.add_argument("--sites", type=int, default=None, help="cocycle chain sites")

    def add_common(p):
        p.add_argument("--out", default=None, help="report path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("catalyze", help="verify one catalyzed transformation")
    p.add_argument("--model", required=True)
    p.add_argument("--catalyst", required=True)
    p.add_argument("--engine", choices=("auto", "stabilizer", "dense"), default="auto")
    add_sizes(p)
    add_common(p)
    p.set_defaults(fn=cmd_catalyze)

    p = sub.add_parser("invariant", help="entangler invariant table")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    add_common(p)
    p.set_defaults(fn=cmd_invariant)

    p = sub.add_parser("localization", help="symmetry localization witnesses")
    p.add_argument("--model", required=True)
    p.add_argument("--catalyst", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("strong", "weak"), default="strong")
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--lengths", default="4,6,8")
    add_common(p)
    p.set_defaults(fn=cmd_localization)

    p = sub.add_parser("correlators", help="mixed-state correlator diagnostics")
    p.add_argument("--model", required=True)
    p.add_argument("--catalyst", required=True)
    add_sizes(p)
    add_common(p)
    p.set_defaults(fn=cmd_correlators)

    p = sub.add_parser("measure-prep", help="measurement-based catalyst preparation")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    add_common(p)
    p.set_defaults(fn=cmd_measure_prep)

    p = sub.add_parser("pipeline", help="catalyzed preparation schedules")
    p.add_argument("--model", required=True)
    p.add_argument("--catalyst", required=True)
    p.add_argument("--mode", choices=("ancilla", "four-step", "measurement"), default="ancilla")
    add_sizes(p)
    add_common(p)
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("cohomology", help="cohomology groups and representatives")
    p.add_argument("--group", required=True)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--normalize", action="store_true")
    add_common(p)
    p.set_defaults(fn=cmd_cohomology)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--criteria", default=None, help="comma-separated subset, e.g. 1,3,7")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (UsageError, RegistryError, RecipeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
