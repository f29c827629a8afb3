"""Command-line front end.

Commands: check, bound, delta, optimize, scan, reproduce.  Reports are JSON
with an embedded run manifest; scan emits CSV.  Exit codes: 0 compatible /
success, 1 incompatible / reproduction failure, 2 inconclusive, 64 usage or
malformed input, 70 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .bloch import InputError, Measurement, MeasurementTuple, random_ball_vectors
from .compat import (
    COMPATIBLE,
    INCOMPATIBLE,
    INCONCLUSIVE,
    ntuple_sufficient,
    pairwise_compatible,
    parent_povm_feasible,
    triple_compatible,
)
from .metrics import (
    delta_worst_case,
    delta_worst_case_pairwise,
    ntuple_lower_bound_heuristic,
    pairwise_lower_bound,
    pairwise_sum_lower_bound,
    triple_lower_bound,
)
from .optimize import OptimizerConfig, minimize_delta

EXIT_OK = 0
EXIT_INCOMPATIBLE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_INTERNAL = 70

PAULI = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
SCALED_ORTHOGONAL = (np.array(PAULI) / math.sqrt(2.0)).tolist()


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _manifest(command: str, args) -> dict:
    return {
        "command": command,
        "input": getattr(args, "input", None),
        "inline_m": getattr(args, "m", None),
        "inline_n": getattr(args, "n", None),
        "seed": int(getattr(args, "seed", 0) or 0),
        "output_format": "csv" if command == "scan" else "json",
        "tool_version": __version__,
    }


def _parse_inline(specs: list[str]) -> MeasurementTuple:
    vectors = []
    for s in specs:
        parts = s.split(",")
        if len(parts) != 3:
            raise InputError(f"inline vector {s!r} is not of the form x,y,z")
        try:
            vectors.append([float(p) for p in parts])
        except ValueError as exc:
            raise InputError(f"inline vector {s!r}: {exc}") from exc
    return MeasurementTuple.from_json_dict({"measurements": vectors})


def _load_tuple(args, key: str = "measurements") -> MeasurementTuple:
    if getattr(args, "m", None) and key == "measurements":
        return _parse_inline(args.m)
    if getattr(args, "n", None) and key == "approximations":
        return _parse_inline(args.n)
    if getattr(args, "input", None):
        with open(args.input, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        if key != "measurements":
            if key not in obj:
                raise InputError(f'input file lacks the "{key}" key')
            obj = {"measurements": obj[key]}
        return MeasurementTuple.from_json_dict(obj)
    raise InputError("no input given: use --m/--n inline vectors or --input FILE")


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_check(args) -> int:
    t = _load_tuple(args)
    if args.criterion == "pairwise":
        if t.arity != 2:
            raise InputError("pairwise criterion needs exactly 2 measurements")
        report = pairwise_compatible(t.items[0], t.items[1])
    elif args.criterion == "triple":
        report = triple_compatible(t)
    elif args.criterion == "ntuple":
        report = ntuple_sufficient(t)
    else:
        report = parent_povm_feasible(t)
    _emit({"manifest": _manifest("check", args), **report.to_dict()}, args)
    return {COMPATIBLE: EXIT_OK, INCOMPATIBLE: EXIT_INCOMPATIBLE,
            INCONCLUSIVE: EXIT_INCONCLUSIVE}[report.verdict]


def cmd_bound(args) -> int:
    t = _load_tuple(args)
    if args.kind == "triple":
        report = triple_lower_bound(t)
    elif args.kind == "pairwise-sum":
        report = pairwise_sum_lower_bound(t)
    elif args.kind == "pairwise":
        if t.arity != 2:
            raise InputError("pairwise bound needs exactly 2 measurements")
        report = pairwise_lower_bound(t.items[0], t.items[1])
    else:
        report = ntuple_lower_bound_heuristic(t)
    _emit({"manifest": _manifest("bound", args), **report.to_dict()}, args)
    return EXIT_OK


def cmd_delta(args) -> int:
    M = _load_tuple(args, "measurements")
    N = _load_tuple(args, "approximations")
    if M.arity != N.arity:
        raise InputError("measurement and approximation tuples must have equal arity")
    if M.arity == 3:
        report = delta_worst_case(M, N)
    elif M.arity == 2:
        report = delta_worst_case_pairwise(M, N)
    else:
        raise InputError("delta supports arity 2 or 3")
    _emit({"manifest": _manifest("delta", args), **report.to_dict()}, args)
    return EXIT_OK


def cmd_optimize(args) -> int:
    M = _load_tuple(args)
    cfg = OptimizerConfig(seed=args.seed, starts=args.starts, max_evals=args.max_evals)
    result = minimize_delta(M, cfg)
    _emit({"manifest": _manifest("optimize", args), "config": cfg.to_dict(),
           **result.to_dict()}, args)
    return EXIT_OK


def _scan_row(idx: int, vecs: np.ndarray) -> tuple[str, dict]:
    t = MeasurementTuple.from_vectors(vecs)
    pairs = {}
    for (i, j), name in zip(((0, 1), (0, 2), (1, 2)), ("pair12", "pair13", "pair23")):
        pairs[name] = pairwise_compatible(t.items[i], t.items[j]).margin
    l1 = triple_lower_bound(t).raw_margin
    l2 = pairwise_sum_lower_bound(t).raw_margin
    fields = [str(idx)] + [_fmt(c) for c in vecs.ravel()]
    fields += [_fmt(pairs[k]) for k in ("pair12", "pair13", "pair23")]
    fields += [_fmt(l1), _fmt(l2)]
    info = {"pairs": pairs, "l1_raw": l1, "l2_raw": l2}
    return ",".join(fields), info


def cmd_scan(args) -> int:
    if args.count < 1:
        raise InputError("scan needs --count >= 1")
    rng = np.random.default_rng(args.seed)
    lines = ["idx,m1x,m1y,m1z,m2x,m2y,m2z,m3x,m3y,m3z,pair12,pair13,pair23,l1_raw,l2_raw"]
    triples = []
    if args.include_known:
        triples.append(np.array(SCALED_ORTHOGONAL))
    triples += [random_ball_vectors(rng, 3) for _ in range(args.count)]
    found = 0
    for idx, vecs in enumerate(triples):
        line, info = _scan_row(idx, vecs)
        pairwise_ok = all(v >= -1e-9 for v in info["pairs"].values())
        genuine = info["l1_raw"] > 1e-6
        if pairwise_ok and genuine:
            found += 1
        elif args.filter == "genuine-pairwise-ok":
            continue
        lines.append(line)
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"scan: {found} genuinely incompatible but pairwise-compatible triples "
          f"out of {len(triples)}", file=sys.stderr)
    return EXIT_OK


def _reproduce_rows(perturb: float, cfg: OptimizerConfig) -> list[dict]:
    pauli = MeasurementTuple.from_vectors(PAULI)
    ortho = MeasurementTuple.from_vectors(SCALED_ORTHOGONAL)
    rows = []

    def row(name, computed, expected, tol):
        computed += perturb
        rows.append({
            "name": name,
            "computed": computed,
            "expected": expected,
            "tolerance": tol,
            "pass": abs(computed - expected) <= tol,
        })

    row("pauli_triple_bound", triple_lower_bound(pauli).degree,
        2.0 * math.sqrt(3.0) - 2.0, 1e-9)
    row("pauli_pairwise_sum_bound", pairwise_sum_lower_bound(pauli).degree,
        3.0 * math.sqrt(2.0) - 3.0, 1e-9)
    row("scaled_orthogonal_triple_bound", triple_lower_bound(ortho).degree,
        math.sqrt(6.0) - 2.0, 1e-9)
    pair_degrees = [
        pairwise_lower_bound(ortho.items[i], ortho.items[j]).degree
        for i, j in ((0, 1), (0, 2), (1, 2))
    ]
    row("scaled_orthogonal_pairwise_bounds", max(pair_degrees), 0.0, 1e-9)
    opt = minimize_delta(pauli, cfg)
    row("pauli_optimizer_delta", opt.achieved_delta, 2.0 * math.sqrt(3.0) - 2.0, 1e-4)
    return rows


def cmd_reproduce(args) -> int:
    cfg = OptimizerConfig(seed=args.seed, starts=args.starts, max_evals=args.max_evals)
    rows = _reproduce_rows(args.perturb, cfg)
    ok = all(r["pass"] for r in rows)
    if args.json:
        _emit({"manifest": _manifest("reproduce", args), "results": rows,
               "all_pass": ok}, args)
    else:
        width = max(len(r["name"]) for r in rows)
        for r in rows:
            print(f"{r['name']:<{width}}  computed={r['computed']:.12f}  "
                  f"expected={r['expected']:.12f}  tol={r['tolerance']:g}  "
                  f"{'PASS' if r['pass'] else 'FAIL'}")
        print(f"reproduce: {'all PASS' if ok else 'FAILURES PRESENT'}")
    return EXIT_OK if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qincompat",
        description="Joint measurability and incompatibility degrees of "
                    "unbiased qubit measurement tuples.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, with_n=False):
        p.add_argument("--m", action="append", metavar="X,Y,Z",
                       help="inline Bloch vector (repeatable)")
        if with_n:
            p.add_argument("--n", action="append", metavar="X,Y,Z",
                           help="inline approximating Bloch vector (repeatable)")
        p.add_argument("--input", "-i", help="JSON input file")
        p.add_argument("--output", "-o", help="write the report to this path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true", help="JSON output")

    p = sub.add_parser("check", help="joint-measurability verdict")
    add_io(p)
    p.add_argument("--criterion", choices=("pairwise", "triple", "ntuple", "oracle"),
                   default="triple")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bound", help="analytic incompatibility lower bound")
    add_io(p)
    p.add_argument("--kind", choices=("triple", "pairwise-sum", "pairwise", "ntuple"),
                   default="triple")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("delta", help="closed-form worst-case approximation error")
    add_io(p, with_n=True)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("optimize", help="minimize the error over compatible triples")
    add_io(p)
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--max-evals", type=int, default=50000)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("scan", help="random-triple CSV sweep")
    add_io(p)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--filter", choices=("genuine-pairwise-ok",), default=None)
    p.add_argument("--include-known",
                   action="store_true",
                   help="prepend the known pairwise-compatible genuine triple")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("reproduce", help="recompute the headline reference values")
    add_io(p)
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--max-evals", type=int, default=50000)
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map to the documented code.
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InputError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover
        print(json.dumps({"error": f"internal: {exc}"}), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
