"""Command-line front end: validation, solving, separation, generation,
and machine-readable reporting.

All commands print a single JSON document on stdout (diagnostics go to
stderr) and use a fixed exit-code vocabulary:

  0  success
  1  invalid instance
  2  malformed input (unreadable file, bad JSON, bad flags)
  3  infeasible
  4  unbounded
  5  internal limit hit (iterations, nodes)

Minimization instances are handled by negating costs on ingest; reported
objective values are mapped back to the source sense.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .cpdriver import DEFAULT_ITER_LIMIT, solve_by_cuts
from .flowsep import CHECK_TOL, build_flow_instance, check_robust, extract_cut, min_cost_flow
from .model import (
    BandScheme,
    Instance,
    InstanceError,
    NominalProblem,
    SampleSet,
    compute_profile,
    dump_instance,
    instance_violations,
    parse_instance,
)
from .oracle import dev_bruteforce
from .probbound import optimize_t
from .reformulation import build_compact, export_compact
from .robust01 import (
    OracleError,
    load_explicit,
    load_shortest_path,
    load_spanning_tree,
    solve_robust_binary,
)
from .simplexmilp import DEFAULT_NODE_LIMIT, Status, solve_lp, solve_milp

_STATUS_EXIT = {
    Status.OPTIMAL: 0,
    Status.INFEASIBLE: 3,
    Status.UNBOUNDED: 4,
    Status.LIMIT: 5,
}


class CLIError(Exception):
    """A user-facing failure carrying its exit code."""

    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------


def _jsonable(obj):
    """Recursively coerce numpy scalars/arrays and map keys to JSON types."""
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(obj) -> None:
    print(json.dumps(_jsonable(obj), indent=2, sort_keys=True))


def _diag(message: str) -> None:
    print(message, file=sys.stderr)


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, UnicodeDecodeError) as exc:
        raise CLIError(2, f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CLIError(2, f"malformed JSON in {path}: {exc}") from None


def _load_instance(path: str) -> Instance:
    """Read, parse, and fully validate an instance file."""
    inst = parse_instance(_read_json(path))
    problems = instance_violations(inst)
    if problems:
        raise InstanceError("; ".join(problems))
    return inst


def _parse_x(text: str, n: int) -> np.ndarray:
    try:
        x = np.array([float(tok) for tok in text.split(",")], dtype=float)
    except ValueError:
        raise CLIError(2, f"--x must be a comma-separated float list, got {text!r}")
    if x.shape != (n,):
        raise CLIError(2, f"--x has {x.shape[0]} entries, instance has n={n}")
    return x


def _profile_doc(inst: Instance) -> dict:
    prof = compute_profile(inst.scheme, inst.problem.n)
    return {"p": prof.p, "theta": {str(k): prof.theta[k] for k in inst.scheme.bands}}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    data = _read_json(args.instance)
    try:
        inst = parse_instance(data)
    except InstanceError as exc:
        _emit({"valid": False, "violations": [str(exc)]})
        return 1
    problems = instance_violations(inst)
    if problems:
        _emit({"valid": False, "violations": problems})
        return 1
    _emit({"valid": True, "violations": [], "profile": _profile_doc(inst)})
    return 0


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    problem, scheme = inst.problem, inst.scheme

    if args.method == "compact":
        compact = build_compact(problem, scheme)
        if compact.problem.int_vars:
            res = solve_milp(compact.problem, node_limit=args.node_limit)
            stats = {"nodes": res.nodes}
        else:
            res = solve_lp(compact.problem)
            stats = {"pivots": res.pivots}
        stats["columns"] = compact.problem.n
        stats["rows"] = compact.problem.m
        x = None if res.x is None else compact.original_x(res.x)
        status, value = res.status, res.value
    else:
        res = solve_by_cuts(
            problem,
            scheme,
            max_iterations=args.max_iterations,
            node_limit=args.node_limit,
        )
        for entry in res.log:
            _diag(json.dumps(_jsonable(entry), sort_keys=True))
        stats = {
            "iterations": res.iterations,
            "cuts_added": res.cuts_added,
            "log": res.log,
        }
        x, status, value = res.x, res.status, res.value

    doc = {"method": args.method, "status": status.value, "stats": stats}
    if status is Status.OPTIMAL:
        doc["value"] = inst.signed_value(value)
        doc["x"] = x
    _emit(doc)
    return _STATUS_EXIT[status]


def cmd_gen(args) -> int:
    if args.bands < 1 or args.neg_bands < 0:
        raise CLIError(2, "--bands must be >= 1 and --neg-bands >= 0")
    if args.n < 1 or args.m < 1 or args.samples < 0:
        raise CLIError(2, "--n and --m must be >= 1 and --samples >= 0")
    if not 0.0 <= args.density <= 1.0:
        raise CLIError(2, "--density must lie in [0, 1]")
    inst = generate_instance(
        seed=args.seed,
        n=args.n,
        m=args.m,
        bands=args.bands,
        neg_bands=args.neg_bands,
        density=args.density,
        binary=args.binary,
        samples=args.samples,
    )
    _emit(dump_instance(inst))
    return 0


def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    x = _parse_x(args.x, inst.problem.n)
    checks = check_robust(inst.problem, inst.scheme, x, tol=args.tol)
    rows = []
    for rec in checks:
        doc = {"row": rec.row, "lhs": rec.lhs, "slack": rec.slack, "robust": rec.robust}
        if args.exact:
            nominal = float(inst.problem.A[rec.row] @ x)
            if inst.scheme.uncertain_cols(rec.row):
                exact = nominal + dev_bruteforce(x, rec.row, inst.scheme)
            else:
                exact = nominal
            doc["exact_lhs"] = exact
            doc["agrees"] = bool(abs(exact - rec.lhs) <= args.tol)
        rows.append(doc)
    _emit({"robust": all(rec.robust for rec in checks), "rows": rows})
    return 0


def cmd_separate(args) -> int:
    inst = _load_instance(args.instance)
    x = _parse_x(args.x, inst.problem.n)
    cuts = []
    for rec in check_robust(inst.problem, inst.scheme, x, tol=args.tol):
        if rec.robust or not inst.scheme.uncertain_cols(rec.row):
            continue
        flow, _ = min_cost_flow(
            build_flow_instance(inst.problem, inst.scheme, x, rec.row)
        )
        cut = extract_cut(inst.problem, inst.scheme, x, rec.row, flow, tol=args.tol)
        cuts.append(
            {
                "row": cut.row,
                "coeffs": cut.coeffs,
                "rhs": cut.rhs,
                "violation": -rec.slack,
                "scenario": cut.scenario.dev,
            }
        )
    _emit({"robust": not cuts, "cuts": cuts})
    return 0


_LOADERS = {"sp": load_shortest_path, "mst": load_spanning_tree, "explicit": load_explicit}


def cmd_binary_solve(args) -> int:
    inst = _LOADERS[args.oracle](_read_json(args.instance))
    res = solve_robust_binary(inst, prune=args.prune)
    _emit(
        {
            "oracle": args.oracle,
            "value": res.value,
            "x": res.x,
            "w": {str(k): v for k, v in sorted(res.w.items())},
            "nominal_solves": res.nominal_solves,
            "n_combinations": res.n_combinations,
            "n_feasible": res.n_feasible,
            "kept_bands": list(res.kept_bands),
            "alpha": res.alpha,
        }
    )
    return 0


def cmd_bound(args) -> int:
    inst = _load_instance(args.instance)
    if inst.samples is None:
        raise InstanceError("instance has no samples field; bound needs observations")

    if args.x is not None:
        x = _parse_x(args.x, inst.problem.n)
    else:
        compact = build_compact(inst.problem, inst.scheme)
        if compact.problem.int_vars:
            res = solve_milp(compact.problem, node_limit=DEFAULT_NODE_LIMIT)
        else:
            res = solve_lp(compact.problem)
        if res.status is not Status.OPTIMAL:
            _diag(f"robust solve for x* ended {res.status.value}; pass --x explicitly")
            return _STATUS_EXIT[res.status]
        x = compact.original_x(res.x)

    rows = (
        [args.row] if args.row is not None else inst.scheme.rows_with_uncertainty()
    )
    docs = []
    for i in rows:
        if not inst.scheme.uncertain_cols(i):
            raise CLIError(2, f"row {i} has no uncertain coefficients")
        docs.append(
            optimize_t(
                inst,
                i,
                x,
                beta=args.beta,
                t_max=args.tmax,
                grid_size=args.grid,
                variant=args.variant,
            )
        )
    if args.row is not None:
        _emit(docs[0])
    else:
        _emit({"x": x, "rows": docs})
    return 0


def cmd_export_compact(args) -> int:
    inst = _load_instance(args.instance)
    _emit(export_compact(inst))
    return 0


# ---------------------------------------------------------------------------
# generator
# ---------------------------------------------------------------------------


def generate_instance(
    seed: int,
    n: int = 4,
    m: int = 2,
    bands: int = 2,
    neg_bands: int = 0,
    density: float = 0.8,
    binary: bool = False,
    samples: int = 0,
) -> Instance:
    """Random integer-data instance, robust-feasible by construction.

    Each uncertain row gets rhs ``b_i = a_i'1 + DEV_i(1) + slack`` so the
    all-ones point is robust feasible; appended certain box rows
    ``x_j <= U_j`` keep every master bounded.  ``bands`` counts positive
    deviation bands, ``neg_bands`` negative ones; ``binary`` marks all
    variables integer with unit boxes.  Deterministic for a fixed seed.

    With ``samples > 0``, each uncertain coefficient also gets that many
    uniform draws over its supported range, for the probabilistic-bound
    commands.
    """
    if bands < 1:
        raise ValueError("bands must be >= 1")
    rng = np.random.default_rng(seed)
    k_minus, k_plus = -neg_bands, bands

    dev: dict[tuple[int, int], np.ndarray] = {}
    for i in range(m):
        cols = [j for j in range(n) if rng.random() < density]
        if not cols:
            cols = [int(rng.integers(0, n))]
        for j in cols:
            pos = np.cumsum(rng.integers(1, 5, size=k_plus)).astype(float)
            neg = -np.cumsum(rng.integers(1, 5, size=-k_minus)).astype(float)[::-1]
            dev[(i, j)] = np.concatenate([neg, [0.0], pos])

    nb = k_plus - k_minus + 1
    upper = rng.integers(0, n + 1, size=nb)
    upper[-k_minus] = n
    if k_plus >= 1:
        upper[-k_minus + 1] = max(upper[-k_minus + 1], 1)
    lower = np.zeros(nb, dtype=np.int64)
    scheme = BandScheme(k_minus, k_plus, lower, upper, dev)

    c = rng.integers(1, 10, size=n).astype(float)
    A_rows = rng.integers(0, 10, size=(m, n)).astype(float)
    box_bound = 1 if binary else rng.integers(2, 5, size=n)
    A = np.vstack([A_rows, np.eye(n)])
    b = np.empty(m + n)
    ones = np.ones(n)
    for i in range(m):
        b[i] = float(A[i] @ ones) + dev_bruteforce(ones, i, scheme) + float(
            rng.integers(1, 4)
        )
    b[m:] = box_bound

    int_vars = frozenset(range(n)) if binary else frozenset()
    problem = NominalProblem(c=c, A=A, b=b, int_vars=int_vars)

    sample_set = None
    if samples > 0:
        values = {}
        for (i, j), d in sorted(dev.items()):
            lo = A[i, j] + float(d[0])
            hi = A[i, j] + float(d[-1])
            values[(i, j)] = rng.uniform(lo, hi, size=samples)
        sample_set = SampleSet(values)
    return Instance(problem=problem, scheme=scheme, samples=sample_set)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="multiband",
        description="Robust optimization under multi-band uncertainty.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check all instance invariants")
    p.add_argument("instance", help="instance JSON file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="full robust solve")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument(
        "--method",
        choices=("compact", "cutting-plane"),
        default="compact",
        help="robust counterpart construction to use",
    )
    p.add_argument(
        "--node-limit",
        type=int,
        default=DEFAULT_NODE_LIMIT,
        help="branch & bound node cap",
    )
    p.add_argument(
        "--max-iterations",
        type=int,
        default=DEFAULT_ITER_LIMIT,
        help="cutting-plane iteration cap",
    )
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="random feasible instance to stdout")
    p.add_argument("--seed", type=int, required=True, help="RNG seed")
    p.add_argument("--n", type=int, default=4, help="number of variables")
    p.add_argument("--m", type=int, default=2, help="number of uncertain rows")
    p.add_argument("--bands", type=int, default=2, help="positive deviation bands")
    p.add_argument("--neg-bands", type=int, default=0, help="negative deviation bands")
    p.add_argument("--density", type=float, default=0.8, help="uncertain-coefficient density")
    p.add_argument("--binary", action="store_true", help="make all variables binary")
    p.add_argument("--samples", type=int, default=0, help="uniform draws per coefficient")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="worst-case feasibility of a point")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--x", required=True, help="point, comma-separated")
    p.add_argument("--tol", type=float, default=CHECK_TOL, help="violation tolerance")
    p.add_argument(
        "--exact",
        action="store_true",
        help="cross-check each row against brute-force enumeration",
    )
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("separate", help="emit violated cuts at a point")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--x", required=True, help="point, comma-separated")
    p.add_argument("--tol", type=float, default=CHECK_TOL, help="violation tolerance")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("binary-solve", help="robust binary program via candidate sweep")
    p.add_argument("instance", help="graph or explicit-set JSON file")
    p.add_argument(
        "--oracle",
        choices=tuple(_LOADERS),
        required=True,
        help="nominal oracle: shortest path, spanning tree, or explicit set",
    )
    p.add_argument(
        "--prune",
        action="store_true",
        help="skip oracle calls that cannot beat the incumbent",
    )
    p.set_defaults(func=cmd_binary_solve)

    p = sub.add_parser("bound", help="probabilistic violation bound from samples")
    p.add_argument("instance", help="instance JSON file with a samples field")
    p.add_argument("--row", type=int, default=None, help="restrict to one row")
    p.add_argument("--x", default=None, help="point, comma-separated (default: robust optimum)")
    p.add_argument("--beta", type=float, default=0.05, help="mean-estimation failure probability")
    p.add_argument("--tmax", type=float, default=10.0, help="upper end of the t search range")
    p.add_argument("--grid", type=int, default=64, help="geometric grid size for t")
    p.add_argument(
        "--variant",
        choices=("x4", "x2"),
        default="x4",
        help="mean-radius scaling (x4 scales the radius by x_j)",
    )
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("export-compact", help="extended program as instance JSON")
    p.add_argument("instance", help="instance JSON file")
    p.set_defaults(func=cmd_export_compact)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        _diag(f"error: {exc}")
        return exc.code
    except InstanceError as exc:
        _diag(f"error: invalid instance: {exc}")
        return 1
    except OracleError as exc:
        _diag(f"error: {exc}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
