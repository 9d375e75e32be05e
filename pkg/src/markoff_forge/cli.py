"""Command-line front end: per-module runs, prime scans, JSONL logging.

Every invocation appends machine-readable RunRecords to a results file
(JSON lines, one record per line) and prints a human summary to stdout
in the chosen --format.  Exit codes: 0 success, 1 computation error,
2 parameter error, 3 flagged counterexample -- a run that *worked* but
contradicts one of the conjectures under test.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation

import numpy as np

from . import __version__
from .conics import cascade_certify, level_census, rotation_order
from .dioph import BadParameter, count_eq5, cz_bound, eq5_audit, subgroup, unity_audit
from .modmath import modulus, primes_upto
from .orbits import decompose
from .spectral import NotConverged, spectral_gap
from .surface import (
    ModulusTooLarge,
    ResiduePoint,
    SurfaceSpec,
    enumerate_points,
    load_surface_file,
    parse_surface,
)
from .tree import (
    BadPrime,
    check_uniqueness,
    congruence_check,
    primality_census,
    reduction_cover,
    zagier_fit,
)

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2
EXIT_FLAGGED = 3

SCAN_FLOOR = 5
SCAN_CEILING = 10_000


class UsageError(ValueError):
    """Bad parameters detected after argparse (exit code 2)."""


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


@dataclass
class RunRecord:
    """One appended line of the results file."""

    command: str
    params: dict
    payload: object
    version: str = __version__
    timestamp: str = field(default="")
    elapsed_ms: float = 0.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "params": self.params,
                "payload": self.payload,
                "version": self.version,
                "timestamp": self.timestamp,
                "elapsed_ms": self.elapsed_ms,
            },
            sort_keys=True,
            default=_jsonable,
        )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def _append_records(path: str, records: list[RunRecord]) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def _csv_cell(value) -> str:
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True, default=_jsonable)
    return "" if value is None else str(value)


def _render(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, default=_jsonable)
    rows = payload if isinstance(payload, list) else [payload]
    rows = [r if isinstance(r, dict) else {"value": r} for r in rows]
    headers: list[str] = []
    for row in rows:
        for key in row:
            if key not in headers:
                headers.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=headers, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return buf.getvalue().rstrip("\n")


def _big_int(text: str) -> int:
    """Integer argument that tolerates scientific notation like 1e12."""
    try:
        value = Decimal(text)
    except InvalidOperation as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _resolve_surface(args) -> SurfaceSpec:
    if getattr(args, "surface_file", None):
        return load_surface_file(args.surface_file)
    return parse_surface(getattr(args, "surface", None) or "markoff:0")


def _prime_or_usage(p: int, floor: int = 5) -> int:
    if p < floor or not modulus(p).is_prime:
        raise UsageError(f"need a prime >= {floor}, got {p}")
    return p


# --- subcommand bodies -------------------------------------------------
# Each returns (exit_code, payload); scan manages its own records.


def cmd_orbits(args) -> tuple[int, object]:
    spec = _resolve_surface(args)
    report = decompose(spec, args.modulus)
    code = EXIT_OK
    if modulus(args.modulus).is_prime and args.modulus >= 5 and not report.conjecture1:
        code = EXIT_FLAGGED
    return code, report.to_dict()


def _scan_one(task):
    spec, p = task
    try:
        report = decompose(spec, p)
        status = "ok" if report.conjecture1 else "flagged"
        return p, status, report.to_dict()
    except Exception as exc:  # recorded, scan keeps going
        return p, "error", {"error": f"{type(exc).__name__}: {exc}"}


def cmd_scan(args, out_path: str) -> tuple[int, object]:
    if args.start < SCAN_FLOOR or args.stop > SCAN_CEILING:
        raise UsageError(
            f"scan range must lie within [{SCAN_FLOOR}, {SCAN_CEILING}]"
        )
    spec = _resolve_surface(args)
    targets = [p for p in primes_upto(args.stop) if p >= args.start]
    tasks = [(spec, p) for p in targets]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_scan_one, tasks, chunksize=8))
    else:
        outcomes = [_scan_one(t) for t in tasks]

    records = []
    flagged, failed = [], []
    for p, status, payload in outcomes:
        if status == "flagged":
            flagged.append(p)
        elif status == "error":
            failed.append(p)
        records.append(
            RunRecord(
                command="scan",
                params={"surface": spec.label, "prime": p},
                payload=payload,
                timestamp=_now(),
            )
        )
    _append_records(out_path, records)

    summary = {
        "surface": spec.label,
        "start": args.start,
        "stop": args.stop,
        "n_primes": len(targets),
        "n_verified": len(targets) - len(flagged) - len(failed),
        "flagged": flagged,
        "failed": failed,
    }
    if flagged:
        return EXIT_FLAGGED, summary
    if failed:
        return EXIT_COMPUTE, summary
    return EXIT_OK, summary


def cmd_conics(args) -> tuple[int, object]:
    spec = _resolve_surface(args)
    p = _prime_or_usage(args.modulus)
    if args.level is not None:
        desc = rotation_order(p, args.level % p, spec)
        return EXIT_OK, asdict(desc)
    rows = [
        {**asdict(desc), "maximal": maximal}
        for desc, maximal in level_census(spec, p)
    ]
    return EXIT_OK, rows


def cmd_certify(args) -> tuple[int, object]:
    spec = _resolve_surface(args)
    p = _prime_or_usage(args.modulus)
    points = enumerate_points(spec, p)
    keys = points.keys[points.keys != 0]
    if len(keys) == 0:
        raise UsageError(f"no nonzero points on {spec.label} mod {p}")
    rng = np.random.default_rng(args.seed)
    n = min(args.starts, len(keys))
    chosen = rng.choice(keys, size=n, replace=False)
    failures = []
    top_order = 0
    for key in sorted(int(k) for k in chosen):
        steps = cascade_certify(spec, p, ResiduePoint.from_key(key, p), args.depth_limit)
        if steps is None:
            failures.append(list(ResiduePoint.from_key(key, p).as_tuple()))
        else:
            top_order = max(top_order, steps[-1].order)
    payload = {
        "surface": spec.label,
        "p": p,
        "n_starts": n,
        "n_success": n - len(failures),
        "n_failed": len(failures),
        "failures": failures,
        "max_final_order": top_order,
        "seed": args.seed,
    }
    return EXIT_OK, payload


def cmd_eq5(args) -> tuple[int, object]:
    p = _prime_or_usage(args.prime, floor=3)
    if args.b is None and args.d1 is None and args.d2 is None:
        violations = eq5_audit(p)
        payload = {
            "p": p,
            "n_violations": len(violations),
            "violations": [asdict(v) for v in violations],
        }
        code = EXIT_FLAGGED if any(v.kind == "trivial" for v in violations) else EXIT_OK
        return code, payload
    if args.b is None or args.d1 is None or args.d2 is None:
        raise UsageError("give all of --b/--d1/--d2 for a single count, none for an audit")
    h1, h2 = subgroup(p, args.d1), subgroup(p, args.d2)
    n = count_eq5(p, args.b, h1, h2)
    payload = {
        "p": p,
        "b": args.b,
        "d1": args.d1,
        "d2": args.d2,
        "count": n,
        "trivial_bound": 2 * args.d2,
        "cz_bound": cz_bound(args.d1, args.d2, p),
    }
    return EXIT_OK, payload


def cmd_unity(args) -> tuple[int, object]:
    spec = _resolve_surface(args)
    audit = unity_audit(spec, args.max_order)
    nontrivial = [s for s in audit.solutions if not s.trivial]
    payload = {
        "surface": spec.label,
        "max_order": args.max_order,
        "n_values": audit.n_values,
        "n_candidates": audit.n_candidates,
        "n_solutions": len(audit.solutions),
        "n_nontrivial": len(nontrivial),
        "disagreements": audit.disagreements,
        "solutions": [asdict(s) for s in audit.solutions],
    }
    plain_markoff = spec.is_markoff_family() and spec.markoff_level() == 0
    code = EXIT_FLAGGED if (plain_markoff and nontrivial) else EXIT_OK
    return code, payload


def cmd_tree(args) -> tuple[int, object]:
    limit = args.limit
    if limit < 1:
        raise UsageError("--limit must be >= 1")
    if args.check == "census":
        row = zagier_fit([limit])[0] if limit >= 2 else None
        if row is None:
            raise UsageError("census needs --limit >= 2")
        return EXIT_OK, {"check": "census", **asdict(row)}
    if args.check == "primality":
        row = primality_census(limit)
        return EXIT_OK, {"check": "primality", **asdict(row)}
    if args.check == "uniqueness":
        dupes = check_uniqueness(limit)
        code = EXIT_FLAGGED if dupes else EXIT_OK
        return code, {"check": "uniqueness", "limit": limit, "duplicates": dupes}
    if args.check == "congruence":
        if args.prime is None:
            raise UsageError("--check congruence needs --prime")
        hits = congruence_check(limit, args.prime)
        code = EXIT_FLAGGED if hits else EXIT_OK
        return code, {
            "check": "congruence",
            "limit": limit,
            "prime": args.prime,
            "violations": hits,
        }
    if args.check == "cover":
        if args.modulus is None:
            raise UsageError("--check cover needs --modulus")
        q = _prime_or_usage(args.modulus, floor=2)
        fraction = reduction_cover(limit, q)
        return EXIT_OK, {
            "check": "cover",
            "limit": limit,
            "q": q,
            "cover": fraction,
            "full": fraction == 1.0,
        }
    raise UsageError(f"unknown check {args.check!r}")


def cmd_spectral(args) -> tuple[int, object]:
    spec = _resolve_surface(args)
    p = _prime_or_usage(args.prime)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotConverged)
        report = spectral_gap(spec, p, tol=args.tol, max_iter=args.max_iter)
    return EXIT_OK, report.to_dict()


# --- wiring ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markoff-forge",
        description="Orbits, conics, counts and spectra of Markoff-type surfaces mod q.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--out", default="./results.jsonl", help="results file (JSON lines, appended)"
    )
    parser.add_argument(
        "--format", choices=("json", "csv"), default="json", help="stdout format"
    )

    # accepted on either side of the subcommand; SUPPRESS keeps the
    # subparser from clobbering a value parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    def add_surface(sp):
        sp.add_argument("--surface", default=None, help="shorthand markoff:k")
        sp.add_argument("--surface-file", default=None, help="key-value surface file")

    sp = sub.add_parser("orbits", parents=[common], help="orbit decomposition at one modulus")
    sp.add_argument("--modulus", type=int, required=True)
    add_surface(sp)

    sp = sub.add_parser("scan", parents=[common], help="orbit decompositions across a prime range")
    sp.add_argument("--start", type=int, default=SCAN_FLOOR)
    sp.add_argument("--stop", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    add_surface(sp)

    sp = sub.add_parser("conics", parents=[common], help="rotation orders by level")
    sp.add_argument("--modulus", type=int, required=True)
    sp.add_argument("--level", type=int, default=None, help="one level a (default: census)")
    add_surface(sp)

    sp = sub.add_parser("certify", parents=[common], help="cascade certificates from random starts")
    sp.add_argument("--modulus", type=int, required=True)
    sp.add_argument("--starts", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--depth-limit", type=int, default=24)
    add_surface(sp)

    sp = sub.add_parser("eq5", parents=[common], help="subgroup-equation counts and bound audit")
    sp.add_argument("--prime", type=int, required=True)
    sp.add_argument("--b", type=int, default=None)
    sp.add_argument("--d1", type=int, default=None)
    sp.add_argument("--d2", type=int, default=None)

    sp = sub.add_parser("unity", parents=[common], help="roots-of-unity solution search")
    sp.add_argument("--max-order", type=int, default=12)
    add_surface(sp)

    sp = sub.add_parser("tree", parents=[common], help="integral tree censuses and checks")
    sp.add_argument("--limit", type=_big_int, required=True)
    sp.add_argument(
        "--check",
        choices=("census", "primality", "uniqueness", "congruence", "cover"),
        default="census",
    )
    sp.add_argument("--prime", type=int, default=None)
    sp.add_argument("--modulus", type=int, default=None)

    sp = sub.add_parser("spectral", parents=[common], help="spectral gap of the action graph")
    sp.add_argument("--prime", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--max-iter", type=int, default=20000)
    add_surface(sp)

    return parser


_PARAM_KEYS = {
    "orbits": ("modulus", "surface", "surface_file"),
    "scan": ("start", "stop", "jobs", "surface", "surface_file"),
    "conics": ("modulus", "level", "surface", "surface_file"),
    "certify": ("modulus", "starts", "seed", "depth_limit", "surface", "surface_file"),
    "eq5": ("prime", "b", "d1", "d2"),
    "unity": ("max_order", "surface", "surface_file"),
    "tree": ("limit", "check", "prime", "modulus"),
    "spectral": ("prime", "tol", "max_iter", "surface", "surface_file"),
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    params = {k: getattr(args, k) for k in _PARAM_KEYS[args.command]}
    start = time.perf_counter()
    try:
        if args.command == "scan":
            code, payload = cmd_scan(args, args.out)
        else:
            handler = {
                "orbits": cmd_orbits,
                "conics": cmd_conics,
                "certify": cmd_certify,
                "eq5": cmd_eq5,
                "unity": cmd_unity,
                "tree": cmd_tree,
                "spectral": cmd_spectral,
            }[args.command]
            code, payload = handler(args)
    except (UsageError, BadParameter, BadPrime, ModulusTooLarge) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # surface parsing and similar input validation raise bare ValueError
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except Exception as exc:  # computation failed
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    elapsed_ms = 1000.0 * (time.perf_counter() - start)

    if args.command != "scan":  # scan already wrote its per-prime records
        _append_records(
            args.out,
            [
                RunRecord(
                    command=args.command,
                    params=params,
                    payload=payload,
                    timestamp=_now(),
                    elapsed_ms=round(elapsed_ms, 3),
                )
            ],
        )
    print(_render(payload, args.format))
    if code == EXIT_FLAGGED:
        print("flagged: counterexample candidate recorded", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
