"""Command-line front end.

Commands: solve (construct a preimage witness for a target matrix), image
(classify the image), verify (brute-force check over a prime field), and
selftest (seeded round trips plus the fixed grid).

Exit codes are a stable contract: 0 success, 1 usage or I/O or parse
problems (including work-cap overruns), 2 target not in the image, 3
internal invariant failure (a bug, please report), 4 verification
mismatch or self-test failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import errors, selfcheck
from .fields import FieldSpec
from .freealg import parse_poly
from .oracle import DEFAULT_CAP, check_theorem
from .solver import image_description, preimage
from .triangular import StrictUT

THREADS_ENV = "UTIMAGE_THREADS"


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    try:
        return int(os.environ.get(THREADS_ENV, "1"))
    except ValueError:
        return 1


def cmd_solve(args) -> int:
    spec = FieldSpec.from_text(args.field)
    poly = parse_poly(args.poly, spec)
    with open(args.target) as handle:
        target = StrictUT.from_json_dict(json.load(handle))
    if target.n != args.n:
        print(
            f"error: target is {target.n} x {target.n}, --n is {args.n}",
            file=sys.stderr,
        )
        return 1
    if target.spec != spec:
        print(
            f"error: target field {target.spec} does not match --field {spec}",
            file=sys.stderr,
        )
        return 1
    trace: dict | None = {} if args.debug else None
    witness = preimage(poly, args.n, target, trace=trace)
    text = selfcheck.canonical_json(
        selfcheck.witness_document(args.poly, args.n, spec, target, witness)
    )
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    if args.debug and trace is not None:
        dump = {}
        if "table" in trace:
            dump["assignment"] = trace["table"].debug_triples()
            dump["systems"] = [s.debug_dict() for s in trace["systems"]]
        print(json.dumps(dump, sort_keys=True), file=sys.stderr)
    return 0


def cmd_image(args) -> int:
    spec = FieldSpec.from_text(args.field)
    poly = parse_poly(args.poly, spec)
    described = image_description(poly, args.n)
    if args.json:
        doc = {"class": described.kind}
        if not described.is_zero:
            doc["level"] = described.level
            doc["dimension"] = described.dimension
        print(json.dumps(doc, sort_keys=True))
    else:
        print(described.describe())
    return 0


def cmd_verify(args) -> int:
    spec = FieldSpec.from_text(args.field)
    if spec.is_rational:
        print("error: verify needs a prime field like gf:2", file=sys.stderr)
        return 1
    poly = parse_poly(args.poly, spec)
    report = check_theorem(
        poly,
        args.n,
        spec.p,
        cap=args.cap,
        workers=_threads(args),
        reduce_bands=args.reduce,
    )
    text = selfcheck.canonical_json(report.json_dict(args.poly, args.n, spec.p))
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.matches else 4


def cmd_selftest(args) -> int:
    failures = []
    fields = [args.field] if args.field else list(selfcheck.TRIAL_FIELDS)
    workers = _threads(args)

    grid_rows = selfcheck.run_grid(workers=workers)
    grid_rows += selfcheck.run_grid(grid=selfcheck.IDENTITY_GRID, workers=workers)
    for poly_text, n, q, report in grid_rows:
        status = "pass" if report.matches else "FAIL"
        print(
            f"grid {status}: {poly_text} n={n} q={q} image={report.image_size} "
            f"expected={report.expected_size} ({report.evaluations} evaluations)"
        )
        if not report.matches:
            failures.append(f"grid poly={poly_text!r} n={n} q={q}")

    for field_text in fields:
        outcomes = selfcheck.run_round_trips(args.seed, field_text, args.trials)
        good = sum(1 for o in outcomes if o.ok)
        print(f"round-trip {field_text}: {good}/{len(outcomes)} pass")
        for outcome in outcomes:
            if not outcome.ok:
                line = f"seed={args.seed} {outcome.reproduction_line()}"
                print(f"  FAIL {line}")
                failures.append(line)

    if failures:
        print(f"selftest: {len(failures)} failure(s)")
        return 4
    print("selftest: all checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="utimage",
        description=(
            "Images and preimage witnesses of multilinear polynomials on "
            "strictly upper triangular matrices, in exact arithmetic."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="construct a witness for a target matrix")
    solve.add_argument("--poly", required=True, help="polynomial text, e.g. 'x1*x2-x2*x1'")
    solve.add_argument("--n", type=int, required=True, help="matrix dimension")
    solve.add_argument("--field", required=True, help="'rational' or 'gf:<p>'")
    solve.add_argument("--target", required=True, help="path to the target matrix JSON")
    solve.add_argument("--out", help="path for the witness JSON (default stdout)")
    solve.add_argument("--debug", action="store_true", help="dump the chosen scalars and band systems to stderr")
    solve.set_defaults(func=cmd_solve)

    image = sub.add_parser("image", help="classify the image")
    image.add_argument("--poly", required=True)
    image.add_argument("--n", type=int, required=True)
    image.add_argument("--field", default="rational")
    image.add_argument("--json", action="store_true")
    image.set_defaults(func=cmd_image)

    verify = sub.add_parser("verify", help="brute-force check over a prime field")
    verify.add_argument("--poly", required=True)
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--field", required=True, help="prime field, e.g. gf:2")
    verify.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max tuple evaluations")
    verify.add_argument("--threads", type=int, default=None, help=f"worker count (default ${THREADS_ENV} or 1)")
    verify.add_argument("--reduce", action="store_true", help="scan only entries that can occur in a degree-m product")
    verify.add_argument("--out", help="path for the report JSON (default stdout)")
    verify.set_defaults(func=cmd_verify)

    selftest = sub.add_parser("selftest", help="fixed grid plus seeded round trips")
    selftest.add_argument("--trials", type=int, default=100)
    selftest.add_argument("--seed", type=int, default=0)
    selftest.add_argument("--field", help="restrict trials to one field")
    selftest.add_argument("--threads", type=int, default=None)
    selftest.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except errors.TargetNotInImage as exc:
        print(f"not in image: {exc}", file=sys.stderr)
        return 2
    except errors.InternalInvariantViolation as exc:
        print(f"internal error (bug): {exc}", file=sys.stderr)
        return 3
    except errors.Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
