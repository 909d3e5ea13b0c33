"""Reusable self-verification drivers shared by the CLI and the test suite.

Two layers: a fixed grid of brute-force theorem checks over small prime
fields, and seeded random preimage round trips.  Everything is pinned by
explicit seeds so that a failing case can be replayed from its printed
reproduction line, and witness documents serialize to identical bytes on
identical runs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from . import errors
from .fields import FieldSpec
from .freealg import parse_poly
from .oracle import DEFAULT_CAP, ImageReport, check_theorem
from .sampling import random_band_target, random_poly
from .solver import WitnessTuple, preimage
from .triangular import StrictUT

# Fixed verification grid: (polynomial, n, q, reduce_bands).  The last
# entry's full tuple space is 2^40, far beyond any feasible scan, so it
# runs on the reduced coordinates (sound: dropped entries cannot occur in
# any degree-4 product inside a 5 x 5 matrix).
THEOREM_GRID = [
    ("x1*x2-x2*x1", 3, 2, False),
    ("x1*x2-x2*x1", 3, 3, False),
    ("x1*x2", 4, 2, False),
    ("x1*x2", 4, 3, False),
    ("x1*x2-x2*x1", 4, 2, False),
    ("x1*x2*x3", 4, 2, False),
    ("x1*x2*x3+x2*x1*x3", 4, 2, False),
    ("x1*x2*x3*x4", 5, 2, True),
]

# Degree >= dimension: the polynomial vanishes identically.
IDENTITY_GRID = [
    ("x1*x2*x3", 3, 2, False),
    ("x1*x2*x3", 3, 3, False),
    ("x1*x2-x2*x1", 2, 2, False),
    ("x1*x2-x2*x1", 2, 3, False),
]

TRIAL_FIELDS = ["gf:2", "gf:3", "gf:5", "rational"]


def canonical_json(doc: dict) -> str:
    """One serialization for every emitted document, byte-stable."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def witness_document(
    poly_text: str, n: int, spec: FieldSpec, target: StrictUT, witness: WitnessTuple
) -> dict:
    return {
        "polynomial": poly_text,
        "n": n,
        "field": spec.to_text(),
        "target": target.to_json_dict(),
        "witness": [x.to_json_dict() for x in witness],
        "verified": True,
    }


def run_grid(
    grid=THEOREM_GRID, cap: int = DEFAULT_CAP, workers: int = 1
) -> list[tuple[str, int, int, ImageReport]]:
    """Run check_theorem over a grid; returns (poly, n, q, report) rows."""
    rows = []
    for poly_text, n, q, reduce_bands in grid:
        f = parse_poly(poly_text, FieldSpec.gf(q))
        report = check_theorem(
            f, n, q, cap=cap, workers=workers, reduce_bands=reduce_bands
        )
        rows.append((poly_text, n, q, report))
    return rows


@dataclass
class TrialOutcome:
    """One preimage round trip, with everything needed to replay it."""

    index: int
    field_text: str
    m: int
    n: int
    poly_text: str
    ok: bool
    message: str
    document: dict | None

    def reproduction_line(self) -> str:
        return (
            f"trial={self.index} field={self.field_text} m={self.m} "
            f"n={self.n} poly={self.poly_text!r}: {self.message}"
        )


def _trial_rng(seed: int, field_text: str, index: int) -> random.Random:
    # String seeding hashes with sha512 inside random.seed: stable across
    # processes, unlike hash().
    return random.Random(f"{seed}:{field_text}:{index}")


def run_round_trips(
    seed: int,
    field_text: str,
    trials: int,
    trace_hook=None,
) -> list[TrialOutcome]:
    """Random (f, n, target) preimage round trips over one field.

    Each trial draws a degree in 2..5, a dimension in m+1..8, a nonzero
    polynomial, and a target inside the reachable band, then demands the
    constructed witness evaluate back to the target exactly.
    """
    spec = FieldSpec.from_text(field_text)
    outcomes = []
    for index in range(trials):
        rng = _trial_rng(seed, field_text, index)
        m = rng.randint(2, 5)
        n = rng.randint(m + 1, 8)
        f = random_poly(rng, spec, m)
        target = random_band_target(rng, spec, n, m)
        poly_text = f.to_text()
        trace: dict | None = {} if trace_hook is not None else None
        try:
            witness = preimage(f, n, target, trace=trace)
        except errors.Error as exc:
            outcomes.append(
                TrialOutcome(
                    index, field_text, m, n, poly_text, False, str(exc), None
                )
            )
            continue
        if trace_hook is not None:
            trace_hook(trace)
        ok = f.evaluate(list(witness)) == target
        outcomes.append(
            TrialOutcome(
                index,
                field_text,
                m,
                n,
                poly_text,
                ok,
                "ok" if ok else "witness does not evaluate to the target",
                witness_document(poly_text, n, spec, target, witness),
            )
        )
    return outcomes
