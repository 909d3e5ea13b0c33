"""Preimage construction and image classification.

The image of a nonzero degree-m multilinear polynomial on strictly upper
triangular n x n matrices is {0} when m >= n and the whole level-(m-1)
band otherwise.  The constructive direction works one diagonal at a time:
fix the arguments for x_2..x_m to the superdiagonal matrices produced by
the witness module, leave x_1 unknown and supported on the single diagonal
that multiplies up to the target diagonal, and read off a banded linear
system whose diagonal pivots are that module's nonzero pivot sums.  Each
system is solved by back-substitution with the free tail set to zero, and
the per-diagonal solutions add up to the first argument of the witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import errors
from .fields import Scalar
from .freealg import MultilinearPoly
from .triangular import StrictUT, band_decompose
from .witness import PivotValues, witness_scalars


@dataclass
class BandSystem:
    """Linear system tying the unknown diagonal of x_1 to one target diagonal.

    Row k (1-based, k = 1..rows) is the equation for target entry
    (k, k + diagonal_index - 1); column s is the unknown entry of x_1 at
    (s, s + diagonal_index - degree).  The matrix is banded: row k is
    supported on columns k..k + degree - 1, and its diagonal coefficient
    is a nonzero pivot sum.
    """

    diagonal_index: int
    degree: int
    rows: int
    cols: int
    matrix: list[list[Scalar]]
    rhs: list[Scalar] | None = None

    def coeff(self, k: int, s: int) -> Scalar:
        """1-based access to the system matrix."""
        return self.matrix[k - 1][s - 1]

    def debug_dict(self) -> dict:
        doc = {
            "diagonal": self.diagonal_index,
            "matrix": [[v.to_text() for v in row] for row in self.matrix],
        }
        if self.rhs is not None:
            doc["rhs"] = [v.to_text() for v in self.rhs]
        return doc


@dataclass(frozen=True)
class WitnessTuple:
    """An argument tuple whose evaluation equals the requested target."""

    matrices: tuple[StrictUT, ...]

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)


@dataclass(frozen=True)
class ImageClass:
    """Image of a polynomial on the strictly upper triangular algebra:
    either {0} or the full band at level m - 1."""

    kind: str  # "zero" | "band"
    level: int | None = None
    dimension: int = 0

    @classmethod
    def zero(cls) -> "ImageClass":
        return cls("zero")

    @classmethod
    def band(cls, m: int, n: int) -> "ImageClass":
        return cls("band", m - 1, (n - m) * (n - m + 1) // 2)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def describe(self) -> str:
        if self.is_zero:
            return "Zero"
        return f"Band({self.level}), dim {self.dimension}"


def image_description(f: MultilinearPoly, n: int) -> ImageClass:
    """Classify the image on strictly upper triangular n x n matrices."""
    if n < 2:
        raise errors.BadIndex(f"dimension {n} below 2")
    if f.is_zero or f.m >= n:
        return ImageClass.zero()
    return ImageClass.band(f.m, n)


def band_system(
    core: MultilinearPoly,
    n: int,
    i: int,
    fixed_args: list[StrictUT],
    pivots: PivotValues,
) -> BandSystem:
    """Assemble the system for target diagonal ``i`` (entries (k, k+i-1)).

    Column s is read off by evaluating the polynomial at the unit matrix
    with a one at (s, s + i - m) in the first slot and the fixed arguments
    in the rest; linearity in the first slot makes the columns add up to
    the full evaluation.  The assembled matrix is checked against the band
    shape and its diagonal against the independently computed pivots, so a
    bookkeeping slip fails loudly here instead of corrupting a witness.
    """
    m = core.m
    if not m + 1 <= i <= n:
        raise errors.BadIndex(f"diagonal index {i} outside {m + 1}..{n}")
    rows = n - i + 1
    cols = n - i + m
    spec = core.spec
    zero = spec.zero
    matrix = [[zero] * cols for _ in range(rows)]
    for s in range(1, cols + 1):
        basis = StrictUT.unit(n, spec, s, s + i - m)
        value = core.evaluate([basis] + fixed_args)
        for (p, q), v in value.entries.items():
            if q - p != i - 1 or p > rows:
                raise errors.InternalInvariantViolation(
                    f"column {s} evaluation has an entry off diagonal {i}"
                )
            matrix[p - 1][s - 1] = v
    for k in range(1, rows + 1):
        for s in range(1, cols + 1):
            if not k <= s <= k + m - 1 and not matrix[k - 1][s - 1].is_zero:
                raise errors.InternalInvariantViolation(
                    f"nonzero coefficient outside the band at row {k}, col {s}"
                )
        if matrix[k - 1][k - 1] != pivots.at(k + i - m - 1):
            raise errors.CoefficientMismatch(
                f"diagonal coefficient of row {k} disagrees with pivot "
                f"{k + i - m - 1}"
            )
    return BandSystem(i, m, rows, cols, matrix)


def solve_band(system: BandSystem) -> list[Scalar]:
    """Solve a band system exactly by back-substitution.

    The tail unknowns beyond the last equation are free; they are set to
    zero, then rows are solved from the last upward, dividing by the
    nonzero diagonal pivot.
    """
    if system.rhs is None:
        raise errors.BadLength("system has no right-hand side")
    if len(system.rhs) != system.rows:
        raise errors.BadLength(
            f"right-hand side has {len(system.rhs)} values, expected {system.rows}"
        )
    spec = system.matrix[0][0].spec
    ys = [spec.zero] * system.cols
    for k in range(system.rows, 0, -1):
        acc = system.rhs[k - 1]
        for s in range(k + 1, min(k + system.degree - 1, system.cols) + 1):
            acc = acc - system.coeff(k, s) * ys[s - 1]
        ys[k - 1] = acc / system.coeff(k, k)
    return ys


def _zero_tuple(f: MultilinearPoly, n: int) -> WitnessTuple:
    zero = StrictUT.zero(n, f.spec)
    return WitnessTuple(tuple(zero for _ in range(f.m)))


def _check_band_target(target: StrictUT, m: int) -> None:
    if target.band_member(min(m - 1, target.n - 1)):
        return
    row, col = min((r, c) for r, c in target.entries if c - r <= m - 1)
    raise errors.TargetNotInImage(
        f"target entry ({row}, {col}) = {target.get(row, col).to_text()} sits "
        f"at distance {col - row} from the diagonal, inside the zero band "
        f"(distance <= {m - 1})"
    )


def preimage(
    f: MultilinearPoly, n: int, target: StrictUT, trace: dict | None = None
) -> WitnessTuple:
    """Construct matrices X_1..X_m with f(X_1, ..., X_m) = target.

    Raises TargetNotInImage when the target is unreachable (nonzero while
    m >= n, or with entries inside the zero band).  The returned tuple is
    always re-evaluated against the target before being returned; pass a
    dict as ``trace`` to capture the intermediate table, pivots, and band
    systems.
    """
    if f.is_zero:
        raise errors.ZeroPolynomial("no preimages for the zero polynomial")
    if target.n != n:
        raise errors.DimensionMismatch(f"target is {target.n} x {target.n}, not {n}")
    if target.spec != f.spec:
        raise errors.FieldMismatch(f"{target.spec} target for {f.spec} polynomial")
    m = f.m
    norm = f.normalize()
    if trace is not None:
        trace["normalized"] = norm
    if m >= n:
        if not target.is_zero:
            raise errors.TargetNotInImage(
                f"degree {m} >= dimension {n}: every value is zero"
            )
        return _zero_tuple(f, n)
    _check_band_target(target, m)
    if target.is_zero:
        return _zero_tuple(f, n)
    scaled_target = target.scaled(norm.scale.inv())
    if m == 1:
        # Degree one is direct: f = scale * x1.
        witness = (scaled_target,)
    else:
        table, pivots = witness_scalars(norm.core, n)
        fixed_args = [table.diagonal_matrix(var) for var in range(2, m + 1)]
        first_slot = StrictUT.zero(n, f.spec)
        systems = []
        for part in band_decompose(scaled_target, m):
            system = band_system(norm.core, n, part.index, fixed_args, pivots)
            system.rhs = list(part.values)
            ys = solve_band(system)
            first_slot = first_slot + StrictUT.from_entries(
                n,
                f.spec,
                [
                    (s, s + part.index - m, y)
                    for s, y in enumerate(ys, start=1)
                    if not y.is_zero
                ],
            )
            systems.append(system)
        if trace is not None:
            trace["table"] = table
            trace["pivots"] = pivots
            trace["systems"] = systems
        witness = norm.transfer([first_slot] + fixed_args)
    if f.evaluate(witness) != target:
        raise errors.PostconditionViolation(
            "constructed witness does not evaluate to the target"
        )
    return WitnessTuple(tuple(witness))
