"""Multilinear polynomials in noncommuting variables.

A multilinear polynomial of degree m is a sum over permutations s of
{1..m} of coefficients times the monomial x_{s(1)} * ... * x_{s(m)}, so a
polynomial is stored as a map from permutations to nonzero scalars.

Text grammar (whitespace insignificant, leading '-' permitted)::

    poly   := term (('+' | '-') term)*
    term   := [coeff '*'] factor ('*' factor)*
    factor := 'x' uint
    coeff  := scalar text of the ambient field

Every monomial must contain each of x1..xm exactly once for one common m.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import errors
from .fields import FieldSpec, Scalar
from .triangular import StrictUT


class Permutation:
    """A bijection of {1..m}, stored as the tuple of images of 1..m."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        self.images = images

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(i) = self(other(i))."""
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(inv)

    def fixes(self, j: int) -> bool:
        return self.images[j - 1] == j

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(range(1, m + 1))

    @classmethod
    def transposition(cls, m: int, a: int, b: int) -> "Permutation":
        images = list(range(1, m + 1))
        images[a - 1], images[b - 1] = b, a
        return cls(images)

    @property
    def is_identity(self) -> bool:
        return self.images == tuple(range(1, len(self.images) + 1))

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def symmetric_group(m: int) -> list[Permutation]:
    """All permutations of {1..m} in lexicographic image order."""
    return [Permutation(p) for p in itertools.permutations(range(1, m + 1))]


@dataclass(frozen=True)
class NormalizedPoly:
    """A polynomial rewritten to have coefficient one at the identity.

    ``core`` is the rewritten polynomial, ``scale`` the original nonzero
    coefficient that was divided out, and ``relabel`` the variable
    relabeling that moves witnesses back: for all argument tuples,

        original(b_1, ..., b_m) = scale * core(a_1, ..., a_m)

    whenever b_j = a_{relabel(j)}.
    """

    core: "MultilinearPoly"
    relabel: Permutation
    scale: Scalar

    def transfer(self, args: Sequence) -> tuple:
        """Rearrange arguments for ``core`` into arguments for the original."""
        return tuple(args[self.relabel(j) - 1] for j in range(1, len(args) + 1))


class MultilinearPoly:
    """Degree-m multilinear polynomial in noncommuting variables x1..xm."""

    __slots__ = ("m", "spec", "coeffs")

    def __init__(
        self, m: int, spec: FieldSpec, coeffs: Mapping[Permutation, Scalar]
    ):
        if m < 1:
            raise ValueError(f"degree must be at least 1, got {m}")
        cleaned = {}
        for sigma, value in coeffs.items():
            if sigma.degree != m:
                raise ValueError(f"{sigma} has degree {sigma.degree}, expected {m}")
            if value.spec != spec:
                raise errors.FieldMismatch(f"{value.spec} coefficient in {spec} poly")
            if not value.is_zero:
                cleaned[sigma] = value
        self.m = m
        self.spec = spec
        self.coeffs = cleaned

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, sigma: Permutation) -> Scalar:
        return self.coeffs.get(sigma, self.spec.zero)

    def support(self) -> list[Permutation]:
        return sorted(self.coeffs)

    def positional_part(self, j: int) -> "MultilinearPoly":
        """The sum of monomials whose j-th factor is x1.

        The parts over j = 1..m partition the monomials of the polynomial.
        """
        if not 1 <= j <= self.m:
            raise errors.BadIndex(f"position {j} outside 1..{self.m}")
        return MultilinearPoly(
            self.m,
            self.spec,
            {s: c for s, c in self.coeffs.items() if s(j) == 1},
        )

    def evaluate(self, args: Sequence[StrictUT]) -> StrictUT:
        """Evaluate at a tuple of m strictly upper triangular matrices."""
        if len(args) != self.m:
            raise errors.DimensionMismatch(
                f"expected {self.m} arguments, got {len(args)}"
            )
        n = args[0].n
        for a in args:
            if a.n != n:
                raise errors.DimensionMismatch(f"{a.n} vs {n}")
            if a.spec != self.spec:
                raise errors.FieldMismatch(f"{a.spec} argument in {self.spec} poly")
        total = StrictUT.zero(n, self.spec)
        for sigma, coeff in self.coeffs.items():
            prod = args[sigma(1) - 1]
            for t in range(2, self.m + 1):
                if prod.is_zero:
                    break
                prod = prod * args[sigma(t) - 1]
            if not prod.is_zero:
                total = total + prod.scaled(coeff)
        return total

    def normalize(self) -> NormalizedPoly:
        """Divide out a nonzero coefficient and relabel variables so the
        identity monomial has coefficient one.

        The chosen monomial is the lexicographically least permutation with
        a nonzero coefficient, which makes the result deterministic.
        """
        if self.is_zero:
            raise errors.ZeroPolynomial("cannot normalize the zero polynomial")
        sigma0 = min(self.coeffs)
        scale = self.coeffs[sigma0]
        relabel = sigma0.inverse()
        core = {
            relabel.compose(sigma): coeff / scale
            for sigma, coeff in self.coeffs.items()
        }
        return NormalizedPoly(MultilinearPoly(self.m, self.spec, core), relabel, scale)

    def is_identity_on(self, n: int) -> bool:
        """Whether the polynomial vanishes identically on strictly upper
        triangular n x n matrices.

        True exactly for the zero polynomial or when m >= n (any product
        of n strictly upper triangular factors is zero); for m < n the
        substitution x_j -> unit(j, j+1) produces a nonzero value.
        """
        if n < 2:
            raise errors.BadIndex(f"dimension {n} below 2")
        return self.is_zero or self.m >= n

    def __eq__(self, other):
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return (
            self.m == other.m
            and self.spec == other.spec
            and self.coeffs == other.coeffs
        )

    def to_text(self) -> str:
        """Canonical text form, reparseable except for the zero polynomial."""
        if self.is_zero:
            return "0"
        pieces = []
        for sigma in self.support():
            coeff = self.coeffs[sigma]
            mono = "*".join(f"x{sigma(t)}" for t in range(1, self.m + 1))
            if self.spec.is_rational and coeff.value < 0:
                sign, body = "-", (-coeff)
            else:
                sign, body = "+", coeff
            text = mono if body.is_one else f"{body.to_text()}*{mono}"
            if not pieces:
                pieces.append(text if sign == "+" else "-" + text)
            else:
                pieces.append(f" {sign} {text}")
        return "".join(pieces)

    def __repr__(self):
        return f"MultilinearPoly({self.to_text()!r}, {self.spec})"


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\d+)|([*+/-]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            if text[pos:].strip() == "":
                break
            raise errors.ParseError(f"unexpected character at {text[pos:]!r}")
        if match.group(1) is not None:
            tokens.append(("var", int(match.group(2))))
        elif match.group(3) is not None:
            tokens.append(("num", match.group(3)))
        else:
            tokens.append(("op", match.group(4)))
        pos = match.end()
    return tokens


def parse_poly(text: str, spec: FieldSpec) -> MultilinearPoly:
    """Parse polynomial text over the given field.

    Like monomials are combined and zero sums dropped, so cancellation can
    yield the zero polynomial (empty coefficient map); callers that need a
    nonzero polynomial must check ``is_zero`` themselves.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise errors.ParseError("empty polynomial")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def parse_coeff() -> Scalar:
        kind, first = take()
        assert kind == "num"
        if peek() == ("op", "/"):
            if not spec.is_rational:
                raise errors.ParseError("'/' in a prime-field coefficient")
            take()
            kind, denom = take()
            if kind != "num":
                raise errors.ParseError("expected digits after '/'")
            return spec.parse(f"{first}/{denom}")
        return spec.parse(first)

    def parse_term() -> tuple[Scalar, list[int]]:
        coeff = spec.one
        # Rational scalar text carries its sign on the numerator, so a term
        # may open with a signed coefficient like -2/3.
        if (
            spec.is_rational
            and peek() in (("op", "+"), ("op", "-"))
            and pos + 1 < len(tokens)
            and tokens[pos + 1][0] == "num"
        ):
            if take() == ("op", "-"):
                coeff = -coeff
        if peek()[0] == "num":
            coeff = coeff * parse_coeff()
            if take() != ("op", "*"):
                raise errors.ParseError("expected '*' after a coefficient")
        variables = []
        while True:
            kind, value = take()
            if kind != "var":
                raise errors.ParseError("expected a variable like x1")
            variables.append(value)
            if peek() == ("op", "*"):
                take()
                continue
            return coeff, variables

    monomials: list[tuple[Scalar, list[int]]] = []
    sign = spec.one
    if peek() in (("op", "+"), ("op", "-")):
        if take() == ("op", "-"):
            sign = -sign
    while True:
        coeff, variables = parse_term()
        monomials.append((sign * coeff, variables))
        kind, value = peek()
        if kind is None:
            break
        if (kind, value) not in (("op", "+"), ("op", "-")):
            raise errors.ParseError(f"unexpected token {value!r}")
        take()
        sign = spec.one if value == "+" else -spec.one

    degree = len(monomials[0][1])
    coeffs: dict[Permutation, Scalar] = {}
    for coeff, variables in monomials:
        if sorted(variables) != list(range(1, len(variables) + 1)):
            raise errors.NotMultilinear(
                f"monomial variables {variables} are not x1..x{len(variables)} "
                "exactly once each"
            )
        if len(variables) != degree:
            raise errors.InconsistentDegree(
                f"monomial of degree {len(variables)} in a degree-{degree} polynomial"
            )
        sigma = Permutation(variables)
        total = coeffs.get(sigma, spec.zero) + coeff
        if total.is_zero:
            coeffs.pop(sigma, None)
        else:
            coeffs[sigma] = total
    return MultilinearPoly(degree, spec, coeffs)
