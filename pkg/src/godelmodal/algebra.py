"""Godel algebra over exact rationals: connectives, finite truth sets, embeddings."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

TruthValue = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse "n/d" (lowest terms not required on input) or a bare integer string."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {text!r}") from exc
    if not ZERO <= value <= ONE:
        raise ValueError(f"rational {text!r} outside [0, 1]")
    return value


def format_rational(value: Fraction) -> str:
    """Render a rational as "n/d" in lowest terms, or "0"/"1"-style bare integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def godel_implies(x: Fraction, y: Fraction) -> Fraction:
    """Residuum of min: 1 when x <= y, else y."""
    return ONE if x <= y else y


def godel_neg(x: Fraction) -> Fraction:
    """x -> 0; collapses everything positive to 0."""
    return ONE if x == ZERO else ZERO


@dataclass(frozen=True)
class TruthSet:
    """Finite set of truth values containing 0 and 1, kept sorted ascending."""

    values: tuple[Fraction, ...]

    def __init__(self, values: Iterable[Fraction | int | str]) -> None:
        vals = sorted({Fraction(v) for v in values})
        if not vals or vals[0] != ZERO or vals[-1] != ONE:
            raise ValueError("truth set must contain 0 and 1")
        if vals[0] < ZERO or vals[-1] > ONE:
            raise ValueError("truth set values must lie in [0, 1]")
        object.__setattr__(self, "values", tuple(vals))

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, value: object) -> bool:
        return value in self.values


def round_down(ts: TruthSet, v: Fraction) -> Fraction:
    """Largest member of ts that is <= v."""
    if not ZERO <= v <= ONE:
        raise ValueError(f"value {v} outside [0, 1]")
    return ts.values[bisect_right(ts.values, v) - 1]


def round_up(ts: TruthSet, v: Fraction) -> Fraction:
    """Smallest member of ts that is >= v."""
    if not ZERO <= v <= ONE:
        raise ValueError(f"value {v} outside [0, 1]")
    return ts.values[bisect_left(ts.values, v)]


@dataclass(frozen=True)
class OrderEmbedding:
    """Piecewise-linear strictly increasing bijection of [0, 1] onto itself.

    Breakpoints are (input, output) pairs; the first must be (0, 0) and the
    last (1, 1), with both coordinates strictly increasing in between.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, breakpoints: Iterable[tuple[Fraction | int | str, Fraction | int | str]]) -> None:
        pts = tuple((Fraction(x), Fraction(y)) for x, y in breakpoints)
        if len(pts) < 2 or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
            raise ValueError("breakpoints must run from (0, 0) to (1, 1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 >= x1 or y0 >= y1:
                raise ValueError("breakpoint coordinates must be strictly increasing")
        object.__setattr__(self, "breakpoints", pts)

    @classmethod
    def identity(cls) -> "OrderEmbedding":
        return cls(((ZERO, ZERO), (ONE, ONE)))

    def fixes(self, values: Iterable[Fraction]) -> bool:
        return all(apply_embedding(self, v) == v for v in values)


def apply_embedding(h: OrderEmbedding, v: Fraction) -> Fraction:
    """Evaluate h at v by exact linear interpolation between breakpoints."""
    if not ZERO <= v <= ONE:
        raise ValueError(f"value {v} outside [0, 1]")
    pts = h.breakpoints
    xs = [p[0] for p in pts]
    i = bisect_right(xs, v) - 1
    if i == len(pts) - 1:
        return pts[-1][1]
    (x0, y0), (x1, y1) = pts[i], pts[i + 1]
    return y0 + (y1 - y0) * (v - x0) / (x1 - x0)


def canonical_grid(k: int) -> TruthSet:
    """The evenly spaced truth set {0, 1/k, ..., 1}."""
    if k < 1:
        raise ValueError("grid resolution must be at least 1")
    return TruthSet(Fraction(i, k) for i in range(k + 1))
