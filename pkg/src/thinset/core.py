"""Exact circle arithmetic: points of [0,1), digit expansions, rational intervals.

Everything is computed over exact rationals; there is no floating point
anywhere.  Mod-1 intervals that cross the 0/1 seam are kept as an explicit
two-part union instead of being widened.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Mapping, Optional, Union

from .sequences import ArithmeticSequence

if TYPE_CHECKING:
    from .ideals import SetDescriptor

SIN_UPPER = Fraction(22, 7)   # rational majorant of pi in the sine envelope


class DomainError(ValueError):
    """Input outside the operation's domain."""


class InsufficientDigitsError(ValueError):
    """A truncated expansion does not hold enough digits for the request."""


RationalLike = Union[int, Fraction, "CircleRational"]


def as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, CircleRational):
        return x.frac()
    return Fraction(x)


@dataclass(frozen=True)
class CircleRational:
    """Reduced rational point of the circle, with value in [0,1)."""

    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise DomainError("denominator must be positive")
        if not 0 <= self.num < self.den:
            raise DomainError("value must lie in [0,1)")
        f = Fraction(self.num, self.den)
        if (f.numerator, f.denominator) != (self.num, self.den):
            raise DomainError("numerator and denominator must be coprime")

    @classmethod
    def from_fraction(cls, x: RationalLike) -> "CircleRational":
        f = as_fraction(x)
        f -= f.__floor__()
        return cls(f.numerator, f.denominator)

    @classmethod
    def parse(cls, text: str) -> "CircleRational":
        return cls.from_fraction(Fraction(text))

    def frac(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


@dataclass(frozen=True)
class RatInterval:
    """Closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: RationalLike) -> bool:
        return self.lo <= as_fraction(x) <= self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def _norm_range(part: RatInterval) -> RatInterval:
    """Range of min({t},1-{t}) over a subinterval of [0,1]."""
    half = Fraction(1, 2)
    lo, hi = part.lo, part.hi
    if hi <= half:
        return RatInterval(lo, hi)
    if lo >= half:
        return RatInterval(1 - hi, 1 - lo)
    return RatInterval(min(lo, 1 - hi), half)


@dataclass(frozen=True)
class CircleInterval:
    """Enclosure of a circle point: one interval, or two when it wraps past 1."""

    parts: tuple[RatInterval, ...]
    wraparound: bool = False

    def within(self, target: RatInterval) -> bool:
        return all(target.contains_interval(p) for p in self.parts)

    def dist_interval(self) -> RatInterval:
        """Enclosure of the nearest-integer distance of the enclosed point."""
        ranges = [_norm_range(p) for p in self.parts]
        return RatInterval(min(r.lo for r in ranges), max(r.hi for r in ranges))


@dataclass(frozen=True)
class DigitExpansion:
    """Digits c_n of x = sum c_n/u_n over a given chain, 0 <= c_n < q_n.

    `depth` is the truncation index; depth=None marks a finitely supported
    exact expansion (all digits beyond the stored ones are zero, so the
    canonical "c_n < q_n - 1 infinitely often" condition holds vacuously).
    Truncations are non-canonical representatives of whatever tail follows.
    Only nonzero digits are stored.
    """

    seq: ArithmeticSequence
    digits: Mapping[int, int]
    depth: Optional[int] = None
    symbolic_support: Optional["SetDescriptor"] = field(default=None, compare=False)

    def __post_init__(self):
        clean = {}
        for n, c in self.digits.items():
            if c == 0:
                continue
            if not 0 < c < self.seq.q(n):
                raise ValueError(f"digit c_{n}={c} outside [0, q_{n})")
            if self.depth is not None and n > self.depth:
                raise ValueError(f"digit index {n} beyond depth {self.depth}")
            clean[n] = c
        object.__setattr__(self, "digits", dict(clean))

    def digit(self, n: int) -> int:
        if self.depth is not None and n > self.depth:
            raise InsufficientDigitsError(
                f"digit {n} requested but expansion is truncated at {self.depth}")
        return self.digits.get(n, 0)

    @property
    def last_index(self) -> int:
        """Largest stored nonzero index (0 when all digits vanish)."""
        return max(self.digits, default=0)

    def to_json(self) -> dict:
        top = self.depth if self.depth is not None else self.last_index
        doc = {
            "sequence": self.seq.to_json(),
            "ratios": [str(self.seq.q(n)) for n in range(1, top + 1)],
            "digits": {str(n): str(c) for n, c in sorted(self.digits.items())},
            "depth": self.depth,
        }
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "DigitExpansion":
        if "sequence" in doc:
            seq = ArithmeticSequence.from_json(doc["sequence"])
        else:
            seq = ArithmeticSequence.from_ratios(
                [int(r) for r in doc["ratios"]], cycle=False)
        digits = {int(n): int(c) for n, c in doc["digits"].items()}
        depth = doc.get("depth")
        return cls(seq, digits, None if depth is None else int(depth))


def expand(x: CircleRational, seq: ArithmeticSequence, depth: int) -> DigitExpansion:
    """Greedy digits: c_1 = floor(u_1*x), c_{k+1} = floor(u_{k+1}*(x - x_k))."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    rem = x.frac()      # x - x_k, kept exactly
    digits = {}
    for n in range(1, depth + 1):
        un = seq.u(n)
        c = int(rem * un)   # < q_n because rem < 1/u_{n-1}
        if c:
            digits[n] = c
            rem -= Fraction(c, un)
    return DigitExpansion(seq, digits, depth)


def reconstruct(e: DigitExpansion, depth: int) -> CircleRational:
    """Exact partial sum x_depth = sum_{n<=depth} c_n/u_n."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if e.depth is not None and depth > e.depth:
        raise InsufficientDigitsError(
            f"depth {depth} exceeds stored depth {e.depth}")
    total = sum((Fraction(c, e.seq.u(n)) for n, c in e.digits.items() if n <= depth),
                Fraction(0))
    return CircleRational.from_fraction(total)


def reconstruct_exact(e: DigitExpansion) -> CircleRational:
    """Full exact value of a finitely supported expansion."""
    if e.depth is not None:
        raise InsufficientDigitsError("expansion is a truncation, exact value unknown")
    return reconstruct(e, max(1, e.last_index))


def support(e: DigitExpansion) -> "SetDescriptor":
    """Indices of nonzero digits; the symbolic set when one was attached."""
    if e.symbolic_support is not None:
        return e.symbolic_support
    from .ideals import FiniteSet
    return FiniteSet(sorted(e.digits))


def dist_to_int(x: RationalLike) -> Fraction:
    """Nearest-integer distance min({x}, 1-{x}), in [0, 1/2]."""
    f = as_fraction(x)
    f -= f.__floor__()
    return min(f, 1 - f)


def mult_mod1(a: int, x: CircleRational) -> CircleRational:
    """Exact {a*x}; the result's denominator divides x's."""
    return CircleRational.from_fraction(a * x.frac())


def tail_bound(seq: ArithmeticSequence, k: int) -> RatInterval:
    """Enclosure [0, 1/u_k] of any admissible digit tail sum_{n>k} c_n/u_n."""
    if k < 1:
        raise DomainError("tail index must be >= 1")
    return RatInterval(Fraction(0), Fraction(1, seq.u(k)))


def frac_scaled(a: int, e: DigitExpansion, k: int) -> CircleInterval:
    """Enclosure of {a*x}: exact head {a*x_k} widened by the tail a/u_k.

    A head+tail span crossing 1 comes back as a wraparound union; a span of
    width >= 1 collapses to the whole circle.
    """
    if a < 1:
        raise DomainError("multiplier must be >= 1")
    head = mult_mod1(a, reconstruct(e, k)).frac()
    w = Fraction(a, e.seq.u(k))
    if w >= 1:
        return CircleInterval((RatInterval(Fraction(0), Fraction(1)),), True)
    hi = head + w
    if hi <= 1:
        return CircleInterval((RatInterval(head, hi),), False)
    return CircleInterval(
        (RatInterval(head, Fraction(1)), RatInterval(Fraction(0), hi - 1)), True)


def sin_envelope(x: RationalLike) -> RatInterval:
    """Rational bracket [2*||x||, (22/7)*||x||] around |sin(pi*x)|."""
    d = dist_to_int(x)
    return RatInterval(2 * d, SIN_UPPER * d)
