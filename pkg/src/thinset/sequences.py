"""Divisibility-chain sequences u_0=1, u_n = q_1*...*q_n and term generators a_n.

Ratios must satisfy q_1 >= 1 and q_n >= 2 for n >= 2, so the u_n form a
strictly increasing chain from n >= 2 (from n >= 1 when q_1 >= 2) in which
each value divides the next.  All values are arbitrary-precision integers.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable, Optional, Sequence


class ArithmeticSequence:
    """Lazy, memoized u_n chain defined by its ratio function."""

    _U_CHECKPOINT = 4096   # cache one partial product per this many ratios

    def __init__(self, ratio_fn: Callable[[int], int], spec: tuple):
        self._ratio_fn = ratio_fn
        self.spec = spec
        self._u_cache: dict[int, int] = {0: 1}   # sparse: products grow huge

    def __repr__(self) -> str:
        return f"ArithmeticSequence({self.spec!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ArithmeticSequence) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def q(self, n: int) -> int:
        """Ratio q_n for n >= 1.  Computed on demand from the closed form;
        no table is kept, so indices into the billions stay cheap."""
        if n < 1:
            raise ValueError("ratio index must be >= 1")
        qn = self._ratio_fn(n)
        if n == 1 and qn < 1:
            raise ValueError(f"q_1 must be >= 1, got {qn}")
        if n >= 2 and qn < 2:
            raise ValueError(f"q_{n} must be >= 2, got {qn}")
        return qn

    def u(self, n: int) -> int:
        """Partial product u_n, with u_0 = 1.  Sequences with a closed form
        (constant ratio, factorial) bypass the product walk entirely; the
        rest cache values sparsely since a dense table of huge products would
        dominate memory."""
        if n < 0:
            raise ValueError("index must be >= 0")
        if n == 0:
            return 1
        base = self.geometric_base
        if base is not None:
            return base ** n
        if self.spec == ("factorial",):
            import math
            return math.factorial(n)
        cached = self._u_cache.get(n)
        if cached is not None:
            return cached
        start = max(m for m in self._u_cache if m <= n)
        value = self._u_cache[start]
        for r in range(start + 1, n + 1):
            value *= self.q(r)
            if r % self._U_CHECKPOINT == 0:
                self._u_cache[r] = value
        self._u_cache[n] = value
        return value

    # -- constructors -------------------------------------------------

    @classmethod
    def dyadic(cls) -> "ArithmeticSequence":
        return cls(lambda n: 2, ("dyadic",))

    @classmethod
    def factorial(cls) -> "ArithmeticSequence":
        return cls(lambda n: n, ("factorial",))

    @classmethod
    def geometric(cls, base: int) -> "ArithmeticSequence":
        if base < 2:
            raise ValueError("geometric base must be >= 2")
        return cls(lambda n: base, ("geometric", base))

    @classmethod
    def from_ratios(cls, ratios: Sequence[int], cycle: bool = True) -> "ArithmeticSequence":
        ratios = list(ratios)
        if not ratios:
            raise ValueError("ratio list must be nonempty")
        if cycle:
            fn = lambda n: ratios[(n - 1) % len(ratios)]
            return cls(fn, ("ratios", tuple(ratios)))

        def bounded(n: int) -> int:
            if n > len(ratios):
                raise ValueError(f"only {len(ratios)} ratios available, wanted q_{n}")
            return ratios[n - 1]

        return cls(bounded, ("ratios-finite", tuple(ratios)))

    @property
    def geometric_base(self) -> Optional[int]:
        """Base b when u_n = b^n, else None."""
        if self.spec[0] == "geometric":
            return self.spec[1]
        if self.spec == ("dyadic",):
            return 2
        if (self.spec[0] == "ratios" and len(set(self.spec[1])) == 1
                and self.spec[1][0] >= 2):
            return self.spec[1][0]
        return None

    def to_json(self) -> dict:
        kind = self.spec[0]
        if kind in ("ratios", "ratios-finite"):
            return {"kind": kind, "ratios": [str(r) for r in self.spec[1]]}
        if kind == "geometric":
            return {"kind": "geometric", "base": str(self.spec[1])}
        return {"kind": kind}

    @classmethod
    def from_json(cls, doc: dict) -> "ArithmeticSequence":
        kind = doc["kind"]
        if kind == "dyadic":
            return cls.dyadic()
        if kind == "factorial":
            return cls.factorial()
        if kind == "geometric":
            return cls.geometric(int(doc["base"]))
        if kind == "ratios":
            return cls.from_ratios([int(r) for r in doc["ratios"]], cycle=True)
        if kind == "ratios-finite":
            return cls.from_ratios([int(r) for r in doc["ratios"]], cycle=False)
        raise ValueError(f"unknown sequence kind {kind!r}")


def parse_sequence(text: str) -> ArithmeticSequence:
    """Parse a sequence spec: 'dyadic', 'factorial', 'geometric:b' or '[q1,q2,...]'."""
    text = text.strip()
    if text == "dyadic":
        return ArithmeticSequence.dyadic()
    if text == "factorial":
        return ArithmeticSequence.factorial()
    if text.startswith("geometric:"):
        return ArithmeticSequence.geometric(int(text.split(":", 1)[1]))
    if text.startswith("[") and text.endswith("]"):
        ratios = [int(t) for t in text[1:-1].split(",") if t.strip()]
        return ArithmeticSequence.from_ratios(ratios, cycle=True)
    raise ValueError(f"unrecognized sequence spec {text!r}")


class TermSequence:
    """Generator of the multiplier terms a_1 < a_2 < ... (naturals)."""

    def term(self, n: int) -> int:
        raise NotImplementedError

    def terms_upto(self, depth: int) -> Iterable[int]:
        return (self.term(n) for n in range(1, depth + 1))

    def to_json(self) -> dict:
        raise NotImplementedError


class ScaledGeometric(TermSequence):
    """a_n = scale * base**n."""

    def __init__(self, scale: int, base: int):
        if scale < 1 or base < 2:
            raise ValueError("need scale >= 1 and base >= 2")
        self.scale = scale
        self.base = base

    def __repr__(self) -> str:
        return f"ScaledGeometric({self.scale}, {self.base})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, ScaledGeometric)
                and (self.scale, self.base) == (other.scale, other.base))

    def term(self, n: int) -> int:
        return self.scale * self.base ** n

    def to_json(self) -> dict:
        return {"kind": "scaled-geometric", "scale": str(self.scale), "base": str(self.base)}


class ArithmeticTerms(TermSequence):
    """a_n = u_n of an underlying divisibility chain."""

    def __init__(self, seq: ArithmeticSequence):
        self.seq = seq

    def __repr__(self) -> str:
        return f"ArithmeticTerms({self.seq!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ArithmeticTerms) and self.seq == other.seq

    def term(self, n: int) -> int:
        return self.seq.u(n)

    def to_json(self) -> dict:
        return {"kind": "arithmetic", "sequence": self.seq.to_json()}


class ExplicitTerms(TermSequence):
    """a_n from a finite explicit list (1-indexed)."""

    def __init__(self, values: Sequence[int]):
        values = [int(v) for v in values]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("terms must be strictly increasing")
        self.values = values

    def term(self, n: int) -> int:
        if not 1 <= n <= len(self.values):
            raise ValueError(f"term index {n} outside explicit list of {len(self.values)}")
        return self.values[n - 1]

    def to_json(self) -> dict:
        return {"kind": "explicit", "values": [str(v) for v in self.values]}


def multiplier_chain(terms: TermSequence):
    """(a_1, mult) with a_{n+1} = a_n * mult(n) when the terms form a
    multiplicative chain, else None."""
    if isinstance(terms, ScaledGeometric):
        return terms.scale * terms.base, lambda n: terms.base
    if isinstance(terms, ArithmeticTerms):
        seq = terms.seq
        return seq.u(1), lambda n: seq.q(n + 1)
    return None


def phase_period(terms: TermSequence) -> Optional[int]:
    """Period of the multiplier function above, when finite."""
    if isinstance(terms, ScaledGeometric):
        return 1
    if isinstance(terms, ArithmeticTerms):
        spec = terms.seq.spec
        if spec[0] in ("dyadic", "geometric"):
            return 1
        if spec[0] == "ratios":
            return len(spec[1])
    return None


_SCALED_RE = re.compile(r"^(?:(\d+)\s*\*\s*)?(\d+)\^n$")


def parse_terms(text: str, seq: Optional[ArithmeticSequence] = None) -> TermSequence:
    """Parse a term spec: 'c*b^n', 'b^n', 'n!', 'u_n' (needs seq) or '[a1,a2,...]'."""
    text = text.strip()
    m = _SCALED_RE.match(text)
    if m:
        scale = int(m.group(1)) if m.group(1) else 1
        return ScaledGeometric(scale, int(m.group(2)))
    if text == "n!":
        return ArithmeticTerms(ArithmeticSequence.factorial())
    if text in ("u_n", "seq"):
        if seq is None:
            raise ValueError("'u_n' terms need an explicit sequence")
        return ArithmeticTerms(seq)
    if text.startswith("[") and text.endswith("]"):
        return ExplicitTerms([int(t) for t in text[1:-1].split(",") if t.strip()])
    raise ValueError(f"unrecognized term spec {text!r}")


def terms_from_json(doc: dict) -> TermSequence:
    kind = doc["kind"]
    if kind == "scaled-geometric":
        return ScaledGeometric(int(doc["scale"]), int(doc["base"]))
    if kind == "arithmetic":
        return ArithmeticTerms(ArithmeticSequence.from_json(doc["sequence"]))
    if kind == "explicit":
        return ExplicitTerms([int(v) for v in doc["values"]])
    raise ValueError(f"unknown term kind {kind!r}")
