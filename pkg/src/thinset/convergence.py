"""Convergence evidence for ||a_n*x|| -> 0 (pointwise and ideal-wise) and
weighted summability reports.

A prefix of a sequence can never prove its limit, so Member/NotMember verdicts
are produced only from structural certificates:

* terminating: some a_m*x is an integer and every later a_n is a multiple
  of a_m, so the norms vanish from m on;
* periodic recurrence: for rational x and a multiplicatively generated (a_n),
  the residues a_n*x mod 1 fall into an exact cycle, and a cycle value with
  positive norm recurs along an arithmetic progression;
* support rule: the nonzero-digit index set of x lies in the ideal and all
  its integer shifts do too.

Everything else is reported as Inconclusive together with the prefix trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .core import (CircleRational, DigitExpansion, RatInterval, SIN_UPPER,
                   _norm_range, reconstruct, reconstruct_exact, support)
from .ideals import (IdealDescriptor, Outcome, Progression, SetDescriptor,
                     UnionSet, Verdict, ideal_member, translation_invariant_in)
from .sequences import (ArithmeticTerms, TermSequence, multiplier_chain,
                        phase_period)

DEFAULT_DEPTH = 100_000
DEFAULT_EPS_GRID = (Fraction(1, 4), Fraction(1, 8), Fraction(1, 16), Fraction(1, 64))
_CYCLE_STATE_CAP = 400_000

PointLike = Union[CircleRational, DigitExpansion]


# ---------------------------------------------------------------------------
# Residue machinery for rational x
# ---------------------------------------------------------------------------

def _residues(num: int, den: int, terms: TermSequence, depth: int):
    """Yield (n, t_n) with t_n = a_n*num mod den, incrementally when possible."""
    chain = multiplier_chain(terms)
    if chain is not None:
        first, mult = chain
        t = (first % den) * num % den
        n = 1
        while n <= depth:
            yield n, t
            t = t * mult(n) % den
            n += 1
    else:
        for n in range(1, depth + 1):
            yield n, terms.term(n) * num % den


@dataclass(frozen=True)
class _Cycle:
    mu: int                 # first index inside the cycle
    period: int
    norms: tuple[Fraction, ...]   # ||a_n x|| for n = mu .. mu+period-1


def _detect_cycle(num: int, den: int, terms: TermSequence) -> Optional[_Cycle]:
    period = phase_period(terms)
    if period is None or den * period > _CYCLE_STATE_CAP:
        return None
    chain = multiplier_chain(terms)
    if chain is None:
        return None
    first, mult = chain
    seen: dict[tuple[int, int], int] = {}
    residues: list[int] = []
    t = (first % den) * num % den
    n = 1
    while True:
        state = (t, (n - 1) % period)
        if state in seen:
            mu = seen[state]
            cyc = residues[mu - 1:n - 1]
            norms = tuple(Fraction(min(r, den - r), den) for r in cyc)
            return _Cycle(mu, len(cyc), norms)
        seen[state] = n
        residues.append(t)
        t = t * mult(n) % den
        n += 1


def _terminating_index(num: int, den: int, terms: TermSequence,
                       scan: int) -> Optional[int]:
    """Least m with a_m*x integral, valid as a certificate for multiplicative
    chains (later terms are multiples of a_m)."""
    if multiplier_chain(terms) is None:
        return None
    for n, t in _residues(num, den, terms, scan):
        if t == 0:
            return n
    return None


# ---------------------------------------------------------------------------
# Convergence reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsilonStats:
    eps: Fraction
    exceptional_count: int
    last_exceptional: Optional[int]
    prefix_density: Fraction
    definite_only: bool = False


@dataclass(frozen=True)
class ConvergenceReport:
    depth: int
    stats: tuple[EpsilonStats, ...]     # sorted by decreasing eps
    verdict: Verdict

    def __post_init__(self):
        # exceptional sets are nested downward in eps
        counts = [s.exceptional_count for s in self.stats]
        if counts != sorted(counts):
            raise ValueError("exceptional counts must grow as eps shrinks")

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "stats": [
                {"eps": str(s.eps), "exceptional_count": s.exceptional_count,
                 "last_exceptional": s.last_exceptional,
                 "prefix_density": str(s.prefix_density),
                 "definite_only": s.definite_only}
                for s in self.stats
            ],
            "verdict": self.verdict.to_json(),
        }


def _exact_eps_stats(num: int, den: int, terms: TermSequence, depth: int,
                     eps_grid: Sequence[Fraction]) -> list[EpsilonStats]:
    grid = sorted(set(Fraction(e) for e in eps_grid), reverse=True)
    counts = [0] * len(grid)
    last: list[Optional[int]] = [None] * len(grid)
    # norm >= eps  <=>  min(t, den-t) * eps_den >= eps_num * den
    thresholds = [(e.numerator * den, e.denominator) for e in grid]
    for n, t in _residues(num, den, terms, depth):
        m = min(t, den - t)
        for i in range(len(grid) - 1, -1, -1):
            lhs, scale = thresholds[i]
            if m * scale >= lhs:
                counts[i] += 1
                last[i] = n
            else:
                break   # grid descends, so failing the smallest remaining
                        # eps rules out all larger ones too
    return [EpsilonStats(grid[i], counts[i], last[i],
                         Fraction(counts[i], depth)) for i in range(len(grid))]


def _enclosure_eps_stats(e: DigitExpansion, terms: TermSequence, depth: int,
                         eps_grid: Sequence[Fraction]) -> list[EpsilonStats]:
    """Definite exceedances for a truncated expansion: the value is only known
    to lie in [x_K, x_K + 1/u_K], so count n only when the whole enclosure of
    ||a_n x|| clears eps."""
    K = e.depth
    assert K is not None
    xk = reconstruct(e, K).frac()
    uk = e.seq.u(K)
    grid = sorted(set(Fraction(ep) for ep in eps_grid), reverse=True)
    counts = [0] * len(grid)
    last: list[Optional[int]] = [None] * len(grid)
    for n in range(1, depth + 1):
        a = terms.term(n)
        w = Fraction(a, uk)
        if w >= Fraction(1, 2):
            break   # enclosures too wide to certify anything further
        h = a * xk
        h -= h.__floor__()
        if h + w > 1:
            continue   # wraps through 0, norm lower bound is 0
        lo = _norm_range(RatInterval(h, h + w)).lo
        for i, ep in enumerate(grid):
            if lo >= ep:
                counts[i] += 1
                last[i] = n
    return [EpsilonStats(grid[i], counts[i], last[i],
                         Fraction(counts[i], depth), definite_only=True)
            for i in range(len(grid))]


def _resolve_exact(x: PointLike) -> Optional[CircleRational]:
    if isinstance(x, CircleRational):
        return x
    if x.depth is None:
        return reconstruct_exact(x)
    return None


def classical_convergence(x: PointLike, terms: TermSequence, depth: int = DEFAULT_DEPTH,
                          eps_grid: Sequence[Fraction] = DEFAULT_EPS_GRID,
                          ) -> ConvergenceReport:
    """Pointwise convergence evidence for ||a_n x|| -> 0."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    exact = _resolve_exact(x)
    if exact is not None:
        stats = _exact_eps_stats(exact.num, exact.den, terms, depth, eps_grid)
        verdict = _classical_verdict(exact, terms, depth)
    else:
        assert isinstance(x, DigitExpansion)
        stats = _enclosure_eps_stats(x, terms, depth, eps_grid)
        definite = max((s.exceptional_count for s in stats), default=0)
        verdict = Verdict(Outcome.INCONCLUSIVE, None,
                          {"note": "truncated expansion, enclosure evidence only",
                           "definite_exceptional": definite})
    return ConvergenceReport(depth, tuple(stats), verdict)


def _classical_verdict(x: CircleRational, terms: TermSequence, depth: int) -> Verdict:
    if x.num == 0:
        return Verdict(Outcome.MEMBER, "zero")
    scan = min(max(depth, x.den + 1), _CYCLE_STATE_CAP)
    cycle = _detect_cycle(x.num, x.den, terms)
    if cycle is not None:
        peak = max(cycle.norms)
        if peak == 0:
            return Verdict(Outcome.MEMBER, "terminating",
                           {"zero_from": cycle.mu})
        return Verdict(Outcome.NOT_MEMBER, "periodic-recurrence",
                       {"cycle_start": cycle.mu, "period": cycle.period,
                        "recurring_norm": peak})
    m = _terminating_index(x.num, x.den, terms, scan)
    if m is not None:
        return Verdict(Outcome.MEMBER, "terminating", {"zero_from": m})
    return Verdict(Outcome.INCONCLUSIVE, None, {"note": "no structural certificate"})


def _exceptional_descriptor(cycle: _Cycle, threshold: Fraction) -> Optional[SetDescriptor]:
    """Progression union covering the cycle positions whose norm >= threshold."""
    parts = [Progression(cycle.mu + j, cycle.period)
             for j, norm in enumerate(cycle.norms) if norm >= threshold]
    if not parts:
        return None
    return parts[0] if len(parts) == 1 else UnionSet(parts)


def membership_by_support(e: DigitExpansion, ideal: IdealDescriptor,
                          cutoff: int = DEFAULT_DEPTH) -> Verdict:
    """Sufficient rule: support in the ideal and shift-invariantly so.

    The rule is one-directional; failure to apply is Inconclusive, never
    NotMember.
    """
    supp = support(e)
    member = ideal_member(ideal, supp, cutoff)
    if member.outcome is Outcome.MEMBER:
        invariant = translation_invariant_in(ideal, supp, cutoff=cutoff)
        if invariant.outcome is Outcome.MEMBER:
            return Verdict(Outcome.MEMBER, "support-rule",
                           {"support_member": member.certificate,
                            "shift_invariance": invariant.certificate})
    return Verdict(Outcome.INCONCLUSIVE, None,
                   {"note": "support rule inapplicable",
                    "support_member": member.outcome.value})


def ideal_convergence(x: PointLike, terms: TermSequence, ideal: IdealDescriptor,
                      depth: int = DEFAULT_DEPTH, eps: Fraction = Fraction(1, 8),
                      ) -> Verdict:
    """Ideal-wise convergence of ||a_n x|| to 0, with exceptional-set evidence."""
    eps = Fraction(eps)
    if isinstance(x, DigitExpansion) and x.symbolic_support is not None \
            and isinstance(terms, ArithmeticTerms) and terms.seq == x.seq:
        by_support = membership_by_support(x, ideal, depth)
        if by_support.outcome is Outcome.MEMBER:
            return by_support
    exact = _resolve_exact(x)
    if exact is not None:
        if exact.num == 0:
            return Verdict(Outcome.MEMBER, "zero")
        stats = _exact_eps_stats(exact.num, exact.den, terms, depth, [eps])[0]
        diagnostics = {
            "eps": eps,
            "exceptional_count": stats.exceptional_count,
            "exceptional_prefix_density": stats.prefix_density,
            "last_exceptional": stats.last_exceptional,
        }
        classical = _classical_verdict(exact, terms, depth)
        if classical.outcome is Outcome.MEMBER:
            # eventual classical convergence survives any free ideal
            diagnostics.update(classical.diagnostics)
            return Verdict(Outcome.MEMBER, classical.certificate, diagnostics)
        if classical.certificate == "periodic-recurrence":
            cycle = _detect_cycle(exact.num, exact.den, terms)
            peak = max(cycle.norms)
            descriptor = _exceptional_descriptor(cycle, min(eps, peak))
            if descriptor is not None:
                in_ideal = ideal_member(ideal, descriptor, depth)
                if in_ideal.outcome is Outcome.NOT_MEMBER:
                    diagnostics["witness_eps"] = min(eps, peak)
                    diagnostics["exceptional_set"] = descriptor.to_json()
                    return Verdict(Outcome.NOT_MEMBER, "periodic-recurrence",
                                   diagnostics)
        return Verdict(Outcome.INCONCLUSIVE, None, diagnostics)
    assert isinstance(x, DigitExpansion)
    stats = _enclosure_eps_stats(x, terms, depth, [eps])[0]
    return Verdict(Outcome.INCONCLUSIVE, None,
                   {"eps": eps, "definite_exceptional": stats.exceptional_count,
                    "exceptional_prefix_density": stats.prefix_density,
                    "note": "truncated expansion, enclosure evidence only"})


# ---------------------------------------------------------------------------
# Weighted summability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightRule:
    """r_n = 1/n**exponent for the power kind (exponent 0 means all ones),
    or a finite explicit list of rationals."""

    kind: str
    exponent: Optional[Fraction] = None
    values: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self):
        if self.kind == "power":
            s = Fraction(self.exponent)
            if s < 0 or s.denominator != 1:
                raise ValueError("power weights use integer exponents >= 0")
            object.__setattr__(self, "exponent", s)
        elif self.kind == "explicit":
            object.__setattr__(self, "values",
                               tuple(Fraction(v) for v in self.values))
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")

    @classmethod
    def harmonic(cls) -> "WeightRule":
        return cls("power", Fraction(1))

    @classmethod
    def power(cls, exponent) -> "WeightRule":
        return cls("power", Fraction(exponent))

    @classmethod
    def explicit(cls, values) -> "WeightRule":
        return cls("explicit", values=tuple(values))

    def value(self, n: int) -> Fraction:
        if self.kind == "power":
            return Fraction(1, n ** self.exponent.numerator)
        if not 1 <= n <= len(self.values):
            raise ValueError(f"no weight stored for index {n}")
        return self.values[n - 1]

    @classmethod
    def parse(cls, text: str) -> "WeightRule":
        text = text.strip()
        if text == "1":
            return cls.power(0)
        if text == "1/n":
            return cls.harmonic()
        if text.startswith("1/n^"):
            return cls.power(Fraction(text[4:]))
        if text.startswith("[") and text.endswith("]"):
            return cls.explicit(Fraction(t) for t in text[1:-1].split(",") if t.strip())
        raise ValueError(f"unrecognized weight spec {text!r}")

    def to_json(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "exponent": str(self.exponent)}
        return {"kind": "explicit", "values": [str(v) for v in self.values]}

    def __str__(self) -> str:
        if self.kind == "power":
            return {0: "1", 1: "1/n"}.get(self.exponent.numerator,
                                          f"1/n^{self.exponent}")
        return "explicit"


@dataclass(frozen=True)
class BlockCheck:
    """Certified enclosure of one block of the weighted upper-envelope sum."""

    index: int
    j_from: int           # block covers j_from < j <= j_to
    j_to: int
    upper_bound: Fraction     # certified >= sum_block r_j*(22/7)*||a_j x||
    lower_bound: Fraction     # certified <= the same sum
    majorant: Fraction
    passed: bool

    def to_json(self) -> dict:
        return {"index": self.index, "from": self.j_from, "to": self.j_to,
                "upper_bound": str(self.upper_bound),
                "lower_bound": str(self.lower_bound),
                "majorant": str(self.majorant), "pass": self.passed}


@dataclass(frozen=True)
class SummabilityReport:
    weights: WeightRule
    depth: int
    norm_sum: Fraction                 # exact sum r_n * ||a_n x||
    checkpoints: tuple[tuple[int, Fraction], ...]
    classification: str                # bounded-evidence | divergent-evidence | inconclusive
    blocks: tuple[BlockCheck, ...] = ()

    def __post_init__(self):
        sums = [s for _, s in self.checkpoints]
        if sums != sorted(sums):
            raise ValueError("partial sums must be nondecreasing")

    @property
    def sin_lower(self) -> Fraction:
        return 2 * self.norm_sum

    @property
    def sin_upper(self) -> Fraction:
        return SIN_UPPER * self.norm_sum

    def to_json(self) -> dict:
        return {
            "weights": self.weights.to_json(),
            "depth": self.depth,
            "norm_sum": str(self.norm_sum),
            "sin_envelope": [str(self.sin_lower), str(self.sin_upper)],
            "checkpoints": [[n, str(s)] for n, s in self.checkpoints],
            "classification": self.classification,
            "blocks": [b.to_json() for b in self.blocks],
        }


DIVERGENCE_RAMP = Fraction(3)
DIVERGENCE_RAMP_DEPTH = 10_000


def nset_partial_sums(x: PointLike, terms: TermSequence, weights: WeightRule,
                      depth: int = DIVERGENCE_RAMP_DEPTH,
                      ramp: Fraction = DIVERGENCE_RAMP) -> SummabilityReport:
    """Exact partial sums of r_n * ||a_n x|| with envelope bracketing."""
    exact = _resolve_exact(x)
    if exact is None:
        raise ValueError("summability needs an exact point "
                         "(rational or finitely supported expansion)")
    num, den = exact.num, exact.den
    marks = sorted({10 ** k for k in range(1, 20) if 10 ** k < depth} | {depth})
    total = Fraction(0)
    checkpoints = []
    mark_iter = iter(marks)
    next_mark = next(mark_iter)
    for n, t in _residues(num, den, terms, depth):
        total += weights.value(n) * Fraction(min(t, den - t), den)
        if n == next_mark:
            checkpoints.append((n, total))
            next_mark = next(mark_iter, depth + 1)
    if num == 0 or total == 0:
        classification = "bounded-evidence"
    elif total >= ramp and depth >= DIVERGENCE_RAMP_DEPTH:
        classification = "divergent-evidence"
    else:
        classification = "inconclusive"
    return SummabilityReport(weights, depth, total, tuple(checkpoints),
                             classification)


def weight_ideal_link(weights: WeightRule, ideal: IdealDescriptor) -> Verdict:
    """Certified answers to: does sum_{n in A} r_n < infinity force A into the
    ideal?  Answers come from a fixed table; anything else is Inconclusive."""
    from .ideals import Geometric as GeometricSet
    if weights.kind != "power":
        return Verdict(Outcome.INCONCLUSIVE, None,
                       {"note": "no certificate for explicit weight lists"})
    s = weights.exponent
    if s == 0:
        # constant weights: finite sums exactly for finite sets, and finite
        # sets belong to every ideal in the catalog
        return Verdict(Outcome.MEMBER, "finite-sums-iff-finite")
    if s > 1:
        return Verdict(Outcome.NOT_MEMBER, "summable-on-everything",
                       {"counterexample": Progression(1, 1).to_json()})
    # now 0 < s <= 1
    if ideal.kind == "density":
        # a set of positive upper density makes sum n**(-s) diverge
        return Verdict(Outcome.MEMBER, "divergence-on-positive-density")
    if ideal.kind == "summable" and ideal.exponent == s:
        return Verdict(Outcome.MEMBER, "definitional")
    if ideal.kind == "fin":
        return Verdict(Outcome.NOT_MEMBER, "infinite-summable-set",
                       {"counterexample": GeometricSet(2).to_json()})
    return Verdict(Outcome.INCONCLUSIVE, None,
                   {"note": f"no table entry for weights {weights} and "
                            f"ideal {ideal.kind}"})
