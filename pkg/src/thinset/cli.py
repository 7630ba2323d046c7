"""Command-line front end.

One JSON document per invocation on stdout, diagnostics on stderr.
Exit codes: 0 pass/Member, 1 fail/NotMember, 2 Inconclusive, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .convergence import (DEFAULT_DEPTH, WeightRule, classical_convergence,
                          ideal_convergence, nset_partial_sums,
                          weight_ideal_link)
from .core import (CircleRational, DigitExpansion, DomainError, expand,
                   reconstruct, reconstruct_exact)
from .ideals import (Outcome, density_estimate, descriptor_from_json,
                     ideal_member, parse_ideal)
from .sequences import parse_sequence, parse_terms
from .witness import (CertificateFormatError, SequenceNotAbsorbingError,
                      UnsupportedIdealError, WitnessCertificate,
                      build_and_verify, plan_witness, verify_certificate)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64

_OUTCOME_EXIT = {
    Outcome.MEMBER: EXIT_PASS,
    Outcome.NOT_MEMBER: EXIT_FAIL,
    Outcome.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _default_depth(args, fallback: int = DEFAULT_DEPTH) -> int:
    if getattr(args, "depth", None) is not None:
        return args.depth
    env = os.environ.get("THINSET_DEPTH")
    if env:
        try:
            depth = int(env)
        except ValueError:
            raise UsageError(f"THINSET_DEPTH must be an integer, got {env!r}")
        if depth < 1:
            raise UsageError("THINSET_DEPTH must be >= 1")
        return depth
    return fallback


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}")


def _parse_set(args):
    if args.json_in:
        return descriptor_from_json(_load_json(args.json_in))
    if args.set is None:
        raise UsageError("need --set SPEC or --json-in FILE")
    return _set_from_spec(args.set)


def _set_from_spec(text: str):
    """Inline set grammar: 'finite:1,2,3', 'progression:start,step',
    'geometric:b', or a JSON tagged union."""
    from .ideals import FiniteSet, Geometric, Progression
    text = text.strip()
    if text.startswith("{"):
        return descriptor_from_json(json.loads(text))
    if text.startswith("finite:"):
        return FiniteSet([int(t) for t in text[7:].split(",") if t.strip()])
    if text.startswith("progression:"):
        start, step = (int(t) for t in text[12:].split(","))
        return Progression(start, step)
    if text.startswith("geometric:"):
        return Geometric(int(text[10:]))
    raise UsageError(f"unrecognized set spec {text!r}")


def _parse_point(args, seq=None):
    """A point: --x as a rational, or --json-in holding a digit expansion."""
    if getattr(args, "json_in", None):
        return DigitExpansion.from_json(_load_json(args.json_in))
    if args.x is None:
        raise UsageError("need --x RATIONAL or --json-in FILE")
    try:
        return CircleRational.parse(args.x)
    except (ValueError, ZeroDivisionError, DomainError) as exc:
        raise UsageError(f"bad point {args.x!r}: {exc}")


def build_parser() -> _Parser:
    parser = _Parser(prog="thinset")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="digit expansion of a rational")
    p.add_argument("--x", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("reconstruct", help="rational value of a digit expansion")
    p.add_argument("--json-in", required=True)
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("density", help="density estimate of a set")
    p.add_argument("--set")
    p.add_argument("--json-in")
    p.add_argument("--cutoff", type=int, default=None)

    p = sub.add_parser("ideal-member", help="three-valued ideal membership")
    p.add_argument("--ideal", required=True)
    p.add_argument("--set")
    p.add_argument("--json-in")
    p.add_argument("--cutoff", type=int, default=None)

    p = sub.add_parser("converge", help="convergence evidence for ||a_n x|| -> 0")
    p.add_argument("--x")
    p.add_argument("--json-in")
    p.add_argument("--a", required=True)
    p.add_argument("--seq")
    p.add_argument("--ideal")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--eps", default="1/8")

    p = sub.add_parser("nset", help="weighted summability partial sums")
    p.add_argument("--x")
    p.add_argument("--json-in")
    p.add_argument("--a", required=True)
    p.add_argument("--seq")
    p.add_argument("--weights", default="1/n")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--ideal", help="also report the weight/ideal link")

    p = sub.add_parser("witness", help="build and verify a witness certificate")
    p.add_argument("tag", choices=["th6", "th1", "th2"])
    p.add_argument("--seq", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--ideal", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--scan-window", type=int, default=None)
    p.add_argument("--out", help="also write the certificate to this file")

    p = sub.add_parser("verify", help="re-verify a serialized certificate")
    p.add_argument("--json-in", required=True)

    return parser


def run(args) -> int:
    if args.command == "expand":
        seq = parse_sequence(args.seq)
        x = CircleRational.parse(args.x)
        depth = _default_depth(args, 64)
        e = expand(x, seq, depth)
        doc = e.to_json()
        doc["digit_list"] = [e.digit(n) for n in range(1, depth + 1)]
        _emit(doc)
        return EXIT_PASS

    if args.command == "reconstruct":
        e = DigitExpansion.from_json(_load_json(args.json_in))
        if args.depth is not None:
            x = reconstruct(e, args.depth)
        elif e.depth is not None:
            x = reconstruct(e, e.depth)
        else:
            x = reconstruct_exact(e)
        _emit({"x": str(x)})
        return EXIT_PASS

    if args.command == "density":
        s = _parse_set(args)
        cutoff = args.cutoff if args.cutoff is not None else _default_depth(args)
        est = density_estimate(s, cutoff)
        _emit({"cutoff": est.cutoff, "lower": str(est.lower),
               "upper": str(est.upper),
               "exact": None if est.exact is None else str(est.exact)})
        return EXIT_PASS

    if args.command == "ideal-member":
        ideal = parse_ideal(args.ideal)
        s = _parse_set(args)
        cutoff = args.cutoff if args.cutoff is not None else _default_depth(args)
        verdict = ideal_member(ideal, s, cutoff)
        _emit(verdict.to_json())
        return _OUTCOME_EXIT[verdict.outcome]

    if args.command == "converge":
        seq = parse_sequence(args.seq) if args.seq else None
        terms = parse_terms(args.a, seq)
        x = _parse_point(args)
        depth = _default_depth(args)
        eps = Fraction(args.eps)
        if args.ideal:
            verdict = ideal_convergence(x, terms, parse_ideal(args.ideal),
                                        depth, eps)
            _emit(verdict.to_json())
            return _OUTCOME_EXIT[verdict.outcome]
        report = classical_convergence(x, terms, depth, [eps])
        _emit(report.to_json())
        return _OUTCOME_EXIT[report.verdict.outcome]

    if args.command == "nset":
        seq = parse_sequence(args.seq) if args.seq else None
        terms = parse_terms(args.a, seq)
        x = _parse_point(args)
        weights = WeightRule.parse(args.weights)
        depth = args.depth if args.depth is not None else _default_depth(args, 10_000)
        report = nset_partial_sums(x, terms, weights, depth)
        doc = report.to_json()
        if args.ideal:
            doc["ideal_link"] = weight_ideal_link(
                weights, parse_ideal(args.ideal)).to_json()
        _emit(doc)
        return {"bounded-evidence": EXIT_PASS,
                "divergent-evidence": EXIT_FAIL}.get(report.classification,
                                                     EXIT_INCONCLUSIVE)

    if args.command == "witness":
        seq = parse_sequence(args.seq)
        terms = parse_terms(args.a, seq)
        ideal = parse_ideal(args.ideal)
        kwargs = {}
        if args.scan_window is not None:
            kwargs["scan_window"] = args.scan_window
        plan = plan_witness(args.tag, seq, terms, ideal, args.count, **kwargs)
        cert = build_and_verify(plan)
        doc = cert.to_json()
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(doc, fh, indent=2)
        _emit(doc)
        return EXIT_PASS if cert.passed else EXIT_FAIL

    if args.command == "verify":
        cert = WitnessCertificate.from_json(_load_json(args.json_in))
        ok, report = verify_certificate(cert)
        _emit(report)
        return EXIT_PASS if ok and report["recomputed_pass"] else EXIT_FAIL

    raise UsageError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    # exact rationals (harmonic sums, deep chains) overflow the default
    # int-to-string conversion guard
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(2_000_000)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnsupportedIdealError, SequenceNotAbsorbingError,
            CertificateFormatError, DomainError, ValueError,
            ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
