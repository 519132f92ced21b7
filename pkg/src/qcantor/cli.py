"""Command-line entry point.

Exit codes: 0 when every verdict passes, 1 on a verdict failure, 2 on a
usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .basic_sequence import BasicSequence, bases_equivalent, common_power, period_product
from .block_stats import (
    Block,
    UnitInterval,
    blocks_of_length,
    occurrence_positions,
    occurrence_positions_via_orbit,
    orbit_occurrences_by_block,
)
from .constructions import (
    adversarial_frequency,
    build_adversarial,
    champernowne_digits,
    limiting_frequency,
    witness_interval,
)
from .errors import InequivalentBasesError, NotPeriodicError, StreamExhaustedError, UnresolvedBoundaryError
from .expansion import (
    DigitStream,
    convert_base_digits,
    extract_digits,
    format_digits,
    group_base_digits,
    orbit_points,
    parse_digits,
    read_digit_file,
    reconstruct,
    regroup_digits,
    shift_to_periodic,
    stream_orbit_points,
    write_digit_file,
)
from .ud_stats import (
    DEFAULT_TOL_DISCREPANCY,
    DEFAULT_TOL_RATIO,
    VerdictReport,
    distribution_normality_report,
    empirical_frequency,
    q_normality_report,
    reports_to_csv,
    reports_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_TOL_ADVERSARIAL = Fraction(1, 50)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    q: str | None = None
    x: str | None = None
    n: int = 1000
    g: int | None = None
    blocks: list[str] = field(default_factory=list)
    max_block_len: int = 2
    intervals: list[str] = field(default_factory=list)
    tol_discrepancy: Fraction = DEFAULT_TOL_DISCREPANCY
    tol_ratio: Fraction | None = None
    format: str = "json"
    out: str | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise UsageError("--n must be >= 1")
        for name in ("tol_discrepancy", "tol_ratio"):
            tol = getattr(self, name)
            if tol is not None and not 0 < tol <= 1:
                raise UsageError(f"--{name.replace('_', '-')} must lie in (0, 1]")
        if self.max_block_len < 1:
            raise UsageError("--max-block-len must be >= 1")


# ---------------------------------------------------------------- input specs

@dataclass
class InputSpec:
    kind: str  # "rational" | "champernowne" | "digits"
    rational: Fraction | None = None
    base: int | None = None
    digits: list[int] | None = None
    basis: BasicSequence | None = None


def parse_input(text: str) -> InputSpec:
    """``p/q`` | ``champernowne:b`` | ``digits:1,2,3`` | path to a digit file."""
    if text.startswith("champernowne:"):
        try:
            b = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(f"malformed generator {text!r}") from exc
        if b < 2:
            raise UsageError("champernowne base must be >= 2")
        return InputSpec("champernowne", base=b)
    if text.startswith("digits:"):
        return InputSpec("digits", digits=parse_digits(text.split(":", 1)[1]))
    if os.path.exists(text):
        digits, basis = read_digit_file(text)
        return InputSpec("digits", digits=digits, basis=basis)
    try:
        x = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{text!r} is neither a rational p/q, a generator, nor a digit file") from exc
    if not 0 <= x < 1:
        raise UsageError(f"x = {x} outside [0, 1)")
    return InputSpec("rational", rational=x)


def _stream_q_digits(base: int, Q: BasicSequence, n: int) -> list[int]:
    """First n Q-digits of the number whose base-g digits are Champernowne's."""
    if not Q.is_purely_periodic:
        raise UsageError("generator input needs a purely periodic --q (no preperiod)")
    b = period_product(Q)
    if not bases_equivalent(base, b):
        raise InequivalentBasesError(f"generator base {base} is not equivalent to period product {b}")
    m = len(Q.period)
    groups = -(-n // m)
    # generous source length; regrouping consumes p base-g digits per q base-b digits
    src = champernowne_digits(base, groups * max(1, _digits_ratio(base, b)) + 64)
    b_digits = list(regroup_digits(src, base, b))
    if len(b_digits) < groups:
        raise StreamExhaustedError("generator supplied too few digits")
    return list(convert_base_digits(b_digits[:groups], Q))[:n]


def _digits_ratio(g: int, b: int) -> int:
    p, q = common_power(g, b)
    return -(-p // q)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _render(reports: list[VerdictReport], fmt: str, **meta) -> str:
    if fmt == "csv":
        return reports_to_csv(reports)
    return reports_to_json(reports, **meta)


def _exit_code(reports: list[VerdictReport]) -> int:
    return EXIT_FAIL if any(r.passed is False for r in reports) else EXIT_OK


def _parse_q(text: str | None) -> BasicSequence:
    if text is None:
        raise UsageError("--q is required")
    try:
        return BasicSequence.from_spec(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------- commands

def cmd_expand(cfg: RunConfig) -> int:
    """Write the first n Q-digits of x and report the residual bound."""
    Q = _parse_q(cfg.q)
    spec = parse_input(cfg.x or "")
    if spec.kind == "rational":
        digits = extract_digits(spec.rational, Q, cfg.n)
        residual = spec.rational - reconstruct(digits, Q)
        note = f"residual {residual} in [0, 1/{Q.product(1, cfg.n)})"
    elif spec.kind == "champernowne":
        digits = _stream_q_digits(spec.base, Q, cfg.n)
        note = f"truncation error < 1/{Q.product(1, cfg.n)}"
    else:
        raise UsageError("expand takes a rational or generator input")
    text = f"# q: {Q.to_spec()}\n{format_digits(digits)}\n"
    _emit(text, cfg.out)
    print(note, file=sys.stderr)
    return EXIT_OK


def _identity_report(x, P: BasicSequence, q_digits: list[int], n: int, K: int, points) -> VerdictReport:
    """Digit-scan occurrence sets versus orbit-membership sets for all blocks of length <= K."""
    alphabet = max(P.period)
    mismatches = 0
    checked = 0
    for k in range(1, K + 1):
        if isinstance(x, Fraction):
            via_orbit = orbit_occurrences_by_block(x, P, k, n)
        for B in blocks_of_length(k, alphabet):
            scan = occurrence_positions(q_digits, B, n)
            if isinstance(x, Fraction):
                orbit = via_orbit.get(B, set())
            else:
                orbit = occurrence_positions_via_orbit(x, P, B, n, points=points)
            mismatches += len(scan ^ orbit)
            checked += 1
    return VerdictReport(
        "occurrence_orbit_identity", n, Fraction(mismatches), Fraction(0), Fraction(0),
        note=f"{checked} blocks checked; observed = positions in the symmetric difference",
    )


def cmd_verify_equivalence(cfg: RunConfig) -> int:
    """Q-normality, Q-distribution normality and the exact identity check, in one report."""
    Q = _parse_q(cfg.q)
    if not Q.is_periodic:
        raise UsageError("verify-equivalence needs an eventually periodic --q")
    b = period_product(Q)
    spec = parse_input(cfg.x or "")
    g = cfg.g
    if spec.kind == "champernowne":
        if g is not None and g != spec.base:
            raise UsageError(f"--g {g} disagrees with generator base {spec.base}")
        g = spec.base
    if g is not None and not bases_equivalent(g, b):
        raise InequivalentBasesError(
            f"g = {g} is not equivalent to b = {b} (log {g} / log {b} is irrational); "
            "the equivalence only applies when g ~ b"
        )
    n = cfg.n
    P = BasicSequence((), Q.period)
    if spec.kind == "rational":
        _, y = shift_to_periodic(Q, spec.rational)
        x_pres = y
        q_digits = extract_digits(y, P, n)
        points = orbit_points(y, P, n)
    elif spec.kind == "champernowne":
        if Q.prefix:
            raise UsageError("generator input needs a purely periodic --q; supply a Q-digit file instead")
        q_digits = _stream_q_digits(spec.base, Q, n + 64)
        x_pres = DigitStream.from_digits(q_digits, P)
        points = stream_orbit_points(x_pres, n)
        q_digits = q_digits[:n]
    else:
        if spec.basis is not None and spec.basis != Q:
            raise UsageError(f"digit file header {spec.basis.to_spec()} disagrees with --q")
        k = len(Q.prefix)
        tail = spec.digits[k:]
        if len(tail) < n + 64:
            raise StreamExhaustedError(f"digit file needs at least {k + n + 64} digits")
        x_pres = DigitStream.from_digits(tail, P)
        points = stream_orbit_points(x_pres, n)
        q_digits = tail[:n]
    tolerances = cfg.tol_ratio if cfg.tol_ratio is not None else DEFAULT_TOL_RATIO
    blocks = [Block.parse(s).digits for s in cfg.blocks] or None
    reports = q_normality_report(q_digits, P, cfg.max_block_len, n, tolerances, blocks=blocks)
    reports.append(distribution_normality_report(points, n, cfg.tol_discrepancy))
    reports.append(_identity_report(x_pres, P, q_digits, n, cfg.max_block_len, points))
    for text in cfg.intervals:
        E = UnitInterval.parse(text)
        reports.append(VerdictReport(
            f"frequency[{E.lo},{E.hi})", n, empirical_frequency(points, E, n), E.measure, cfg.tol_discrepancy,
        ))
    _emit(_render(reports, cfg.format, command="verify-equivalence", q=Q.to_spec(), x=cfg.x, n=n, b=b, g=g), cfg.out)
    return _exit_code(reports)


def _adversarial_input(spec: InputSpec, g: int, n: int) -> list[int]:
    g2 = g * g
    if spec.kind == "rational":
        return extract_digits(spec.rational, BasicSequence.periodic(g2), n)
    if spec.kind == "champernowne":
        if not bases_equivalent(spec.base, g2):
            raise InequivalentBasesError(f"generator base {spec.base} is not equivalent to g^2 = {g2}")
        src = champernowne_digits(spec.base, n * max(1, _digits_ratio(spec.base, g2)) + 64)
        digits = list(regroup_digits(src, spec.base, g2))[:n]
    else:
        digits = spec.digits[:n]
    if len(digits) < n:
        raise StreamExhaustedError(f"input supplied {len(digits)} digits, needed {n}")
    return digits


def cmd_adversarial(cfg: RunConfig) -> int:
    """Build P from base-g^2 digits; write P and its digits; report the witness frequency."""
    if cfg.g is None or cfg.g < 2:
        raise UsageError("--g >= 2 is required")
    g = cfg.g
    spec = parse_input(cfg.x or "")
    n = cfg.n
    if spec.kind == "digits" and len(spec.digits) < n:
        n = len(spec.digits)
    q_digits = _adversarial_input(spec, g, n)
    result = build_adversarial(g, q_digits, n)
    M = len(result.p_digits)
    intervals = [UnitInterval.parse(t) for t in cfg.intervals] or [witness_interval(g)]
    tol = cfg.tol_ratio if cfg.tol_ratio is not None else DEFAULT_TOL_ADVERSARIAL
    forbidden = sum(1 for e in result.p_digits if e == g * g - 1)
    same_value = reconstruct(result.p_digits, result.P) == reconstruct(q_digits, BasicSequence.periodic(g * g))
    reports = [
        VerdictReport("forbidden_p_digits", M, Fraction(forbidden), Fraction(0), Fraction(0),
                      note=f"count of P-digits equal to g^2-1 = {g * g - 1}"),
        VerdictReport("value_preserved", M, Fraction(int(not same_value)), Fraction(0), Fraction(0),
                      note="0 when P-digits and Q-digits reconstruct to the same rational"),
    ]
    for E in intervals:
        per_p = adversarial_frequency(g, result, E, M, per="p")
        per_q = adversarial_frequency(g, result, E, M, per="q")
        reports.append(VerdictReport(
            f"adversarial_frequency[{E.lo},{E.hi})", M, per_p, limiting_frequency(g, E, "p"), tol,
            note="identity construction: no digit equals g^2-1" if result.identity else "",
            extra={
                "lambda_E": f"{E.measure.numerator}/{E.measure.denominator}",
                "gap_from_lambda": float(abs(per_p - E.measure)),
                "per_q_index": f"{per_q.numerator}/{per_q.denominator}",
                "per_q_limit": str(limiting_frequency(g, E, "q")),
                "displayed_per_q_formula": str(Fraction(2 * g + 1, g * g)),
                "rederived_per_p_formula": str(Fraction(2 * g + 1, g * g + 1)),
                "q_digits": n,
            },
        ))
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        with open(os.path.join(cfg.out, "P.spec"), "w") as fh:
            fh.write(result.P.to_spec() + "\n")
        with open(os.path.join(cfg.out, "P.txt"), "w") as fh:
            fh.write(format_digits(result.P.prefix) + "\n")
        write_digit_file(os.path.join(cfg.out, "P_digits.txt"), result.p_digits, result.P)
        report_name = "report.csv" if cfg.format == "csv" else "report.json"
        _emit(_render(reports, cfg.format, command="adversarial", g=g, n=n, x=cfg.x),
              os.path.join(cfg.out, report_name))
    else:
        sys.stdout.write(f"P: {format_digits(result.P.prefix)}\n")
        sys.stdout.write(f"P-digits: {format_digits(result.p_digits)}\n")
        sys.stdout.write(_render(reports, cfg.format, command="adversarial", g=g, n=n, x=cfg.x))
    return _exit_code(reports)


def cmd_convert(args: argparse.Namespace) -> int:
    """Base-b digits to one period of Q-digits each, or back with --inverse."""
    Q = _parse_q(args.q)
    digits = parse_input(args.x)
    if digits.kind != "digits":
        raise UsageError("convert takes digits:... or a digit file")
    if args.inverse:
        out = list(group_base_digits(digits.digits, Q))
    else:
        out = list(convert_base_digits(digits.digits, Q))
    _emit(format_digits(out) + "\n", args.out)
    return EXIT_OK


def cmd_equiv(args: argparse.Namespace) -> int:
    result = bases_equivalent(args.r, args.s)
    print(json.dumps({"r": args.r, "s": args.s, "equivalent": result}, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------- argparse

def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", help="basic sequence, e.g. 'prefix=5;period=2,3'")
    p.add_argument("--x", help="p/q | champernowne:b | digits:1,2,3 | digit file path")
    p.add_argument("--n", type=int, default=1000, help="number of digits / points")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output path (directory for adversarial)")
    p.add_argument("--seed", type=int, default=0, help="reserved for sampling; commands are deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcantor", description="Cantor series expansions and normality diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="write Q-digits of x")
    _common(p)

    for name, helptext in (("verify-equivalence", "normality equivalence report"),
                           ("adversarial", "g / g^2 construction and witness frequency")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--g", type=int, help="base of the input (verify) or construction base g (adversarial)")
        p.add_argument("--blocks", nargs="+", default=[], help="explicit blocks, e.g. 1,2 0")
        p.add_argument("--max-block-len", type=int, default=2)
        p.add_argument("--intervals", nargs="+", default=[], help="intervals lo:hi, e.g. 0:2/3")
        p.add_argument("--tol-discrepancy", type=_fraction, default=DEFAULT_TOL_DISCREPANCY)
        p.add_argument("--tol-ratio", type=_fraction, default=None)

    p = sub.add_parser("convert", help="base-b digits <-> periodic Q-digits")
    p.add_argument("--q", required=True)
    p.add_argument("--x", required=True, help="digits:... or a digit file")
    p.add_argument("--inverse", action="store_true", help="group Q-digits back into base-b digits")
    p.add_argument("--out")

    p = sub.add_parser("equiv", help="test r ~ s")
    p.add_argument("r", type=int)
    p.add_argument("s", type=int)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        q=args.q,
        x=args.x,
        n=args.n,
        g=getattr(args, "g", None),
        blocks=getattr(args, "blocks", []),
        max_block_len=getattr(args, "max_block_len", 2),
        intervals=getattr(args, "intervals", []),
        tol_discrepancy=getattr(args, "tol_discrepancy", DEFAULT_TOL_DISCREPANCY),
        tol_ratio=getattr(args, "tol_ratio", None),
        format=args.format,
        out=args.out,
        seed=args.seed,
    )


COMMANDS = {
    "expand": cmd_expand,
    "verify-equivalence": cmd_verify_equivalence,
    "adversarial": cmd_adversarial,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "convert":
            return cmd_convert(args)
        if args.command == "equiv":
            return cmd_equiv(args)
        return COMMANDS[args.command](_config(args))
    except InequivalentBasesError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, NotPeriodicError, StreamExhaustedError, UnresolvedBoundaryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
