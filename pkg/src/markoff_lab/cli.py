"""markoff-lab: JSON/CSV reports on Markoff triples, extremal numbers and the verification suites."""

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from markoff_lab.config import (
    DEFAULT_BOX,
    DEFAULT_DEPTH,
    DEFAULT_DIGITS,
    DEFAULT_PRECISION,
    DEFAULT_ZIGZAG_STEPS,
)
from markoff_lab.contfrac import is_reduced_quad, quad_cf_expand
from markoff_lab.errors import MarkoffLabError
from markoff_lab.exactnum import BinQuadForm, Mat2, quadirr_height
from markoff_lab.extremal import (
    ExtremalSpec,
    approx_diagnostics,
    balance_with_retry,
    extremality_witness,
    spec_enclosures,
    xi_conjugates,
    xi_enclosure,
    zigzag_matrices,
)
from markoff_lab.markoff import (
    MarkoffTriple,
    as_triple,
    cohn_matrix,
    cohn_node,
    enumerate_tree,
    markoff_alpha,
    markoff_form,
    markoff_value_check,
    maximal_zigzag,
    offdiag_congruence,
)
from markoff_lab.spectrum import L_periodic, L_window_sup, critical_window, mu_bruteforce, mu_exact, nu_sequence
from markoff_lab.suites import SUITE_NAMES, run_suite
from markoff_lab.utils.env_helper import EnvHelper
from markoff_lab.utils.helper import ReportUtils
from markoff_lab.words import Word, pi_word, xi_word_stream


@dataclass
class CommandResult:
    payload: Any
    status: int = 0
    table: Optional[Tuple[List[str], List[List[Any]]]] = None


def _int_expr(text: str) -> int:
    if "^" in text:
        base, exponent = text.split("^", 1)
        return int(base) ** int(exponent)
    return int(text)


def parse_rational(text: str) -> Fraction:
    """Accepts 1/10^60, 1/10**60, 1e-60 or plain fractions."""
    cleaned = text.strip().replace("**", "^")
    try:
        if "/" in cleaned:
            numerator, denominator = cleaned.split("/", 1)
            value = Fraction(_int_expr(numerator), _int_expr(denominator))
        elif "^" in cleaned:
            value = Fraction(_int_expr(cleaned))
        else:
            value = Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} ({e})")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"precision must be positive: {text!r}")
    return value


def _int_list(size: int) -> Callable[[str], Tuple[int, ...]]:
    def parse(text: str) -> Tuple[int, ...]:
        try:
            values = tuple(int(part) for part in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {size} comma-separated integers: {text!r}")
        if len(values) != size:
            raise argparse.ArgumentTypeError(f"expected {size} comma-separated integers: {text!r}")
        return values

    return parse


def _triple(args: argparse.Namespace) -> MarkoffTriple:
    return as_triple(args.triple)


def _digits(word: Word) -> str:
    """Comma-separated, whatever the size of the letters."""
    return ",".join(str(a) for a in word)


def cmd_tree(args: argparse.Namespace) -> CommandResult:
    nodes = enumerate_tree(args.depth)
    rows = [[node.path_string(), node.m, node.m1, node.m2] for node in nodes]
    payload = {"depth": args.depth, "count": len(nodes), "triples": [{"path": r[0], "triple": r[1:]} for r in rows]}
    return CommandResult(payload, table=(["path", "m", "m1", "m2"], rows))


def cmd_zigzag(args: argparse.Namespace) -> CommandResult:
    nodes = maximal_zigzag(_triple(args), args.steps)
    matrices = zigzag_matrices(nodes[0], args.steps)
    return CommandResult({
        "triple": nodes[0],
        "zigzag": [
            {"triple": node, "side": node.path[-1].value if node.path else "", "matrix": x}
            for node, x in zip(nodes, matrices)
        ],
    })


def cmd_cohn(args: argparse.Namespace) -> CommandResult:
    node = _triple(args)
    x = cohn_matrix(node)
    payload: Dict[str, Any] = {
        "triple": node,
        "matrix": x,
        "violations": x.violations(),
        "congruence": offdiag_congruence(node),
    }
    if len(node.path) > 0:
        payload["lift"] = list(cohn_node(node))
    return CommandResult(payload)


def cmd_form(args: argparse.Namespace) -> CommandResult:
    node = _triple(args)
    F = markoff_form(node)
    mu = mu_exact(F)
    return CommandResult({
        "triple": node,
        "form": list(F.coefficients()),
        "disc": F.disc(),
        "mu": mu,
        "bruteforce": mu_bruteforce(F, args.box),
        "markoff_value": markoff_value_check(node, mu, F),
    })


def cmd_alpha(args: argparse.Namespace) -> CommandResult:
    node = _triple(args)
    alpha, alpha_bar = markoff_alpha(node)
    return CommandResult({
        "triple": node,
        "alpha": alpha,
        "conjugate": alpha_bar,
        "expansion": str(quad_cf_expand(alpha)),
        "period": pi_word(node),
        "height": quadirr_height(alpha),
        "reduced": is_reduced_quad(alpha),
    })


def cmd_xi(args: argparse.Namespace) -> CommandResult:
    node = _triple(args)
    payload: Dict[str, Any] = {"triple": node, "digits": _digits(xi_word_stream(node, args.digits))}
    if args.precision is not None:
        payload["enclosure"] = xi_enclosure(node, args.precision)
    return CommandResult(payload)


def cmd_conjugates(args: argparse.Namespace) -> CommandResult:
    node = _triple(args)
    return CommandResult({"triple": node, "conjugates": xi_conjugates(node, args.precision or DEFAULT_PRECISION)})


def cmd_spectrum_L(args: argparse.Namespace) -> CommandResult:
    if args.period:
        L, enclosure = L_periodic(Word.parse(args.period))
        return CommandResult({"period": Word.parse(args.period), "L": L, "enclosure": enclosure})
    node = _triple(args)
    window = critical_window(node, args.window, args.junction)
    lower, rows = L_window_sup(window)
    return CommandResult({
        "triple": node,
        "junction": args.junction,
        "window": len(window),
        "sup_lower_bound": lower,
        "max_upper_bound": max(interval.hi for _, interval in rows),
    })


def cmd_mu(args: argparse.Namespace) -> CommandResult:
    F = BinQuadForm(*args.form)
    return CommandResult({
        "form": list(args.form),
        "disc": F.disc(),
        "mu": mu_exact(F),
        "bruteforce": mu_bruteforce(F, args.box),
    })


def cmd_nu(args: argparse.Namespace) -> CommandResult:
    node = _triple(args)
    sequence = nu_sequence(xi_word_stream(node, args.digits))
    rows = [[k, q, value.lo, value.hi, low] for k, q, value, low in sequence.rows()]
    payload = {"triple": node, "digits": args.digits, "rows": sequence.rows(), "running_min": sequence.running_min[-1]}
    return CommandResult(payload, table=(["k", "q", "lo", "hi", "running_min"], rows))


def cmd_diagnostics(args: argparse.Namespace) -> CommandResult:
    node = _triple(args)
    rows = approx_diagnostics(node, range(1, args.steps + 1))
    witnesses = extremality_witness(node, [10**k for k in range(1, args.steps + 1)])
    return CommandResult({"triple": node, "approximants": rows, "witnesses": witnesses})


def cmd_balance(args: argparse.Namespace) -> CommandResult:
    node = _triple(args)
    precision = args.precision or DEFAULT_PRECISION
    spec = ExtremalSpec(node)
    if args.moebius:
        spec = spec.translate(Mat2(*args.moebius))
    balanced = balance_with_retry(spec, precision)
    value, c1, c2 = spec_enclosures(balanced, precision)
    return CommandResult({
        "input": spec.to_json(),
        "balanced": balanced.to_json(),
        "value": value,
        "conjugates": [c1, c2],
    })


def cmd_verify(args: argparse.Namespace) -> CommandResult:
    if args.runspec:
        from markoff_lab.verification_runner import VerificationRunner

        runner = VerificationRunner(args.runspec)
        reports, status = [], 0
        for case in runner.suite_config["suites"]:
            try:
                reports.append(runner.run_suite(case))
            except AssertionError as e:
                logging.error(str(e))
                status = 1
        return CommandResult({"runspec": str(args.runspec), "reports": reports}, status)
    report = run_suite(args.suite, args.depth, threads=EnvHelper.thread_cap())
    return CommandResult(report, 0 if report.passed else 1)


COMMANDS: Dict[str, Callable[[argparse.Namespace], CommandResult]] = {
    "tree": cmd_tree,
    "zigzag": cmd_zigzag,
    "cohn": cmd_cohn,
    "form": cmd_form,
    "alpha": cmd_alpha,
    "xi": cmd_xi,
    "conjugates": cmd_conjugates,
    "spectrum-L": cmd_spectrum_L,
    "mu": cmd_mu,
    "nu": cmd_nu,
    "diagnostics": cmd_diagnostics,
    "balance": cmd_balance,
    "verify": cmd_verify,
}

CSV_COMMANDS = ("tree", "nu")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Output format")
    common.add_argument("--verbose", action="store_true", help="Log per-step detail")

    triple = argparse.ArgumentParser(add_help=False)
    triple.add_argument("--triple", type=_int_list(3), default=(5, 1, 2), help="Markoff triple m,m1,m2")

    parser = argparse.ArgumentParser(prog="markoff-lab", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("tree", parents=[common], help="Enumerate the Markoff tree")
    sub.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    sub = commands.add_parser("zigzag", parents=[common, triple], help="Maximal zigzag and its matrices")
    sub.add_argument("--steps", type=int, default=DEFAULT_ZIGZAG_STEPS)

    commands.add_parser("cohn", parents=[common, triple], help="Cohn matrix of a triple")

    sub = commands.add_parser("form", parents=[common, triple], help="Markoff form and its minimum")
    sub.add_argument("--box", type=int, default=DEFAULT_BOX)

    commands.add_parser("alpha", parents=[common, triple], help="The quadratic irrational of a triple")

    sub = commands.add_parser("xi", parents=[common, triple], help="Digits and enclosure of the extremal number")
    sub.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    sub.add_argument("--precision", type=parse_rational, default=None)

    sub = commands.add_parser("conjugates", parents=[common, triple], help="Enclosures of the two conjugates")
    sub.add_argument("--precision", type=parse_rational, default=None)

    sub = commands.add_parser("spectrum-L", parents=[common, triple], help="L of a critical window or a period")
    sub.add_argument("--window", type=int, default=DEFAULT_DIGITS)
    sub.add_argument("--junction", choices=["ab", "ba"], default="ab")
    sub.add_argument("--period", default=None, help="Digits of a purely periodic word, e.g. 1122")

    sub = commands.add_parser("mu", parents=[common], help="Minimum of an indefinite form")
    sub.add_argument("--form", type=_int_list(3), required=True, help="a,b,c of aT²+bTU+cU²")
    sub.add_argument("--box", type=int, default=DEFAULT_BOX)

    sub = commands.add_parser("nu", parents=[common, triple], help="q‖qξ‖ along the convergents")
    sub.add_argument("--digits", type=int, default=DEFAULT_DIGITS)

    sub = commands.add_parser("diagnostics", parents=[common, triple], help="Approximation exponent bands")
    sub.add_argument("--steps", type=int, default=8)

    sub = commands.add_parser("balance", parents=[common, triple], help="Reduced balanced representative")
    sub.add_argument("--precision", type=parse_rational, default=None)
    sub.add_argument("--moebius", type=_int_list(4), default=None, help="a,b,c,d of the translate g·ξ")

    sub = commands.add_parser("verify", parents=[common], help="Run verification suites")
    sub.add_argument("--suite", choices=SUITE_NAMES, default="all")
    sub.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    sub.add_argument("--runspec", default=None, help="Path to a JSON or YAML runspec file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    if args.format == "csv" and args.command not in CSV_COMMANDS:
        parser.error(f"--format csv is only available for {', '.join(CSV_COMMANDS)}")

    try:
        result = COMMANDS[args.command](args)
    except (MarkoffLabError, ValueError) as e:
        logging.error(f"{type(e).__name__}: {e}")
        return 2

    if args.format == "csv" and result.table is not None:
        columns, rows = result.table
        ReportUtils.write_csv(rows, columns, sys.stdout)
    else:
        sys.stdout.write(ReportUtils.dump_json(result.payload) + "\n")
    return result.status


if __name__ == "__main__":
    sys.exit(main())
