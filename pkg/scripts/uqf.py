"""
Command Line Interface
File: scripts/uqf.py

Subcommands:

    cf      continued fraction of w, units and the structural checks
    indec   the window S_0, M_D, M*, and the exact identities for N_i
    form    the 8*M_D-variable universal form, verified on small targets
    sieve   norm polynomials, Hensel bounds and k-th-power-free counts
    lvals   L-values, L(D) and the main term for u_1 + ... + u_s
    survey  one CSV row per squarefree D in a range

Examples (from the project root):

    py scripts\\uqf.py cf --d 15
    python3 scripts/uqf.py form --d 2 --verify-trace 40 --json
    python3 scripts/uqf.py survey --range 2:100 --jobs 4 --csv data/survey_outputs/survey.csv

Every command prints text, or one JSON document with --json. Exit codes:
0 ok, 1 an exact check failed, 2 bad input, 3 some survey rows failed,
4 a numeric precondition (such as the cutoff) was not met.
"""

# Imports from Python Standard Library
import argparse
import json
import pathlib
import sys
from typing import Optional

# For local imports, temporarily add project root to Python sys.path
PROJECT_ROOT = pathlib.Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.append(str(PROJECT_ROOT))

from scripts.analytic import asymptotic_report, sum_minus_bounds  # noqa: E402
from scripts.contfrac import expand, has_negative_norm_unit  # noqa: E402
from scripts.indecomp import (  # noqa: E402
    M_star_both,
    Ni,
    Ti,
    classify_small_norm,
    enumerate_S0,
    estimate_sum_bounds,
    ideals_below_sqrt_delta,
    is_indecomposable_bruteforce,
    is_indecomposable_fast,
    parse_eps,
    square_root_of_indecomposable,
    verify_norm_bounds,
    verify_norm_identities,
)
from scripts.quadfield import make_context, totally_positive_up_to_trace  # noqa: E402
from scripts.sieve import count_power_free, f_poly, hensel_sweep, power_free_window  # noqa: E402
from scripts.survey import SurveySettings, create_survey_table, parse_range, write_survey_to_csv  # noqa: E402
from scripts.survey_summary import write_summary  # noqa: E402
from scripts.universal import (  # noqa: E402
    construct_universal_form,
    mdiag_lower_bounds,
    represent,
    witness_via_construction,
)
from utils.config import get_output_dir  # noqa: E402
from utils.errors import BadParameter, InputError, InvariantViolation, NumericPrecondition  # noqa: E402
from utils.logger import logger  # noqa: E402

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_PARTIAL_SURVEY = 3
EXIT_NUMERIC = 4

HENSEL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
HENSEL_POWERS = (2, 3, 4)


def _emit(payload: dict, lines: list[str], as_json: bool) -> None:
    """Print the JSON document or the human-readable lines."""
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _field(args: argparse.Namespace):
    ctx = make_context(args.d)
    return ctx, expand(ctx)


# ---------------------------------------------------------------------------
# cf
# ---------------------------------------------------------------------------


def cmd_cf(args: argparse.Namespace) -> int:
    ctx, cf = _field(args)
    period = list(cf.period)
    palindrome = all(period[i - 1] == period[cf.s - i - 1] for i in range(1, cf.s))
    last_ok = period[-1] == 2 * cf.u0 - (1 if ctx.case == 1 else 0)
    payload = {
        "D": ctx.D,
        "Delta": ctx.Delta,
        "u0": cf.u0,
        "period": cf.period_string,
        "s": cf.s,
        "palindrome": palindrome,
        "u_s_check": last_ok,
        "eps0": cf.eps0.as_pair(),
        "eps": cf.eps.as_pair(),
        "negative_norm_unit": has_negative_norm_unit(cf),
    }
    lines = [
        f"D = {ctx.D}, Delta = {ctx.Delta}",
        f"w = [{cf.u0}; {cf.period_string}], s = {cf.s}",
        f"palindrome: {palindrome}, u_s check: {last_ok}",
        f"eps0 = {cf.eps0}, eps = {cf.eps}",
    ]
    _emit(payload, lines, args.json)
    return EXIT_OK if palindrome and last_ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# indec
# ---------------------------------------------------------------------------


def cmd_indec(args: argparse.Namespace) -> int:
    ctx, cf = _field(args)
    window = enumerate_S0(cf)
    mstar_a, mstar_b = M_star_both(cf, args.eps)
    rows = []
    for i in range(0, 2 * cf.s + 1):
        verify_norm_identities(cf, i)
        verify_norm_bounds(cf, i)
        rows.append({"i": i, "N": Ni(cf, i), "T": Ti(cf, i)})
    small = classify_small_norm(ctx, cf)
    bounds = estimate_sum_bounds(cf, ideals_below_sqrt_delta(ctx, cf))
    disagreements = [
        x.as_pair()
        for x in totally_positive_up_to_trace(ctx, args.verify_trace)
        if is_indecomposable_fast(cf, x) != is_indecomposable_bruteforce(ctx, x)
    ]
    roots = square_root_of_indecomposable(ctx, cf, args.box) if args.box > 0 else None
    payload = {
        "D": ctx.D,
        "S0": [e.to_dict() for e in window.elements],
        "M_D": window.M_D,
        "kappa": window.kappa,
        "M_star_a": mstar_a,
        "M_star_b": mstar_b,
        "N_T": rows,
        "small_norm": [e.to_dict() for e in small.entries],
        "sum_bounds": {"sum_u": bounds.sum_u.to_dict(), "M_D": bounds.m_d.to_dict()},
        "oracle_disagreements": disagreements,
        "square_roots": [r.as_pair() for r in roots.roots] if roots else [],
    }
    lines = [
        f"D = {ctx.D}: |S_0| = M_D = {window.M_D}, kappa = {window.kappa}, M* = {mstar_a} (a) / {mstar_b} (b)",
        "S_0: " + ", ".join(f"alpha_({e.i},{e.r}) = {e.value}" for e in window.elements),
        "N_i: " + " ".join(str(r["N"]) for r in rows),
        f"identities and bounds for N_i hold for 0 <= i <= {2 * cf.s}",
        f"{len(small.entries)} elements of norm below sqrt(Delta)/2, all n*alpha_i or n*conj(alpha_i)",
        f"ideal-sum bounds hold: sum_u = {cf.sum_u}, M_D = {window.M_D}",
        f"fast and brute-force tests agree up to trace {args.verify_trace}: {not disagreements}",
    ]
    _emit(payload, lines, args.json)
    return EXIT_OK if not disagreements else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# form
# ---------------------------------------------------------------------------


def cmd_form(args: argparse.Namespace) -> int:
    if args.verify_trace < 2:
        raise BadParameter(f"--verify-trace must be at least 2, got {args.verify_trace}")
    ctx, cf = _field(args)
    form = construct_universal_form(ctx, cf)
    lower = mdiag_lower_bounds(cf, args.eps)
    failures = []
    targets = totally_positive_up_to_trace(ctx, args.verify_trace)
    for x in targets:
        searched = represent(ctx, form, x)
        built = witness_via_construction(ctx, cf, x)
        if searched is None or form.evaluate(built) != x:
            failures.append(x.as_pair())
    payload = {
        "D": ctx.D,
        "arity": form.arity,
        "coefficients": [a.as_pair() for a in form.coeffs],
        "lower_bounds": lower.to_dict(),
        "targets": len(targets),
        "failures": failures,
    }
    lines = [
        f"D = {ctx.D}: {form.arity}-variable form",
        " + ".join(f"({a}) x{j + 1}^2" for j, a in enumerate(form.coeffs)),
        f"lower bound M_D/(kappa s) = {lower.ratio_bound}, M* = {lower.mstar_a} (a) / {lower.mstar_b} (b)",
        f"{len(targets) - len(failures)} of {len(targets)} targets with trace <= {args.verify_trace} represented",
    ]
    _emit(payload, lines, args.json)
    return EXIT_OK if not failures else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# sieve
# ---------------------------------------------------------------------------


def cmd_sieve(args: argparse.Namespace) -> int:
    ctx, cf = _field(args)
    polys = []
    for i in range(-1, 2 * cf.s - 2, 2):
        f = f_poly(cf, i)
        entry = f.to_dict()
        entry["power_free"] = count_power_free(f, args.k, f.u).to_dict()
        polys.append(entry)
    checks = hensel_sweep(cf, HENSEL_PRIMES, HENSEL_POWERS)
    broken = [{"i": c.i, "p": c.p, "k": c.k, "rho": c.rho} for c in checks if not c.holds]
    window = power_free_window(cf, args.k)
    payload = {
        "D": ctx.D,
        "polynomials": polys,
        "hensel_checks": len(checks),
        "hensel_failures": broken,
        "power_free_window": [list(p) for p in window.pairs],
    }
    lines = [f"D = {ctx.D}"]
    for entry in polys:
        counts = entry["power_free"]
        lines.append(
            f"i = {entry['i']}: f(r) = {entry['A0']} + {entry['A1']} r + {entry['A2']} r^2 on [0, {entry['u']}], "
            f"{counts['count']}/{counts['X']} values {args.k}-th power free (Euler product {counts['euler_floor']:.6f}, zeta bound {counts['zeta_floor']:.6f})"
        )
    lines.append(f"Hensel bound: {len(checks) - len(broken)} of {len(checks)} checks hold")
    lines.append(f"{len(window.pairs)} elements of S_0 with {args.k}-th power free norm, pairwise inequivalent modulo unit squares")
    _emit(payload, lines, args.json)
    return EXIT_OK if not broken else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# lvals
# ---------------------------------------------------------------------------


def cmd_lvals(args: argparse.Namespace) -> int:
    ctx, cf = _field(args)
    report = asymptotic_report(ctx, cf, args.bound, args.cutoff)
    minus = sum_minus_bounds(ctx, cf, ideals_below_sqrt_delta(ctx, cf))
    payload = report.to_dict()
    payload["sum_minus"] = minus.to_dict()
    lines = [
        f"D = {ctx.D}, Delta = {ctx.Delta}, h = {report.h}, h+ = {report.h_plus}, s = {report.s}",
        f"L(1, chi)  = {float(report.L1):.10f} +- {float(report.L1.rad):.2e} (class number formula {float(report.L1_class_number):.10f})",
        f"L'(1, chi) = {float(report.L1prime):.10f} +- {float(report.L1prime.rad):.2e}",
        f"zeta^(Delta)(2) = {float(report.zeta_delta_2):.10f}",
        f"L(D) = {float(report.LD):.6f} +- {float(report.LD.rad):.2e}",
        f"sum_u = {report.sum_u}, main term = {float(report.main_term):.6f}, ratio = {float(report.ratio):.6f} +- {float(report.ratio.rad):.2e}",
        f"trivial half holds: {report.trivial_half_holds}",
    ]
    if report.h1_residual is not None:
        lines.append(f"h = 1 residual L(D) - (gamma L1 + L1') = {float(report.h1_residual):.6f} +- {float(report.h1_residual.rad):.2e}")
    _emit(payload, lines, args.json)
    return EXIT_OK if report.trivial_half_holds else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# survey
# ---------------------------------------------------------------------------


def cmd_survey(args: argparse.Namespace) -> int:
    low, high = parse_range(args.range)
    settings = SurveySettings(eps=parse_eps(args.eps), X=args.bound, cutoff=args.cutoff)
    table, failed = create_survey_table(low, high, args.jobs, settings)
    csv_path = pathlib.Path(args.csv) if args.csv else get_output_dir().joinpath(f"survey_{low}_{high}.csv")
    write_survey_to_csv(table, csv_path)
    summary_path = write_summary(csv_path) if len(failed) < len(table) else None
    payload = {
        "rows": len(table),
        "failed": failed,
        "csv": str(csv_path),
        "summary": str(summary_path) if summary_path else None,
    }
    lines = [f"{len(table)} rows written to {csv_path}, {len(failed)} failed"]
    _emit(payload, lines, args.json)
    return EXIT_OK if not failed else EXIT_PARTIAL_SURVEY


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Universal quadratic forms and continued fractions over real quadratic fields")
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON document")

    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("--d", type=int, required=True, help="squarefree D > 1")

    eps = argparse.ArgumentParser(add_help=False)
    eps.add_argument("--eps", type=str, default="1/100", help="exponent offset of M*, as P/Q")

    subparsers.add_parser("cf", parents=[common, field], help="continued fraction and units")

    indec_parser = subparsers.add_parser("indec", parents=[common, field, eps], help="indecomposables and M_D")
    indec_parser.add_argument("--verify-trace", type=int, default=20, help="compare both indecomposability tests up to this trace")
    indec_parser.add_argument("--box", type=int, default=10, help="coordinate box for square roots of indecomposables (0 skips)")

    form_parser = subparsers.add_parser("form", parents=[common, field, eps], help="universal diagonal form")
    form_parser.add_argument("--verify-trace", type=int, default=10, help="verify every totally positive target up to this trace")

    sieve_parser = subparsers.add_parser("sieve", parents=[common, field], help="norm polynomials and power-free counts")
    sieve_parser.add_argument("--k", type=int, default=4, help="power in the power-free count")

    lvals_parser = subparsers.add_parser("lvals", parents=[common, field], help="L-values and the main term")
    lvals_parser.add_argument("--cutoff", type=int, default=None, help="character-sum cutoff (at least 1000)")
    lvals_parser.add_argument("--bound", type=int, default=None, help="ideal norm bound X for L(D) (at least 1000)")

    survey_parser = subparsers.add_parser("survey", parents=[common, eps], help="survey table over a range of D")
    survey_parser.add_argument("--range", type=str, required=True, help="A:B")
    survey_parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    survey_parser.add_argument("--csv", type=str, default=None, help="output CSV path")
    survey_parser.add_argument("--cutoff", type=int, default=None, help="character-sum cutoff (at least 1000)")
    survey_parser.add_argument("--bound", type=int, default=None, help="ideal norm bound X for L(D) (at least 1000)")
    return parser


HANDLERS = {
    "cf": cmd_cf,
    "indec": cmd_indec,
    "form": cmd_form,
    "sieve": cmd_sieve,
    "lvals": cmd_lvals,
    "survey": cmd_survey,
}


def main(argv: Optional[list[str]] = None) -> int:
    """Parse the arguments, run one subcommand and map its errors to exit codes."""
    args = build_parser().parse_args(argv)
    logger.info(f"START uqf {args.command}")
    try:
        code = HANDLERS[args.command](args)
    except InvariantViolation as e:
        logger.error(f"Error: check failed in {args.command}: {e}")
        return EXIT_CHECK_FAILED
    except InputError as e:
        logger.error(f"Error: bad input to {args.command}: {e}")
        return EXIT_BAD_INPUT
    except NumericPrecondition as e:
        logger.error(f"Error: numeric precondition in {args.command}: {e}")
        return EXIT_NUMERIC
    logger.info(f"uqf {args.command} completed with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
