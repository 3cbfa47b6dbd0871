"""
Survey Table Builder
File: scripts/survey.py

Runs the whole pipeline for every squarefree D in a range and collects one row
per field: the continued fraction, the indecomposable window and the sizes
derived from it, the class numbers, and the analytic comparison of
u_1 + ... + u_s with its main term.

The rows are stored in a pandas DataFrame with a fixed column order and saved
as CSV for later analysis (see survey_summary.py).

Input:  a range A:B of D values, a worker count, the eps of M* and the numeric limits.
Output: one CSV row per squarefree D, ordered by D whatever the number of workers.

    D,Delta,s,u0,period,sum_u,...,main_term,ratio
    2,8,1,1,2,2,...

A field whose computation fails keeps its row with only D filled in; the
failure is logged and counted.
"""

# Imports from Python Standard Library
import pathlib
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

# Imports from external packages
import pandas as pd

# For local imports, temporarily add project root to Python sys.path
PROJECT_ROOT = pathlib.Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.append(str(PROJECT_ROOT))

from scripts.analytic import asymptotic_report  # noqa: E402
from scripts.contfrac import expand  # noqa: E402
from scripts.indecomp import M_star_both, enumerate_S0  # noqa: E402
from scripts.quadfield import is_squarefree, make_context  # noqa: E402
from utils.config import get_output_dir  # noqa: E402
from utils.errors import BadParameter, InvariantViolation  # noqa: E402
from utils.logger import logger  # noqa: E402

CSV_COLUMNS = [
    "D",
    "Delta",
    "s",
    "u0",
    "period",
    "sum_u",
    "M_D",
    "M_star_a",
    "M_star_b",
    "S0_size",
    "kappa",
    "lb_ratio",
    "form_arity",
    "h",
    "h_plus",
    "L1",
    "LD",
    "main_term",
    "ratio",
]

DEFAULT_EPS = Fraction(1, 100)


@dataclass(frozen=True)
class SurveySettings:
    """What every worker needs besides D; picklable for the process pool."""

    eps: Fraction = DEFAULT_EPS
    X: Optional[int] = None
    cutoff: Optional[int] = None


def parse_range(text: str) -> tuple[int, int]:
    """'A:B' -> (A, B) with 2 <= A <= B."""
    try:
        low, high = (int(part) for part in text.split(":"))
    except ValueError as e:
        raise BadParameter(f"range must look like A:B, got {text!r}") from e
    if low < 2 or high < low:
        raise BadParameter(f"range needs 2 <= A <= B, got {low}:{high}")
    return low, high


def squarefree_in_range(low: int, high: int) -> list[int]:
    return [D for D in range(low, high + 1) if is_squarefree(D)]


def build_survey_row(D: int, settings: SurveySettings) -> dict:
    """
    Compute one survey row.

    Args:
        D (int): Squarefree integer > 1.
        settings (SurveySettings): eps for M*, ideal bound X and L-value cutoff.

    Returns:
        dict: Values keyed by CSV_COLUMNS.
    """
    ctx = make_context(D)
    cf = expand(ctx)
    window = enumerate_S0(cf)
    mstar_a, mstar_b = M_star_both(cf, settings.eps)
    report = asymptotic_report(ctx, cf, settings.X, settings.cutoff)
    if window.M_D != len(window.elements):
        raise InvariantViolation(f"D={D}: |S_0| differs from M_D")
    return {
        "D": D,
        "Delta": ctx.Delta,
        "s": cf.s,
        "u0": cf.u0,
        "period": cf.period_string,
        "sum_u": cf.sum_u,
        "M_D": window.M_D,
        "M_star_a": mstar_a,
        "M_star_b": mstar_b,
        "S0_size": len(window.elements),
        "kappa": window.kappa,
        "lb_ratio": str(Fraction(window.M_D, window.kappa * cf.s)),
        "form_arity": 8 * window.M_D,
        "h": report.h,
        "h_plus": report.h_plus,
        "L1": float(report.L1),
        "LD": float(report.LD),
        "main_term": float(report.main_term),
        "ratio": float(report.ratio),
    }


def _safe_row(D: int, settings: SurveySettings) -> tuple[dict, Optional[str]]:
    """A row, or the D-only row and the error message when the field fails for any reason."""
    try:
        return build_survey_row(D, settings), None
    except Exception as e:
        logger.error(f"Error building survey row for D={D}: {e}")
        return {"D": D}, str(e)


def create_survey_table(low: int, high: int, jobs: int = 1, settings: Optional[SurveySettings] = None) -> tuple[pd.DataFrame, list[int]]:
    """
    Build the survey table for the squarefree D in [low, high].

    Args:
        low (int): First D.
        high (int): Last D.
        jobs (int): Worker processes; 1 computes in this process.
        settings (SurveySettings): Shared parameters.

    Returns:
        tuple[pd.DataFrame, list[int]]: The table ordered by D, and the D values that failed.
    """
    settings = settings or SurveySettings()
    if jobs < 1:
        raise BadParameter(f"jobs must be positive, got {jobs}")
    values = squarefree_in_range(low, high)
    logger.info(f"Building survey for {len(values)} squarefree D in [{low}, {high}] with {jobs} worker(s)")
    if jobs == 1:
        results = [_safe_row(D, settings) for D in values]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            # map keeps submission order, so rows stay sorted by D
            results = list(executor.map(_safe_row, values, [settings] * len(values)))
    rows = [row for row, _ in results]
    failed = [row["D"] for row, error in results if error is not None]
    table = pd.DataFrame(rows, columns=CSV_COLUMNS)
    logger.info(f"Survey table created with {len(table)} rows, {len(failed)} failed")
    return table, failed


def write_survey_to_csv(table: pd.DataFrame, path: Union[str, pathlib.Path]) -> pathlib.Path:
    """Write the survey table to CSV with the fixed header."""
    try:
        output_path = pathlib.Path(path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(output_path, index=False, columns=CSV_COLUMNS)
        logger.info(f"Survey table saved to {output_path}.")
        return output_path
    except Exception as e:
        logger.error(f"Error saving survey table to CSV file: {e}")
        raise


def main():
    """Survey the squarefree D up to 100 and save the table."""
    logger.info("Starting survey process...")
    table, failed = create_survey_table(2, 100)
    write_survey_to_csv(table, get_output_dir().joinpath("survey_2_100.csv"))
    logger.info(f"Survey process completed with {len(failed)} failed D.")
    logger.info(f"Please see outputs in {get_output_dir()}")


if __name__ == "__main__":
    main()
