"""
Survey Summary Script (uses survey results)
File: scripts/survey_summary.py

This script reads a survey CSV written by survey.py and answers one question
per decade band of D (2-9, 10-99, 100-999, ...):

GOAL: Track how u_1 + ... + u_s compares with its main term as D grows.

PROCESS:
Drop the rows of fields that failed.
Compute sum_u / (sqrt(Delta) * log(Delta)^2) for every row.
Group the rows by decade band of D.
Report the row count, the median and spread of the main-term ratio, and the
largest scaled period sum seen so far (a running maximum over the bands).

The summary is saved next to the survey CSV as <name>_summary.csv.
"""

# Imports from Python Standard Library
import pathlib
import sys

# Imports from external packages
import numpy as np
import pandas as pd

# For local imports, temporarily add project root to Python sys.path
PROJECT_ROOT = pathlib.Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.append(str(PROJECT_ROOT))

from utils.config import get_output_dir  # noqa: E402
from utils.logger import logger  # noqa: E402

SURVEY_FILE: pathlib.Path = get_output_dir().joinpath("survey_2_100.csv")


def load_survey(file_path: pathlib.Path) -> pd.DataFrame:
    """Load a survey table and drop the rows of failed fields."""
    try:
        survey_df = pd.read_csv(file_path)
        logger.info(f"Survey data successfully loaded from {file_path}.")
    except Exception as e:
        logger.error(f"Error loading survey data: {e}")
        raise
    return survey_df.dropna(subset=["sum_u", "ratio"]).reset_index(drop=True)


def summarize_by_band(survey_df: pd.DataFrame) -> pd.DataFrame:
    """
    Median ratio and running maximum of the scaled period sum per decade band of D.

    Args:
        survey_df (pd.DataFrame): Survey rows with D, Delta, sum_u and ratio.

    Returns:
        pd.DataFrame: One row per band with band, low, count, ratio_median,
        ratio_min, ratio_max, scaled_max and scaled_running_max.
    """
    df = survey_df.copy()
    df["band"] = np.floor(np.log10(df["D"])).astype(int)
    df["scaled"] = df["sum_u"] / (np.sqrt(df["Delta"]) * np.log(df["Delta"]) ** 2)

    summary = (
        df.groupby("band")
        .agg(
            count=("D", "count"),
            ratio_median=("ratio", "median"),
            ratio_min=("ratio", "min"),
            ratio_max=("ratio", "max"),
            scaled_max=("scaled", "max"),
        )
        .reset_index()
    )
    summary.insert(1, "low", 10 ** summary["band"])
    summary["scaled_running_max"] = summary["scaled_max"].cummax()
    return summary


def summary_path_for(survey_path: pathlib.Path) -> pathlib.Path:
    survey_path = pathlib.Path(survey_path)
    return survey_path.with_name(f"{survey_path.stem}_summary.csv")


def write_summary(survey_path: pathlib.Path) -> pathlib.Path:
    """Summarize a survey CSV and save the result beside it."""
    summary = summarize_by_band(load_survey(survey_path))
    output_path = summary_path_for(survey_path)
    try:
        summary.to_csv(output_path, index=False)
        logger.info(f"Survey summary saved to {output_path}.")
    except Exception as e:
        logger.error(f"Error saving survey summary: {e}")
        raise
    return output_path


def main():
    logger.info("Starting survey summary...")
    output_path = write_summary(SURVEY_FILE)
    logger.info(f"Survey summary completed. See {output_path}")


if __name__ == "__main__":
    main()
