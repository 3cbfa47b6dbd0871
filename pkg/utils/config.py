"""
Configuration Script
File: utils/config.py

Reads project settings from the environment. A .env file in the project root is
loaded first with python-dotenv; values already present in the process
environment take precedence over the file.

Settings:
    UQF_PRECISION_BITS   interval precision in bits (default 128, at least 8)
    UQF_LOG_LEVEL        level of the log file sink (default INFO)
    UQF_L_CUTOFF         default character-sum cutoff for L-values (default 100000)
    UQF_IDEAL_BOUND      default norm bound X for the L(D) estimator (default 4000)
    UQF_OUTPUT_DIR       folder for survey CSV files (default data/survey_outputs)
"""

# Imports from Python Standard Library
import os
import pathlib

# Imports from external packages
from dotenv import load_dotenv

# Local imports (errors has no project dependencies, so no sys.path setup is needed here)
from utils.errors import BadParameter

PROJECT_ROOT = pathlib.Path(__file__).resolve().parent.parent
ENV_FILE: pathlib.Path = PROJECT_ROOT.joinpath(".env")

load_dotenv(ENV_FILE)

DEFAULT_PRECISION_BITS = 128
DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_L_CUTOFF = 100_000
DEFAULT_IDEAL_BOUND = 4000
DEFAULT_OUTPUT_DIR: pathlib.Path = PROJECT_ROOT.joinpath("data").joinpath("survey_outputs")

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


def _int_setting(key: str, default: int, minimum: int) -> int:
    """
    Read an integer setting.

    Args:
        key (str): Environment variable name.
        default (int): Value used when the variable is unset or empty.
        minimum (int): Smallest accepted value.

    Returns:
        int: The parsed value.

    Raises:
        BadParameter: If the value is not an integer or is below the minimum.
    """
    raw = os.getenv(key, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise BadParameter(f"{key} must be an integer, got {raw!r}") from e
    if value < minimum:
        raise BadParameter(f"{key} must be at least {minimum}, got {value}")
    return value


def get_precision_bits() -> int:
    """Interval precision used by every certified numeric routine."""
    return _int_setting("UQF_PRECISION_BITS", DEFAULT_PRECISION_BITS, 8)


def get_l_cutoff() -> int:
    return _int_setting("UQF_L_CUTOFF", DEFAULT_L_CUTOFF, 1000)


def get_ideal_bound() -> int:
    return _int_setting("UQF_IDEAL_BOUND", DEFAULT_IDEAL_BOUND, 1000)


def get_log_level() -> str:
    """Log level for the file sink; must be one of the loguru level names."""
    level = os.getenv("UQF_LOG_LEVEL", DEFAULT_LOG_LEVEL).strip().upper() or DEFAULT_LOG_LEVEL
    if level not in LOG_LEVELS:
        raise BadParameter(f"UQF_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}, got {level!r}")
    return level


def get_output_dir() -> pathlib.Path:
    raw = os.getenv("UQF_OUTPUT_DIR", "").strip()
    if not raw:
        return DEFAULT_OUTPUT_DIR
    path = pathlib.Path(raw)
    return path if path.is_absolute() else PROJECT_ROOT.joinpath(path)
