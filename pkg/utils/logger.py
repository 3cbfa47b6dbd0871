"""
Logger Setup Script
File: utils/logger.py

This script provides logging for the project. Loguru keeps its default console
sink on stderr (stdout is reserved for command output such as --json reports)
and gets one extra sink writing to logs/project_log.log at the level configured
by UQF_LOG_LEVEL.
"""

# Imports from Python Standard Library
import pathlib
import sys

# Imports from external packages
from loguru import logger

# Define global constants
CURRENT_SCRIPT = pathlib.Path(__file__).stem  # Gets the current file name without the extension
PROJECT_ROOT = pathlib.Path(__file__).resolve().parent.parent  # Navigate to the project's root directory

# For local imports when run directly, temporarily add project root to Python sys.path
if str(PROJECT_ROOT) not in sys.path:
    sys.path.append(str(PROJECT_ROOT))

from utils.config import get_log_level  # noqa: E402

LOG_FOLDER: pathlib.Path = PROJECT_ROOT.joinpath("logs")  # Directory where logs will be stored
LOG_FILE: pathlib.Path = LOG_FOLDER.joinpath("project_log.log")  # Path to the log file

# Ensure the log folder exists or create it
LOG_FOLDER.mkdir(exist_ok=True)

# Configure Loguru to write to the log file; enqueue keeps writes safe when survey workers log too
logger.add(LOG_FILE, level=get_log_level(), enqueue=True)


def main() -> None:
    """Write a start and an end line so the sink location can be checked by hand."""
    logger.info(f"STARTING {CURRENT_SCRIPT}.py")
    logger.info(f"View the log output at {LOG_FILE}")
    logger.info(f"EXITING {CURRENT_SCRIPT}.py.")


# Conditional execution block that calls main() only when this file is executed directly
if __name__ == "__main__":
    main()
