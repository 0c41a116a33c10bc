"""
Logging Utilities Module

This module provides centralized logging for the infinitesimal-actions toolkit. Every
component (field arithmetic, operator algebra, solvers, action construction and the
command line) reports through these helpers so that log output has one format and one
switch for debug verbosity.

The logging system includes:
- Standard logging levels (DEBUG, INFO, WARNING, ERROR, CRITICAL)
- Emoji-prefixed messages for quick visual scanning
- Process lifecycle tracking with start/end messages
- Debug-controlled output (FLAG_DEBUG) for development vs production
- Dedicated helpers for configuration values, data processing steps and
  verification check outcomes

Logging Functions:
- setup_logging(): Configure application-wide logging behavior
- log_debug/info/warning/error/success(): Level-specific logging
- log_process_start/end(): Track long-running computations
- log_data_processing(): Trace an algebraic operation on a kind of object
- log_configuration(): Trace an effective budget or setting
- log_check(): Report one verification check result

Usage:
    from src.utils.logging import setup_logging, log_process_start, log_success

    setup_logging("DEBUG")
    log_process_start("Extend action")
    log_success("Generator T2 extended")
    log_process_end("Extend action", success=True)

Note:
    All output goes to stderr through the standard logging handlers, so the
    command line keeps stdout free for its deterministic results.

Dependencies:
- Python standard library logging module
- Internal constants module for debug flags
"""

# Copilot: Do not add any logging for this file.

import logging

from src.utils.constants import FLAG_DEBUG

# ============================================================================
# Logging Setup
# ============================================================================


def setup_logging(level: str = "INFO") -> None:
    """
    Configure application-wide logging with the project format.

    Args:
        level: Logging level string, one of "DEBUG", "INFO", "WARNING", "ERROR"
               or "CRITICAL" (case-insensitive). Unknown values fall back to INFO.

    Example:
        >>> setup_logging("DEBUG")
        >>> setup_logging("warning")

    Note:
        The configuration is global and forces reconfiguration of existing handlers.
        Third-party chatter from sympy and hypothesis is capped at WARNING.
    """
    level_map = {
        "DEBUG": logging.DEBUG,
        "INFO": logging.INFO,
        "WARNING": logging.WARNING,
        "ERROR": logging.ERROR,
        "CRITICAL": logging.CRITICAL,
    }
    numeric_level = level_map.get(level.upper(), logging.INFO)

    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        force=True,
    )

    logging.getLogger("sympy").setLevel(logging.WARNING)
    logging.getLogger("hypothesis").setLevel(logging.WARNING)


# ============================================================================
# Core Logging Functions
# ============================================================================


def log_debug(message: str, *args, **kwargs) -> None:
    """
    Log a debug message prefixed with 🔍, only when FLAG_DEBUG is True.

    Args:
        message: The debug message, e.g. an intermediate operator or matrix size.
        *args: Positional arguments forwarded to logging.debug().
        **kwargs: Keyword arguments forwarded to logging.debug().

    Example:
        >>> log_debug("Stacked system has 24 rows and 9 columns")
        >>> # Output: 🔍 DEBUG: Stacked system has 24 rows and 9 columns
    """
    if FLAG_DEBUG:
        formatted_message = f"🔍 DEBUG: {message}"
        logging.debug(formatted_message, *args, **kwargs)


def log_info(message: str, *args, **kwargs) -> None:
    """
    Log an informational message prefixed with ℹ️.

    Args:
        message: Description of an operational milestone.
        *args: Positional arguments forwarded to logging.info().
        **kwargs: Keyword arguments forwarded to logging.info().

    Example:
        >>> log_info("Built height-one action on 3 variables")
        >>> # Output: ℹ️  INFO: Built height-one action on 3 variables
    """
    formatted_message = f"ℹ️  INFO: {message}"
    logging.info(formatted_message, *args, **kwargs)


def log_warning(message: str, *args, **kwargs) -> None:
    """
    Log a warning message prefixed with ⚠️.

    Args:
        message: Description of a recoverable or suspicious condition.
        *args: Positional arguments forwarded to logging.warning().
        **kwargs: Keyword arguments forwarded to logging.warning().

    Example:
        >>> log_warning("Faithfulness undefined for non-commutative presentation")
        >>> # Output: ⚠️  WARNING: Faithfulness undefined for non-commutative presentation
    """
    formatted_message = f"⚠️  WARNING: {message}"
    logging.warning(formatted_message, *args, **kwargs)


def log_error(message: str, *args, **kwargs) -> None:
    """
    Log an error message prefixed with ❌.

    Args:
        message: Description of the failure with the relevant context.
        *args: Positional arguments forwarded to logging.error().
        **kwargs: Keyword arguments forwarded to logging.error().

    Example:
        >>> log_error("Failed to load action file: missing generator T2")
        >>> # Output: ❌ ERROR: Failed to load action file: missing generator T2
    """
    formatted_message = f"❌ ERROR: {message}"
    logging.error(formatted_message, *args, **kwargs)


def log_success(message: str, *args, **kwargs) -> None:
    """
    Log a success message prefixed with ✅.

    Args:
        message: Description of the completed operation.
        *args: Positional arguments forwarded to logging.info().
        **kwargs: Keyword arguments forwarded to logging.info().

    Example:
        >>> log_success("Action verified: 12 checks passed")
        >>> # Output: ✅ SUCCESS: Action verified: 12 checks passed
    """
    formatted_message = f"✅ SUCCESS: {message}"
    logging.info(formatted_message, *args, **kwargs)


# ============================================================================
# Process Tracking Functions
# ============================================================================


def log_process_start(process_name: str) -> None:
    """
    Log the start of a long-running computation.

    Args:
        process_name: Name of the computation, e.g. "Verify action".
    """
    log_info(f"Process '{process_name}' initiated")


def log_process_end(process_name: str, success: bool = True) -> None:
    """
    Log the end of a computation and its outcome.

    Args:
        process_name: Name of the computation, matching log_process_start().
        success: Whether the computation completed successfully.
    """
    status = "COMPLETED" if success else "FAILED"
    log_info(f"Process '{process_name}' {status}")


# ============================================================================
# Specialized Logging Functions
# ============================================================================


def log_data_processing(operation: str, data_type: str) -> None:
    """
    Trace an algebraic operation (debug only).

    Args:
        operation: Operation name, e.g. "compose" or "pbasis_decompose".
        data_type: Description of the operands, e.g. "DiffOp of order 4".
    """
    log_debug(f"Data Processing: {operation} on {data_type}")


def log_configuration(config_key: str, config_value: str) -> None:
    """
    Trace an effective configuration value (debug only).

    Args:
        config_key: Setting name, e.g. "height_budget".
        config_value: Effective value as a string.
    """
    log_debug(f"Configuration: {config_key} = {config_value}")


def log_check(kind: str, subject: str, passed: bool) -> None:
    """
    Report the outcome of one verification check.

    Passing checks are traced at debug level; failures are always logged as errors.

    Args:
        kind: Check family, e.g. "relation" or "compatibility".
        subject: What was checked, e.g. a generator name or a pair of names.
        passed: Whether the check held.
    """
    if passed:
        log_debug(f"Check {kind} [{subject}]: pass")
    else:
        log_error(f"Check {kind} [{subject}]: fail")
