"""
Test suite for src/utils

Covers the logging helpers, the budget settings, the error-to-exit-code mapping and the
file helpers. Logging is mocked so tests never depend on handler configuration.
"""

from pathlib import Path
from unittest.mock import Mock, mock_open, patch

import pytest
from pydantic import ValidationError

from src.utils.constants import (
    DEFAULT_HEIGHT_BUDGET,
    DEFAULT_MAX_PRIME,
    EXIT_INFEASIBLE,
    EXIT_MALFORMED,
)
from src.utils.errors import (
    DimensionTooSmall,
    Incompatible,
    InvalidAction,
    MalformedInputError,
    OrderBudgetExceeded,
    OrderTooHighForLevel,
    ParseError,
    exit_code_for,
)
from src.utils.logging import (
    log_check,
    log_configuration,
    log_data_processing,
    log_debug,
    log_error,
    log_info,
    log_process_end,
    log_process_start,
    log_success,
    log_warning,
    setup_logging,
)
from src.utils.settings import BudgetSettings, get_settings, resolve
from src.utils.utils import load_text_argument, save_text_file, split_names

# ============================================================================
# Logging
# ============================================================================


def test_log_debug_disabled():
    """Test log_debug when debug mode is disabled."""
    with (
        patch("src.utils.logging.FLAG_DEBUG", False),
        patch("src.utils.logging.logging") as mock_logging,
    ):
        log_debug("Test message")

        mock_logging.debug.assert_not_called()


def test_log_debug_enabled():
    """Test log_debug when debug mode is enabled."""
    with (
        patch("src.utils.logging.FLAG_DEBUG", True),
        patch("src.utils.logging.logging") as mock_logging,
    ):
        log_debug("Test message")

        mock_logging.debug.assert_called_once_with("🔍 DEBUG: Test message")


@patch("src.utils.logging.logging")
def test_setup_logging_success(mock_logging):
    """Test logging setup caps sympy and hypothesis at WARNING."""
    setup_logging("debug")

    mock_logging.basicConfig.assert_called_once_with(
        level=mock_logging.DEBUG,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        force=True,
    )
    mock_logging.getLogger.assert_any_call("sympy")
    mock_logging.getLogger.assert_any_call("hypothesis")
    mock_logging.getLogger.return_value.setLevel.assert_called_with(mock_logging.WARNING)


@patch("src.utils.logging.logging")
def test_setup_logging_invalid_level(mock_logging):
    """Test logging setup with invalid level defaults to INFO."""
    setup_logging("INVALID")

    _, kwargs = mock_logging.basicConfig.call_args
    assert kwargs["level"] == mock_logging.INFO


@pytest.mark.parametrize(
    "log_func,expected_prefix,log_level",
    [
        (log_info, "ℹ️  INFO:", "info"),
        (log_success, "✅ SUCCESS:", "info"),
        (log_warning, "⚠️  WARNING:", "warning"),
        (log_error, "❌ ERROR:", "error"),
    ],
)
@patch("src.utils.logging.logging")
def test_log_functions_parameterized(mock_logging, log_func, expected_prefix, log_level):
    """Test basic logging functions with parameterization."""
    log_func("Test message", "arg1", "arg2")

    expected_message = f"{expected_prefix} Test message"
    getattr(mock_logging, log_level).assert_called_once_with(expected_message, "arg1", "arg2")


@pytest.mark.parametrize(
    "log_func,func_args,expected_message",
    [
        (
            log_configuration,
            ("height_budget", "5"),
            "🔍 DEBUG: Configuration: height_budget = 5",
        ),
        (
            log_data_processing,
            ("compose", "DiffOp of order 4"),
            "🔍 DEBUG: Data Processing: compose on DiffOp of order 4",
        ),
        (
            log_check,
            ("relation", "T1^2 = relation", True),
            "🔍 DEBUG: Check relation [T1^2 = relation]: pass",
        ),
    ],
)
@patch("src.utils.logging.logging")
def test_debug_log_functions_parameterized(mock_logging, log_func, func_args, expected_message):
    """Test debug logging functions with parameterization."""
    with patch("src.utils.logging.FLAG_DEBUG", True):
        log_func(*func_args)

    mock_logging.debug.assert_called_once_with(expected_message)


@patch("src.utils.logging.logging")
def test_failed_check_is_an_error(mock_logging):
    log_check("commutation", "[U1, U2] = 0", False)

    mock_logging.error.assert_called_once_with("❌ ERROR: Check commutation [[U1, U2] = 0]: fail")


@patch("src.utils.logging.logging")
def test_log_process_start_and_end(mock_logging):
    with patch("src.utils.logging.FLAG_DEBUG", True):
        log_process_start("verify_action")
        log_process_end("verify_action", success=False)

    messages = [call[0][0] for call in mock_logging.info.call_args_list]
    assert len(messages) == 2
    assert "Process 'verify_action' initiated" in messages[0]
    assert "Process 'verify_action' FAILED" in messages[1]


# ============================================================================
# Settings
# ============================================================================


def test_budget_defaults():
    settings = BudgetSettings()
    assert settings.max_prime == DEFAULT_MAX_PRIME
    assert settings.height_budget == DEFAULT_HEIGHT_BUDGET
    assert settings.order_bound(2) == 2**DEFAULT_HEIGHT_BUDGET
    assert resolve(None) is get_settings()
    assert resolve(settings) is settings


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("INFACT_HEIGHT_BUDGET", "6")
    assert BudgetSettings().height_budget == 6


@patch("src.utils.settings.log_warning")
def test_with_overrides(mock_warning):
    settings = BudgetSettings()
    updated = settings.with_overrides(height_budget=6, max_prime=None)

    assert updated.height_budget == 6
    assert updated.max_prime == settings.max_prime
    mock_warning.assert_called_once()


@patch("src.utils.settings.log_warning")
def test_with_overrides_below_default_is_silent(mock_warning):
    assert BudgetSettings().with_overrides(height_budget=2).height_budget == 2
    mock_warning.assert_not_called()


def test_with_overrides_validates():
    with pytest.raises(ValidationError):
        BudgetSettings().with_overrides(max_prime=1)


# ============================================================================
# Errors
# ============================================================================


@pytest.mark.parametrize(
    "error,expected",
    [
        (ParseError("unexpected token", 1, 3), EXIT_MALFORMED),
        (InvalidAction("missing generator"), EXIT_MALFORMED),
        (OrderBudgetExceeded("order 16"), EXIT_MALFORMED),
        (OrderTooHighForLevel("order 4"), EXIT_MALFORMED),
        (DimensionTooSmall("3 > 2"), EXIT_INFEASIBLE),
        (Incompatible("symmetry"), EXIT_INFEASIBLE),
    ],
)
def test_exit_code_for(error, expected):
    assert exit_code_for(error) == expected


def test_parse_error_location():
    error = ParseError("unexpected token", 2, 7, "action.json")
    assert str(error) == "unexpected token at action.json: line 2, column 7"
    assert (error.line, error.column) == (2, 7)


# ============================================================================
# File helpers
# ============================================================================


@patch("builtins.open", new_callable=mock_open)
def test_save_text_file_success(mock_file):
    """Test successful text file saving."""
    mock_file.return_value.__enter__.return_value = Mock()

    save_text_file("test content", "test.txt")

    mock_file.assert_called_once_with(Path("test.txt"), "w", encoding="utf-8")
    mock_file.return_value.__enter__.return_value.write.assert_called_once_with("test content")


@patch("builtins.open")
def test_save_text_file_exception(mock_open):
    """Test file saving with exception."""
    mock_open.side_effect = IOError("Disk full")

    with pytest.raises(IOError):
        save_text_file("test content", "test.txt")


def test_load_text_argument_inline_and_file(tmp_path):
    inline = '  {"type": "kerFV", "p": 2, "n": 1}'
    assert load_text_argument(inline) == inline

    path = tmp_path / "group.json"
    path.write_text('{"type": "kerF2V", "p": 3}', encoding="utf-8")
    assert load_text_argument(str(path)) == '{"type": "kerF2V", "p": 3}'


def test_load_text_argument_missing_file(tmp_path):
    with pytest.raises(MalformedInputError, match="not found"):
        load_text_argument(str(tmp_path / "absent.json"))


@pytest.mark.parametrize(
    "text,expected",
    [("x, y,z", ["x", "y", "z"]), ("x,,y,", ["x", "y"]), ("", [])],
)
def test_split_names(text, expected):
    assert split_names(text) == expected
