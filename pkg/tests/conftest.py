"""
Pytest configuration for the tests directory.
"""

import sys
from pathlib import Path
from unittest.mock import patch

import pytest
from hypothesis import HealthCheck, settings

# Add src to Python path for all tests
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

# Exact arithmetic is slow per example
settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def mock_log_debug():
    """Mock for log_debug function."""
    with patch("src.utils.logging.log_debug") as mock:
        yield mock


@pytest.fixture
def mock_log_info():
    """Mock for log_info function."""
    with patch("src.utils.logging.log_info") as mock:
        yield mock


@pytest.fixture
def mock_log_success():
    """Mock for log_success function."""
    with patch("src.utils.logging.log_success") as mock:
        yield mock


@pytest.fixture
def mock_log_error():
    """Mock for log_error function."""
    with patch("src.utils.logging.log_error") as mock:
        yield mock


@pytest.fixture
def budget():
    """Default budgets with a small random sample for verification."""
    from src.utils.settings import BudgetSettings

    return BudgetSettings(random_pairs=5)


@pytest.fixture
def field_x2():
    """F_2(x)."""
    from src.field.rational_function import function_field

    return function_field(2, ("x",))


@pytest.fixture
def field_xy2():
    """F_2(x, y)."""
    from src.field.rational_function import function_field

    return function_field(2, ("x", "y"))


@pytest.fixture
def field_xy3():
    """F_3(x, y)."""
    from src.field.rational_function import function_field

    return function_field(3, ("x", "y"))
