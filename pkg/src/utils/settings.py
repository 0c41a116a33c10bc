"""
Runtime budgets loaded from the environment.

BudgetSettings bounds the prime, the Frobenius height and the number of variables, and
fixes the parameters of randomized verification. Values come from INFACT_* environment
variables and fall back to the defaults in src.utils.constants. The command line applies
its --budget-* flags through with_overrides().

Usage:
    from src.utils.settings import get_settings

    budget = get_settings().with_overrides(height_budget=5)
"""

from functools import lru_cache
from typing import Any

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.utils.constants import (
    DEFAULT_HEIGHT_BUDGET,
    DEFAULT_MAX_PRIME,
    DEFAULT_MAX_VARIABLES,
    SETTINGS_ENV_PREFIX,
    VERIFY_RANDOM_PAIRS,
    VERIFY_RANDOM_SEED,
)
from src.utils.logging import log_configuration, log_warning


class BudgetSettings(BaseSettings):
    """Configured bounds for every computation."""

    model_config = SettingsConfigDict(env_prefix=SETTINGS_ENV_PREFIX, frozen=True)

    max_prime: int = Field(
        default=DEFAULT_MAX_PRIME, ge=2, description="Largest accepted characteristic"
    )
    height_budget: int = Field(
        default=DEFAULT_HEIGHT_BUDGET,
        ge=1,
        description="Divided-power orders must stay below p**height_budget",
    )
    max_variables: int = Field(
        default=DEFAULT_MAX_VARIABLES, ge=1, description="Largest number of variables"
    )
    random_pairs: int = Field(
        default=VERIFY_RANDOM_PAIRS,
        ge=0,
        description="Random rational pairs per comultiplication check",
    )
    random_seed: int = Field(
        default=VERIFY_RANDOM_SEED, description="Seed for randomized verification"
    )

    def with_overrides(self, **overrides: Any) -> "BudgetSettings":
        """
        Return a copy with the given fields replaced; None values are ignored.

        Args:
            **overrides: Field names and their new values.

        Returns:
            A validated BudgetSettings instance.
        """
        updates = {key: value for key, value in overrides.items() if value is not None}
        defaults = BudgetSettings.model_fields
        for key, value in updates.items():
            log_configuration(key, str(value))
            default = defaults[key].default
            if key != "random_seed" and isinstance(value, int) and value > default:
                log_warning(f"Budget {key}={value} exceeds the default {default}")
        return BudgetSettings(**{**self.model_dump(), **updates})

    def order_bound(self, p: int) -> int:
        """Exclusive bound p**H on divided-power orders."""
        return p**self.height_budget


@lru_cache(maxsize=1)
def get_settings() -> BudgetSettings:
    """Return the process-wide settings read from the environment."""
    return BudgetSettings()


def resolve(budget: "BudgetSettings | None") -> BudgetSettings:
    """Return the given budget or the process-wide default."""
    return budget if budget is not None else get_settings()
