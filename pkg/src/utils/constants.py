"""
Constants Configuration Module

This module defines the constants used across the infinitesimal-actions toolkit. Constants
are grouped by category and provide a single source of truth for default budgets, textual
formats, verification parameters and exit codes.

Categories:
- Budgets: default bounds on the prime, the Frobenius height and the number of variables
- Verification: sample counts and seeds for randomized compatibility checks
- Text Formats: tokens of the operator and descriptor grammars
- Exit Codes: process exit codes of the command line
- Debug and Logging: debug flag, logging level and separator settings
- Enumerations: generator kinds, descriptor kinds and check kinds

Usage:
    from src.utils.constants import DEFAULT_HEIGHT_BUDGET, GeneratorKind

    if generator.kind is GeneratorKind.MULTIPLICATIVE:
        ...

Best Practices:
- All constants use UPPERCASE with underscores
- Related constants are grouped under banner headers
- Enum values match the tags used in the JSON file formats
- Runtime overrides go through src.utils.settings, never by editing this file
"""

# Copilot: Do not add any logging for this file.

from enum import Enum

# ============================================================================
# Budgets
# ============================================================================
DEFAULT_MAX_PRIME = 7  # Largest accepted characteristic
DEFAULT_HEIGHT_BUDGET = 4  # Divided-power orders must stay below p**H
DEFAULT_MAX_VARIABLES = 4  # Largest transcendence degree n
SETTINGS_ENV_PREFIX = "INFACT_"  # Environment prefix for budget overrides

# ============================================================================
# Verification
# ============================================================================
VERIFY_RANDOM_PAIRS = 100  # Random rational pairs per comultiplication check
VERIFY_MIN_RANDOM_PAIRS = 4  # Floor after dividing the pair count by n * q
VERIFY_RANDOM_SEED = 20240101  # Seed for the random pair generator
VERIFY_RANDOM_DEGREE = 2  # Degree bound of random numerators and denominators
VERIFY_RANDOM_TERMS = 3  # Term bound of random numerators and denominators

# ============================================================================
# Text Formats
# ============================================================================
DIVIDED_POWER_SYMBOL = "d"  # Operator monomial token: d[var]^[order]
TERM_SEPARATOR = " + "
FACTOR_SEPARATOR = " * "
TENSOR_SEPARATOR = " (x) "  # Used when printing comultiplication tails
PRODUCT_SUFFIX_SEPARATOR = "_"  # Generator name suffix for product factors

# ============================================================================
# Exit Codes
# ============================================================================
EXIT_SUCCESS = 0
EXIT_INFEASIBLE = 1
EXIT_MALFORMED = 2

# ============================================================================
# Debug and Logging
# ============================================================================
FLAG_DEBUG = False  # Enable debug tracing of intermediate computations

LOG_LEVEL = "DEBUG" if FLAG_DEBUG else "INFO"
LOG_SEPARATOR_CHAR = "═"
LOG_SEPARATOR_LENGTH = 60


# ============================================================================
# Enumerations
# ============================================================================


class GeneratorKind(Enum):
    """
    Kind of a Hopf algebra generator in a presentation.

    UNIPOTENT generators satisfy T^(p^m) = Q with Q built from earlier generators.
    MULTIPLICATIVE generators come from a mu_p factor: on the action side they
    satisfy e^p = e and are primitive, on the group side they satisfy u^p = 0 with
    the multiplicative comultiplication tail u (x) u.
    """

    UNIPOTENT = "unipotent"
    MULTIPLICATIVE = "multiplicative"


class DescriptorKind(Enum):
    """
    Tags of the group scheme descriptor families, as used in group JSON files.

    YOUNG: commutative height-one group alpha-part times mu_p^s, given by a Young diagram
    KER_FV: ker(F^n - V) on the Witt vectors, autodual, Frobenius height n
    KER_F2V: ker(F^2 - V), Frobenius height 3
    EXPLICIT: a presentation given generator by generator
    PRODUCT: a finite product of descriptors
    """

    YOUNG = "young"
    KER_FV = "kerFV"
    KER_F2V = "kerF2V"
    EXPLICIT = "explicit"
    PRODUCT = "product"


class CheckKind(Enum):
    """Families of checks performed when verifying a module-algebra action."""

    RELATION = "relation"
    COMMUTATION = "commutation"
    COMPATIBILITY = "compatibility"
    DIFF_PLUS = "diff_plus"


class VerificationState(Enum):
    """Verification status carried by an action value."""

    UNCHECKED = "unchecked"
    PASSED = "passed"
    FAILED = "failed"
