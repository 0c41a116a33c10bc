"""
Error hierarchy for the infinitesimal-actions toolkit.

Every failure raised by the library derives from ActionsError and falls into one of three
families, which the command line maps to exit codes:

- MalformedInputError (exit 2): unparsable text, invalid descriptors, operators outside
  the expected shape, unsupported requests
- InfeasibleError (exit 1): the mathematics says no, e.g. an unsolvable system or a
  dimension that is too small
- BudgetError (exit 2): an input that exceeds the configured prime, height or variable
  budget

Errors carry enough context in their message to be reported verbatim.
"""

# Copilot: Do not add any logging for this file.

from typing import Optional


class ActionsError(Exception):
    """Base class for all library errors."""


# ============================================================================
# Malformed Input
# ============================================================================


class MalformedInputError(ActionsError):
    """Input that cannot be interpreted."""


class ParseError(MalformedInputError):
    """Grammar error in a polynomial, rational function, operator or diagram text."""

    def __init__(
        self,
        message: str,
        line: int = 1,
        column: int = 1,
        source: Optional[str] = None,
    ) -> None:
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        location = f"line {line}, column {column}"
        if source:
            location = f"{source}: {location}"
        super().__init__(f"{message} at {location}")


class InvalidPrime(MalformedInputError):
    """The characteristic is not a prime or exceeds the budget."""


class InvalidVariables(MalformedInputError):
    """Variable names are empty, duplicated or not identifiers."""


class ZeroDenominator(MalformedInputError):
    """A rational function with denominator zero was requested."""


class InvalidDescriptor(MalformedInputError):
    """A group scheme descriptor or presentation violates its invariants."""


class UnsupportedDual(MalformedInputError):
    """The dual presentation of an explicit group was not declared."""


class UnsupportedDescriptor(MalformedInputError):
    """The descriptor family does not support the requested invariant."""


class NotCommutative(MalformedInputError):
    """A commutative group scheme was required."""


class NotSupported(MalformedInputError):
    """The request is outside the supported cases, e.g. faithfulness of a non-commutative group."""


class NotADerivation(MalformedInputError):
    """An operator expected to be a derivation has a higher-order term."""


class ZeroOperator(MalformedInputError):
    """An operation expected a nonzero operator."""


class InvalidSystem(MalformedInputError):
    """A differential system has mismatched lengths or non-commuting operators."""


class InvalidMultipliers(MalformedInputError):
    """Multipliers for a power action are not constants of the block derivations."""


class InvalidAction(MalformedInputError):
    """An action value is inconsistent with its group presentation or base."""


class OperatorInvariantError(ActionsError):
    """An internal operator invariant was violated (a pure multiplication term appeared)."""


# ============================================================================
# Mathematical Infeasibility
# ============================================================================


class InfeasibleError(ActionsError):
    """The requested object does not exist."""


class NotAPower(InfeasibleError):
    """The rational function is not a p^r-th power."""


class NoSolution(InfeasibleError):
    """A single differential equation with constraints has no solution."""


class Incompatible(InfeasibleError):
    """A differential system fails its compatibility condition or has no solution."""


class DimensionTooSmall(InfeasibleError):
    """The number of variables is smaller than the Lie algebra dimension."""


class JoinInfeasible(InfeasibleError):
    """A greedy join step could not find a generator outside the current span."""


class ExtensionObstruction(InfeasibleError):
    """Extending an action to a new generator failed."""


class DependentMultipliers(InfeasibleError):
    """Rows of multipliers for a power action are linearly dependent over F_p."""


class OrderAssertionFailed(InfeasibleError):
    """A constructed operator does not have the expected nilpotency order."""


# ============================================================================
# Budgets
# ============================================================================


class BudgetError(ActionsError):
    """An input exceeds a configured budget."""


class OrderBudgetExceeded(BudgetError):
    """A divided-power order reached p**H."""


class HeightBudgetExceeded(BudgetError):
    """A Frobenius height or Witt length exceeded the height budget."""


class NotNilpotentWithinBudget(BudgetError):
    """No p-power of the derivation vanished within the height budget."""


class OrderTooHighForLevel(BudgetError):
    """An operator has order at least p^r and does not act K^(p^r)-linearly."""


class VariableBudgetExceeded(BudgetError):
    """More variables than the configured maximum."""


def exit_code_for(error: ActionsError) -> int:
    """
    Map a library error to the process exit code of the command line.

    Args:
        error: The raised library error.

    Returns:
        2 for malformed input and budget errors, 1 for infeasibility and anything else.
    """
    from src.utils.constants import EXIT_INFEASIBLE, EXIT_MALFORMED

    if isinstance(error, (MalformedInputError, BudgetError)):
        return EXIT_MALFORMED
    return EXIT_INFEASIBLE
