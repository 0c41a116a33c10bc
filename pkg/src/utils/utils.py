"""
General Utilities Module

File helpers shared by the command line and the JSON file models.

Functions:
- save_text_file(): Write text to a file, creating parent directories
- load_text_argument(): Read a command line argument that is either inline text or a path
- split_names(): Split a comma separated list of names

Usage:
    from src.utils.utils import save_text_file, load_text_argument

    text = load_text_argument('{"p": 2, "type": "kerFV", "n": 2}')
    save_text_file(text, "out/group.json")
"""

from __future__ import annotations

from pathlib import Path

from src.utils.errors import MalformedInputError
from src.utils.logging import log_debug, log_error, log_success

# ============================================================================
# File Operations
# ============================================================================


def save_text_file(content: str, filepath: str) -> None:
    """
    Save text content to a file, creating missing parent directories.

    Args:
        content: The text to write, written as-is in UTF-8.
        filepath: Destination path, relative or absolute.

    Raises:
        OSError: If the directory or the file cannot be written. The error is
                 logged and re-raised.

    Example:
        >>> save_text_file('{"status": "pass"}', "reports/verify.json")
    """
    path = Path(filepath)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(content)
        log_success(f"Saved text file to: {path.resolve()}")
    except Exception as e:
        log_error(f"Failed to save text file to {filepath}: {str(e)}")
        raise


def load_text_argument(argument: str) -> str:
    """
    Interpret a command line argument as inline JSON or as a file path.

    Arguments whose first non-blank character is "{" or "[" are returned unchanged;
    anything else is read as a UTF-8 file.

    Args:
        argument: Inline JSON text or a path.

    Returns:
        The JSON text.

    Raises:
        MalformedInputError: If the path does not exist or cannot be read.
    """
    stripped = argument.lstrip()
    if stripped.startswith(("{", "[")):
        log_debug("Using inline JSON argument")
        return argument
    path = Path(argument)
    if not path.is_file():
        raise MalformedInputError(f"Input file not found: {argument}")
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise MalformedInputError(f"Cannot read {argument}: {e}") from e


def split_names(text: str) -> list[str]:
    """Split "x, y,z" into ["x", "y", "z"], dropping empty entries."""
    return [part.strip() for part in text.split(",") if part.strip()]
