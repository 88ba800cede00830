"""
CHAlg — modules/errors.py
Exception hierarchy shared by every module.

Library code raises these; only router.py / chalg.py turn them into
exit codes and user-facing messages.
"""
from __future__ import annotations

from typing import Optional


class CHAlgError(Exception):
    """Root of every error CHAlg raises on purpose."""


class ResourceCapError(CHAlgError):
    """A configured cap (degree, slots, Lyndon count, ...) was exceeded."""

    def __init__(self, what: str, value: int, cap: int, env_var: Optional[str] = None):
        self.what    = what
        self.value   = value
        self.cap     = cap
        self.env_var = env_var
        hint = f" (raise {env_var} to allow it)" if env_var else ""
        super().__init__(f"{what} = {value} exceeds the cap {cap}{hint}.")


class ExprSyntaxError(CHAlgError, ValueError):
    """Malformed σ-expression. `position` is a 0-based offset into the text."""

    def __init__(self, message: str, position: int = -1, text: str = ""):
        self.position = position
        self.text     = text
        where = f" at position {position}" if position >= 0 else ""
        super().__init__(f"{message}{where}")

    def pointer(self) -> str:
        """Two-line caret display for terminal output."""
        if self.position < 0 or not self.text:
            return ""
        return f"  {self.text}\n  {' ' * self.position}^"


class ShapeMismatchError(CHAlgError, ValueError):
    pass


class UnassignedVariableError(CHAlgError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unassigned variable"


class SubstitutionError(CHAlgError, ValueError):
    pass


class EmptyWordError(CHAlgError, ValueError):
    pass
