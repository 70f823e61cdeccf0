"""Exception types shared across the toolkit."""


class PabisimError(Exception):
    """Base class for toolkit errors."""


class ModelError(PabisimError, ValueError):
    """Malformed model text or an invalid automaton."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormulaSyntaxError(PabisimError, ValueError):
    """Malformed formula text."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"at position {position}: {message}"
        super().__init__(message)


class FragmentError(PabisimError, ValueError):
    """A formula falls outside the fragments the checker can evaluate."""

    def __init__(self, message, subformula=None):
        self.subformula = subformula
        super().__init__(message)


class ResourceCapError(PabisimError, RuntimeError):
    """An enumeration or construction exceeded a configured cap."""

    def __init__(self, cap_name, limit, detail=""):
        self.cap_name = cap_name
        self.limit = limit
        msg = f"resource cap '{cap_name}' exceeded (limit {limit})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
