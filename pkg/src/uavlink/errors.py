from __future__ import annotations


class InputError(ValueError):
    """Bad input: out-of-domain values, malformed files, invalid config."""


class GeometryError(InputError):
    pass


class DegenerateFitError(InputError):
    pass


class QueryError(InputError):
    pass


class LoadError(InputError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class ContractViolation(RuntimeError):
    """An internal caller broke a precondition (not a user input problem)."""
