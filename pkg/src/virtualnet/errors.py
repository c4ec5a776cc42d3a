"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """A numerical precondition failed (non-orthogonal matrix, bad basis...)."""

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class DegenerateInputError(ValueError):
    """A linear system or conditional variance has no unique solution."""

    def __init__(self, message, direction=None):
        super().__init__(message)
        self.direction = direction


class LocatedError(ValueError):
    """Base for errors that point at a line (and column) of a text input."""

    def __init__(self, message, line=None, column=None, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(self._format())

    def _format(self):
        where = []
        if self.source:
            where.append(str(self.source))
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        if not where:
            return self.message
        return f"{', '.join(where)}: {self.message}"


class NetworkParseError(LocatedError):
    pass


class ConfigError(LocatedError):
    pass
