"""Exception types shared across the package."""


class JTCalcError(Exception):
    pass


class DomainMismatchError(JTCalcError):
    """Operands belong to different coefficient domains."""


class NotAFieldError(JTCalcError):
    """Operation needs field arithmetic but the domain is only a ring."""


class NotNilpotentError(JTCalcError):
    """An operator expected to be p-nilpotent is not."""


class CapExceededError(JTCalcError):
    """A configured size cap (tensor dimension, boxes, symbolic dim) was exceeded."""


class ChartError(JTCalcError):
    """Malformed chart, curve, or point data."""


class ParseError(JTCalcError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.column = column
