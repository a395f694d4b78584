"""Exception hierarchy shared by all modules."""


class UWCError(Exception):
    """Base class for domain errors (the CLI maps these to exit status 1)."""

    code = "UWCError"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class EmptyImage(UWCError):
    code = "EmptyImage"

    def __init__(self, symbol):
        super().__init__(f"input symbol {symbol!r} has an empty image")
        self.symbol = symbol


class UnknownSymbol(UWCError):
    code = "UnknownSymbol"


class InvalidAlphabet(UWCError):
    code = "InvalidAlphabet"


class InvalidCode(UWCError):
    code = "InvalidCode"


class BlocklengthMismatch(UWCError):
    code = "BlocklengthMismatch"


class BudgetExceeded(UWCError):
    code = "BudgetExceeded"


class UnknownVertex(UWCError):
    code = "UnknownVertex"


class NoCodeExists(UWCError):
    code = "NoCodeExists"


class NotInjective(UWCError):
    code = "NotInjective"


class OutOfReach(UWCError):
    code = "OutOfReach"

    def __init__(self, x, lo, hi):
        super().__init__(f"state {x} outside reachable interval [{lo}, {hi}]")
        self.x, self.lo, self.hi = x, lo, hi


class PreconditionUnmet(UWCError):
    code = "PreconditionUnmet"


class InconsistentOutputs(UWCError):
    code = "InconsistentOutputs"


class NoReliableCode(UWCError):
    code = "NoReliableCode"


class NoWiretapCode(UWCError):
    code = "NoWiretapCode"


class InvalidScheme(UWCError):
    code = "InvalidScheme"


class InvalidDisturbance(UWCError):
    code = "InvalidDisturbance"


class ParseError(ValueError):
    """Malformed channel file or CLI configuration (exit status 2)."""

    code = "ParseError"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

    def to_dict(self):
        return {"error": self.code, "message": str(self)}
