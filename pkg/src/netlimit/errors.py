"""Exception hierarchy shared by every netlimit module."""


class NetLimitError(Exception):
    pass


class DomainError(NetLimitError, ValueError):
    """A point does not belong to the direction's domain."""


class ParamError(NetLimitError, ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class EvaluationError(NetLimitError, ArithmeticError):
    pass


class CertificationFailure(NetLimitError):
    def __init__(self, epsilon: float, message: str = ""):
        super().__init__(message or f"no probed anchor certifies epsilon={epsilon:g}")
        self.epsilon = epsilon


class NotMonotone(NetLimitError):
    """Raised by mb_limit. ``witness`` holds a decreasing and an increasing pair."""

    def __init__(self, witness):
        super().__init__(f"net is not monotone on the probed tail: {witness}")
        self.witness = witness


class OrderingViolated(NetLimitError):
    def __init__(self, witness):
        super().__init__(f"ordering f <= g <= h fails near {witness!r}")
        self.witness = witness


class SandwichGap(NetLimitError):
    def __init__(self, lower: float, upper: float):
        super().__init__(f"outer limits differ: {lower:g} vs {upper:g}")
        self.lower = lower
        self.upper = upper


class ZeroDenominatorLimit(NetLimitError, ZeroDivisionError):
    pass


class OperandDiverges(NetLimitError):
    def __init__(self, which: str, verdict):
        super().__init__(f"operand {which} does not converge: {verdict}")
        self.which = which
        self.verdict = verdict


class ParseError(NetLimitError, ValueError):
    def __init__(self, offset: int, expected: str):
        super().__init__(f"at offset {offset}: expected {expected}")
        self.offset = offset
        self.expected = expected


class UnknownFunction(NetLimitError, KeyError):
    pass
