"""Exception hierarchy. Every error is a ``ValueError`` so callers that only
care about bad input can catch that."""


class ThermocorrError(ValueError):
    pass


class NotSquare(ThermocorrError):
    pass


class NotHermitian(ThermocorrError):
    pass


class EmptyList(ThermocorrError):
    pass


class BadIndex(ThermocorrError):
    pass


class DimensionMismatch(ThermocorrError):
    pass


class InvalidState(ThermocorrError):
    pass


class BudgetExceedsMax(ThermocorrError):
    pass


class SingleFactor(ThermocorrError):
    pass


class InvalidXState(ThermocorrError):
    pass


class BadExcitation(ThermocorrError):
    pass


class FillTooLarge(ThermocorrError):
    pass


class NotEqualSpacing(ThermocorrError):
    pass


class NegativeAlpha(ThermocorrError):
    pass


class BadProtocol(ThermocorrError):
    pass


class AboveThreshold(ThermocorrError):
    pass
