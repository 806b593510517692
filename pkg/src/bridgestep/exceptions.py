"""Exception hierarchy. Every error is a ``ValueError`` so callers doing
plain input validation can catch it without importing this module."""


class BridgeStepError(ValueError):
    pass


class InvalidModeError(BridgeStepError):
    pass


class OutOfDomainError(BridgeStepError):
    pass


class InvalidCaseError(BridgeStepError):
    pass


class DegenerateGridError(BridgeStepError):
    pass


class ConfigurationError(BridgeStepError):
    pass


class UnsupportedDampingError(BridgeStepError):
    pass


class OracleSingularityError(BridgeStepError):
    pass


class InvalidStaticError(BridgeStepError):
    pass


class InsufficientGridError(BridgeStepError):
    pass


class EmptyStudyError(BridgeStepError):
    pass
