"""Exception hierarchy shared by the engine modules.

Every error that can surface through the CLI or the session service carries a
stable ``code`` so front ends can match on it without parsing messages.
"""


class EngineError(Exception):
    code = "E_ENGINE"

    def __init__(self, message):
        super().__init__(message)
        self.message = message


class ParseError(EngineError):
    code = "E_PARSE"

    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (at offset %d)" % (message, position)
        super().__init__(message)
        self.position = position


class TypeCheckError(EngineError):
    code = "E_TYPE"


class FuelExhausted(EngineError):
    code = "E_FUEL"


class OracleNotApproximated(EngineError):
    code = "E_ORACLE"


class PredicateFalse(EngineError):
    code = "E_PRED_FALSE"


class InconsistentUpdate(EngineError):
    code = "E_INCONSISTENT"


class IllegalChoice(EngineError):
    code = "E_ILLEGAL_CHOICE"


class NotImplicationFree(EngineError):
    code = "E_NOT_IMPLFREE"


class SessionFinished(EngineError):
    code = "E_FINISHED"


class PreconditionError(EngineError):
    """A caller violated an operation's stated precondition."""

    code = "E_PRECONDITION"

    def __init__(self, kind, message):
        super().__init__("%s: %s" % (kind, message))
        self.kind = kind
