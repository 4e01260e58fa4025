"""Exception hierarchy.

Every error carries a short machine-readable ``reason`` code; the CLI turns
:class:`MathematicalRejection` into exit status 1 and :class:`UsageError`
into exit status 2.
"""


class LeflabError(Exception):
    reason = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def as_dict(self):
        out = {"reason": self.reason, "message": str(self)}
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out


def _jsonable(value):
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


class UsageError(LeflabError, ValueError):
    reason = "usage"


class StructureParseError(UsageError):
    reason = "parse_error"

    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position} in {text!r}",
                         position=position)
        self.position = position


class PoleError(LeflabError, ZeroDivisionError):
    reason = "pole"


class MathematicalRejection(LeflabError):
    reason = "rejected"


class DSquaredError(MathematicalRejection):
    reason = "d_squared_nonzero"


class NotSymplecticError(MathematicalRejection):
    reason = "not_symplectic"


class DegeneratePairingError(MathematicalRejection):
    reason = "degenerate_pairing"


class NotSubtorusError(MathematicalRejection):
    reason = "not_subtorus"


class HypothesisError(MathematicalRejection):
    reason = "hypothesis_unmet"

    def __init__(self, message, hypothesis, **details):
        super().__init__(message, hypothesis=hypothesis, **details)
        self.hypothesis = hypothesis


class MasseyUndefinedError(MathematicalRejection):
    reason = "massey_undefined"


class InternalCheckError(LeflabError):
    reason = "internal_check_failed"
