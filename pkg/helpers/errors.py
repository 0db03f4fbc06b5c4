# helpers/errors.py


class MeekSepError(Exception):
    """Base class for every error raised by the toolkit."""


class StructuralError(MeekSepError):
    """Graph violates a structural invariant (cycle, self-loop, double arc)."""


class InconsistentInputError(MeekSepError):
    """Meek closure hit a contradiction; the partial orientation has no DAG extension."""


class InputError(MeekSepError):
    pass


class PreconditionError(MeekSepError):
    pass


class NotChordalError(MeekSepError):
    pass


class DisconnectedGraphError(MeekSepError):
    pass


class BoundExceededError(MeekSepError):
    pass


class NonRealizableTargetError(MeekSepError):
    """Target mean cannot be produced by any atomic shift assignment."""


class EmptyInputError(MeekSepError):
    pass


class ParseError(MeekSepError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:"
        if line is not None:
            location += f"{line}:"
        super().__init__(f"{location} {message}" if location else message)
