class AsyncLocalError(Exception):
    """Base class for every error raised by the lab."""


class GraphValidationError(AsyncLocalError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        message = f"graph violates '{invariant}'"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class SchedulingFormatError(AsyncLocalError):
    pass


class GuardExceededError(AsyncLocalError):
    pass


class CorrectnessViolation(AsyncLocalError):
    """An algorithm reached a state its correctness argument rules out."""

    def __init__(self, node: int, detail: str):
        self.node = node
        super().__init__(f"node {node}: {detail}")


class CorruptTraceError(AsyncLocalError):
    pass


class PreconditionError(AsyncLocalError):
    pass


class UnknownNameError(AsyncLocalError):
    def __init__(self, kind: str, name: str, known=()):
        self.kind = kind
        self.name = name
        hint = f" (known: {', '.join(sorted(known))})" if known else ""
        super().__init__(f"unknown {kind} '{name}'{hint}")


class WaitFreedomError(AsyncLocalError):
    """An enumerated execution ran past its step bound without completing."""

    def __init__(self, blocks, step_bound: int):
        self.blocks = [sorted(b) for b in blocks]
        super().__init__(f"execution {self.blocks} did not complete within {step_bound} steps")


# Errors the CLI reports as usage/format problems (exit code 2)
USAGE_ERRORS = (
    SchedulingFormatError,
    GraphValidationError,
    PreconditionError,
    UnknownNameError,
    GuardExceededError,
    CorruptTraceError,
)
