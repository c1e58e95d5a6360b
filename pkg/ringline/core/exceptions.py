"""
Ringline - Exceptions
Error hierarchy shared by the services and the command line
"""

from typing import Any, Optional


class RinglineError(Exception):
    """Base error; carries the exit status the command line maps it to"""

    exit_code = 2

    def __init__(self, message: str, *, witness: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness


class RingSpecError(RinglineError):
    """Ring-spec text failed to parse or names an invalid ring"""

    def __init__(self, message: str, *, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class InvalidParameterError(RinglineError):
    pass


class CapExceededError(RinglineError):
    pass


class RingAxiomError(RinglineError):
    """Raw tables do not form a ring"""

    def __init__(self, axiom: str, witness: tuple):
        super().__init__(f"ring axiom violated: {axiom} at {witness}", witness=witness)
        self.axiom = axiom


class FormatError(RinglineError):
    """Malformed input file"""

    def __init__(self, message: str, *, source: str = "<text>", line: Optional[int] = None):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line


class NotAdmissibleError(RinglineError):
    pass


class EmbeddingError(RinglineError):
    pass


class CertificationError(RinglineError):
    """A design failed verification"""

    exit_code = 1

    def __init__(self, violation):
        super().__init__(str(violation), witness=violation.witness)
        self.violation = violation


class SperaHypothesisError(RinglineError):
    exit_code = 1

    def __init__(self, hypothesis: str, message: str, witness: Any):
        super().__init__(f"hypothesis ({hypothesis}) fails: {message}", witness=witness)
        self.hypothesis = hypothesis


class GenerationError(RinglineError):
    """Orbit-stabiliser arithmetic failed; the generators do not generate the group"""

    exit_code = 1


class InternalConsistencyError(RinglineError):
    """Two independent computations of the same quantity disagree"""

    exit_code = 1


# Export
__all__ = [
    "RinglineError",
    "RingSpecError",
    "InvalidParameterError",
    "CapExceededError",
    "RingAxiomError",
    "FormatError",
    "NotAdmissibleError",
    "EmbeddingError",
    "CertificationError",
    "SperaHypothesisError",
    "GenerationError",
    "InternalConsistencyError",
]
