"""
Exception hierarchy shared by every service.

Services raise these; the HTTP layer turns them into 400 responses and the
CLI into exit codes.
"""

from __future__ import annotations


class TwoFactorError(Exception):
    """Base class for every domain error."""


# ─── Input / graph-core ───────────────────────────────────────────────────────

class GraphFormatError(TwoFactorError, ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class InvalidGraphError(TwoFactorError, ValueError):
    pass


class HamiltonCycleError(TwoFactorError, ValueError):
    def __init__(self, message: str, pair: tuple[int, int] | None = None) -> None:
        self.pair = pair
        super().__init__(message)


class NotATwoFactorError(TwoFactorError, ValueError):
    def __init__(
        self,
        message: str,
        vertex: int | None = None,
        edge: tuple[int, int] | None = None,
    ) -> None:
        self.vertex = vertex
        self.edge = edge
        super().__init__(message)


class AuxEdgeError(TwoFactorError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "edge not in auxiliary graph"


class ParameterError(TwoFactorError, ValueError):
    pass


# ─── Searches ─────────────────────────────────────────────────────────────────

class SearchBudgetExhausted(TwoFactorError):
    def __init__(self, message: str, expansions: int = 0) -> None:
        self.expansions = expansions
        super().__init__(message)


class AlternatingCycleAbsent(TwoFactorError):
    pass


class WitnessExhausted(TwoFactorError):
    def __init__(self, message: str, arc: tuple[int, int] | None = None) -> None:
        self.arc = arc
        super().__init__(message)


class BlowupOrderingError(TwoFactorError):
    def __init__(self, message: str, level: int) -> None:
        self.level = level
        super().__init__(message)


class ThinningError(TwoFactorError):
    pass


# ─── Transforms ───────────────────────────────────────────────────────────────

class NeighbouringVerticesError(TwoFactorError, ValueError):
    def __init__(self, message: str, pair: tuple[int, int] | None = None) -> None:
        self.pair = pair
        super().__init__(message)


class PatternError(TwoFactorError, ValueError):
    pass


class CapacityExceededError(TwoFactorError):
    def __init__(self, message: str, needed: int = 0, available: int = 0) -> None:
        self.needed = needed
        self.available = available
        super().__init__(message)


# ─── Oracle / generators / pipeline ───────────────────────────────────────────

class OracleCapError(TwoFactorError, ValueError):
    pass


class InfeasibleGeometryError(TwoFactorError, ValueError):
    pass


class HamiltonCycleNotFound(TwoFactorError):
    def __init__(self, message: str, exhaustive: bool) -> None:
        self.exhaustive = exhaustive
        super().__init__(message)


class FallbackExhausted(TwoFactorError):
    def __init__(self, message: str, exhaustive: bool = False) -> None:
        self.exhaustive = exhaustive
        super().__init__(message)


class PipelineInvariantError(TwoFactorError):
    pass


class EmbeddingNotFound(TwoFactorError):
    def __init__(self, message: str, expansions: int = 0) -> None:
        self.expansions = expansions
        super().__init__(message)
