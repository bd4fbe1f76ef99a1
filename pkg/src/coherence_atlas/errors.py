"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class CoherenceAtlasError(Exception):
    """Base class for all toolkit errors."""


class CatalogError(CoherenceAtlasError):
    """Reference to a component outside the fixed catalogs."""


class CorpusParseError(CoherenceAtlasError):
    """Malformed corpus document; carries the offending field path."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class CorpusValidationError(CoherenceAtlasError):
    """One or more invariant violations; lists every violation found."""

    def __init__(self, findings):
        self.findings = list(findings)
        lines = "; ".join(f"{f.path}: {f.message}" for f in self.findings)
        super().__init__(f"{len(self.findings)} validation error(s): {lines}")


class MergeError(CoherenceAtlasError):
    """Unresolved coder disagreements; names each one."""

    def __init__(self, message: str, disagreements=()):
        self.disagreements = list(disagreements)
        super().__init__(message)


class AnalysisError(CoherenceAtlasError):
    """Analysis precondition failure (insufficient or degenerate data)."""
