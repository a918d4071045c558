"""Exception hierarchy for the tsmiles toolkit.

Every error carries a machine-readable ``code``; parser errors additionally
carry the byte offset of the offending character.
"""

from __future__ import annotations


class TsmilesError(Exception):
    """Base class for all toolkit errors."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message
        # Pipeline wrappers annotate the failing stage when they re-raise.
        self.stage: str | None = None


# --------------------------------------------------------------------------
# SMILES parsing

class SmilesParseError(TsmilesError):
    """A SMILES string could not be parsed; ``offset`` is the byte position."""

    code = "smiles-parse"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownToken(SmilesParseError):
    code = "unknown-token"


class UnbalancedRing(SmilesParseError):
    code = "unbalanced-ring"


class UnbalancedParen(SmilesParseError):
    code = "unbalanced-paren"


class StereoUnsupported(SmilesParseError):
    code = "stereo-unsupported"


class MultiComponentUnsupported(SmilesParseError):
    code = "multi-component-unsupported"


class AromaticityError(SmilesParseError):
    """Aromatic atom outside any ring; the graph would violate atom invariants."""

    code = "aromaticity"


# --------------------------------------------------------------------------
# Chemistry

class KekulizationFailed(TsmilesError):
    code = "kekulization-failed"


# --------------------------------------------------------------------------
# t-SMILES text parsing

class TsmilesParseError(TsmilesError):
    code = "tsmiles-parse"


class EmptyInput(TsmilesParseError):
    code = "empty-input"


class LeadingMarker(TsmilesParseError):
    code = "leading-marker"


class TruncatedTree(TsmilesParseError):
    code = "truncated-tree"


class SurplusTokens(TsmilesParseError):
    code = "surplus-tokens"


class CountMismatch(TsmilesParseError):
    code = "count-mismatch"


class MalformedFBT(TsmilesParseError):
    code = "malformed-fbt"


# --------------------------------------------------------------------------
# Fragmentation / assembly

class DisconnectedFragments(TsmilesError):
    code = "disconnected-fragments"


class AssemblyError(TsmilesError):
    """A fragment join failed; carries enough context to reproduce it."""

    code = "assembly"
    reason = "assembly"

    def __init__(self, message: str, stage: str = "", nodes: tuple[int, int] | None = None):
        super().__init__(message)
        self.stage = stage or None
        self.nodes = nodes


class IdMismatch(AssemblyError):
    code = "id-mismatch"
    reason = "IdMismatch"


class NoCompatibleAttachment(AssemblyError):
    code = "no-compatible-attachment"
    reason = "NoCompatibleAttachment"


class ValenceViolation(AssemblyError):
    code = "valence-violation"
    reason = "ValenceViolation"


class ExhaustedRetries(TsmilesError):
    code = "exhausted-retries"


# --------------------------------------------------------------------------
# Generation / metrics

class EmptyCorpus(TsmilesError):
    code = "empty-corpus"


class EmptySample(TsmilesError):
    code = "empty-sample"
