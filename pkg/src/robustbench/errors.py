"""Exception hierarchy shared across the package."""

from __future__ import annotations


class RobustbenchError(Exception):
    """Base class for all errors raised by this package."""


# --- corruption engine ---------------------------------------------------


class UnknownKind(RobustbenchError):
    """A corruption name outside the fixed catalog."""


class InvalidParams(RobustbenchError):
    """Corruption parameters outside the declared ranges."""


# --- prediction ----------------------------------------------------------


class ZeroVector(RobustbenchError):
    """Cosine similarity requested for an all-zero vector."""


class DimensionMismatch(RobustbenchError):
    """Embedding dimensions disagree."""


class BackendUnavailable(RobustbenchError):
    """A predictor backend cannot be reached or initialized."""


class EmbeddingFailure(RobustbenchError):
    """A backend failed to embed a specific input."""


# --- planner -------------------------------------------------------------


class EmptyResponse(RobustbenchError):
    """A model response contained no parsable recommendation lines."""


class TransportError(RobustbenchError):
    """Chat endpoint unreachable after the retry budget."""


# --- metrics -------------------------------------------------------------


class NoSamples(RobustbenchError):
    """No labeled samples available for the requested metric."""


class MissingLabels(RobustbenchError):
    """A supervised metric was requested on unlabeled outcomes."""


class NoCorruptedCells(RobustbenchError):
    """Flip probability requested for a sample with no corrupted cells."""


class BaselineZeroError(RobustbenchError):
    """A baseline per-corruption error of zero makes the ratio undefined."""


class DegenerateBaselineDelta(RobustbenchError):
    """Baseline corrupted-minus-clean delta is zero for some corruption."""


class BaselineZeroFlips(RobustbenchError):
    """Baseline dataset flip rate is zero."""


class DegenerateVariance(RobustbenchError):
    """Pearson correlation requested on a constant series."""


# --- harness -------------------------------------------------------------


class Unreadable(RobustbenchError):
    """A dataset path cannot be read or decoded."""


class DuplicateSampleId(RobustbenchError):
    """Two manifest rows share a sample id."""


class NoEntries(RobustbenchError):
    """A manifest resolves to zero samples."""


class StoreCorrupt(RobustbenchError):
    """A run store's journal and records disagree, or the config changed."""


class IncompatibleBaseline(RobustbenchError):
    """Baseline run does not share the dataset and plan of the main run."""


# --- report --------------------------------------------------------------


class MissingBaseline(RobustbenchError):
    """A relative-metric table was requested without a baseline row."""


class UnlabeledRun(RobustbenchError):
    """Accuracy curves requested for a run without ground-truth labels."""
