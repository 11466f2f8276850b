"""Dataset ingestion, run execution, persistence, and summarization."""

from .config import RunConfig, config_hash
from .manifest import DatasetManifest, ManifestEntry, dataset_hash, load_manifest
from .runner import RunMatrix, expected_record_count, resolve_matrix, resume, run, run_id_for
from .store import RunStore, canonical_dump
from .summarize import RobustnessSummary, curve_points, outcome_tables, summarize

__all__ = [
    "RunConfig",
    "config_hash",
    "DatasetManifest",
    "ManifestEntry",
    "dataset_hash",
    "load_manifest",
    "RunMatrix",
    "expected_record_count",
    "resolve_matrix",
    "resume",
    "run",
    "run_id_for",
    "RunStore",
    "canonical_dump",
    "RobustnessSummary",
    "curve_points",
    "outcome_tables",
    "summarize",
]
