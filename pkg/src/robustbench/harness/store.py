"""Append-only JSONL run store with a completion journal.

Layout per run: `<out>/<run-id>/header.json` (identity and hashes),
`records.jsonl` (one evaluation cell per line), `journal.jsonl` (one
completion marker per cell, including skips). A crash can only lose a
suffix of both files, which resume detects and re-executes.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

from ..errors import StoreCorrupt

CellKey = tuple[str, str, str, int, int]  # sample, model, kind ('' = clean), severity, rep

_CLEAN = ""


def clean_key(sample_id: str, model_id: str) -> CellKey:
    return (sample_id, model_id, _CLEAN, -1, 0)


def corrupted_key(sample_id: str, model_id: str, kind: str, severity: int, rep: int) -> CellKey:
    return (sample_id, model_id, kind, severity, rep)


def key_of_record(record: dict) -> CellKey:
    if record.get("kind") is None:
        return clean_key(record["sample_id"], record["model_id"])
    return (
        record["sample_id"],
        record["model_id"],
        record["kind"],
        int(record["severity_index"]),
        int(record["rep"]),
    )


def _key_str(key: CellKey) -> str:
    return "\x1f".join(str(part) for part in key)


def _key_from_str(raw: str) -> CellKey:
    sample, model, kind, severity, rep = raw.split("\x1f")
    return (sample, model, kind, int(severity), int(rep))


@dataclass
class RunStore:
    directory: Path

    def __post_init__(self) -> None:
        self.directory = Path(self.directory)
        self._lock = threading.Lock()

    # --- paths ---

    @property
    def header_path(self) -> Path:
        return self.directory / "header.json"

    @property
    def records_path(self) -> Path:
        return self.directory / "records.jsonl"

    @property
    def journal_path(self) -> Path:
        return self.directory / "journal.jsonl"

    @property
    def exists(self) -> bool:
        return self.header_path.exists()

    # --- header ---

    def write_header(self, header: dict) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        self.header_path.write_text(json.dumps(header, indent=2, sort_keys=True))

    def read_header(self) -> dict:
        if not self.exists:
            raise StoreCorrupt(f"no run header at {self.header_path}")
        return json.loads(self.header_path.read_text())

    # --- appends (single serialized writer) ---

    def append(self, record: dict, status: str = "done", error: str | None = None) -> None:
        # Journal first: a crash can leave a journaled cell without its
        # record (detected and re-run on resume), never the reverse.
        key = _key_str(key_of_record(record))
        journal_line: dict[str, Any] = {"key": key, "status": status, "ts": time.time()}
        if error is not None:
            journal_line["error"] = error
        with self._lock:
            with self.journal_path.open("a") as fh:
                fh.write(json.dumps(journal_line, sort_keys=True) + "\n")
            if status == "done":
                with self.records_path.open("a") as fh:
                    fh.write(json.dumps(record, sort_keys=True) + "\n")

    def append_skip(self, key: CellKey, error: str) -> None:
        line = {"key": _key_str(key), "status": "skipped", "error": error, "ts": time.time()}
        with self._lock:
            with self.journal_path.open("a") as fh:
                fh.write(json.dumps(line, sort_keys=True) + "\n")

    # --- reads ---

    def _read_jsonl(self, path: Path) -> list[dict]:
        """Parse a JSONL file, tolerating one truncated trailing line."""
        if not path.exists():
            return []
        lines = [line for line in path.read_text().splitlines() if line.strip()]
        out = []
        for index, line in enumerate(lines):
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError:
                if index == len(lines) - 1:
                    break  # interrupted final write
                raise StoreCorrupt(f"malformed line {index + 1} in {path}") from None
        return out

    def repair_truncated_tail(self) -> None:
        """Drop a partial trailing line left by an interrupted write.

        Must run before any append to a store that may have crashed:
        appending after a partial line would corrupt it into a malformed
        mid-file line.
        """
        for path in (self.records_path, self.journal_path):
            if not path.exists():
                continue
            text = path.read_text()
            lines = text.splitlines()
            if not lines:
                continue
            try:
                json.loads(lines[-1])
            except json.JSONDecodeError:
                with self._lock:
                    path.write_text("".join(line + "\n" for line in lines[:-1]))

    def load_records(self) -> list[dict]:
        return self._read_jsonl(self.records_path)

    def load_journal(self) -> dict[CellKey, dict]:
        out: dict[CellKey, dict] = {}
        for entry in self._read_jsonl(self.journal_path):
            out[_key_from_str(entry["key"])] = entry
        return out

    def completed_keys(self) -> set[CellKey]:
        """Cells that need no re-execution.

        A journaled skip is final; a journaled 'done' counts only if its
        record line survived (it is written after the journal line).
        """
        journal = self.load_journal()
        record_keys = {key_of_record(r) for r in self.load_records()}
        done = set()
        for key, entry in journal.items():
            if entry["status"] == "skipped" or key in record_keys:
                done.add(key)
        return done

    def check_consistency(self) -> None:
        """Journal 'done' keys and record keys must match exactly."""
        journal = self.load_journal()
        done = {k for k, entry in journal.items() if entry["status"] == "done"}
        record_keys: set[CellKey] = set()
        for record in self.load_records():
            key = key_of_record(record)
            if key in record_keys:
                raise StoreCorrupt(f"duplicate record for cell {key}")
            record_keys.add(key)
        if done != record_keys:
            missing = done - record_keys
            orphans = record_keys - done
            raise StoreCorrupt(
                f"journal/record mismatch: {len(missing)} journaled cells without "
                f"records, {len(orphans)} records without journal entries"
            )

    def canonical_records(self) -> list[dict]:
        """Records sorted by cell key with volatile fields dropped."""
        canonical = []
        for record in self.load_records():
            record = dict(record)
            record.pop("ts", None)
            canonical.append(record)
        canonical.sort(key=lambda r: key_of_record(r))
        return canonical


def canonical_dump(records: Iterable[dict]) -> str:
    return "\n".join(json.dumps(r, sort_keys=True) for r in records)
