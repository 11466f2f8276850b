"""Dataset ingestion: directory-per-class trees or explicit manifest files."""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import DuplicateSampleId, NoEntries, Unreadable
from ..image import load_image

_IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".webp"}


@dataclass(frozen=True)
class ManifestEntry:
    sample_id: str
    path: str  # relative to the manifest root
    class_name: str | None = None


@dataclass(frozen=True)
class DatasetManifest:
    root: Path
    entries: tuple[ManifestEntry, ...]
    class_names: tuple[str, ...]

    @property
    def labeled(self) -> bool:
        return all(e.class_name is not None for e in self.entries)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_index(self, name: str) -> int:
        return self.class_names.index(name)

    def resolve(self, entry: ManifestEntry) -> Path:
        return self.root / entry.path


def _scan_directory(root: Path) -> tuple[list[ManifestEntry], list[str]]:
    class_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    entries: list[ManifestEntry] = []
    class_names: list[str] = []
    for class_dir in class_dirs:
        files = sorted(
            p for p in class_dir.iterdir() if p.suffix.lower() in _IMAGE_SUFFIXES
        )
        if files:
            class_names.append(class_dir.name)
            for f in files:
                rel = f.relative_to(root).as_posix()
                entries.append(ManifestEntry(rel, rel, class_dir.name))
    if not entries:
        # flat folder of images: usable, but unlabeled
        files = sorted(p for p in root.iterdir() if p.suffix.lower() in _IMAGE_SUFFIXES)
        entries = [ManifestEntry(f.name, f.name, None) for f in files]
    return entries, class_names


def _read_rows(path: Path) -> list[dict]:
    if path.suffix.lower() == ".csv":
        with path.open(newline="") as fh:
            return list(csv.DictReader(fh))
    if path.suffix.lower() in {".jsonl", ".ndjson"}:
        return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]
    raise Unreadable(f"unsupported manifest format: {path.suffix!r}")


def _from_rows(root: Path, rows: list[dict]) -> tuple[list[ManifestEntry], list[str]]:
    entries: list[ManifestEntry] = []
    classes: set[str] = set()
    for row in rows:
        sample_id = str(row.get("sample_id") or row.get("id") or row["path"])
        class_name = row.get("class") or row.get("class_name") or None
        if class_name is not None:
            class_name = str(class_name)
            classes.add(class_name)
        entries.append(ManifestEntry(sample_id, str(row["path"]), class_name))
    return entries, sorted(classes)


def load_manifest(path: str | Path, decode_check: int = 3) -> DatasetManifest:
    """Read a dataset layout and validate it.

    Accepts a directory (subfolders become classes; a flat image folder is
    treated as unlabeled) or a CSV/JSONL manifest with columns
    sample_id/path/class. A small sample of entries is decoded to catch
    broken files early.
    """
    path = Path(path)
    if not path.exists():
        raise Unreadable(f"dataset path does not exist: {path}")
    if path.is_dir():
        entries, class_names = _scan_directory(path)
        root = path
    else:
        entries, class_names = _from_rows(path.parent, _read_rows(path))
        root = path.parent
    if not entries:
        raise NoEntries(f"no image entries found under {path}")
    seen: set[str] = set()
    for entry in entries:
        if entry.sample_id in seen:
            raise DuplicateSampleId(f"duplicate sample id: {entry.sample_id!r}")
        seen.add(entry.sample_id)
    manifest = DatasetManifest(root, tuple(entries), tuple(class_names))
    for entry in entries[: max(0, decode_check)]:
        load_image(manifest.resolve(entry))  # raises Unreadable on a bad file
    return manifest


def dataset_hash(manifest: DatasetManifest) -> str:
    """Structural identity of a dataset: ids, paths, classes, file sizes."""
    h = hashlib.sha256()
    h.update(",".join(manifest.class_names).encode())
    for entry in sorted(manifest.entries, key=lambda e: e.sample_id):
        size = manifest.resolve(entry).stat().st_size
        h.update(f"{entry.sample_id}\x1f{entry.path}\x1f{entry.class_name}\x1f{size}\n".encode())
    return h.hexdigest()
