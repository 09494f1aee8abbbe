"""
Prelude and corpus loading.

The shipped library lives in `lib/` (or wherever NPT_LIB points). `lib/MANIFEST`
lists, per group, the files to load in order and the names each file must
define; loading checks every file and then asserts that the listed names exist.

Manifest format: a line `<group> <file>` starts an entry, indented lines that
follow list its expected names, `#` starts a comment.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from src.core.diagnostics import ErrorCode, fail
from src.core.pipeline import check_file
from src.core.typechecker import Signature
from src.utils.config import MANIFEST_GROUPS, get_manifest_path

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ManifestEntry:
    group: str
    file: str
    names: Tuple[str, ...]


@dataclass(frozen=True)
class PreludeManifest:
    lib_dir: Path
    entries: Tuple[ManifestEntry, ...]

    def group(self, name: str) -> List[ManifestEntry]:
        return [e for e in self.entries if e.group == name]

    def path_of(self, entry: ManifestEntry) -> Path:
        return self.lib_dir / entry.file

    def files(self, groups: Optional[Sequence[str]] = None) -> List[Path]:
        return [self.path_of(e) for e in self.entries if groups is None or e.group in groups]


def parse_manifest(text: str, lib_dir: Path) -> PreludeManifest:
    entries: List[ManifestEntry] = []
    current: Optional[Tuple[str, str, List[str]]] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0].isspace():
            if current is None:
                raise ValueError(f"MANIFEST line {number}: names before any file entry")
            current[2].extend(line.split())
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"MANIFEST line {number}: expected `<group> <file>`")
        if current is not None:
            entries.append(ManifestEntry(current[0], current[1], tuple(current[2])))
        current = (parts[0], parts[1], [])
    if current is not None:
        entries.append(ManifestEntry(current[0], current[1], tuple(current[2])))
    return PreludeManifest(lib_dir, tuple(entries))


def read_manifest(path: Optional[Path] = None) -> PreludeManifest:
    """Read lib/MANIFEST. Missing files raise OSError."""
    path = Path(path) if path is not None else get_manifest_path()
    return parse_manifest(path.read_text(encoding="utf-8"), path.parent)


def _assert_complete(signature: Signature, entry: ManifestEntry, path: Path) -> None:
    missing = [name for name in entry.names if name not in signature]
    if missing:
        raise fail(ErrorCode.UNBOUND_NAME,
                   f"{entry.file} does not define {', '.join(missing)} listed in MANIFEST"
                   ).located(file=str(path))


def load_entries(signature: Signature, manifest: PreludeManifest,
                 entries: Iterable[ManifestEntry], budget: Optional[int] = None) -> Signature:
    for entry in entries:
        path = manifest.path_of(entry)
        signature = check_file(str(path), signature, budget).signature
        _assert_complete(signature, entry, path)
        logger.info(f"Loaded {entry.file}: {len(entry.names)} expected name(s) present")
    return signature


def load_prelude(signature: Optional[Signature] = None, manifest: Optional[PreludeManifest] = None,
                 budget: Optional[int] = None) -> Signature:
    """Base data types and derived nominal primitives."""
    manifest = manifest or read_manifest()
    return load_entries(signature or Signature(), manifest,
                        manifest.group(MANIFEST_GROUPS["prelude"]), budget)


def load_corpus(signature: Signature, manifest: Optional[PreludeManifest] = None,
                budget: Optional[int] = None) -> Signature:
    """Process syntax, nsub', lambda terms and their HOAS encoding; needs the prelude."""
    manifest = manifest or read_manifest()
    return load_entries(signature, manifest, manifest.group(MANIFEST_GROUPS["corpus"]), budget)


def load_extras(signature: Signature, manifest: Optional[PreludeManifest] = None,
                budget: Optional[int] = None) -> Signature:
    """Postulated process encodings and `nsub` built from them; needs the corpus."""
    manifest = manifest or read_manifest()
    return load_entries(signature, manifest, manifest.group(MANIFEST_GROUPS["extras"]), budget)


def base_signature(paths: Sequence[str], use_prelude: bool = True,
                   budget: Optional[int] = None) -> Signature:
    """The Signature user files are checked against.

    The prelude is loaded up to, but not including, the first prelude file that
    is itself among `paths`, so `check lib/prelude.npt ...` checks it only once.
    """
    if not use_prelude:
        return Signature()
    manifest = read_manifest()
    named = {Path(p).resolve() for p in paths}
    entries = []
    for entry in manifest.group(MANIFEST_GROUPS["prelude"]):
        if manifest.path_of(entry).resolve() in named:
            break
        entries.append(entry)
    return load_entries(Signature(), manifest, entries, budget)
