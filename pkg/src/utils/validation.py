"""
Validation utilities for NPT command-line runs.
Checks the library directory, its MANIFEST and user-supplied paths before any
checking starts, so I/O problems surface as exit code 2 rather than as kernel
diagnostics. Status lines go to standard error; standard output is reserved for
command results.
"""

import os
import sys
from pathlib import Path
from typing import Iterable, List

from src.stdlib.prelude import read_manifest
from src.utils.config import PATHS, get_lib_dir, get_manifest_path


def _say(message: str, quiet: bool) -> None:
    if not quiet:
        print(message, file=sys.stderr)


def validate_environment(quiet: bool = False) -> bool:
    """
    Validate that the library directory and its MANIFEST are usable.

    Returns:
        bool: True if the prelude can be loaded, False otherwise
    """
    lib_dir = get_lib_dir()
    if os.getenv("NPT_LIB"):
        _say(f"   ℹ️  NPT_LIB overrides the library directory: {lib_dir}", quiet)

    if not lib_dir.is_dir():
        print(f"❌ Library directory not found: {lib_dir}", file=sys.stderr)
        print("   Set NPT_LIB to a directory containing MANIFEST and the .npt library files", file=sys.stderr)
        return False

    manifest = get_manifest_path()
    if not manifest.is_file():
        print(f"❌ {PATHS['manifest']} not found in {lib_dir}", file=sys.stderr)
        return False

    try:
        listing = read_manifest(manifest)
    except (OSError, ValueError) as e:
        print(f"❌ Could not read {manifest}: {e}", file=sys.stderr)
        return False
    missing = [path.name for path in listing.files() if not path.is_file()]
    if missing:
        print(f"❌ Library files listed in {PATHS['manifest']} are missing: {', '.join(missing)}",
              file=sys.stderr)
        return False

    _say(f"   ✅ Library ready: {lib_dir}", quiet)
    return True


def validate_source_paths(paths: Iterable[str]) -> bool:
    """
    Validate that every source path exists and is a readable file.

    Returns:
        bool: True if all paths are usable, False otherwise
    """
    all_valid = True
    for path in paths:
        p = Path(path)
        if not p.exists():
            print(f"❌ File not found: {p}", file=sys.stderr)
            all_valid = False
        elif not p.is_file():
            print(f"❌ Not a file: {p}", file=sys.stderr)
            all_valid = False
        elif not os.access(p, os.R_OK):
            print(f"❌ File is not readable: {p}", file=sys.stderr)
            all_valid = False
        elif p.suffix != PATHS["source_suffix"]:
            print(f"   ⚠️  {p} does not end in {PATHS['source_suffix']}; checking it anyway", file=sys.stderr)
    return all_valid


def validate_golden_dir(directory: str) -> bool:
    """
    Validate a golden-suite directory.

    Returns:
        bool: True if the directory exists, False otherwise
    """
    path = Path(directory)
    if not path.is_dir():
        print(f"❌ Golden directory not found: {path}", file=sys.stderr)
        return False
    return True


def golden_cases(directory: str) -> List[Path]:
    """Source files of a golden suite, sorted by name."""
    return sorted(Path(directory).glob(f"*{PATHS['source_suffix']}"))
