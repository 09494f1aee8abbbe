import os
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[2]

# Kernel settings
KERNEL_CONFIG = {
    "step_budget": 1_000_000,        # reduction steps before BudgetExceeded
    "strategy": "lo",                # leftmost-outermost normalization
    "strategies": ("lo", "ri"),      # lo | rightmost-innermost
    "recursion_limit": 10_000,       # interpreter frames for deeply nested terms
}

# File paths
PATHS = {
    "lib_dir": str(REPO_ROOT / "lib"),
    "manifest": "MANIFEST",
    "golden_dir": str(REPO_ROOT / "tests" / "golden"),
    "log_dir": "logs",
    "source_suffix": ".npt",
    "golden_suffix": ".golden",
}

# Command-line behaviour
CLI_CONFIG = {
    "diag_format": "text",           # text | structured
    "diag_formats": ("text", "structured"),
    "prompt": "npt> ",
    "trace_marker": "-- trace",
    "show_progress": True,           # tqdm bars on stderr when it is a terminal
}

# Process exit codes
EXIT_CODES = {
    "ok": 0,
    "diagnostic": 1,
    "io": 2,
    "budget": 3,
}

# Prelude groups in lib/MANIFEST
MANIFEST_GROUPS = {
    "prelude": "prelude",
    "corpus": "corpus",
    "extras": "extras",
}


def get_lib_dir() -> Path:
    """Library directory; NPT_LIB overrides the bundled lib/."""
    return Path(os.getenv("NPT_LIB") or PATHS["lib_dir"])


def get_manifest_path() -> Path:
    return get_lib_dir() / PATHS["manifest"]


def raise_recursion_limit() -> int:
    """Lift the interpreter recursion limit to KERNEL_CONFIG["recursion_limit"].

    Never lowers an already higher limit. Returns the limit in effect.
    """
    limit = max(sys.getrecursionlimit(), KERNEL_CONFIG["recursion_limit"])
    sys.setrecursionlimit(limit)
    return limit


def ensure_log_directory() -> Path:
    """Create the session log directory if it doesn't exist."""
    path = Path(PATHS["log_dir"])
    path.mkdir(parents=True, exist_ok=True)
    return path


if __name__ == "__main__":
    print("Configuration loaded successfully!")
    print(f"Library directory: {get_lib_dir()}")
    print(f"Step budget: {KERNEL_CONFIG['step_budget']:,}")
