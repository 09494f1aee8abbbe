"""
Diagnostic Reporter

Renders kernel diagnostics for the command line, one per line in the text
format or as newline-delimited JSON records, and keeps per-session counts.
A session summary can be written as JSON under logs/ for later inspection.
"""

import json
import logging
import sys
from collections import Counter
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, TextIO

from src.core.diagnostics import Diagnostic
from src.utils.config import CLI_CONFIG, ensure_log_directory

logger = logging.getLogger(__name__)


@dataclass
class SessionSummary:
    """What a CLI session reported"""
    session_id: str
    command: str
    start_time: str
    end_time: Optional[str] = None
    files: List[str] = field(default_factory=list)
    diagnostics: int = 0
    by_code: Dict[str, int] = field(default_factory=dict)


class DiagnosticReporter:
    """Writes diagnostics to a stream and tracks what was reported"""

    def __init__(self, fmt: Optional[str] = None, stream: Optional[TextIO] = None,
                 command: str = "check"):
        """
        Args:
            fmt: "text" or "structured" (defaults to CLI_CONFIG)
            stream: Output stream, standard error by default
            command: CLI command name recorded in the session summary
        """
        self.fmt = fmt or CLI_CONFIG["diag_format"]
        if self.fmt not in CLI_CONFIG["diag_formats"]:
            raise ValueError(f"unknown diagnostic format: {self.fmt}")
        self.stream = stream
        self.counts: Counter = Counter()
        self.reported: List[Diagnostic] = []
        now = datetime.now()
        self.summary = SessionSummary(
            session_id=now.strftime("%Y%m%d_%H%M%S"),
            command=command,
            start_time=now.isoformat(),
        )

    def _out(self) -> TextIO:
        return self.stream if self.stream is not None else sys.stderr

    def render(self, diagnostic: Diagnostic) -> str:
        if self.fmt == "structured":
            return diagnostic.format_structured()
        return diagnostic.format_text()

    def report(self, diagnostic: Diagnostic) -> None:
        """Print one diagnostic and count it."""
        self.counts[diagnostic.code.value] += 1
        self.reported.append(diagnostic)
        print(self.render(diagnostic), file=self._out())
        logger.debug(f"Reported {diagnostic.code.value} in {diagnostic.file}")

    def note_file(self, path: str) -> None:
        self.summary.files.append(path)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def finish(self) -> SessionSummary:
        self.summary.end_time = datetime.now().isoformat()
        self.summary.diagnostics = self.total
        self.summary.by_code = dict(self.counts)
        return self.summary

    def save_summary(self, log_dir: Optional[Path] = None) -> Path:
        """
        Write the session summary as JSON

        Returns:
            Path of the written file
        """
        summary = self.finish()
        directory = Path(log_dir) if log_dir is not None else ensure_log_directory()
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"session_{summary.session_id}.json"
        with open(path, "w", encoding="utf-8") as f:
            json.dump(asdict(summary), f, indent=2)
        logger.info(f"Session summary saved: {path}")
        return path
