import logging
from datetime import datetime
from pathlib import Path
from typing import List, Optional

logger = logging.getLogger(__name__)

EXTENSIONS = {"json": "json", "csv": "csv", "pretty": "txt"}


def write_report(content: str, path: Path) -> Path:
    """Write rendered output to ``path``, creating parent directories.

    Args:
        content: Rendered report text.
        path: Destination file.

    Returns:
        The path written.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")
    logger.info(f"Report written to: {path}")
    return path


def archive_report(
    content: str,
    command: str,
    fmt: str,
    reports_dir: Path,
    when: Optional[datetime] = None,
) -> Path:
    """Store rendered output as ``<command>_<YYYY-MM-DD_HHMMSS>.<ext>`` in ``reports_dir``.

    Args:
        content: Rendered report text.
        command: CLI command that produced it.
        fmt: Output format (json, csv or pretty).
        reports_dir: Archive directory.
        when: Timestamp for the filename (defaults to now).

    Returns:
        Path to the archived file.
    """
    when = when or datetime.now()
    stamp = when.strftime("%Y-%m-%d_%H%M%S")
    filename = f"{command}_{stamp}.{EXTENSIONS.get(fmt, 'txt')}"
    return write_report(content, Path(reports_dir) / filename)


def get_archived_reports(reports_dir: Path, command: str = "*") -> List[Path]:
    """Archived report files, newest first.

    Args:
        reports_dir: Archive directory.
        command: Restrict to one command (default: all).
    """
    reports_dir = Path(reports_dir)
    if not reports_dir.exists():
        return []

    files = [p for p in reports_dir.glob(f"{command}_*.*") if p.suffix.lstrip(".") in EXTENSIONS.values()]
    return sorted(files, key=lambda p: p.stem.split("_", 1)[-1], reverse=True)


def get_latest_report(reports_dir: Path, command: str = "*") -> Optional[Path]:
    """The most recent archived report, or None when the archive is empty."""
    reports = get_archived_reports(reports_dir, command)
    return reports[0] if reports else None
