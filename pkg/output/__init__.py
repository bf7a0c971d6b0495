from .report_formatter import render, render_csv, render_json, render_pretty
from .archiver import archive_report, get_latest_report, write_report

__all__ = [
    "render",
    "render_csv",
    "render_json",
    "render_pretty",
    "archive_report",
    "get_latest_report",
    "write_report",
]
