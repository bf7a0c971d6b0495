import csv
import io
import json
from fractions import Fraction
from typing import List, Optional, Sequence

from models import ReportValue, RunReport

# Columns of the comparison table, in display order
TABLE_COLUMNS = [
    ("classical", "p^C"),
    ("qcrac", "p^Q"),
    ("qcrac_analytic", "p^Q analytic"),
    ("earac_lower", "p^E see-saw"),
    ("earac_published", "p^E published"),
    ("q1ab_reference", "Q_1+ab bound"),
    ("qcrac_beats_earac", "p^Q > p^E"),
]


def format_probability(value: float) -> str:
    """Decimal string with 12 significant digits."""
    return f"{value:.12g}"


def computed(value: float, exact: Optional[Fraction] = None, note: Optional[str] = None) -> ReportValue:
    return ReportValue(
        decimal=format_probability(float(value)),
        exact=None if exact is None else f"{exact.numerator}/{exact.denominator}",
        note=note,
    )


def reference(value: float, note: str = "reference, not computed", exact: Optional[Fraction] = None) -> ReportValue:
    return ReportValue(
        decimal=format_probability(float(value)),
        exact=None if exact is None else f"{exact.numerator}/{exact.denominator}",
        kind="reference",
        note=note,
    )


def comparison(holds: bool, label: str) -> ReportValue:
    """A yes/no comparison between values of the same report."""
    return ReportValue(kind="comparison", note=f"{'yes' if holds else 'no'}: {label}")


def failed(error: BaseException) -> ReportValue:
    return ReportValue(error=f"{type(error).__name__}: {error}")


def render_json(reports: Sequence[RunReport], include_timing: bool = True) -> str:
    """Deterministic JSON: sorted keys, one report object or a list of them."""
    exclude = None if include_timing else {"timing"}
    payload = [json.loads(r.json(exclude=exclude)) for r in reports]
    body = payload[0] if len(payload) == 1 else payload
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def parse_json(text: str) -> List[RunReport]:
    data = json.loads(text)
    items = data if isinstance(data, list) else [data]
    return [RunReport.parse_obj(item) for item in items]


def render_csv(reports: Sequence[RunReport]) -> str:
    """One row per scenario in the comparison-table layout."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "d"] + [title for _, title in TABLE_COLUMNS])
    for report in reports:
        scenario = report.scenario or {}
        row = [scenario.get("n", ""), scenario.get("d", "")]
        for key, _ in TABLE_COLUMNS:
            row.append(_cell(report.values.get(key)))
        writer.writerow(row)
    return buffer.getvalue()


def render_pretty(reports: Sequence[RunReport]) -> str:
    """Human-readable listing, one block per report."""
    lines = []
    for report in reports:
        header = f"=== {report.command}"
        if report.scenario:
            header += f" {report.scenario['n']}^({report.scenario['d']})->1"
        lines.append(header + " ===")
        lines.append("")
        width = max((len(name) for name in report.values), default=0)
        for name, value in report.values.items():
            text = _cell(value)
            if value.exact:
                text += f"  ({value.exact})"
            if value.kind == "reference":
                text += "  [reference]"
            if value.note and value.kind == "computed":
                text += f"  - {value.note}"
            lines.append(f"  {name.ljust(width)}  {text}")
        if report.seed is not None:
            lines.append(f"  {'seed'.ljust(width)}  {report.seed}")
        lines.append(f"  {'time'.ljust(width)}  {report.timing:.2f}s")
        lines.append("")
    return "\n".join(lines)


def render(reports: Sequence[RunReport], fmt: str, include_timing: bool = True) -> str:
    if fmt == "json":
        return render_json(reports, include_timing)
    if fmt == "csv":
        return render_csv(reports)
    if fmt == "pretty":
        return render_pretty(reports)
    raise ValueError(f"unknown output format {fmt!r}")


def _cell(value: Optional[ReportValue]) -> str:
    if value is None:
        return ""
    if value.error:
        return f"error: {value.error}"
    return value.decimal or value.note or ""
