"""Correlation report and cross-correlation matrix assembly plus rendering.

Cells that cannot be computed (too little overlap, or a constant series)
are carried as explicit markers, never coerced to 0.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .errors import DegenerateInputError
from .overlap import Orientation
from .ratings import CRITERIA, split_groups
from .stats import kendall_tau_b, mann_whitney_u, oriented_series, spearman_rho

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate"
STATUS_INSUFFICIENT = "insufficient"

_ABSENT = "--"


@dataclass(frozen=True)
class UTestCell:
    n_agree: int
    n_disagree: int
    u1: float
    u2: float
    u_min: float
    z: float
    p_two_sided: float
    method: str


@dataclass(frozen=True)
class ReportCell:
    status: str
    n: int = 0
    rho: float | None = None
    tau: float | None = None
    utest: UTestCell | None = None


@dataclass(frozen=True)
class ReportRow:
    metric: str
    orientation: Orientation
    cells: dict = field(default_factory=dict)  # criterion -> ReportCell


@dataclass(frozen=True)
class CorrelationReport:
    criteria: tuple[str, ...]
    rows: tuple[ReportRow, ...]
    config_label: str
    warnings: int


def _fmt4(value) -> str:
    return _ABSENT if value is None else f"{value:.4f}"


def _fmt_csv(value) -> str:
    return "" if value is None else repr(float(value))


def build_correlation_report(
    scores_by_metric: dict,
    aggregates_by_criterion: dict,
    metric_order,
    config_label: str = "",
    group_low: float = 2.0,
    group_high: float = 3.0,
) -> CorrelationReport:
    """Correlate every metric with every criterion present.

    scores_by_metric: metric name -> list[MetricScore] (one metric each).
    aggregates_by_criterion: criterion -> list[AggregateRating].
    """
    criteria = tuple(c for c in CRITERIA if aggregates_by_criterion.get(c))
    rows = []
    warnings = 0
    for metric in metric_order:
        scores = scores_by_metric.get(metric, [])
        orientation = scores[0].orientation if scores else Orientation.HIGHER
        cells = {}
        for criterion in criteria:
            aggregates = aggregates_by_criterion[criterion]
            try:
                x, y = oriented_series(scores, aggregates)
            except ValueError:
                cells[criterion] = ReportCell(status=STATUS_INSUFFICIENT)
                warnings += 1
                continue
            n = len(x)
            try:
                rho = spearman_rho(x, y).value
                tau = kendall_tau_b(x, y).value
            except DegenerateInputError:
                cells[criterion] = ReportCell(status=STATUS_DEGENERATE, n=n)
                warnings += 1
                continue

            utest = None
            split = split_groups(aggregates, group_low, group_high)
            sign = -1.0 if orientation == Orientation.LOWER else 1.0
            by_item = {s.item_id: sign * s.value for s in scores}
            agree_values = [by_item[i] for i in sorted(split.agree_ids) if i in by_item]
            disagree_values = [by_item[i] for i in sorted(split.disagree_ids) if i in by_item]
            if agree_values and disagree_values:
                result = mann_whitney_u(agree_values, disagree_values, mode="auto")
                utest = UTestCell(
                    n_agree=len(agree_values),
                    n_disagree=len(disagree_values),
                    u1=result.u1,
                    u2=result.u2,
                    u_min=min(result.u1, result.u2),
                    z=result.z,
                    p_two_sided=result.p_two_sided,
                    method=result.method,
                )
            cells[criterion] = ReportCell(status=STATUS_OK, n=n, rho=rho, tau=tau, utest=utest)
        rows.append(ReportRow(metric=metric, orientation=orientation, cells=cells))
    return CorrelationReport(
        criteria=criteria, rows=tuple(rows), config_label=config_label, warnings=warnings
    )


def write_correlation_csv(report: CorrelationReport, path) -> None:
    """Long-form CSV: one line per metric x criterion, full precision."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["metric", "orientation", "criterion", "status", "n",
             "spearman_rho", "kendall_tau"]
        )
        for row in report.rows:
            for criterion in report.criteria:
                cell = row.cells.get(criterion, ReportCell(status=STATUS_INSUFFICIENT))
                writer.writerow(
                    [row.metric, row.orientation.value, criterion, cell.status,
                     cell.n, _fmt_csv(cell.rho), _fmt_csv(cell.tau)]
                )


def write_utest_csv(report: CorrelationReport, path) -> None:
    """Group-separation details; all three U variants are listed because
    different write-ups report different ones."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["metric", "criterion", "n_agree", "n_disagree",
             "u1", "u2", "u_min", "z", "p_two_sided", "method"]
        )
        for row in report.rows:
            for criterion in report.criteria:
                cell = row.cells.get(criterion)
                if cell is None or cell.utest is None:
                    continue
                u = cell.utest
                writer.writerow(
                    [row.metric, criterion, u.n_agree, u.n_disagree,
                     _fmt_csv(u.u1), _fmt_csv(u.u2), _fmt_csv(u.u_min),
                     _fmt_csv(u.z), _fmt_csv(u.p_two_sided), u.method]
                )


def _render_table(title, report, cell_text) -> list[str]:
    metric_width = max([len("metric")] + [len(r.metric) for r in report.rows])
    col_width = max([10] + [len(c) for c in report.criteria])
    lines = [title]
    header = "metric".ljust(metric_width) + "".join(
        f"  {c.rjust(col_width)}" for c in report.criteria
    )
    lines.append(header)
    for row in report.rows:
        cells = []
        for criterion in report.criteria:
            cell = row.cells.get(criterion, ReportCell(status=STATUS_INSUFFICIENT))
            cells.append(cell_text(cell).rjust(col_width))
        lines.append(row.metric.ljust(metric_width) + "".join(f"  {c}" for c in cells))
    return lines


def render_correlation_report(report: CorrelationReport) -> str:
    def rho_text(cell):
        return _fmt4(cell.rho) if cell.status == STATUS_OK else cell.status

    def tau_text(cell):
        return _fmt4(cell.tau) if cell.status == STATUS_OK else cell.status

    def p_text(cell):
        if cell.status != STATUS_OK or cell.utest is None:
            return cell.status if cell.status != STATUS_OK else _ABSENT
        return _fmt4(cell.utest.p_two_sided)

    lines = ["# correlation report"]
    if report.config_label:
        lines.append(f"# config: {report.config_label}")
    lines.append(f"# unusable cells: {report.warnings}")
    lines.append("")
    lines.extend(_render_table("Spearman rho (metric vs. rating agreement)", report, rho_text))
    lines.append("")
    lines.extend(_render_table("Kendall tau-b (metric vs. rating agreement)", report, tau_text))
    lines.append("")
    lines.extend(
        _render_table("Mann-Whitney two-sided p (agree vs. disagree groups)", report, p_text)
    )
    lines.append("")
    return "\n".join(lines)


@dataclass(frozen=True)
class CrossMatrices:
    labels: tuple[str, ...]
    spearman: tuple  # tuple of tuples, entries float | None
    kendall: tuple


def build_cross_matrices(series: dict, label_order) -> CrossMatrices:
    """Pairwise rank correlations among score/rating series.

    series: label -> {item_id: value}; each unordered pair is correlated on
    its own item intersection.  Cells stay empty when the overlap is < 2 or
    either restricted series is constant.
    """
    labels = tuple(label_order)
    spearman_rows = []
    kendall_rows = []
    for a in labels:
        s_row = []
        k_row = []
        for b in labels:
            common = sorted(set(series[a]) & set(series[b]))
            if len(common) < 2:
                s_row.append(None)
                k_row.append(None)
                continue
            xs = [series[a][i] for i in common]
            ys = [series[b][i] for i in common]
            try:
                s_row.append(spearman_rho(xs, ys).value)
            except DegenerateInputError:
                s_row.append(None)
            try:
                k_row.append(kendall_tau_b(xs, ys).value)
            except DegenerateInputError:
                k_row.append(None)
        spearman_rows.append(tuple(s_row))
        kendall_rows.append(tuple(k_row))
    return CrossMatrices(labels, tuple(spearman_rows), tuple(kendall_rows))


def write_matrix_csv(labels, matrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["series", *labels])
        for label, row in zip(labels, matrix):
            writer.writerow([label, *[_fmt_csv(v) for v in row]])


def render_matrix(title, labels, matrix) -> str:
    label_width = max([len("series")] + [len(x) for x in labels])
    col_width = max([8] + [len(x) for x in labels])
    lines = [title]
    lines.append(
        "series".ljust(label_width) + "".join(f"  {x.rjust(col_width)}" for x in labels)
    )
    for label, row in zip(labels, matrix):
        cells = "".join(f"  {_fmt4(v).rjust(col_width)}" for v in row)
        lines.append(label.ljust(label_width) + cells)
    lines.append("")
    return "\n".join(lines)
