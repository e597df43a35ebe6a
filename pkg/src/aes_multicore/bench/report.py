"""
Turns sweep records into the artifacts a reader looks at: a CSV of every
cell, a per-strategy comparison table, one SVG chart per
strategy and a JSON dump with the raw samples.
"""
from __future__ import annotations

import csv
import io
import math
import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import matplotlib
matplotlib.use('Agg')
from matplotlib.figure import Figure  # noqa: E402
import orjson  # noqa: E402
from loguru import logger  # noqa: E402
from tabulate import tabulate  # noqa: E402

from aes_multicore.bench.harness import BenchRecord, best_by_strategy  # noqa: E402
from aes_multicore.errors import InvalidArgumentError  # noqa: E402
from aes_multicore.model import ExecStrategy  # noqa: E402

CSV_HEADER = (
    'file_size_bytes', 'workers', 'strategy', 'reps', 'retained',
    'avg_seconds', 'throughput_mbps', 'throughput_per_core_mbps',
)


@dataclass(frozen=True)
class ReportRow:
    """One CSV row, at the precision the CSV carries."""
    file_size: int
    workers: int
    strategy: ExecStrategy
    reps: int
    retained: int
    avg_seconds: float | None
    throughput_mbps: float | None
    throughput_per_core_mbps: float | None

    @classmethod
    def from_record(cls, record: BenchRecord) -> ReportRow:
        def rounded(value, digits):
            return None if value is None else round(value, digits)
        return cls(
            record.file_size, record.workers, record.strategy, record.reps, len(record.retained),
            rounded(record.avg_seconds, 6), rounded(record.throughput_mbps, 1),
            rounded(record.throughput_per_core_mbps, 1),
        )


@dataclass
class Report:
    csv: str
    summary: str
    charts: dict[str, str] = field(default_factory=dict)
    json: bytes = b''


def default_machine_label() -> str:
    return f"{platform.node() or 'unknown'} ({platform.processor() or platform.machine() or 'unknown cpu'})"


def _fmt(value: float | None, digits: int) -> str:
    return '' if value is None else f"{value:.{digits}f}"


def format_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([
            r.file_size, r.workers, r.strategy.value, r.reps, len(r.retained),
            _fmt(r.avg_seconds, 6), _fmt(r.throughput_mbps, 1), _fmt(r.throughput_per_core_mbps, 1),
        ])
    return buf.getvalue()


def parse_report_csv(text: str) -> list[ReportRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise InvalidArgumentError(f"unexpected report header: {header}")

    def optional(value: str) -> float | None:
        return float(value) if value else None

    rows = []
    for line in reader:
        if not line:
            continue
        size, workers, strategy, reps, retained, avg, tp, per_core = line
        rows.append(ReportRow(
            int(size), int(workers), ExecStrategy.from_name(strategy), int(reps), int(retained),
            optional(avg), optional(tp), optional(per_core),
        ))
    return rows


def _ratio_line(records: Sequence[BenchRecord]) -> str | None:
    """threads vs processes at the largest cell both strategies completed."""
    by_cell = {(r.file_size, r.workers, r.strategy): r for r in records if not r.failed}
    common = sorted(
        (size, workers) for size, workers, strategy in by_cell
        if strategy is ExecStrategy.THREADED and (size, workers, ExecStrategy.PROCESS_ISOLATED) in by_cell
    )
    if not common:
        return None
    size, workers = common[-1]
    threads = by_cell[(size, workers, ExecStrategy.THREADED)].throughput_mbps
    processes = by_cell[(size, workers, ExecStrategy.PROCESS_ISOLATED)].throughput_mbps
    if not processes or not math.isfinite(processes):
        return None
    return f"threads/processes throughput ratio at {size} bytes, {workers} worker(s): {threads / processes:.2f}"


def _speedup_lines(records: Sequence[BenchRecord]) -> list[str]:
    """Best multi-worker throughput over the single-worker run of the same size."""
    lines = []
    strategies = sorted({r.strategy for r in records}, key=lambda s: s.value)
    for strategy in strategies:
        ok = [r for r in records if r.strategy is strategy and not r.failed]
        if not ok:
            continue
        size = max(r.file_size for r in ok)
        cells = {r.workers: r for r in ok if r.file_size == size}
        if 1 not in cells or len(cells) < 2:
            continue
        single = cells[1].throughput_mbps
        if not single or not math.isfinite(single):
            continue
        best = max(cells.values(), key=lambda r: r.throughput_mbps)
        speedup = best.throughput_mbps / single
        lines.append(f"{strategy.value}: speedup {speedup:.2f}x with {best.workers} worker(s) at {size} bytes")
    return lines


def format_summary(records: Sequence[BenchRecord], machine_label: str, cores: int) -> str:
    best = best_by_strategy(records)
    rows = [
        [
            strategy.value, machine_label,
            record.throughput_mbps, record.throughput_per_core_mbps,
            record.file_size, record.workers,
        ]
        for strategy, record in sorted(best.items(), key=lambda item: item[0].value)
    ]
    table = tabulate(
        rows,
        headers=['Strategy', 'Machine', 'Best throughput (Mb/s)', 'Through/core (Mb/s per core)', 'File size (bytes)', 'Workers'],
        tablefmt='github',
        floatfmt=('', '', '.1f', '.1f', '', ''),
    )
    lines = [f"AES-128 ECB sweep on {machine_label}, {cores} core(s)", '', table, '']
    ratio = _ratio_line(records)
    if ratio:
        lines.append(ratio)
    lines.extend(_speedup_lines(records))
    failed = [r for r in records if r.failed]
    if failed:
        lines.append(f"{len(failed)} failed cell(s):")
        lines.extend(f"  size={r.file_size} workers={r.workers} {r.strategy.value}: {r.error}" for r in failed)
    scattered = [r for r in records if r.scattered]
    if scattered:
        lines.append(f"{len(scattered)} cell(s) too scattered for outlier rejection, all samples kept:")
        lines.extend(f"  size={r.file_size} workers={r.workers} {r.strategy.value}" for r in scattered)
    return '\n'.join(lines).rstrip() + '\n'


def render_chart(records: Sequence[BenchRecord], strategy: ExecStrategy) -> str:
    """Throughput against data size, one series per worker count."""
    ok = [r for r in records if r.strategy is strategy and not r.failed]
    fig = Figure(figsize=(7, 4.5), layout='tight')
    ax = fig.add_subplot()
    for workers in sorted({r.workers for r in ok}):
        points = sorted((r.file_size, r.throughput_mbps) for r in ok if r.workers == workers)
        ax.plot([s / 1e6 for s, _ in points], [t for _, t in points], marker='o', label=f"{workers} worker(s)")
    if ok and min(r.file_size for r in ok) > 0 and len({r.file_size for r in ok}) > 1:
        ax.set_xscale('log', base=2)
    if not ok:
        ax.text(0.5, 0.5, 'no successful cells', ha='center', va='center', transform=ax.transAxes)
    ax.set_xlabel('Data size (MB)')
    ax.set_ylabel('Throughput (Mb/s)')
    ax.set_title(f"AES-128 ECB throughput, {strategy.value}")
    ax.grid(True, alpha=0.3)
    if ok:
        ax.legend()

    buf = io.BytesIO()
    with matplotlib.rc_context({'svg.hashsalt': 'aes-mc', 'svg.fonttype': 'none'}):
        fig.savefig(buf, format='svg', metadata={'Date': None})
    return buf.getvalue().decode('utf-8')


def emit_report(records: Sequence[BenchRecord], machine_label: str | None = None, cores: int | None = None) -> Report:
    if not records:
        raise InvalidArgumentError("cannot build a report from zero records")
    label = machine_label or default_machine_label()
    cores = cores if cores is not None else records[0].cores
    strategies = sorted({r.strategy for r in records}, key=lambda s: s.value)
    payload = {
        'machine': label,
        'cores': cores,
        'python': platform.python_version(),
        'repetitions': max(r.reps for r in records),
        'generated_at': datetime.now(timezone.utc).isoformat(timespec='seconds'),
        'records': [
            {
                'file_size_bytes': r.file_size,
                'workers': r.workers,
                'strategy': r.strategy.value,
                'samples': list(r.samples),
                'retained': list(r.retained),
                'avg_seconds': r.avg_seconds,
                'throughput_mbps': r.throughput_mbps,
                'throughput_per_core_mbps': r.throughput_per_core_mbps,
                'error': r.error,
                'scattered': r.scattered,
            }
            for r in records
        ],
    }
    return Report(
        csv=format_csv(records),
        summary=format_summary(records, label, cores),
        charts={s.value: render_chart(records, s) for s in strategies},
        json=orjson.dumps(payload, option=orjson.OPT_INDENT_2),
    )


def write_report(report: Report, directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name: str, content: str | bytes):
        path = directory / name
        if isinstance(content, bytes):
            path.write_bytes(content)
        else:
            path.write_text(content, encoding='utf-8')
        written.append(path)

    put('report.csv', report.csv)
    put('summary.txt', report.summary)
    for strategy, svg in report.charts.items():
        put(f'throughput_{strategy}.svg', svg)
    put('report.json', report.json)
    logger.success(f"Report written to {directory} ({len(written)} file(s))")
    return written
