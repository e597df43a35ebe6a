"""
Benchmark sweep: every (size, workers, strategy) cell is run R times,
high-deviation samples are dropped, and the rest are averaged into a
throughput figure. Cells run strictly one after another.
"""
from __future__ import annotations

import math
import os
import re
import shutil
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
from loguru import logger

from aes_multicore.bench.stats import filter_samples, mean, throughput_mbps
from aes_multicore.cipher.aes import Key128
from aes_multicore.config.settings import config
from aes_multicore.errors import AesMcError, InvalidArgumentError
from aes_multicore.execution.executor import run_job
from aes_multicore.model import ExecStrategy, JobOutcome, JobSpec
from aes_multicore.utils.error_handler import ErrorHandler

MIN_REPETITIONS = 3
GENERATE_PIECE = 1 << 20

_SIZE_RE = re.compile(r'^\s*(\d+)\s*([KMG]?)(?:i?B)?\s*$', re.IGNORECASE)
_SIZE_UNITS = {'': 1, 'K': 1 << 10, 'M': 1 << 20, 'G': 1 << 30}


def parse_size(text) -> int:
    """'1M' -> 1048576. Plain integers are byte counts."""
    if isinstance(text, int):
        size = text
    else:
        match = _SIZE_RE.match(str(text))
        if not match:
            raise InvalidArgumentError(f"cannot parse size {text!r} (examples: 4096, 64K, 1M, 2G)")
        size = int(match.group(1)) * _SIZE_UNITS[match.group(2).upper()]
    if size < 0:
        raise InvalidArgumentError(f"size must be >= 0, got {size}")
    return size


def detect_cores() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple[int, ...]
    workers: tuple[int, ...]
    strategies: tuple[ExecStrategy, ...]
    key: Key128
    repetitions: int = 10
    cores: int | None = None
    seed: int = 1337
    work_dir: Path | None = None
    input_paths: Mapping[int, Path] = field(default_factory=dict)

    def __post_init__(self):
        for name in ('sizes', 'workers', 'strategies'):
            values = tuple(getattr(self, name))
            if not values:
                raise InvalidArgumentError(f"bench sweep needs at least one entry in {name}")
            object.__setattr__(self, name, values)
        if self.repetitions < MIN_REPETITIONS:
            raise InvalidArgumentError(f"repetitions must be >= {MIN_REPETITIONS}, got {self.repetitions}")
        if any(s < 0 for s in self.sizes):
            raise InvalidArgumentError("sizes must be >= 0")
        if any(w < 1 for w in self.workers):
            raise InvalidArgumentError("worker counts must be >= 1")
        cores = self.cores if self.cores is not None else detect_cores()
        if cores < 1:
            raise InvalidArgumentError(f"core count must be >= 1, got {cores}")
        object.__setattr__(self, 'cores', cores)
        object.__setattr__(self, 'input_paths', {int(k): Path(v) for k, v in self.input_paths.items()})

    @classmethod
    def from_config(cls, **overrides) -> BenchConfig:
        """Builds a sweep from the ``bench`` config section; keyword overrides win."""
        section = config.bench
        values = dict(
            sizes=tuple(parse_size(s) for s in section.get('sizes', [])),
            workers=tuple(int(w) for w in section.get('workers', [])),
            strategies=tuple(ExecStrategy.from_name(s) for s in section.get('strategies', [])),
            key=Key128.from_hex(section.get('key_hex')),
            repetitions=int(section.get('repetitions', 10)),
            cores=section.get('cores'),
            seed=int(section.get('seed', 1337)),
            work_dir=Path(section.work_dir) if section.get('work_dir') else None,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class BenchRecord:
    file_size: int
    workers: int
    strategy: ExecStrategy
    samples: tuple[float, ...]
    retained: tuple[float, ...]
    avg_seconds: float | None
    throughput_mbps: float | None
    throughput_per_core_mbps: float | None
    cores: int
    error: str | None = None
    scattered: bool = False

    @property
    def failed(self) -> bool:
        return self.error is not None

    @property
    def reps(self) -> int:
        return len(self.samples)

    @classmethod
    def failure(cls, file_size: int, workers: int, strategy: ExecStrategy, cores: int,
                error: str, samples: Sequence[float] = ()) -> BenchRecord:
        return cls(file_size, workers, strategy, tuple(samples), (), None, None, None, cores, error)


def measure_cell(
    job: JobSpec,
    repetitions: int,
    cores: int,
    file_size: int | None = None,
    runner: Callable[[JobSpec], JobOutcome | None] = run_job,
    clock: Callable[[], float] = time.perf_counter,
) -> BenchRecord:
    """
    Times ``repetitions`` runs of ``job`` from start to output fully written,
    filters the samples and derives both throughput figures. A failing run
    marks the whole cell failed instead of raising.
    """
    if repetitions < MIN_REPETITIONS:
        raise InvalidArgumentError(f"repetitions must be >= {MIN_REPETITIONS}, got {repetitions}")

    samples: list[float] = []
    try:
        if file_size is None:
            file_size = os.path.getsize(job.input_path)
        for _ in range(repetitions):
            started = clock()
            runner(job)
            samples.append(clock() - started)
    except (AesMcError, OSError) as exc:
        logger.warning(f"cell size={file_size} workers={job.workers} {job.strategy.value} failed: {exc}")
        return BenchRecord.failure(file_size or 0, job.workers, job.strategy, cores, str(exc), samples)

    filtered = filter_samples(samples)
    retained = filtered.retained
    if filtered.scattered:
        logger.warning(
            f"cell size={file_size} workers={job.workers} {job.strategy.value}: "
            f"samples too scattered for outlier rejection, keeping all {len(samples)}"
        )
    avg = mean(retained)
    throughput = throughput_mbps(file_size, avg) if avg > 0 else math.inf
    logger.debug(
        f"cell size={file_size} workers={job.workers} {job.strategy.value}: "
        f"kept {len(retained)}/{len(samples)}, avg {avg:.6f}s, {throughput:.1f} Mb/s"
    )
    return BenchRecord(
        file_size=file_size,
        workers=job.workers,
        strategy=job.strategy,
        samples=tuple(samples),
        retained=tuple(retained),
        avg_seconds=avg,
        throughput_mbps=throughput,
        throughput_per_core_mbps=throughput / cores,
        cores=cores,
        scattered=filtered.scattered,
    )


def generate_sweep_file(path: Path, size: int, seed: int) -> Path:
    """Writes ``size`` seeded pseudorandom bytes; an existing file of that size is reused."""
    path = Path(path)
    if path.exists() and path.stat().st_size == size:
        return path
    path.parent.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    tmp = path.with_name(path.name + '.partial')
    with open(tmp, 'wb') as out:
        remaining = size
        while remaining:
            piece = min(GENERATE_PIECE, remaining)
            out.write(rng.bytes(piece))
            remaining -= piece
    os.replace(tmp, path)
    logger.debug(f"generated {size}-byte sweep input {path}")
    return path


def _check_input(path: Path, size: int):
    with open(path, 'rb'):
        pass
    actual = path.stat().st_size
    if actual != size:
        raise InvalidArgumentError(f"sweep input {path} holds {actual} bytes, expected {size}")


def run_sweep(
    cfg: BenchConfig,
    runner: Callable[[JobSpec], JobOutcome | None] = run_job,
    clock: Callable[[], float] = time.perf_counter,
) -> list[BenchRecord]:
    """Size-major, then workers, then strategy. Cell failures are recorded, never raised."""
    own_dir = cfg.work_dir is None
    work_dir = Path(tempfile.mkdtemp(prefix='aes-mc-bench-')) if own_dir else Path(cfg.work_dir)
    work_dir.mkdir(parents=True, exist_ok=True)
    handler = ErrorHandler(failure_threshold=1)
    records: list[BenchRecord] = []
    total = len(cfg.sizes) * len(cfg.workers) * len(cfg.strategies)
    logger.info(f"Sweep: {total} cell(s), {cfg.repetitions} repetition(s) each, {cfg.cores} core(s)")

    try:
        for size in cfg.sizes:
            input_path = cfg.input_paths.get(size)
            try:
                if input_path is None:
                    input_path = generate_sweep_file(work_dir / f'sweep_{size}.bin', size, cfg.seed)
                _check_input(input_path, size)
            except (AesMcError, OSError) as exc:
                handler.record_error(size, exc)

            for workers in cfg.workers:
                for strategy in cfg.strategies:
                    if handler.is_circuit_open(size):
                        records.append(BenchRecord.failure(size, workers, strategy, cfg.cores, handler.last_error(size)))
                        continue
                    output = work_dir / f'out_{size}_{workers}_{strategy.value}.bin'
                    job = JobSpec(input_path, output, cfg.key, workers, strategy)
                    records.append(measure_cell(job, cfg.repetitions, cfg.cores, size, runner, clock))
                    output.unlink(missing_ok=True)
                    logger.info(f"[{len(records)}/{total}] size={size} workers={workers} {strategy.value} done")
    finally:
        if own_dir:
            shutil.rmtree(work_dir, ignore_errors=True)

    failed = sum(r.failed for r in records)
    if failed:
        logger.warning(f"Sweep finished with {failed} failed cell(s)")
    return records


def best_by_strategy(records: Sequence[BenchRecord]) -> dict[ExecStrategy, BenchRecord]:
    best: dict[ExecStrategy, BenchRecord] = {}
    for record in records:
        if record.failed:
            continue
        current = best.get(record.strategy)
        if current is None or record.throughput_mbps > current.throughput_mbps:
            best[record.strategy] = record
    return best
