"""
Runs a JobSpec under one of the three execution strategies.

All three produce byte-identical output. The sequential run is the oracle,
the threaded run shares one address space and writes disjoint regions of a
pre-sized output file, and the process-isolated run re-invokes this package
once per chunk, then concatenates the per-chunk files in plan order.
"""
from __future__ import annotations

import os
import shutil
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Iterator

from loguru import logger

import aes_multicore
from aes_multicore.chunking.planner import Chunk, ChunkPlan, check_chunk_count, check_chunk_output, plan_chunks
from aes_multicore.cipher.aes import expand_key
from aes_multicore.config.settings import config
from aes_multicore.errors import (
    ChunkIOError,
    IntegrityError,
    InvalidArgumentError,
    WorkerFailure,
    WorkerPoolError,
)
from aes_multicore.execution.ranges import segment_bytes, transform_range
from aes_multicore.execution.worker import EXIT_INTEGRITY, EXIT_OK
from aes_multicore.model import Direction, ExecStrategy, JobOutcome, JobSpec


@contextmanager
def atomic_output(path: Path) -> Iterator[int]:
    """
    Yields a descriptor on a temporary sibling of ``path``; renames it into
    place on success and removes it on any failure.
    """
    path = Path(path)
    try:
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.partial')
    except OSError as exc:
        raise ChunkIOError(f"cannot create output: {exc.strerror}", path) from exc
    try:
        yield fd
    except BaseException:
        os.close(fd)
        Path(tmp_name).unlink(missing_ok=True)
        raise
    os.close(fd)
    try:
        os.replace(tmp_name, path)
    except OSError as exc:
        Path(tmp_name).unlink(missing_ok=True)
        raise ChunkIOError(f"cannot move output into place: {exc.strerror}", path) from exc


@contextmanager
def open_input(path: Path) -> Iterator[tuple[int, int]]:
    try:
        fd = os.open(path, os.O_RDONLY)
    except OSError as exc:
        raise ChunkIOError(f"cannot open input: {exc.strerror}", path) from exc
    try:
        yield fd, os.fstat(fd).st_size
    finally:
        os.close(fd)


def make_plan(job: JobSpec, size: int, workers: int | None = None) -> ChunkPlan:
    return plan_chunks(size, job.workers if workers is None else workers, pad=job.direction is Direction.ENCRYPT)


def _raise_failures(failures: list[WorkerFailure], integrity: list[str]):
    if not failures:
        return
    if len(integrity) == len(failures):
        raise IntegrityError(integrity[0])
    raise WorkerPoolError(failures)


def run_sequential(job: JobSpec) -> JobOutcome:
    """Single chunk, no workers; the reference every other strategy must match."""
    started = time.perf_counter()
    ks = expand_key(job.key)
    seg = segment_bytes()
    with open_input(job.input_path) as (in_fd, size):
        plan = make_plan(job, size, workers=1)
        with atomic_output(job.output_path) as out_fd:
            written = transform_range(
                in_fd, out_fd, plan.final, 0, ks, job.direction, seg,
                in_path=job.input_path, out_path=job.output_path,
            )
    elapsed = time.perf_counter() - started
    return JobOutcome(size, written, elapsed, 1, ExecStrategy.SEQUENTIAL, job.direction)


def run_threaded(job: JobSpec) -> JobOutcome:
    """
    One thread per chunk. Threads share the input descriptor and the key
    schedule read-only and write into disjoint regions of one output file.
    """
    started = time.perf_counter()
    ks = expand_key(job.key)
    seg = segment_bytes()
    with open_input(job.input_path) as (in_fd, size):
        plan = make_plan(job, size)
        logger.debug(f"threads: {len(plan)} chunk(s) over {size} bytes")
        with atomic_output(job.output_path) as out_fd:
            os.ftruncate(out_fd, plan.output_len)
            with ThreadPoolExecutor(max_workers=len(plan), thread_name_prefix='aes-chunk') as pool:
                futures = [
                    (chunk, pool.submit(
                        transform_range, in_fd, out_fd, chunk, chunk.offset, ks, job.direction, seg,
                        job.input_path, job.output_path,
                    ))
                    for chunk in plan
                ]
            # leaving the pool joined every thread
            failures, integrity = [], []
            for chunk, future in futures:
                exc = future.exception()
                if exc is not None:
                    failures.append(WorkerFailure(chunk.index, str(exc)))
                    if isinstance(exc, IntegrityError):
                        integrity.append(str(exc))
            _raise_failures(failures, integrity)

            final_written = futures[-1][1].result()
            written = plan.final.offset + final_written
            if written != plan.output_len:
                os.ftruncate(out_fd, written)
    elapsed = time.perf_counter() - started
    return JobOutcome(size, written, elapsed, len(plan), ExecStrategy.THREADED, job.direction)


def build_worker_command(job: JobSpec, chunk: Chunk, keyfile: Path, out_path: Path, seg: int) -> list[str]:
    return [
        sys.executable, '-m', 'aes_multicore', '__worker',
        '--in', str(job.input_path),
        '--offset', str(chunk.offset),
        '--len', str(chunk.raw_len),
        '--final', '1' if chunk.is_final else '0',
        '--keyfile', str(keyfile),
        '--direction', job.direction.value,
        '--segment-bytes', str(seg),
        '--index', str(chunk.index),
        '--out', str(out_path),
    ]


def _worker_env() -> dict[str, str]:
    env = os.environ.copy()
    package_root = str(Path(aes_multicore.__file__).resolve().parent.parent)
    existing = env.get('PYTHONPATH')
    env['PYTHONPATH'] = package_root if not existing else os.pathsep.join([package_root, existing])
    return env


def _write_keyfile(directory: Path, raw: bytes) -> Path:
    keyfile = directory / 'key'
    fd = os.open(keyfile, os.O_WRONLY | os.O_CREAT | os.O_EXCL, 0o600)
    try:
        os.write(fd, raw)
    finally:
        os.close(fd)
    return keyfile


def _tail(path: Path, limit: int = 2000) -> str:
    try:
        text = path.read_text(errors='replace').strip()
    except OSError:
        return ''
    return text[-limit:]


def run_process_isolated(job: JobSpec) -> JobOutcome:
    """
    One child process per chunk, each writing its own temporary file. The
    key travels through a private keyfile, never argv. The coordinator waits
    on every child before concatenating.
    """
    started = time.perf_counter()
    seg = segment_bytes()
    timeout = config.execution.get('worker_timeout_s', 3600)
    with open_input(job.input_path) as (_, size):
        plan = make_plan(job, size)

    work_dir = Path(tempfile.mkdtemp(prefix='aes-mc-', dir=config.execution.get('temp_dir')))
    try:
        keyfile = _write_keyfile(work_dir, job.key.raw)
        env = _worker_env()
        launched: list[tuple[Chunk, subprocess.Popen, Path, Path]] = []
        try:
            for chunk in plan:
                part = work_dir / f'chunk-{chunk.index:04d}.bin'
                log = work_dir / f'chunk-{chunk.index:04d}.log'
                with open(log, 'wb') as err:
                    proc = subprocess.Popen(
                        build_worker_command(job, chunk, keyfile, part, seg),
                        stdin=subprocess.DEVNULL, stdout=subprocess.DEVNULL, stderr=err, env=env,
                    )
                launched.append((chunk, proc, part, log))
        except BaseException:
            for _, proc, _, _ in launched:
                proc.kill()
                proc.wait()
            raise
        logger.debug(f"processes: launched {len(launched)} worker(s) over {size} bytes")

        deadline = time.monotonic() + timeout
        failures, integrity = [], []
        for chunk, proc, _, log in launched:
            try:
                code = proc.wait(timeout=max(0.0, deadline - time.monotonic()))
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
                failures.append(WorkerFailure(chunk.index, f"timed out after {timeout}s"))
                continue
            if code != EXIT_OK:
                detail = _tail(log) or 'no diagnostics'
                failures.append(WorkerFailure(chunk.index, f"exit status {code}: {detail}"))
                if code == EXIT_INTEGRITY:
                    integrity.append(detail)
        _raise_failures(failures, integrity)

        parts = [part for _, _, part, _ in launched]
        check_chunk_count(plan, len(parts))
        for chunk, part in zip(plan, parts):
            try:
                check_chunk_output(plan, chunk, part.stat().st_size)
            except InvalidArgumentError as exc:
                raise ChunkIOError(str(exc), part, chunk.index) from exc
        written = 0
        with atomic_output(job.output_path) as out_fd:
            with os.fdopen(os.dup(out_fd), 'wb') as out:
                for part in parts:
                    with open(part, 'rb') as src:
                        shutil.copyfileobj(src, out, length=seg)
                written = out.tell()
    finally:
        shutil.rmtree(work_dir, ignore_errors=True)

    elapsed = time.perf_counter() - started
    return JobOutcome(size, written, elapsed, len(plan), ExecStrategy.PROCESS_ISOLATED, job.direction)


RUNNERS: dict[ExecStrategy, Callable[[JobSpec], JobOutcome]] = {
    ExecStrategy.SEQUENTIAL: run_sequential,
    ExecStrategy.THREADED: run_threaded,
    ExecStrategy.PROCESS_ISOLATED: run_process_isolated,
}


def run_job(job: JobSpec) -> JobOutcome:
    logger.info(
        f"{job.direction.value} {job.input_path} -> {job.output_path} "
        f"[{job.strategy.value}, workers={job.workers}]"
    )
    outcome = RUNNERS[job.strategy](job)
    logger.info(f"{outcome.bytes_in} bytes in, {outcome.bytes_out} out, {outcome.chunks} chunk(s), {outcome.seconds:.6f}s")
    return outcome
