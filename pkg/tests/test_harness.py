import itertools

import pytest

from aes_multicore.bench.harness import (
    BenchConfig,
    BenchRecord,
    best_by_strategy,
    generate_sweep_file,
    measure_cell,
    parse_size,
    run_sweep,
)
from aes_multicore.bench.stats import throughput_mbps
from aes_multicore.errors import ChunkIOError, InvalidArgumentError
from aes_multicore.model import ExecStrategy, JobSpec

THREADS = ExecStrategy.THREADED
PROCESSES = ExecStrategy.PROCESS_ISOLATED


def scripted_clock(durations):
    """A clock whose consecutive start/stop readings yield ``durations``."""
    readings = []
    for i, d in enumerate(durations):
        readings.extend([float(i * 1000), float(i * 1000) + d])
    return iter(readings).__next__


def no_op(job):
    return None


@pytest.fixture
def job(make_file, tmp_path, key):
    return JobSpec(make_file(64), tmp_path / 'out.bin', key, 2, THREADS)


def test_injected_samples_average(job):
    record = measure_cell(job, 5, cores=2, runner=no_op, clock=scripted_clock([9, 10, 11, 12, 30]))
    assert record.samples == (9.0, 10.0, 11.0, 12.0, 30.0)
    assert record.retained == (9.0, 10.0, 11.0, 12.0)
    assert record.avg_seconds == 10.5
    assert record.file_size == 64
    assert not record.failed


def test_identical_samples_average_exactly(job):
    record = measure_cell(job, 4, cores=1, runner=no_op, clock=scripted_clock([0.25] * 4))
    assert record.avg_seconds == 0.25


def test_throughput_fields(job):
    record = measure_cell(job, 3, cores=4, file_size=10**9, runner=no_op, clock=scripted_clock([2.0] * 3))
    assert record.throughput_mbps == 4000.0
    assert record.throughput_per_core_mbps == 1000.0
    assert throughput_mbps(record.file_size, record.avg_seconds) == record.throughput_mbps


def test_too_few_repetitions(job):
    with pytest.raises(InvalidArgumentError):
        measure_cell(job, 2, cores=1, runner=no_op)


def test_failing_run_marks_the_cell(job):
    calls = itertools.count()

    def flaky(job):
        if next(calls) == 1:
            raise ChunkIOError("disk on fire")

    record = measure_cell(job, 3, cores=1, runner=flaky, clock=scripted_clock([1.0] * 3))
    assert record.failed
    assert 'disk on fire' in record.error
    assert record.samples == (1.0,)
    assert record.avg_seconds is None
    assert record.throughput_mbps is None


def test_real_run_measures_something(make_file, tmp_path, key):
    job = JobSpec(make_file(4096), tmp_path / 'out.bin', key, 2, THREADS)
    record = measure_cell(job, 3, cores=2)
    assert not record.failed
    assert len(record.samples) == 3
    assert record.throughput_mbps > 0
    assert (tmp_path / 'out.bin').stat().st_size == 4096 + 16


@pytest.mark.parametrize("text, expected", [
    ('4096', 4096),
    ('64K', 64 * 1024),
    ('1M', 1 << 20),
    ('2g', 2 << 30),
    ('16MiB', 16 << 20),
    (512, 512),
])
def test_parse_size(text, expected):
    assert parse_size(text) == expected


@pytest.mark.parametrize("text", ['', 'big', '1.5M', '-3', '12T'])
def test_parse_size_rejects(text):
    with pytest.raises(InvalidArgumentError):
        parse_size(text)


def test_generate_sweep_file_is_deterministic_and_reused(tmp_path):
    a = generate_sweep_file(tmp_path / 'a.bin', 3 * (1 << 20) + 7, seed=7)
    b = generate_sweep_file(tmp_path / 'b.bin', 3 * (1 << 20) + 7, seed=7)
    assert a.read_bytes() == b.read_bytes()
    assert a.stat().st_size == 3 * (1 << 20) + 7

    mtime = a.stat().st_mtime_ns
    generate_sweep_file(a, 3 * (1 << 20) + 7, seed=7)
    assert a.stat().st_mtime_ns == mtime

    other = generate_sweep_file(tmp_path / 'c.bin', 1000, seed=8)
    assert other.read_bytes() != a.read_bytes()[:1000]


def _config(key, tmp_path, **overrides):
    values = dict(
        sizes=(16, 32), workers=(1, 2), strategies=(THREADS, PROCESSES),
        key=key, repetitions=3, cores=2, work_dir=tmp_path / 'sweep',
    )
    values.update(overrides)
    return BenchConfig(**values)


def test_sweep_order_is_size_then_workers_then_strategy(key, tmp_path):
    records = run_sweep(_config(key, tmp_path), runner=no_op)
    assert [(r.file_size, r.workers, r.strategy) for r in records] == [
        (16, 1, THREADS), (16, 1, PROCESSES), (16, 2, THREADS), (16, 2, PROCESSES),
        (32, 1, THREADS), (32, 1, PROCESSES), (32, 2, THREADS), (32, 2, PROCESSES),
    ]
    assert not any(r.failed for r in records)


def test_sweep_runs_cells_one_at_a_time(key, tmp_path):
    seen = []
    records = run_sweep(_config(key, tmp_path), runner=seen.append)
    assert len(seen) == 8 * 3
    assert [(j.input_path.stat().st_size, j.workers, j.strategy) for j in seen[::3]] == \
        [(r.file_size, r.workers, r.strategy) for r in records]


def test_unreadable_input_fails_only_its_size(key, tmp_path):
    cfg = _config(key, tmp_path, input_paths={32: tmp_path / 'missing.bin'})
    records = run_sweep(cfg, runner=no_op)
    assert len(records) == 8
    assert all(r.failed for r in records if r.file_size == 32)
    assert not any(r.failed for r in records if r.file_size == 16)
    assert 'missing.bin' in records[-1].error


def test_input_of_the_wrong_size_fails_its_cells(key, tmp_path, make_file):
    cfg = _config(key, tmp_path, sizes=(16,), input_paths={16: make_file(20)})
    assert all(r.failed for r in run_sweep(cfg, runner=no_op))


def test_own_temp_dir_is_removed(key, tmp_path, monkeypatch):
    import tempfile
    monkeypatch.setattr(tempfile, 'tempdir', str(tmp_path))
    run_sweep(_config(key, tmp_path, work_dir=None), runner=no_op)
    assert not list(tmp_path.glob('aes-mc-bench-*'))


def test_end_to_end_sweep(key, tmp_path):
    cfg = _config(key, tmp_path, sizes=(4096,), workers=(1, 3))
    records = run_sweep(cfg)
    assert len(records) == 4
    assert not any(r.failed for r in records), [r.error for r in records]
    assert not list((tmp_path / 'sweep').glob('out_*'))


def test_best_by_strategy_picks_the_maximum():
    def rec(strategy, tp, error=None):
        if error:
            return BenchRecord.failure(16, 1, strategy, 1, error)
        return BenchRecord(16, 1, strategy, (1.0,), (1.0,), 1.0, tp, tp, 1)

    best = best_by_strategy([
        rec(THREADS, 10.0), rec(THREADS, 30.0), rec(THREADS, 20.0),
        rec(PROCESSES, 5.0), rec(PROCESSES, 0, error='boom'),
    ])
    assert best[THREADS].throughput_mbps == 30.0
    assert best[PROCESSES].throughput_mbps == 5.0


@pytest.mark.parametrize("overrides", [
    dict(sizes=()),
    dict(workers=()),
    dict(strategies=()),
    dict(repetitions=2),
    dict(workers=(0,)),
    dict(cores=0),
])
def test_bench_config_validation(key, tmp_path, overrides):
    with pytest.raises(InvalidArgumentError):
        _config(key, tmp_path, **overrides)


def test_bench_config_from_defaults():
    cfg = BenchConfig.from_config(repetitions=3)
    assert cfg.sizes == (1 << 20, 16 << 20, 64 << 20)
    assert cfg.workers == (1, 2, 4, 8)
    assert cfg.strategies == (THREADS, PROCESSES)
    assert cfg.repetitions == 3
    assert cfg.cores >= 1


def test_zero_byte_sweep(key, tmp_path):
    cfg = _config(key, tmp_path, sizes=(0,), workers=(1, 2), strategies=(THREADS,))
    records = run_sweep(cfg, runner=no_op, clock=scripted_clock([0.5] * 6))
    assert [r.throughput_mbps for r in records] == [0.0, 0.0]
    assert not any(r.failed for r in records)
