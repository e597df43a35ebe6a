import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from loguru import logger

from aes_multicore.cipher.aes import Key128
from aes_multicore.config.settings import config
from aes_multicore.errors import AesMcError
from aes_multicore.logging.setup import setup_logging
from aes_multicore.model import Direction, ExecStrategy, JobSpec

WORKER_COMMAND = '__worker'


@dataclass
class CliConfig:
    """Validated command line. Unused fields stay None for a given command."""
    command: str
    config_path: Path | None = None
    log_level: str | None = None
    input_path: Path | None = None
    output_path: Path | None = None
    key: Key128 | None = None
    workers: int | None = None
    strategy: ExecStrategy | None = None
    # bench
    sizes: tuple[int, ...] = ()
    sweep_workers: tuple[int, ...] = ()
    strategies: tuple[ExecStrategy, ...] = ()
    repetitions: int | None = None
    cores: int | None = None
    report_dir: Path | None = None
    seed: int | None = None
    work_dir: Path | None = None
    machine_label: str | None = None
    # hidden worker mode
    worker: dict = field(default_factory=dict)


def _comma_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(',') if item.strip()]


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument('--config', type=Path, help='YAML configuration file (default: $AES_MC_CONFIG or ./config.yaml)')
    parser.add_argument('--log-level', help='Console log level, e.g. DEBUG, INFO, WARNING')


def _add_key_flags(parser: argparse.ArgumentParser):
    keys = parser.add_mutually_exclusive_group()
    keys.add_argument('--key-hex', help='AES-128 key as 32 hex digits (falls back to $AES_MC_KEY_HEX)')
    keys.add_argument('--keyfile', type=Path, help='File holding 16 raw key bytes or 32 hex digits')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='aes-mc',
        description='Parallel AES-128 (ECB, PKCS#7) file encryption and throughput benchmarking.',
    )
    commands = parser.add_subparsers(dest='command', metavar='{encrypt,decrypt,bench}', required=True)

    for name, verb in (('encrypt', 'Encrypt'), ('decrypt', 'Decrypt')):
        sub = commands.add_parser(name, help=f'{verb} a file')
        sub.add_argument('--in', dest='input', required=True, type=Path, help='Input file')
        sub.add_argument('--out', dest='output', required=True, type=Path, help='Output file (written atomically)')
        _add_key_flags(sub)
        sub.add_argument('--workers', type=int, help='Number of chunk workers (default: execution.workers)')
        sub.add_argument(
            '--strategy', choices=[s.value for s in ExecStrategy],
            help='How chunk workers run (default: execution.strategy)',
        )
        _add_common(sub)

    bench = commands.add_parser('bench', help='Run a throughput sweep and write reports')
    bench.add_argument('--sizes', help='Comma list of file sizes, K/M/G suffixes allowed (e.g. 1M,64M)')
    bench.add_argument('--workers', help='Comma list of worker counts (e.g. 1,2,4)')
    bench.add_argument('--strategies', help='Comma list of strategies (e.g. threads,processes)')
    bench.add_argument('--reps', type=int, help='Repetitions per cell, at least 3')
    bench.add_argument('--cores', type=int, help='Core count for the per-core column (default: detected)')
    bench.add_argument('--report-dir', type=Path, help='Directory for report.csv, summary.txt and charts')
    bench.add_argument('--seed', type=int, help='Seed for generated sweep inputs')
    bench.add_argument('--work-dir', type=Path, help='Keep generated sweep inputs here instead of a temp dir')
    bench.add_argument('--machine-label', help='Machine name shown in the summary table')
    bench.add_argument('--key-hex', help='Key used for the sweep (default: bench.key_hex)')
    _add_common(bench)

    # spawned by the processes strategy; not listed in --help
    worker = commands.add_parser(WORKER_COMMAND)
    worker.add_argument('--in', dest='input', required=True, type=Path)
    worker.add_argument('--offset', required=True, type=int)
    worker.add_argument('--len', dest='length', required=True, type=int)
    worker.add_argument('--final', required=True, choices=['0', '1'])
    worker.add_argument('--keyfile', required=True, type=Path)
    worker.add_argument('--direction', default=Direction.ENCRYPT.value, choices=[d.value for d in Direction])
    worker.add_argument('--segment-bytes', type=int)
    worker.add_argument('--index', type=int, default=0)
    worker.add_argument('--out', dest='output', required=True, type=Path)
    return parser


def _resolve_key(parser, args) -> Key128:
    try:
        if args.keyfile is not None:
            return Key128.from_file(args.keyfile)
        key_hex = args.key_hex or os.getenv('AES_MC_KEY_HEX')
        if not key_hex:
            parser.error('a key is required: pass --key-hex or --keyfile, or set AES_MC_KEY_HEX')
        return Key128.from_hex(key_hex)
    except (AesMcError, OSError) as exc:
        parser.error(f"invalid key: {exc}")


def _config_int(parser, name: str, value, optional: bool = False) -> int | None:
    if value is None and optional:
        return None
    try:
        return int(value)
    except (TypeError, ValueError):
        parser.error(f"configuration value {name} must be an integer, got {value!r}")


def _parse_job(parser, args) -> CliConfig:
    if not args.input.is_file():
        parser.error(f"input file not found: {args.input}")
    workers = args.workers
    if workers is None:
        workers = _config_int(parser, "execution.workers", config.execution.workers)
    if workers < 1:
        parser.error(f"--workers must be >= 1, got {workers}")
    try:
        strategy = ExecStrategy.from_name(args.strategy or config.execution.strategy)
    except AesMcError as exc:
        parser.error(str(exc))
    return CliConfig(
        command=args.command,
        config_path=args.config,
        log_level=args.log_level,
        input_path=args.input,
        output_path=args.output,
        key=_resolve_key(parser, args),
        workers=workers,
        strategy=strategy,
    )


def _parse_bench(parser, args) -> CliConfig:
    from aes_multicore.bench.harness import MIN_REPETITIONS, parse_size

    section = config.bench
    try:
        sizes = tuple(parse_size(s) for s in (_comma_list(args.sizes) if args.sizes is not None else section.sizes))
        workers = tuple(int(w) for w in (_comma_list(args.workers) if args.workers is not None else section.workers))
        strategies = tuple(
            ExecStrategy.from_name(s)
            for s in (_comma_list(args.strategies) if args.strategies is not None else section.strategies)
        )
        key = Key128.from_hex(args.key_hex or section.key_hex)
    except (AesMcError, TypeError, ValueError) as exc:
        parser.error(str(exc))

    for name, values in (('--sizes', sizes), ('--workers', workers), ('--strategies', strategies)):
        if not values:
            parser.error(f"{name} must list at least one entry")
    if any(w < 1 for w in workers):
        parser.error("--workers entries must be >= 1")
    repetitions = args.reps
    if repetitions is None:
        repetitions = _config_int(parser, "bench.repetitions", section.repetitions)
    if repetitions < MIN_REPETITIONS:
        parser.error(f"--reps must be >= {MIN_REPETITIONS}, got {repetitions}")
    cores = args.cores if args.cores is not None else _config_int(parser, "bench.cores", section.cores, optional=True)
    if cores is not None and cores < 1:
        parser.error(f"--cores must be >= 1, got {cores}")

    work_dir = args.work_dir or (Path(section.work_dir) if section.work_dir else None)
    return CliConfig(
        command=args.command,
        config_path=args.config,
        log_level=args.log_level,
        key=key,
        sizes=sizes,
        sweep_workers=workers,
        strategies=strategies,
        repetitions=repetitions,
        cores=cores,
        report_dir=args.report_dir or Path(section.report_dir),
        seed=args.seed if args.seed is not None else _config_int(parser, "bench.seed", section.seed),
        work_dir=work_dir,
        machine_label=args.machine_label or section.machine_label,
    )


def parse_args(argv: list[str] | None = None) -> CliConfig:
    """Parses and validates ``argv``; usage problems exit with status 2."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == WORKER_COMMAND:
        return CliConfig(command=args.command, worker=dict(
            input_path=args.input,
            offset=args.offset,
            raw_len=args.length,
            is_final=args.final == '1',
            keyfile=args.keyfile,
            direction=Direction(args.direction),
            seg=args.segment_bytes,
            index=args.index,
            out_path=args.output,
        ))

    try:
        config.reload(args.config)
    except (AesMcError, OSError) as exc:
        parser.error(f"cannot load configuration: {exc}")

    if args.command == 'bench':
        return _parse_bench(parser, args)
    return _parse_job(parser, args)


def _run_worker(cli: CliConfig) -> int:
    from aes_multicore.execution.worker import EXIT_FAILURE, run_worker_chunk

    setup_logging(worker=True)
    opts = dict(cli.worker)
    keyfile = opts.pop('keyfile')
    try:
        key = Key128.from_file(keyfile)
    except (AesMcError, OSError) as exc:
        logger.error(f"chunk {opts['index']}: cannot read key: {exc}")
        return EXIT_FAILURE
    return run_worker_chunk(key=key, **opts)


def _run_job(cli: CliConfig):
    from aes_multicore.execution.executor import run_job

    direction = Direction(cli.command)
    job = JobSpec(cli.input_path, cli.output_path, cli.key, cli.workers, cli.strategy, direction)
    outcome = run_job(job)
    print(
        f"{direction.value}ed {outcome.bytes_in} bytes -> {outcome.bytes_out} bytes "
        f"in {outcome.seconds:.6f}s ({outcome.strategy.value}, {outcome.chunks} chunk(s))"
    )


def _run_bench(cli: CliConfig):
    # matplotlib is only imported here, never in worker processes
    from aes_multicore.bench.harness import BenchConfig, run_sweep
    from aes_multicore.bench.report import emit_report, write_report

    bench = BenchConfig(
        sizes=cli.sizes,
        workers=cli.sweep_workers,
        strategies=cli.strategies,
        key=cli.key,
        repetitions=cli.repetitions,
        cores=cli.cores,
        seed=cli.seed,
        work_dir=cli.work_dir,
    )
    records = run_sweep(bench)
    report = emit_report(records, cli.machine_label, bench.cores)
    write_report(report, cli.report_dir)
    print(report.summary, end='')


def main(argv: list[str] | None = None) -> int:
    """
    Entry point for the ``aes-mc`` script and ``python -m aes_multicore``.
    Returns 0 on success, 1 on a runtime failure and 2 on a usage error.
    """
    try:
        cli = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if cli.command == WORKER_COMMAND:
        return _run_worker(cli)

    setup_logging(level=cli.log_level)
    try:
        if cli.command == 'bench':
            _run_bench(cli)
        else:
            _run_job(cli)
    except (AesMcError, OSError) as exc:
        logger.error(f"{cli.command} failed: {exc}")
        return 1
    except KeyboardInterrupt:
        logger.warning("Interrupted.")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
