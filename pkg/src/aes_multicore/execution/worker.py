"""Body of one process-isolated worker: a single chunk, file to file."""
import os
from pathlib import Path

from loguru import logger

from aes_multicore.chunking.planner import Chunk, padded_length
from aes_multicore.cipher.aes import Key128, expand_key
from aes_multicore.errors import AesMcError, ChunkIOError, IntegrityError
from aes_multicore.execution.ranges import segment_bytes, transform_range
from aes_multicore.model import Direction

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INTEGRITY = 3


def run_worker_chunk(
    input_path,
    offset: int,
    raw_len: int,
    is_final: bool,
    key: Key128,
    out_path,
    direction: Direction = Direction.ENCRYPT,
    seg: int | None = None,
    index: int = 0,
) -> int:
    """
    Reads exactly ``raw_len`` bytes at ``offset``, transforms them (padding
    or unpadding iff ``is_final``) and writes the result to ``out_path``.
    Returns a process exit status; failures are reported on stderr.
    """
    input_path, out_path = Path(input_path), Path(out_path)
    try:
        try:
            in_fd = os.open(input_path, os.O_RDONLY)
        except OSError as exc:
            raise ChunkIOError(f"cannot open input: {exc.strerror}", input_path, index) from exc
        try:
            size = os.fstat(in_fd).st_size
            if offset < 0 or raw_len < 0 or offset + raw_len > size:
                raise ChunkIOError(f"range [{offset}, {offset + raw_len}) lies outside a {size}-byte file", input_path, index)
            encrypt = direction is Direction.ENCRYPT
            chunk = Chunk(
                index=index,
                offset=offset,
                raw_len=raw_len,
                padded_len=padded_length(raw_len) if encrypt and is_final else raw_len,
                is_final=is_final,
            )
            try:
                out_fd = os.open(out_path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
            except OSError as exc:
                raise ChunkIOError(f"cannot create output: {exc.strerror}", out_path, index) from exc
            try:
                written = transform_range(
                    in_fd, out_fd, chunk, 0, expand_key(key), direction, segment_bytes(seg),
                    in_path=input_path, out_path=out_path,
                )
            finally:
                os.close(out_fd)
        finally:
            os.close(in_fd)
    except IntegrityError as exc:
        logger.error(f"chunk {index}: {exc}")
        return EXIT_INTEGRITY
    except AesMcError as exc:
        logger.error(f"chunk {index}: {exc}")
        return EXIT_FAILURE

    logger.debug(f"chunk {index}: wrote {written} bytes to {out_path}")
    return EXIT_OK
