import os

from loguru import logger

from aes_multicore.chunking.planner import Chunk, pad_final, unpad_final
from aes_multicore.cipher.aes import BLOCK_SIZE, RoundKeySchedule
from aes_multicore.cipher.ecb import ecb_decrypt, ecb_encrypt
from aes_multicore.config.settings import config
from aes_multicore.errors import ChunkIOError, InvalidArgumentError
from aes_multicore.model import Direction


def segment_bytes(value: int | None = None) -> int:
    seg = int(value if value is not None else config.cipher.get('segment_bytes', 1 << 20))
    if seg <= 0 or seg % BLOCK_SIZE:
        raise InvalidArgumentError(f"segment_bytes must be a positive multiple of {BLOCK_SIZE}, got {seg}")
    return seg


def read_exact(fd: int, size: int, offset: int, path=None, index: int | None = None) -> bytes:
    parts = []
    got = 0
    while got < size:
        try:
            part = os.pread(fd, size - got, offset + got)
        except OSError as exc:
            raise ChunkIOError(f"read failed at offset {offset + got}: {exc}", path, index) from exc
        if not part:
            raise ChunkIOError(f"short read: wanted {size} bytes at offset {offset}, got {got}", path, index)
        parts.append(part)
        got += len(part)
    return b''.join(parts)


def write_all(fd: int, data: bytes, offset: int, path=None, index: int | None = None):
    view = memoryview(data)
    done = 0
    while done < len(view):
        try:
            done += os.pwrite(fd, view[done:], offset + done)
        except OSError as exc:
            raise ChunkIOError(f"write failed at offset {offset + done}: {exc}", path, index) from exc


def transform_range(
    in_fd: int,
    out_fd: int,
    chunk: Chunk,
    out_offset: int,
    ks: RoundKeySchedule,
    direction: Direction,
    seg: int,
    in_path=None,
    out_path=None,
) -> int:
    """
    Streams one chunk through ECB in ``seg``-byte slices with positional
    I/O, so any number of callers may share the same descriptors. Pads the
    tail of a final chunk on encryption and unpads it on decryption.
    Returns the number of bytes written.
    """
    encrypt = direction is Direction.ENCRYPT
    transform = ecb_encrypt if encrypt else ecb_decrypt
    pos = 0
    written = 0
    while True:
        n = min(seg, chunk.raw_len - pos)
        data = read_exact(in_fd, n, chunk.offset + pos, in_path, chunk.index)
        pos += n
        last = pos >= chunk.raw_len
        if encrypt and last and chunk.is_final:
            data = pad_final(data)
        out = transform(data, ks)
        if not encrypt and last and chunk.is_final:
            out = unpad_final(out)
        write_all(out_fd, out, out_offset + written, out_path, chunk.index)
        written += len(out)
        if last:
            logger.debug(f"chunk {chunk.index}: {chunk.raw_len} bytes at {chunk.offset} -> {written} bytes")
            return written
