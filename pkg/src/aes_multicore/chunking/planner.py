"""
Block-aligned partitioning of a byte stream across workers.

Only the final chunk may end mid-block, and only the final chunk is padded
(PKCS#7, always at least one byte). Since ECB encrypts every block on its
own, encrypting the chunks independently and concatenating them gives the
same bytes as encrypting the whole stream at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from aes_multicore.cipher.aes import BLOCK_SIZE
from aes_multicore.errors import IntegrityError, InvalidArgumentError


@dataclass(frozen=True)
class Chunk:
    index: int
    offset: int
    raw_len: int
    padded_len: int
    is_final: bool

    @property
    def end(self) -> int:
        return self.offset + self.raw_len


@dataclass(frozen=True)
class ChunkPlan:
    total_len: int
    workers: int
    chunks: tuple[Chunk, ...]
    padded: bool = True

    def __len__(self):
        return len(self.chunks)

    def __iter__(self):
        return iter(self.chunks)

    @property
    def output_len(self) -> int:
        """Assembled size before any unpadding."""
        return sum(c.padded_len for c in self.chunks)

    @property
    def final(self) -> Chunk:
        return self.chunks[-1]


def padded_length(raw_len: int) -> int:
    return (raw_len // BLOCK_SIZE + 1) * BLOCK_SIZE


def plan_chunks(total_len: int, workers: int, pad: bool = True) -> ChunkPlan:
    """
    Splits ``total_len`` bytes into at most ``workers`` contiguous chunks.

    Shares are counted in blocks that carry input bytes; the chunk count is
    capped at that block count so no chunk is empty, and earlier chunks take
    the extra block when the division is uneven. With ``pad=False`` the input
    is ciphertext: it must be a positive multiple of 16 and nothing is padded.
    """
    if workers < 1:
        raise InvalidArgumentError(f"workers must be >= 1, got {workers}")
    if total_len < 0:
        raise InvalidArgumentError(f"total_len must be >= 0, got {total_len}")
    if not pad and (total_len == 0 or total_len % BLOCK_SIZE):
        raise InvalidArgumentError(f"ciphertext length {total_len} is not a positive multiple of {BLOCK_SIZE}")

    blocks = max(1, -(-total_len // BLOCK_SIZE))
    count = min(workers, blocks)
    base, extra = divmod(blocks, count)

    chunks = []
    start_block = 0
    for index in range(count):
        share = base + (1 if index < extra else 0)
        offset = start_block * BLOCK_SIZE
        is_final = index == count - 1
        if is_final:
            raw_len = total_len - offset
            padded_len = padded_length(raw_len) if pad else raw_len
        else:
            raw_len = padded_len = share * BLOCK_SIZE
        chunks.append(Chunk(index, offset, raw_len, padded_len, is_final))
        start_block += share

    return ChunkPlan(total_len=total_len, workers=workers, chunks=tuple(chunks), padded=pad)


def pad_final(raw: bytes) -> bytes:
    k = BLOCK_SIZE - len(raw) % BLOCK_SIZE
    return bytes(raw) + bytes([k]) * k


def unpad_final(data: bytes) -> bytes:
    if not data or len(data) % BLOCK_SIZE:
        raise IntegrityError(f"padded data length {len(data)} is not a positive multiple of {BLOCK_SIZE}")
    k = data[-1]
    if not 1 <= k <= BLOCK_SIZE or data[-k:] != bytes([k]) * k:
        raise IntegrityError("invalid PKCS#7 padding (wrong key or corrupted ciphertext)")
    return bytes(data[:-k])


def check_chunk_count(plan: ChunkPlan, count: int):
    if count != len(plan.chunks):
        raise InvalidArgumentError(f"expected {len(plan.chunks)} chunk outputs, got {count}")


def check_chunk_output(plan: ChunkPlan, chunk: Chunk, length: int):
    if chunk.is_final and not plan.padded:
        ok = chunk.padded_len - BLOCK_SIZE <= length < chunk.padded_len
    else:
        ok = length == chunk.padded_len
    if not ok:
        raise InvalidArgumentError(f"chunk {chunk.index} output is {length} bytes, plan says {chunk.padded_len}")


def assemble(plan: ChunkPlan, encrypted_chunks: Sequence[bytes]) -> bytes:
    """
    Concatenates per-chunk outputs in plan order. For a ciphertext plan the
    final output has already been unpadded and may be up to a block shorter.
    """
    check_chunk_count(plan, len(encrypted_chunks))
    for chunk, data in zip(plan.chunks, encrypted_chunks):
        check_chunk_output(plan, chunk, len(data))
    return b''.join(encrypted_chunks)
