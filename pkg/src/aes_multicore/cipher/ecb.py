"""ECB over block-aligned byte strings, vectorised across blocks."""
from aes_multicore.cipher.aes import (
    BLOCK_SIZE,
    RoundKeySchedule,
    blocks_to_states,
    decrypt_states,
    encrypt_states,
    states_to_bytes,
)
from aes_multicore.errors import InvalidArgumentError


def _check_aligned(data: bytes):
    if len(data) % BLOCK_SIZE:
        raise InvalidArgumentError(f"ECB input of {len(data)} bytes is not a multiple of {BLOCK_SIZE}")


def ecb_encrypt(data: bytes, ks: RoundKeySchedule) -> bytes:
    _check_aligned(data)
    if not data:
        return b''
    return states_to_bytes(encrypt_states(blocks_to_states(data), ks))


def ecb_decrypt(data: bytes, ks: RoundKeySchedule) -> bytes:
    _check_aligned(data)
    if not data:
        return b''
    return states_to_bytes(decrypt_states(blocks_to_states(data), ks))
