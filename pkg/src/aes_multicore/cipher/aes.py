"""
AES-128 block cipher built from the four round transforms.

A state is a ``numpy.uint8`` array whose last two axes are ``(row, column)``.
Block byte ``i`` lands at row ``i % 4``, column ``i // 4``. Every transform
accepts any number of leading batch axes, so the same code encrypts one block
or a whole chunk of ``(n, 4, 4)`` states. Transforms return new arrays and
never modify their input.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from aes_multicore.cipher.tables import (
    INV_SBOX,
    MUL2,
    MUL3,
    MUL9,
    MUL11,
    MUL13,
    MUL14,
    RCON,
    SBOX,
    SBOX_LIST,
)
from aes_multicore.errors import InvalidArgumentError

BLOCK_SIZE = 16
KEY_SIZE = 16
NK = 4
NR = 10

State = np.ndarray


@dataclass(frozen=True)
class Key128:
    raw: bytes = field(repr=False)

    def __post_init__(self):
        if isinstance(self.raw, (bytearray, memoryview)):
            object.__setattr__(self, 'raw', bytes(self.raw))
        if not isinstance(self.raw, bytes):
            raise InvalidArgumentError(f"key must be bytes, got {type(self.raw).__name__}")
        if len(self.raw) != KEY_SIZE:
            raise InvalidArgumentError(f"AES-128 key must be {KEY_SIZE} bytes, got {len(self.raw)}")

    @classmethod
    def from_hex(cls, text: str) -> Key128:
        text = text.strip()
        if len(text) != 2 * KEY_SIZE:
            raise InvalidArgumentError(f"hex key must be {2 * KEY_SIZE} hex digits, got {len(text)}")
        try:
            return cls(bytes.fromhex(text))
        except ValueError as exc:
            raise InvalidArgumentError(f"hex key is not valid hexadecimal: {exc}") from exc

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> Key128:
        """Reads 16 raw bytes, or 32 hex digits with optional surrounding whitespace."""
        data = Path(path).read_bytes()
        if len(data) == KEY_SIZE:
            return cls(data)
        try:
            text = data.decode('ascii')
        except UnicodeDecodeError:
            raise InvalidArgumentError(f"keyfile {path} holds {len(data)} bytes; expected {KEY_SIZE} raw bytes or {2 * KEY_SIZE} hex digits") from None
        return cls.from_hex(text)


@dataclass(frozen=True)
class RoundKeySchedule:
    """The 11 round keys of AES-128; entry 0 is the cipher key itself."""
    round_keys: tuple[bytes, ...]
    states: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.round_keys) != NR + 1:
            raise InvalidArgumentError(f"schedule needs {NR + 1} round keys, got {len(self.round_keys)}")
        if any(len(rk) != BLOCK_SIZE for rk in self.round_keys):
            raise InvalidArgumentError("every round key must be 16 bytes")
        states = blocks_to_states(b''.join(self.round_keys))
        states.setflags(write=False)
        object.__setattr__(self, 'states', states)

    def __len__(self):
        return len(self.round_keys)

    def __getitem__(self, index: int) -> bytes:
        return self.round_keys[index]


def expand_key(key: Key128) -> RoundKeySchedule:
    words = [list(key.raw[4 * i:4 * i + 4]) for i in range(NK)]
    for i in range(NK, 4 * (NR + 1)):
        temp = list(words[i - 1])
        if i % NK == 0:
            temp = temp[1:] + temp[:1]  # RotWord
            temp = [SBOX_LIST[b] for b in temp]  # SubWord
            temp[0] ^= RCON[i // NK - 1]
        words.append([a ^ b for a, b in zip(words[i - NK], temp)])
    round_keys = tuple(
        bytes(b for word in words[4 * r:4 * r + 4] for b in word)
        for r in range(NR + 1)
    )
    return RoundKeySchedule(round_keys)


# --- State <-> bytes ---

def block_to_state(block: bytes) -> State:
    if len(block) != BLOCK_SIZE:
        raise InvalidArgumentError(f"block must be {BLOCK_SIZE} bytes, got {len(block)}")
    return np.frombuffer(block, dtype=np.uint8).reshape(4, 4).T.copy()


def state_to_block(state: State) -> bytes:
    return state.swapaxes(-1, -2).tobytes()


def blocks_to_states(data: bytes) -> State:
    """(n*16 bytes) -> (n, 4, 4) states."""
    if len(data) % BLOCK_SIZE:
        raise InvalidArgumentError(f"data length {len(data)} is not a multiple of {BLOCK_SIZE}")
    return np.frombuffer(data, dtype=np.uint8).reshape(-1, 4, 4).swapaxes(1, 2).copy()


def states_to_bytes(states: State) -> bytes:
    return states.swapaxes(-1, -2).tobytes()


# --- Round transforms ---

_ROWS = np.arange(4)[:, None]
_COLS = np.arange(4)[None, :]
_SHIFT_LEFT = (_COLS + _ROWS) % 4
_SHIFT_RIGHT = (_COLS - _ROWS) % 4


def sub_bytes(state: State) -> State:
    return np.take(SBOX, state)


def inv_sub_bytes(state: State) -> State:
    return np.take(INV_SBOX, state)


def shift_rows(state: State) -> State:
    """Rotates row r left by r positions."""
    return np.take_along_axis(state, np.broadcast_to(_SHIFT_LEFT, state.shape), axis=-1)


def inv_shift_rows(state: State) -> State:
    return np.take_along_axis(state, np.broadcast_to(_SHIFT_RIGHT, state.shape), axis=-1)


def _rows(state: State):
    return state[..., 0, :], state[..., 1, :], state[..., 2, :], state[..., 3, :]


def mix_columns(state: State) -> State:
    s0, s1, s2, s3 = _rows(state)
    t = np.take
    return np.stack((
        t(MUL2, s0) ^ t(MUL3, s1) ^ s2 ^ s3,
        s0 ^ t(MUL2, s1) ^ t(MUL3, s2) ^ s3,
        s0 ^ s1 ^ t(MUL2, s2) ^ t(MUL3, s3),
        t(MUL3, s0) ^ s1 ^ s2 ^ t(MUL2, s3),
    ), axis=-2)


def inv_mix_columns(state: State) -> State:
    s0, s1, s2, s3 = _rows(state)
    t = np.take
    return np.stack((
        t(MUL14, s0) ^ t(MUL11, s1) ^ t(MUL13, s2) ^ t(MUL9, s3),
        t(MUL9, s0) ^ t(MUL14, s1) ^ t(MUL11, s2) ^ t(MUL13, s3),
        t(MUL13, s0) ^ t(MUL9, s1) ^ t(MUL14, s2) ^ t(MUL11, s3),
        t(MUL11, s0) ^ t(MUL13, s1) ^ t(MUL9, s2) ^ t(MUL14, s3),
    ), axis=-2)


def add_round_key(state: State, round_key: bytes | State) -> State:
    if not isinstance(round_key, np.ndarray):
        round_key = block_to_state(bytes(round_key))
    return np.bitwise_xor(state, round_key)


# --- Cipher ---

def encrypt_states(states: State, ks: RoundKeySchedule) -> State:
    s = add_round_key(states, ks.states[0])
    for rnd in range(1, NR):
        s = add_round_key(mix_columns(shift_rows(sub_bytes(s))), ks.states[rnd])
    return add_round_key(shift_rows(sub_bytes(s)), ks.states[NR])


def decrypt_states(states: State, ks: RoundKeySchedule) -> State:
    s = add_round_key(states, ks.states[NR])
    for rnd in range(NR - 1, 0, -1):
        s = inv_mix_columns(add_round_key(inv_sub_bytes(inv_shift_rows(s)), ks.states[rnd]))
    return add_round_key(inv_sub_bytes(inv_shift_rows(s)), ks.states[0])


def encrypt_block(block: bytes, ks: RoundKeySchedule) -> bytes:
    return state_to_block(encrypt_states(block_to_state(block), ks))


def decrypt_block(block: bytes, ks: RoundKeySchedule) -> bytes:
    return state_to_block(decrypt_states(block_to_state(block), ks))
