"""
Lookup tables for AES, generated at import from their GF(2^8) definitions.

Nothing here is pasted from the standard: the S-box comes from inversion in
GF(2^8) (modulus x^8 + x^4 + x^3 + x + 1) followed by the affine map, the
round constants are successive powers of {02}, and the MixColumns tables are
products by fixed coefficients. ``verify_tables`` runs once on import.
"""
import numpy as np

from aes_multicore.errors import AesMcError

AES_MODULUS = 0x11B


def xtime(a: int) -> int:
    """Multiply by {02} in GF(2^8)."""
    a <<= 1
    if a & 0x100:
        a ^= AES_MODULUS
    return a & 0xFF


def gf_mul(a: int, b: int) -> int:
    result = 0
    while b:
        if b & 1:
            result ^= a
        a = xtime(a)
        b >>= 1
    return result


def _rotl8(x: int, shift: int) -> int:
    return ((x << shift) | (x >> (8 - shift))) & 0xFF


def _build_sbox() -> list[int]:
    # p walks the multiplicative group by powers of 3 while q walks the
    # inverses (division by 3), so q == p^-1 at every step.
    sbox = [0] * 256
    p = q = 1
    while True:
        p = p ^ xtime(p)
        q ^= (q << 1) & 0xFF
        q ^= (q << 2) & 0xFF
        q ^= (q << 4) & 0xFF
        if q & 0x80:
            q ^= 0x09
        sbox[p] = 0x63 ^ q ^ _rotl8(q, 1) ^ _rotl8(q, 2) ^ _rotl8(q, 3) ^ _rotl8(q, 4)
        if p == 1:
            break
    sbox[0] = 0x63  # zero has no inverse; the affine constant alone
    return sbox


def _build_rcon(count: int = 10) -> tuple[int, ...]:
    values = [1]
    while len(values) < count:
        values.append(xtime(values[-1]))
    return tuple(values)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.uint8)
    arr.setflags(write=False)
    return arr


def _mul_table(coefficient: int) -> np.ndarray:
    return _frozen([gf_mul(x, coefficient) for x in range(256)])


SBOX_LIST = _build_sbox()
INV_SBOX_LIST = [0] * 256
for _i, _s in enumerate(SBOX_LIST):
    INV_SBOX_LIST[_s] = _i

SBOX = _frozen(SBOX_LIST)
INV_SBOX = _frozen(INV_SBOX_LIST)
RCON = _build_rcon()

MUL2 = _mul_table(0x02)
MUL3 = _mul_table(0x03)
MUL9 = _mul_table(0x09)
MUL11 = _mul_table(0x0B)
MUL13 = _mul_table(0x0D)
MUL14 = _mul_table(0x0E)


def verify_tables():
    """Checks the permutation invariants of the generated tables."""
    if sorted(SBOX_LIST) != list(range(256)):
        raise AesMcError("S-box is not a permutation of 0..255")
    if any(INV_SBOX_LIST[SBOX_LIST[x]] != x for x in range(256)):
        raise AesMcError("inverse S-box does not invert the S-box")
    if any(SBOX_LIST[x] == x or SBOX_LIST[x] == x ^ 0xFF for x in range(256)):
        raise AesMcError("S-box has a fixed or opposite fixed point")
    # the two MixColumns circulant matrices must multiply to the identity
    forward = (0x02, 0x03, 0x01, 0x01)
    inverse = (0x0E, 0x0B, 0x0D, 0x09)
    for row in range(4):
        for col in range(4):
            acc = 0
            for k in range(4):
                acc ^= gf_mul(inverse[(k - row) % 4], forward[(col - k) % 4])
            if acc != (1 if row == col else 0):
                raise AesMcError("MixColumns coefficients are not mutually inverse")


verify_tables()
