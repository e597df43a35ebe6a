import pytest

from aes_multicore.cipher.aes import Key128, encrypt_block, expand_key
from aes_multicore.cipher.ecb import ecb_decrypt, ecb_encrypt
from aes_multicore.errors import InvalidArgumentError

SP800_KEY = '2b7e151628aed2a6abf7158809cf4f3c'
SP800_PLAIN = (
    '6bc1bee22e409f96e93d7e117393172a'
    'ae2d8a571e03ac9c9eb76fac45af8e51'
    '30c81c46a35ce411e5fbc1191a0a52ef'
    'f69f2445df4f9b17ad2b417be66c3710'
)
SP800_CIPHER = (
    '3ad77bb40d7a3660a89ecaf32466ef97'
    'f5d3d58503b9699de785895a96fdbaaf'
    '43b1cd7f598ece23881b00e3ed030688'
    '7b0c785e27e8ad3f8223207104725dd4'
)


def test_multi_block_vector():
    ks = expand_key(Key128.from_hex(SP800_KEY))
    assert ecb_encrypt(bytes.fromhex(SP800_PLAIN), ks).hex() == SP800_CIPHER
    assert ecb_decrypt(bytes.fromhex(SP800_CIPHER), ks).hex() == SP800_PLAIN


def test_identical_blocks_give_identical_ciphertext(schedule):
    ciphertext = ecb_encrypt(b'AAAAAAAABBBBBBBB' * 2 + b'C' * 16, schedule)
    assert ciphertext[0:16] == ciphertext[16:32]
    assert ciphertext[0:16] != ciphertext[32:48]


def test_matches_block_by_block(rng, schedule):
    data = rng.bytes(16 * 37)
    expected = b''.join(encrypt_block(data[i:i + 16], schedule) for i in range(0, len(data), 16))
    assert ecb_encrypt(data, schedule) == expected


def test_roundtrip(rng, schedule):
    data = rng.bytes(16 * 1000)
    assert ecb_decrypt(ecb_encrypt(data, schedule), schedule) == data


def test_empty_input(schedule):
    assert ecb_encrypt(b'', schedule) == b''
    assert ecb_decrypt(b'', schedule) == b''


@pytest.mark.parametrize("length", [1, 15, 17, 31])
def test_unaligned_input_is_rejected(length, schedule):
    with pytest.raises(InvalidArgumentError):
        ecb_encrypt(bytes(length), schedule)
    with pytest.raises(InvalidArgumentError):
        ecb_decrypt(bytes(length), schedule)
