import os

import numpy as np
import pytest
from loguru import logger

from aes_multicore.chunking.planner import unpad_final
from aes_multicore.cipher.aes import Key128, decrypt_block, expand_key
from aes_multicore.config.settings import config as app_config
from aes_multicore.errors import IntegrityError

FIPS_KEY_HEX = '000102030405060708090a0b0c0d0e0f'


def pytest_collection_modifyitems(config, items):
    if os.getenv('AES_MC_SLOW') == '1':
        return
    skip_slow = pytest.mark.skip(reason='slow acceptance check; set AES_MC_SLOW=1 to run')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Every test runs in an empty directory against packaged defaults."""
    for name in ('AES_MC_CONFIG', 'AES_MC_KEY_HEX', 'AES_MC_LOG_LEVEL', 'AES_MC_WORKERS'):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    app_config.reload()
    yield
    # sinks added by cli.main point at this test's captured streams
    logger.remove()
    # a test may leave an invalid override in the environment
    monkeypatch.undo()
    app_config.reload()


@pytest.fixture
def key() -> Key128:
    return Key128.from_hex(FIPS_KEY_HEX)


@pytest.fixture
def schedule(key):
    return expand_key(key)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_file(tmp_path, rng):
    """Writes ``size`` random bytes (or given content) to a fresh file."""
    counter = iter(range(10**6))

    def _make(size: int = 0, content: bytes | None = None, name: str | None = None):
        data = content if content is not None else rng.bytes(size)
        path = tmp_path / (name or f'input_{next(counter)}.bin')
        path.write_bytes(data)
        return path
    return _make


@pytest.fixture
def wrong_key_for():
    """Finds a key under which the ciphertext's final block does not unpad."""
    def _find(ciphertext: bytes) -> Key128:
        for fill in range(1, 256):
            candidate = Key128(bytes([fill]) * 16)
            try:
                unpad_final(decrypt_block(ciphertext[-16:], expand_key(candidate)))
            except IntegrityError:
                return candidate
        raise AssertionError("no key with invalid padding found")
    return _find
