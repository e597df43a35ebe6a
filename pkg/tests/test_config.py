import pytest

from aes_multicore.config.settings import Config, _load_config
from aes_multicore.errors import InvalidArgumentError


def test_defaults_without_a_file():
    cfg = Config()
    assert cfg.source is None
    assert cfg.cipher.segment_bytes == 1 << 20
    assert cfg.execution.workers == 4
    assert cfg.bench.repetitions == 10
    assert cfg.bench.get('missing', 'fallback') == 'fallback'
    assert cfg.logging.dir is None


def test_yaml_overrides_merge_with_defaults(tmp_path):
    path = tmp_path / 'cfg.yaml'
    path.write_text('bench:\n  repetitions: 5\n  sizes: ["4K"]\n')
    cfg = Config(path)
    assert cfg.source == path
    assert cfg.bench.repetitions == 5
    assert cfg.bench.sizes == ['4K']
    assert cfg.bench.workers == [1, 2, 4, 8]
    assert cfg.execution.strategy == 'threads'


def test_local_config_yaml_is_picked_up(tmp_path):
    (tmp_path / 'config.yaml').write_text('execution:\n  workers: 7\n')
    assert Config().execution.workers == 7


def test_environment_wins(tmp_path, monkeypatch):
    path = tmp_path / 'cfg.yaml'
    path.write_text('execution:\n  workers: 2\n')
    monkeypatch.setenv('AES_MC_CONFIG', str(path))
    monkeypatch.setenv('AES_MC_WORKERS', '9')
    monkeypatch.setenv('AES_MC_LOG_LEVEL', 'DEBUG')
    cfg = Config()
    assert cfg.source == path
    assert cfg.execution.workers == 9
    assert cfg.logging.level == 'DEBUG'


def test_bad_environment_value(monkeypatch):
    monkeypatch.setenv('AES_MC_WORKERS', 'many')
    with pytest.raises(InvalidArgumentError):
        Config()


def test_missing_explicit_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        Config(tmp_path / 'nope.yaml')


def test_non_mapping_document(tmp_path):
    path = tmp_path / 'list.yaml'
    path.write_text('- 1\n- 2\n')
    with pytest.raises(InvalidArgumentError):
        Config(path)


def test_reload_updates_in_place(tmp_path):
    cfg = Config()
    path = tmp_path / 'cfg.yaml'
    path.write_text('cipher:\n  segment_bytes: 4096\n')
    cfg.reload(path)
    assert cfg.cipher.segment_bytes == 4096
    assert dict(cfg.items()).keys() == {'cipher', 'execution', 'bench', 'logging'}


def test_broken_yaml_is_a_configuration_error(tmp_path):
    path = tmp_path / 'broken.yaml'
    path.write_text('bench: [1, 2\n')
    with pytest.raises(InvalidArgumentError, match='not valid YAML'):
        Config(path)


def test_unloadable_environment_falls_back_to_defaults(tmp_path, monkeypatch):
    (tmp_path / 'config.yaml').write_text('execution:\n  workers: 7\n')
    monkeypatch.setenv('AES_MC_CONFIG', str(tmp_path / 'gone.yaml'))
    cfg = _load_config()
    assert cfg.source is None
    assert cfg.execution.workers == 4
