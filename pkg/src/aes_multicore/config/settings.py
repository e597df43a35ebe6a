from __future__ import annotations

import copy
import os
from pathlib import Path

import yaml
from dotenv import load_dotenv

from aes_multicore.errors import InvalidArgumentError

# Optional `.env` in the project root. Recognised variables:
# --- .env.example ---
# AES_MC_CONFIG="/path/to/config.yaml"
# AES_MC_KEY_HEX="000102030405060708090a0b0c0d0e0f"
# AES_MC_LOG_LEVEL="DEBUG"
# AES_MC_WORKERS="8"
# --------------------
env_path = Path(__file__).parent.parent.parent.parent / '.env'
load_dotenv(dotenv_path=env_path)

DEFAULTS = {
    'cipher': {
        'segment_bytes': 1 << 20,
    },
    'execution': {
        'workers': 4,
        'strategy': 'threads',
        'worker_timeout_s': 3600,
        'temp_dir': None,
    },
    'bench': {
        'sizes': ['1M', '16M', '64M'],
        'workers': [1, 2, 4, 8],
        'strategies': ['threads', 'processes'],
        'repetitions': 10,
        'seed': 1337,
        'cores': None,
        'key_hex': '000102030405060708090a0b0c0d0e0f',
        'report_dir': 'reports',
        'work_dir': None,
        'machine_label': None,
    },
    'logging': {
        'level': 'INFO',
        'dir': None,
    },
}

# environment variable -> (section, key, converter)
ENV_OVERRIDES = {
    'AES_MC_LOG_LEVEL': ('logging', 'level', str),
    'AES_MC_KEY_HEX': ('bench', 'key_hex', str),
    'AES_MC_WORKERS': ('execution', 'workers', int),
}


def _merge(base: dict, override: dict) -> dict:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class Config:
    """
    Layered application configuration: packaged defaults, then a YAML file,
    then environment variables. Nested sections are exposed as attributes
    (``config.bench.repetitions``) and also support ``.get()``/``.items()``.
    """
    def __init__(self, config_path: str | os.PathLike | None = None):
        load_dotenv()
        self.source: Path | None = None
        self._load(config_path)

    def _load(self, config_path):
        data = copy.deepcopy(DEFAULTS)

        config_file = self._resolve_path(config_path)
        if config_file is not None:
            with open(config_file, 'r') as f:
                try:
                    yaml_config = yaml.safe_load(f) or {}
                except yaml.YAMLError as exc:
                    raise InvalidArgumentError(f"Configuration file {config_file} is not valid YAML: {exc}") from exc
            if not isinstance(yaml_config, dict):
                raise InvalidArgumentError(f"Configuration file must hold a mapping: {config_file}")
            data = _merge(data, yaml_config)
        self.source = config_file

        self._set_attributes(data)
        self._override_with_env_vars()

    @staticmethod
    def _resolve_path(config_path) -> Path | None:
        if config_path is not None:
            config_file = Path(config_path)
            if not config_file.exists():
                raise FileNotFoundError(f"Configuration file not found: {config_path}")
            return config_file

        env_config = os.getenv('AES_MC_CONFIG')
        if env_config:
            config_file = Path(env_config)
            if not config_file.exists():
                raise FileNotFoundError(f"Configuration file not found: {env_config}")
            return config_file

        local = Path('config.yaml')
        return local if local.exists() else None

    def _set_attributes(self, data: dict):
        """
        Recursively sets attributes on the Config object.
        Nested dictionaries are converted to new Config instances.
        """
        for key, value in data.items():
            if isinstance(value, dict):
                setattr(self, key, self._make_nested_config(value))
            else:
                setattr(self, key, value)

    def _make_nested_config(self, data: dict):
        """Helper to create a nested Config object."""
        nested_config = Config.__new__(Config)  # skip file loading
        nested_config._set_attributes(data)
        return nested_config

    def _override_with_env_vars(self):
        for env_name, (section, key, convert) in ENV_OVERRIDES.items():
            raw = os.getenv(env_name)
            if not raw:
                continue
            try:
                value = convert(raw)
            except ValueError as exc:
                raise InvalidArgumentError(f"{env_name}={raw!r} is not valid: {exc}") from exc
            setattr(getattr(self, section), key, value)

    def reload(self, config_path: str | os.PathLike | None = None):
        """
        Re-reads every layer in place so existing references see the new
        values. On error the current settings are left untouched.
        """
        fresh = Config(config_path)
        for name in list(vars(self)):
            delattr(self, name)
        self.__dict__.update(vars(fresh))

    def get(self, key, default=None):
        """Provides a .get() method, similar to a dictionary."""
        return getattr(self, key, default)

    def items(self):
        """Allows iterating over key-value pairs, like a dictionary."""
        return ((k, v) for k, v in vars(self).items() if k != 'source')

    @classmethod
    def defaults(cls) -> Config:
        """Packaged defaults only, no file or environment layer."""
        instance = cls.__new__(cls)
        instance.source = None
        instance._set_attributes(copy.deepcopy(DEFAULTS))
        return instance


def _load_config() -> Config:
    try:
        return Config()
    except (OSError, InvalidArgumentError):
        # the CLI re-reads the layers and reports the failure as a usage error
        return Config.defaults()


# Singleton instance to be used across the application
config = _load_config()
