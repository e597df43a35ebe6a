from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from aes_multicore.cipher.aes import Key128
from aes_multicore.errors import InvalidArgumentError


class Direction(Enum):
    ENCRYPT = 'encrypt'
    DECRYPT = 'decrypt'


class ExecStrategy(Enum):
    """How chunk workers run: inline, as threads of this process, or as separate processes."""
    SEQUENTIAL = 'sequential'
    THREADED = 'threads'
    PROCESS_ISOLATED = 'processes'

    @classmethod
    def from_name(cls, name: str) -> 'ExecStrategy':
        try:
            return cls(name.strip().lower())
        except ValueError:
            choices = ', '.join(s.value for s in cls)
            raise InvalidArgumentError(f"unknown strategy {name!r} (choose from {choices})") from None


@dataclass(frozen=True)
class JobSpec:
    """
    One file-to-file encryption or decryption job.
    """
    input_path: Path
    output_path: Path
    key: Key128
    workers: int = 1
    strategy: ExecStrategy = ExecStrategy.SEQUENTIAL
    direction: Direction = Direction.ENCRYPT

    def __post_init__(self):
        object.__setattr__(self, 'input_path', Path(self.input_path))
        object.__setattr__(self, 'output_path', Path(self.output_path))
        if self.workers < 1:
            raise InvalidArgumentError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class JobOutcome:
    bytes_in: int
    bytes_out: int
    seconds: float
    chunks: int
    strategy: ExecStrategy
    direction: Direction
