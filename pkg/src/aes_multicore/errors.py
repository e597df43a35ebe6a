from dataclasses import dataclass
from typing import Sequence


class AesMcError(Exception):
    """Base class for every error raised by aes_multicore."""


class InvalidArgumentError(AesMcError, ValueError):
    """A caller passed a value outside the accepted domain."""


class IntegrityError(AesMcError):
    """Decrypted data does not end in well-formed PKCS#7 padding."""


class ChunkIOError(AesMcError):
    """Reading or writing a chunk failed."""

    def __init__(self, message: str, path=None, chunk_index: int | None = None):
        self.path = path
        self.chunk_index = chunk_index
        context = []
        if chunk_index is not None:
            context.append(f"chunk {chunk_index}")
        if path is not None:
            context.append(str(path))
        suffix = f" ({', '.join(context)})" if context else ""
        super().__init__(f"{message}{suffix}")


@dataclass(frozen=True)
class WorkerFailure:
    index: int
    message: str


class WorkerPoolError(AesMcError):
    """One or more chunk workers failed; carries every failure."""

    def __init__(self, failures: Sequence[WorkerFailure]):
        self.failures = tuple(sorted(failures, key=lambda f: f.index))
        details = "; ".join(f"chunk {f.index}: {f.message}" for f in self.failures)
        indices = ", ".join(str(f.index) for f in self.failures)
        super().__init__(f"{len(self.failures)} worker(s) failed [chunks {indices}]: {details}")

    @property
    def failed_indices(self) -> list[int]:
        return [f.index for f in self.failures]
