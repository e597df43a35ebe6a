from aes_multicore.errors import ChunkIOError, WorkerFailure, WorkerPoolError
from aes_multicore.utils.error_handler import CircuitState, ErrorHandler


def test_circuit_opens_at_threshold():
    handler = ErrorHandler(failure_threshold=2)
    handler.record_error(16, OSError("unreadable"))
    assert not handler.is_circuit_open(16)
    handler.record_error(16, "still unreadable")
    assert handler.is_circuit_open(16)
    assert handler.get_state(16) is CircuitState.OPEN
    assert handler.last_error(16) == "still unreadable"
    assert not handler.is_circuit_open(32)


def test_worker_pool_error_names_every_chunk():
    error = WorkerPoolError([WorkerFailure(3, "exit status 1"), WorkerFailure(0, "timed out")])
    assert error.failed_indices == [0, 3]
    assert 'chunks 0, 3' in str(error)
    assert 'chunk 3: exit status 1' in str(error)


def test_chunk_io_error_context():
    assert str(ChunkIOError("short read", "/tmp/x", 2)) == "short read (chunk 2, /tmp/x)"
    assert str(ChunkIOError("short read")) == "short read"
