from collections import defaultdict
from enum import Enum

from loguru import logger


class CircuitState(Enum):
    CLOSED = "CLOSED"
    OPEN = "OPEN"


class ErrorHandler:
    """
    Per-component failure tracking with a simple circuit breaker.

    After ``failure_threshold`` failures a component's circuit opens and
    callers are expected to skip it. The benchmark sweep keys components by
    input size so one unreadable input fails its own cells without touching
    the rest of the sweep.
    """
    def __init__(self, failure_threshold: int = 1):
        self.failure_threshold = failure_threshold
        self._state: defaultdict[object, CircuitState] = defaultdict(lambda: CircuitState.CLOSED)
        self._failure_count: defaultdict[object, int] = defaultdict(int)
        self._last_error: dict[object, str] = {}

    def is_circuit_open(self, component_id) -> bool:
        """Checks if the circuit is open for a specific component."""
        return self.get_state(component_id) is CircuitState.OPEN

    def record_error(self, component_id, error: BaseException | str):
        """Records an error for a component, potentially tripping the circuit."""
        self._failure_count[component_id] += 1
        self._last_error[component_id] = str(error)
        if self._failure_count[component_id] >= self.failure_threshold and not self.is_circuit_open(component_id):
            self._state[component_id] = CircuitState.OPEN
            logger.warning(f"Circuit for {component_id} is OPEN after {self._failure_count[component_id]} failure(s): {error}")

    def last_error(self, component_id) -> str | None:
        return self._last_error.get(component_id)

    def get_state(self, component_id) -> CircuitState:
        return self._state[component_id]
