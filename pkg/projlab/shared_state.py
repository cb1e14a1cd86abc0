"""Thread-safe shared state for workers, the log service and the CLI."""

import time
from dataclasses import dataclass, field
from queue import Queue, Full
from threading import Lock, Event


@dataclass
class LogEntry:
    """A single log entry."""
    timestamp: float
    category: str  # 'Info', 'Action', 'Error', 'Check'
    message: str

    def to_dict(self) -> dict:
        return {
            'timestamp': self.timestamp,
            'category': self.category,
            'message': self.message
        }


@dataclass
class CheckOutcome:
    """Result of one verification check."""
    name: str
    provenance: str
    passed: bool
    detail: str = ""
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'provenance': self.provenance,
            'passed': self.passed,
            'detail': self.detail,
            'values': dict(self.values),
        }


class RunState:
    """Thread-safe progress and check bookkeeping for one CLI run."""

    def __init__(self):
        self._lock = Lock()
        self._tasks_total: int = 0
        self._tasks_done: int = 0
        self._checks: list[CheckOutcome] = []
        self._config: dict = {}

    # Task progress
    def add_tasks(self, count: int) -> None:
        with self._lock:
            self._tasks_total += count

    def task_done(self) -> None:
        with self._lock:
            self._tasks_done += 1

    def get_progress(self) -> tuple[int, int]:
        with self._lock:
            return self._tasks_done, self._tasks_total

    # Checks
    def record_check(self, outcome: CheckOutcome) -> None:
        with self._lock:
            self._checks.append(outcome)

    def get_checks(self) -> list[CheckOutcome]:
        with self._lock:
            return list(self._checks)

    def failed_checks(self) -> list[CheckOutcome]:
        with self._lock:
            return [c for c in self._checks if not c.passed]

    # Config
    def set_config(self, config: dict) -> None:
        with self._lock:
            self._config = config.copy()

    def get_config(self) -> dict:
        with self._lock:
            return self._config.copy()


class LogBus:
    """Queue container for log entries from all threads.

    Entries are dropped rather than blocking once the queue is full, so
    library code can log whether or not a LogService is draining the bus.
    """

    def __init__(self, maxsize: int = 10000):
        self.log = Queue(maxsize=maxsize)
        self.dropped = 0

    def log_message(self, category: str, message: str) -> None:
        """Convenience method to log a message."""
        entry = LogEntry(
            timestamp=time.time(),
            category=category,
            message=message
        )
        try:
            self.log.put_nowait(entry)
        except Full:
            self.dropped += 1

    def log_action(self, message: str) -> None:
        self.log_message('Action', message)

    def log_error(self, message: str) -> None:
        self.log_message('Error', message)

    def log_info(self, message: str) -> None:
        self.log_message('Info', message)

    def log_check(self, message: str) -> None:
        self.log_message('Check', message)


# Process-wide bus used by the numerical modules
bus = LogBus()

# Global shutdown event
shutdown_event = Event()
