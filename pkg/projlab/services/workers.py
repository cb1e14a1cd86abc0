"""Worker pool for partitioned numerical tasks."""

from queue import Queue, Empty
from threading import Thread, Lock
from typing import Any, Callable, Dict, List, Optional, Sequence

from projlab.errors import Cancelled
from projlab.shared_state import LogBus, RunState, bus as default_bus, shutdown_event


class _Worker(Thread):
    """Daemon thread draining the shared task queue."""

    def __init__(self, index: int, tasks: Queue, results: Dict[int, Any],
                 errors: Dict[int, BaseException], lock: Lock,
                 state: Optional[RunState]):
        super().__init__(daemon=True, name=f"projlab-worker-{index}")
        self.tasks = tasks
        self.results = results
        self.errors = errors
        self.lock = lock
        self.state = state

    def run(self):
        while not shutdown_event.is_set():
            try:
                idx, fn = self.tasks.get_nowait()
            except Empty:
                return
            try:
                value = fn()
                with self.lock:
                    self.results[idx] = value
            except BaseException as e:  # re-raised in the caller
                with self.lock:
                    self.errors[idx] = e
            if self.state is not None:
                self.state.task_done()


class WorkerPool:
    """Runs zero-argument tasks and returns results in task order.

    Results are always collected by task index, so any fold over them in
    list order is independent of thread scheduling.
    """

    def __init__(self, workers: int = 1, state: Optional[RunState] = None,
                 bus: Optional[LogBus] = None):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self.state = state
        self.bus = bus if bus is not None else default_bus

    def run(self, tasks: Sequence[Callable[[], Any]], label: str = "tasks") -> List[Any]:
        if self.state is not None:
            self.state.add_tasks(len(tasks))

        if self.workers == 1 or len(tasks) <= 1:
            out = []
            for fn in tasks:
                if shutdown_event.is_set():
                    raise Cancelled(f"{label}: cancelled after {len(out)} of {len(tasks)}")
                out.append(fn())
                if self.state is not None:
                    self.state.task_done()
            return out

        queue: Queue = Queue()
        for idx, fn in enumerate(tasks):
            queue.put((idx, fn))

        results: Dict[int, Any] = {}
        errors: Dict[int, BaseException] = {}
        lock = Lock()
        threads = [
            _Worker(w, queue, results, errors, lock, self.state)
            for w in range(min(self.workers, len(tasks)))
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        if errors:
            first = min(errors)
            self.bus.log_error(f"{label}: task {first} failed: {errors[first]}")
            raise errors[first]
        if len(results) != len(tasks):
            raise Cancelled(f"{label}: cancelled after {len(results)} of {len(tasks)}")
        return [results[i] for i in range(len(tasks))]

    def map(self, fn: Callable[[Any], Any], items: Sequence[Any], label: str = "tasks") -> List[Any]:
        return self.run([(lambda item=item: fn(item)) for item in items], label=label)
