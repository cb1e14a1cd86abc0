"""Tests for the worker pool and run-state bookkeeping."""

import threading

import pytest

from projlab.errors import Cancelled, OutOfRange
from projlab.services.workers import WorkerPool
from projlab.shared_state import CheckOutcome, RunState, shutdown_event


@pytest.mark.parametrize("workers", [1, 2, 5])
def test_results_come_back_in_task_order(workers):
    pool = WorkerPool(workers)
    assert pool.map(lambda i: i * i, range(20)) == [i * i for i in range(20)]


def test_tasks_run_on_several_threads():
    names = set()
    barrier = threading.Barrier(3, timeout=5)

    def task():
        names.add(threading.current_thread().name)
        barrier.wait()

    WorkerPool(3).run([task] * 3)
    assert len(names) == 3


def test_first_failure_is_reraised(log_bus):
    def task(i):
        if i in (3, 7):
            raise OutOfRange(f"bad {i}")
        return i

    with pytest.raises(OutOfRange, match="bad 3"):
        WorkerPool(4, bus=log_bus).map(task, range(10))
    assert log_bus.log.get_nowait().category == "Error"


def test_shutdown_cancels_serial_runs():
    shutdown_event.set()
    with pytest.raises(Cancelled):
        WorkerPool(1).run([lambda: 1, lambda: 2])


def test_shutdown_cancels_threaded_runs():
    shutdown_event.set()
    with pytest.raises(Cancelled):
        WorkerPool(2).run([lambda: 1, lambda: 2])


def test_progress_is_counted():
    state = RunState()
    WorkerPool(2, state=state).map(str, range(6))
    assert state.get_progress() == (6, 6)


def test_rejects_zero_workers():
    with pytest.raises(ValueError):
        WorkerPool(0)


def test_run_state_checks():
    state = RunState()
    state.record_check(CheckOutcome("a", "p", True))
    state.record_check(CheckOutcome("b", "p", False, "off"))
    assert [c.name for c in state.get_checks()] == ["a", "b"]
    assert [c.name for c in state.failed_checks()] == ["b"]
    state.set_config({"run": {}})
    assert state.get_config() == {"run": {}}
