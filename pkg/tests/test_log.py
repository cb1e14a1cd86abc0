"""Tests for the log bus and the log service thread."""

import io
import time

from projlab.services.log import LogService
from projlab.shared_state import LogBus, LogEntry


def test_bus_drops_when_full():
    bus = LogBus(maxsize=2)
    for i in range(5):
        bus.log_info(f"message {i}")
    assert bus.log.qsize() == 2
    assert bus.dropped == 3


def test_categories(log_bus):
    log_bus.log_action("a")
    log_bus.log_check("c")
    entries = [log_bus.log.get_nowait() for _ in range(2)]
    assert [e.category for e in entries] == ["Action", "Check"]


def test_format_uses_timezone(log_bus):
    service = LogService(log_bus, timezone="Asia/Tokyo", stream=io.StringIO())
    line = service.format_entry({"timestamp": 0.0, "category": "Info", "message": "hello"})
    assert line.startswith("1970-01-01 09:00:00 JST")
    assert line.rstrip().endswith("| hello")


def test_unknown_timezone_falls_back_to_utc(log_bus):
    service = LogService(log_bus, timezone="Mars/Olympus", stream=io.StringIO())
    assert "UTC" in service.format_entry({"timestamp": 0.0, "message": "x"})


def test_stop_flushes_stream_and_file(log_bus, tmp_path):
    stream = io.StringIO()
    log_file = tmp_path / "logs" / "projlab.log"
    service = LogService(log_bus, log_file=str(log_file), stream=stream)
    service.start()
    log_bus.log_info("first")
    log_bus.log_error("second")
    service.stop()
    assert "first" in stream.getvalue() and "second" in stream.getvalue()
    assert "| Error    | second" in log_file.read_text()


def test_drain_without_thread(log_bus):
    stream = io.StringIO()
    service = LogService(log_bus, stream=stream)
    log_bus.log.put(LogEntry(time.time(), "Check", "PASS kappa"))
    log_bus.log.put({"category": "Info", "message": "raw dict"})
    service.drain()
    assert "PASS kappa" in stream.getvalue()
    assert "raw dict" in stream.getvalue()


def test_rotation(log_bus, tmp_path):
    log_file = tmp_path / "projlab.log"
    log_file.write_text("x" * 100)
    service = LogService(log_bus, log_file=str(log_file), max_file_size=10, stream=io.StringIO())
    log_bus.log_info("after rotation")
    service.drain()
    assert "after rotation" in log_file.read_text()
    assert len(list(tmp_path.glob("projlab_*.log"))) == 1
