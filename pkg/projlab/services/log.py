"""Log service thread for draining the log bus to stderr and an optional file."""

import sys
import time
from datetime import datetime
from pathlib import Path
from queue import Empty
from threading import Thread, Event
from typing import List, Optional, TextIO

import pytz

from projlab.shared_state import LogBus, LogEntry, shutdown_event


class LogService(Thread):
    """Background thread that aggregates log entries and writes them out."""

    def __init__(self, bus: LogBus, timezone: str = "UTC",
                 log_file: Optional[str] = None,
                 max_file_size: int = 5 * 1024 * 1024,
                 stream: Optional[TextIO] = None):
        super().__init__(daemon=True)
        self.bus = bus
        self.max_file_size = max_file_size  # 5MB default
        self.stream = stream if stream is not None else sys.stderr
        self._log_file: Optional[Path] = Path(log_file) if log_file else None
        self._buffer: List[dict] = []
        self._buffer_size = 100  # Flush after this many entries
        self._stop_event = Event()
        try:
            self._tz = pytz.timezone(timezone)
        except pytz.UnknownTimeZoneError:
            self._tz = pytz.UTC

    def run(self):
        """Main thread loop."""
        if self._log_file is not None:
            self._log_file.parent.mkdir(parents=True, exist_ok=True)

        while not (shutdown_event.is_set() or self._stop_event.is_set()):
            try:
                entry = self.bus.log.get(timeout=0.5)
                self._accept(entry)
                if len(self._buffer) >= self._buffer_size:
                    self._flush_buffer()
            except Empty:
                # Flush any pending logs on timeout
                if self._buffer:
                    self._flush_buffer()

        self.drain()

    def stop(self, timeout: float = 2.0) -> None:
        """Ask the thread to finish, then flush whatever is left."""
        self._stop_event.set()
        if self.is_alive():
            self.join(timeout=timeout)
        self.drain()

    def drain(self) -> None:
        """Move everything still queued into the sinks."""
        while True:
            try:
                self._accept(self.bus.log.get_nowait())
            except Empty:
                break
        if self._buffer:
            self._flush_buffer()

    def format_entry(self, log: dict) -> str:
        ts = datetime.fromtimestamp(log['timestamp'], self._tz).strftime('%Y-%m-%d %H:%M:%S %Z')
        category = log.get('category', 'Info')
        message = log.get('message', '')
        return f"{ts} | {category:8} | {message}\n"

    def _accept(self, entry) -> None:
        if isinstance(entry, LogEntry):
            log_dict = entry.to_dict()
        elif isinstance(entry, dict):
            log_dict = entry
            if 'timestamp' not in log_dict:
                log_dict['timestamp'] = time.time()
        else:
            return
        self._buffer.append(log_dict)

    def _rotate_log_file(self):
        """Move a full log file aside and start a new one."""
        stamp = datetime.now(self._tz).strftime('%Y%m%d_%H%M%S')
        rotated = self._log_file.with_name(f"{self._log_file.stem}_{stamp}{self._log_file.suffix}")
        self._log_file.rename(rotated)

    def _flush_buffer(self):
        """Write buffered logs to the stream and file."""
        if not self._buffer:
            return

        lines = [self.format_entry(log) for log in self._buffer]
        try:
            self.stream.writelines(lines)
            self.stream.flush()
            if self._log_file is not None:
                if self._log_file.exists() and self._log_file.stat().st_size > self.max_file_size:
                    self._rotate_log_file()
                with open(self._log_file, 'a') as f:
                    f.writelines(lines)
            self._buffer = []

        except (OSError, ValueError) as e:
            print(f"Failed to write logs: {e}", file=sys.stderr)
            # Don't lose logs, keep in buffer (but limit size)
            if len(self._buffer) > 1000:
                self._buffer = self._buffer[-500:]
