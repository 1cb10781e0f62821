"""Process execution: spawn the hosted program with an exact argv (never a
shell), pump stdout and stderr on separate threads, and keep an ordered
per-stream transcript.

Chunks are raw read-buffer slices (4 KiB); line assembly is a presentation
concern and does not happen here.
"""

from __future__ import annotations

import os
import shutil
import subprocess
import threading
import time
import uuid
from dataclasses import dataclass
from typing import Callable, Optional

from .assemble import AssembledCommand
from .errors import (
    AlreadyTerminated,
    ExecutableNotFound,
    InputFileMissing,
    IoError,
    SpawnFailed,
)
from .model import OptionKind, SessionState

CHUNK_SIZE = 4096
KILL_GRACE_SECONDS = 2.0

STDOUT = "stdout"
STDERR = "stderr"

RUNNING = "running"
EXITED = "exited"
FAILED = "failed"
KILLED = "killed"


@dataclass(frozen=True)
class OutputChunk:
    stream: str
    data: bytes
    seq: int


Sink = Callable[[OutputChunk], None]


class RunRecord:
    """Live handle for one execution. Queries are safe from any thread;
    kill is serialized with stream delivery."""

    def __init__(self, command: AssembledCommand):
        self.run_id = uuid.uuid4().hex
        self.command = command
        self.started_at = time.time()
        self.ended_at: Optional[float] = None
        self.status = RUNNING
        self.exit_code: Optional[int] = None
        self.fail_reason: Optional[str] = None
        self._chunks: dict[str, list[OutputChunk]] = {STDOUT: [], STDERR: []}
        self._lock = threading.Lock()
        self._done = threading.Event()
        self._kill_requested = False
        self._proc: Optional[subprocess.Popen] = None

    @property
    def console_transcript(self) -> list[OutputChunk]:
        with self._lock:
            return list(self._chunks[STDOUT])

    @property
    def error_transcript(self) -> list[OutputChunk]:
        with self._lock:
            return list(self._chunks[STDERR])

    def stream_bytes(self, stream: str) -> bytes:
        with self._lock:
            return b"".join(c.data for c in self._chunks[stream])

    @property
    def finished(self) -> bool:
        return self._done.is_set()

    @property
    def error_notification(self) -> bool:
        """Status-bar flag: nonzero exit, failure, kill, or any stderr."""
        if self.status in (FAILED, KILLED):
            return True
        if self.exit_code not in (None, 0):
            return True
        return bool(self.stream_bytes(STDERR))

    def _append(self, stream: str, data: bytes, sink: Optional[Sink]) -> None:
        with self._lock:
            chunk = OutputChunk(stream, data, len(self._chunks[stream]))
            self._chunks[stream].append(chunk)
        if sink is not None:
            sink(chunk)


def resolve_executable(executable: str, cwd: str) -> str:
    """Bare names go through PATH; anything with a separator resolves
    against the working directory, exactly like running from a shell."""
    if os.sep in executable or (os.altsep and os.altsep in executable):
        path = executable if os.path.isabs(executable) else os.path.join(cwd, executable)
        if os.path.isfile(path) and os.access(path, os.X_OK):
            return path
        raise ExecutableNotFound(executable)
    found = shutil.which(executable)
    if found is None:
        raise ExecutableNotFound(executable)
    return found


def check_session_paths(session: SessionState) -> None:
    """Run-time path checks: InFile must exist, OutFile/Dir parent must."""
    for opt in session.spec.option_defs():
        state = session.states[opt.id]
        if not state.is_set or opt.kind not in (OptionKind.INFILE, OptionKind.OUTFILE, OptionKind.DIR):
            continue
        for value in state.values:
            path = str(value.value)
            full = path if os.path.isabs(path) else os.path.join(session.working_dir, path)
            if opt.kind == OptionKind.INFILE:
                if not os.path.isfile(full):
                    raise InputFileMissing(opt.id, path)
            else:
                parent = os.path.dirname(full) or "."
                if not os.path.isdir(parent):
                    raise InputFileMissing(opt.id, path)


def start_run(
    command: AssembledCommand,
    sink: Optional[Sink] = None,
    session: Optional[SessionState] = None,
    on_exit: Optional[Callable[["RunRecord"], None]] = None,
) -> RunRecord:
    """Spawn the child and return immediately with a Running record.

    argv is passed to the OS verbatim, no shell interpretation; stdin is
    closed. If a session is given, its path options are checked first.
    """
    if session is not None:
        check_session_paths(session)
    executable = resolve_executable(command.argv[0], command.cwd)
    record = RunRecord(command)
    try:
        proc = subprocess.Popen(
            list(command.argv),
            executable=executable,
            cwd=command.cwd,
            stdin=subprocess.DEVNULL,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
    except OSError as exc:
        raise SpawnFailed(str(exc)) from exc
    record._proc = proc

    pumps = [
        threading.Thread(
            target=_pump, args=(record, proc.stdout, STDOUT, sink), daemon=True
        ),
        threading.Thread(
            target=_pump, args=(record, proc.stderr, STDERR, sink), daemon=True
        ),
    ]
    for t in pumps:
        t.start()

    def _wait():
        for t in pumps:
            t.join()
        code = proc.wait()
        record.ended_at = time.time()
        if record._kill_requested:
            record.status = KILLED
        else:
            record.status = EXITED
            record.exit_code = code
        record._done.set()
        if on_exit is not None:
            on_exit(record)

    threading.Thread(target=_wait, daemon=True).start()
    return record


def _pump(record: RunRecord, pipe, stream: str, sink: Optional[Sink]) -> None:
    try:
        while True:
            # read1: return as soon as any bytes arrive, up to the buffer size
            data = pipe.read1(CHUNK_SIZE)
            if not data:
                break
            record._append(stream, data, sink)
    finally:
        pipe.close()


def await_run(record: RunRecord, timeout: Optional[float] = None) -> RunRecord:
    """Block until the child exits and both streams are fully drained."""
    if not record._done.wait(timeout):
        raise TimeoutError(f"run {record.run_id} still active")
    return record


def kill_run(record: RunRecord) -> RunRecord:
    """Graceful terminate, then force kill after the grace period."""
    if record.finished:
        raise AlreadyTerminated(f"run {record.run_id} already {record.status}")
    record._kill_requested = True
    proc = record._proc
    assert proc is not None
    proc.terminate()
    try:
        proc.wait(KILL_GRACE_SECONDS)
    except subprocess.TimeoutExpired:
        proc.kill()
    record._done.wait()
    return record


def save_transcript(record: RunRecord, stream: str, dest: str) -> int:
    """Write the selected stream's bytes to dest; returns the byte count.
    Raw bytes, no recoding, no added newlines."""
    data = record.stream_bytes(stream)
    try:
        with open(dest, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return len(data)
