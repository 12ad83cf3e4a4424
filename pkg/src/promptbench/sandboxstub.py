"""Local stand-in for a JobeInABox sandbox.

Implements just enough of the Jobe REST protocol to run python3 jobs:
POST/PUT /jobe/index.php/restapi/runs with a run_spec body, answered with
{"outcome", "stdout", "stderr", "cmpinfo"}.  Code executes in a
subprocess under an interpreter started with -I and a CPU rlimit, which
is adequate isolation for tests and desk use, not for hostile multi-user
deployments; point PROMPTBENCH_SANDBOX_URL at a real Jobe for that.
"""

from __future__ import annotations

import json
import resource
import subprocess
import sys
import tempfile
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

RUNS_PATH = "/jobe/index.php/restapi/runs"

OUTCOME_OK = 15
OUTCOME_COMPILE_ERROR = 11
OUTCOME_RUNTIME_ERROR = 12
OUTCOME_TIME_LIMIT = 13
OUTCOME_INTERNAL_ERROR = 20


def run_python_job(sourcecode: str, stdin: str, cputime_s: int) -> dict:
    """Execute one python3 run_spec and return the Jobe outcome payload."""
    try:
        compile(sourcecode, "prog.py", "exec")
    except SyntaxError as exc:
        return {
            "outcome": OUTCOME_COMPILE_ERROR,
            "stdout": "",
            "stderr": "",
            "cmpinfo": f"{exc.__class__.__name__}: {exc}",
        }

    def apply_limits():
        resource.setrlimit(resource.RLIMIT_CPU, (cputime_s, cputime_s + 1))

    with tempfile.TemporaryDirectory(prefix="promptbench-run-") as workdir:
        prog = Path(workdir) / "prog.py"
        prog.write_text(sourcecode, encoding="utf-8")
        try:
            proc = subprocess.run(
                [sys.executable, "-I", str(prog)],
                input=stdin.encode("utf-8"),
                capture_output=True,
                cwd=workdir,
                timeout=cputime_s + 1,
                preexec_fn=apply_limits,
            )
        except subprocess.TimeoutExpired as exc:
            return {
                "outcome": OUTCOME_TIME_LIMIT,
                "stdout": (exc.stdout or b"").decode("utf-8", "replace"),
                "stderr": (exc.stderr or b"").decode("utf-8", "replace"),
                "cmpinfo": "",
            }

    stdout = proc.stdout.decode("utf-8", "replace")
    stderr = proc.stderr.decode("utf-8", "replace")
    if proc.returncode == 0:
        outcome = OUTCOME_OK
    elif proc.returncode < 0 or "CPU time limit" in stderr:
        # killed by a signal; SIGXCPU from the rlimit means time limit
        outcome = OUTCOME_TIME_LIMIT if -proc.returncode in (9, 24) else OUTCOME_RUNTIME_ERROR
    else:
        outcome = OUTCOME_RUNTIME_ERROR
    return {"outcome": outcome, "stdout": stdout, "stderr": stderr, "cmpinfo": ""}


class _StubHandler(BaseHTTPRequestHandler):
    def _handle_run(self):
        if self.path.rstrip("/") != RUNS_PATH:
            self._reply(404, {"error": "unknown path"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length))
            spec = body["run_spec"]
            language_id = spec["language_id"]
            sourcecode = spec["sourcecode"]
        except (ValueError, KeyError) as exc:
            self._reply(400, {"error": f"bad run_spec: {exc}"})
            return

        if language_id != "python3":
            self._reply(400, {"error": f"unsupported language_id {language_id!r}"})
            return

        stdin = spec.get("input", "") or ""
        cputime = int(spec.get("parameters", {}).get("cputime", 10))
        try:
            payload = run_python_job(sourcecode, stdin, cputime)
        except Exception as exc:  # job machinery failed, not the job
            payload = {
                "outcome": OUTCOME_INTERNAL_ERROR,
                "stdout": "",
                "stderr": str(exc),
                "cmpinfo": "",
            }
        self._reply(200, payload)

    do_POST = _handle_run
    do_PUT = _handle_run

    def _reply(self, status: int, payload: dict):
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, fmt, *args):  # quiet by default
        pass


class SandboxStub:
    """Threaded stub server; use as a context manager in tests."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self._server = ThreadingHTTPServer((host, port), _StubHandler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "SandboxStub":
        self._thread.start()
        return self

    def stop(self):
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "SandboxStub":
        return self.start()

    def __exit__(self, *exc):
        self.stop()


def main(argv: list[str] | None = None) -> int:
    import argparse

    parser = argparse.ArgumentParser(description="Run the local Jobe-protocol sandbox stub.")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=4000)
    args = parser.parse_args(argv)

    stub = SandboxStub(args.host, args.port).start()
    print(f"sandbox stub listening on {stub.base_url}{RUNS_PATH}")
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        stub.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
