"""Structured JSONL tracing utility."""

from __future__ import annotations

import json
from dataclasses import asdict
from dataclasses import is_dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, TextIO


class TraceLogger:
    """Simple JSONL tracer; a no-op when constructed without a path."""

    def __init__(self, path: Path | None) -> None:
        self.path = path
        self._handle: TextIO | None = None
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = path.open("a", encoding="utf-8")

    @staticmethod
    def _json_default(value: Any) -> Any:
        """Best-effort JSON default serializer for trace payloads."""

        if is_dataclass(value) and not isinstance(value, type):
            return asdict(value)
        if isinstance(value, Enum):
            return value.value
        if hasattr(value, "tolist"):
            return value.tolist()
        raise TypeError(
            f"Object of type {type(value).__name__} is not JSON serializable"
        )

    def _write(self, event: dict[str, Any]) -> None:
        if self._handle is None:
            return
        payload = {"timestamp": datetime.now(timezone.utc).isoformat(), **event}
        self._handle.write(json.dumps(payload, default=self._json_default) + "\n")
        self._handle.flush()

    def run_start(self, command: str, config_name: str) -> None:
        self._write({"event": "run_start", "command": command, "config": config_name})

    def run_end(self, exit_code: int) -> None:
        self._write({"event": "run_end", "exit_code": exit_code})

    def stage(self, name: str, info: dict[str, Any] | None = None) -> None:
        self._write({"event": "stage", "stage": name, "info": info or {}})

    def warning(self, message: str) -> None:
        self._write({"event": "warning", "message": message})

    def close(self) -> None:
        if self._handle:
            self._handle.close()
            self._handle = None
