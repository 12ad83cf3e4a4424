"""Server configuration: a TOML or JSON file plus environment overrides.

Environment variables win over the file so deployments can keep secrets
out of config checked into version control:

  PROMPTBENCH_CONFIG        path to the config file (CLI --config wins)
  PROMPTBENCH_LLM_BASE_URL  completion backend base URL
  PROMPTBENCH_LLM_KEY       completion backend bearer token (env only)
  PROMPTBENCH_LLM_MODEL     model id
  PROMPTBENCH_SANDBOX_URL   Jobe-compatible sandbox base URL
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib


@dataclass
class LLMSettings:
    backend: str = "http"  # "http" | "mock"
    base_url: str = "https://api.openai.com"
    api_key: str = ""
    model_id: str = "gpt-3.5-turbo"
    temperature: float = 0.2
    max_output_tokens: int = 1024
    variants_per_submission: int = 1
    request_timeout_ms: int = 60_000
    mock_table_path: str | None = None


@dataclass
class SandboxSettings:
    url: str = "http://localhost:4000"
    cpu_time_limit_s: int = 10
    memory_limit_mb: int = 256
    test_concurrency: int = 1


@dataclass
class AppConfig:
    bundle_paths: list[str] = field(default_factory=list)
    log_path: str = "promptbench_log.jsonl"
    ui_dir: str | None = None
    analytics_token: str | None = None
    max_inflight_completions: int = 8
    llm: LLMSettings = field(default_factory=LLMSettings)
    sandbox: SandboxSettings = field(default_factory=SandboxSettings)


def load_config(path: str | Path | None = None) -> AppConfig:
    """Load config from path (or PROMPTBENCH_CONFIG), then apply env overrides."""
    if path is None:
        path = os.environ.get("PROMPTBENCH_CONFIG")

    data: dict = {}
    if path:
        data = _read_config_file(Path(path))

    config = AppConfig(
        bundle_paths=list(data.get("bundle_paths", [])),
        log_path=data.get("log_path", "promptbench_log.jsonl"),
        ui_dir=data.get("ui_dir"),
        analytics_token=data.get("analytics_token"),
        max_inflight_completions=int(data.get("max_inflight_completions", 8)),
        llm=_section(LLMSettings, data.get("llm", {})),
        sandbox=_section(SandboxSettings, data.get("sandbox", {})),
    )

    env = os.environ
    if env.get("PROMPTBENCH_LLM_BASE_URL"):
        config.llm.base_url = env["PROMPTBENCH_LLM_BASE_URL"]
    if env.get("PROMPTBENCH_LLM_KEY"):
        config.llm.api_key = env["PROMPTBENCH_LLM_KEY"]
    if env.get("PROMPTBENCH_LLM_MODEL"):
        config.llm.model_id = env["PROMPTBENCH_LLM_MODEL"]
    if env.get("PROMPTBENCH_SANDBOX_URL"):
        config.sandbox.url = env["PROMPTBENCH_SANDBOX_URL"]
    return config


def _read_config_file(path: Path) -> dict:
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    if path.suffix == ".toml":
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    return json.loads(path.read_text(encoding="utf-8"))


def _section(cls, raw: dict):
    allowed = {f for f in cls.__dataclass_fields__}
    unknown = set(raw) - allowed
    if unknown:
        raise ValueError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    return cls(**raw)
