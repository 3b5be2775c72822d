"""Service configuration: file-based with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .engine import EngineConfig
from .fixtures import default_corpus_path

ENV_CONFIG = "PARSEGAME_CONFIG"
ENV_PORT = "PARSEGAME_PORT"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    corpus_path: Path = field(default_factory=default_corpus_path)
    log_dir: Path = Path("logs")
    engine: EngineConfig = field(default_factory=EngineConfig)
    static_dir: Path | None = None

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides) -> "ServiceConfig":
        """Read config from a JSON file (or $PARSEGAME_CONFIG), then apply
        keyword and $PARSEGAME_PORT overrides."""
        if path is None:
            path = os.environ.get(ENV_CONFIG)
        data: dict = {}
        if path:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        config = cls(
            host=data.get("host", cls.host),
            port=int(data.get("port", cls.port)),
            corpus_path=Path(data["corpus_path"]) if "corpus_path" in data else default_corpus_path(),
            log_dir=Path(data.get("log_dir", "logs")),
            engine=EngineConfig.from_dict(data.get("engine", {})),
            static_dir=Path(data["static_dir"]) if data.get("static_dir") else None,
        )
        for key, value in overrides.items():
            if value is None:
                continue
            if key in ("corpus_path", "log_dir", "static_dir"):
                value = Path(value)
            setattr(config, key, value)
        env_port = os.environ.get(ENV_PORT)
        if env_port and "port" not in overrides:
            config.port = int(env_port)
        return config

    def ensure_paths(self) -> None:
        if not self.corpus_path.exists():
            raise FileNotFoundError(f"corpus file not found: {self.corpus_path}")
        self.log_dir.mkdir(parents=True, exist_ok=True)
        if self.static_dir is not None and not self.static_dir.exists():
            raise FileNotFoundError(f"static dir not found: {self.static_dir}")
