"""Service configuration loading and the static UI mount."""

import json

from fastapi.testclient import TestClient

from parsegame.config import ServiceConfig
from parsegame.engine import CommitMode
from parsegame.service import create_app


class TestServiceConfig:
    def test_defaults_point_at_fixture_corpus(self):
        config = ServiceConfig.load()
        assert config.corpus_path.exists()
        assert config.engine.animation_ms == 840.0

    def test_file_plus_overrides(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(
            json.dumps(
                {
                    "port": 9100,
                    "log_dir": str(tmp_path / "logs"),
                    "engine": {"animation_ms": 850, "commit_mode": "instant"},
                }
            )
        )
        config = ServiceConfig.load(path, host="0.0.0.0")
        assert config.port == 9100
        assert config.host == "0.0.0.0"
        assert config.engine.animation_ms == 850.0
        assert config.engine.commit_mode is CommitMode.INSTANT

    def test_env_overrides(self, tmp_path, monkeypatch):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"port": 9100}))
        monkeypatch.setenv("PARSEGAME_CONFIG", str(path))
        monkeypatch.setenv("PARSEGAME_PORT", "9200")
        config = ServiceConfig.load()
        assert config.port == 9200  # env port beats the file

    def test_out_of_band_animation_clamped(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"engine": {"animation_ms": 2000}}))
        config = ServiceConfig.load(path)
        assert config.engine.animation_ms == 860.0


class TestStaticMount:
    def test_ui_served_when_configured(self, tmp_path):
        static = tmp_path / "public"
        static.mkdir()
        (static / "index.html").write_text("<!doctype html><title>game</title>")
        config = ServiceConfig(log_dir=tmp_path / "logs", static_dir=static)
        app = create_app(config)
        with TestClient(app) as client:
            response = client.get("/")
            assert response.status_code == 200
            assert "game" in response.text
            # API routes still win over the static mount.
            assert client.get("/healthz").json()["ok"] is True
