from __future__ import annotations

from textwrap import dedent

from metachain.config.cli.parser import ChainOptions
from metachain.config.ini import IniConfig
from metachain.run import session_via_cli


def _write(tmp_path, monkeypatch, text):
    custom_ini = tmp_path / "conf.ini"
    custom_ini.write_text(dedent(text), encoding="utf-8")
    monkeypatch.setenv(IniConfig.CONFIG_FILE_ENV_VAR, str(custom_ini))
    return custom_ini


def test_ini_sets_defaults(tmp_path, monkeypatch):
    _write(
        tmp_path,
        monkeypatch,
        """
        [metachain]
        mu = 5
        seed = 11
        """,
    )
    options = ChainOptions()
    session_via_cli(["simulate"], options=options, setup_logging=False)
    assert options.mu == 5.0
    assert options.seed == 11
    assert options.get_source("mu") == "file"


def test_ini_can_be_overwritten_by_flag(tmp_path, monkeypatch):
    _write(
        tmp_path,
        monkeypatch,
        """
        [metachain]
        no_oracle = True
        """,
    )
    options = ChainOptions()
    session_via_cli(["capacity", "--seed", "3"], options=options, setup_logging=False)
    assert options.no_oracle is True
    assert options.seed == 3


def test_env_var_beats_ini(tmp_path, monkeypatch):
    _write(tmp_path, monkeypatch, "[metachain]\nmu = 5\n")
    monkeypatch.setenv("METACHAIN_MU", "6")
    options = ChainOptions()
    session_via_cli(["spectrum"], options=options, setup_logging=False)
    assert options.mu == 6.0


def test_epilog_states(tmp_path, monkeypatch):
    missing = IniConfig(env={IniConfig.CONFIG_FILE_ENV_VAR: str(tmp_path / "nope.ini")})
    assert not missing
    assert "missing" in missing.epilog
    assert "changed via env var METACHAIN_CONFIG_FILE" in missing.epilog
    path = _write(tmp_path, monkeypatch, "[metachain]\nmu = 5\n")
    active = IniConfig(env={IniConfig.CONFIG_FILE_ENV_VAR: str(path)})
    assert active
    assert "active" in active.epilog


def test_broken_file(tmp_path, caplog):
    path = tmp_path / "conf.ini"
    path.write_text("mu = 5\n", encoding="utf-8")
    config = IniConfig(env={IniConfig.CONFIG_FILE_ENV_VAR: str(path)})
    assert not config
    assert "failed to read config file" in caplog.text
