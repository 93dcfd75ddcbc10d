from __future__ import annotations

import re
import sys
from subprocess import PIPE, Popen

import pytest

from metachain.__main__ import run_with_catch
from metachain.util.error import ConfigError, RegimeError


def test_main():
    process = Popen(
        [sys.executable, "-m", "metachain", "--help"],
        universal_newlines=True,
        stdout=PIPE,
        encoding="utf-8",
    )
    out, _ = process.communicate()
    assert not process.returncode
    assert out


@pytest.fixture()
def raise_on_session_done(mocker):
    def _func(exception):
        from metachain.run import session_via_cli  # noqa: PLC0415

        prev_session = session_via_cli

        def _session_via_cli(args, options=None, setup_logging=True, env=None):
            prev_session(args, options, setup_logging, env)
            raise exception

        mocker.patch("metachain.run.session_via_cli", side_effect=_session_via_cli)

    return _func


@pytest.mark.parametrize(
    ("exception", "code"),
    [
        (ConfigError("bad document", source="c.json", line=3), 2),
        (RegimeError(4, 0.5, 1.0), 3),
        (TypeError("something bad"), 1),
    ],
)
def test_fail_no_traceback(raise_on_session_done, capsys, exception, code):
    raise_on_session_done(exception)
    with pytest.raises(SystemExit) as context:
        run_with_catch(["spectrum"])
    assert context.value.code == code
    out, err = capsys.readouterr()
    assert not out
    assert f"{type(exception).__name__}: {exception}" in err


def test_fail_with_traceback(raise_on_session_done, capsys):
    raise_on_session_done(TypeError("something bad"))

    with pytest.raises(TypeError, match="something bad"):
        run_with_catch(["spectrum", "--with-traceback"])
    out, err = capsys.readouterr()
    assert not out
    assert not err


def test_regime_error_exit_code(capsys):
    with pytest.raises(SystemExit) as context:
        run_with_catch(["spectrum", "--n", "4", "--mu", "0.5"])
    assert context.value.code == 3
    assert "RegimeError: gamma=0.5 is not above the synchronization threshold 1 for n=4" in capsys.readouterr().err


def test_missing_campaign_document(tmp_path, capsys):
    with pytest.raises(SystemExit) as context:
        run_with_catch(["campaign", "--config", str(tmp_path / "missing.json")])
    assert context.value.code == 2
    assert "cannot read campaign config" in capsys.readouterr().err


def test_missing_command(capsys):
    with pytest.raises(SystemExit) as context:
        run_with_catch([])
    assert context.value.code == 2
    assert "a command is required" in capsys.readouterr().err


def _match_regexes(lines, regexes):
    for line, regex in zip(lines, regexes):
        comp_regex = re.compile(rf"^{regex}$")
        assert comp_regex.match(line), line


def test_session_report(capsys):
    run_with_catch(["spectrum", "--n", "4"])
    out, err = capsys.readouterr()
    assert out.splitlines()[0].split() == ["k", "gamma_k", "lambda_k", "nu_k"]
    regexes = [
        r"spectrum SpectrumCommand\(n=4, mu=2.0\) finished in \d+ms",
        r"spectrum of n=4 mu=2: 1 negative saddle direction\(s\)",
    ]
    _match_regexes(err.splitlines(), regexes)


def test_quiet_session_report(capsys):
    run_with_catch(["spectrum", "-q", "-q"])
    out, err = capsys.readouterr()
    assert out
    assert not err
