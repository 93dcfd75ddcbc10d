from __future__ import annotations

import logging
import sys

import pytest

from metachain.report import LEVELS, LOGGER, MAX_LEVEL, setup_report


@pytest.mark.parametrize(("verbosity", "level"), sorted(LEVELS.items()))
def test_levels(verbosity, level):
    assert setup_report(verbosity) == verbosity
    (handler,) = LOGGER.handlers
    assert handler.level == level
    assert handler.stream is sys.stderr


def test_verbosity_is_capped():
    assert setup_report(MAX_LEVEL + 3) == MAX_LEVEL


def test_debug_format_shows_location(capsys):
    setup_report(4)
    logging.debug("chain ready")
    err = capsys.readouterr().err
    assert "chain ready [DEBUG test_report:" in err
    assert logging.getLogger("filelock").level == logging.DEBUG


def test_warning_goes_to_stderr(capsys):
    setup_report(2, show_pid=True)
    logging.info("hidden")
    logging.warning("shown")
    out, err = capsys.readouterr()
    assert not out
    assert "hidden" not in err
    assert "] shown" in err
