from __future__ import annotations

import logging
import os
import zlib
from pathlib import Path

import numpy as np
import pytest

from metachain.report import LOGGER

INTEGRATION = Path("tests") / "integration"


def pytest_addoption(parser):
    parser.addoption("--int", action="store_true", default=False, help="run the statistical acceptance tests")


def pytest_configure(config):
    """Let pytest-randomly shuffle first, our ordering below must see its result."""
    manager = config.pluginmanager
    hooks = manager.hook.pytest_collection_modifyitems.get_hookimpls()
    plugins = [hook.plugin for hook in hooks]
    randomly, ours = manager.getplugin("randomly"), manager.getplugin(__file__)
    if randomly in plugins and ours in plugins:
        at_randomly, at_ours = plugins.index(randomly), plugins.index(ours)
        hooks[at_randomly], hooks[at_ours] = hooks[at_ours], hooks[at_randomly]


def _is_integration(item):
    return Path(item.location[0]).parts[:2] == INTEGRATION.parts


def pytest_collection_modifyitems(config, items):
    """Unit tests first, then the ``slow`` ones, integration last and only with ``--int``."""
    if len(items) == 1:
        return
    items.sort(key=lambda i: 2 if _is_integration(i) else int("slow" in i.keywords))
    if config.getoption("--int"):
        return
    skip = pytest.mark.skip(reason="need --int option to run")
    for item in filter(_is_integration, items):
        item.add_marker(skip)


@pytest.fixture(autouse=True)
def _restore_logging():
    saved = LOGGER.level, list(LOGGER.handlers), logging.getLogger("filelock").level
    yield
    level, handlers, filelock_level = saved
    for handler in list(LOGGER.handlers):
        LOGGER.removeHandler(handler)
    for handler in handlers:
        LOGGER.addHandler(handler)
    LOGGER.setLevel(level)
    logging.getLogger("filelock").setLevel(filelock_level)


@pytest.fixture(autouse=True)
def _cwd_is_stable():
    before = os.getcwd()
    yield
    if os.getcwd() != before:
        pytest.fail(f"test changed the working directory: {before!r} => {os.getcwd()!r}")


@pytest.fixture(autouse=True, scope="session")
def _no_user_config_file(tmp_path_factory):
    """Point the ini lookup at a file that does not exist so a user's ``metachain.ini`` cannot leak in."""
    missing = str(tmp_path_factory.mktemp("config") / "metachain-test-suite.ini")
    with pytest.MonkeyPatch.context() as patch:
        patch.setenv("METACHAIN_CONFIG_FILE", missing)
        yield


@pytest.fixture(autouse=True)
def _environment_is_stable():
    own = [k for k in os.environ if k.startswith("METACHAIN_") and k != "METACHAIN_CONFIG_FILE"]
    inherited = {k: os.environ.pop(k) for k in own}
    before = dict(os.environ)
    try:
        yield
        after = dict(os.environ)
        changed = {
            k: (before.get(k), after.get(k))
            for k in before.keys() | after.keys()
            if before.get(k) != after.get(k) and not k.startswith("PYTEST_")
        }
        if changed:
            pytest.fail(f"test changed the environment (before, after): {changed}")
    finally:
        os.environ.update(inherited)


@pytest.fixture()
def rng(request):
    """A generator seeded from the test name, stable under pytest-randomly reordering."""
    return np.random.default_rng(zlib.crc32(request.node.name.encode("utf-8")))
