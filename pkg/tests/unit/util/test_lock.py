from __future__ import annotations

import pytest

from metachain.util.lock import DirectoryLock, Timeout


def test_lock_creates_folder(tmp_path):
    folder = tmp_path / "a" / "b"
    with DirectoryLock(folder) as lock:
        assert (folder / DirectoryLock.lock_name).exists()
        assert repr(lock) == f"DirectoryLock({folder})"


def test_busy_folder_without_blocking(tmp_path):
    with DirectoryLock(tmp_path), pytest.raises(Timeout), DirectoryLock(tmp_path, no_block=True):
        pass


def test_lock_is_released(tmp_path):
    with DirectoryLock(tmp_path):
        pass
    with DirectoryLock(tmp_path, no_block=True):
        pass
