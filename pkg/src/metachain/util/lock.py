"""holds locking functionality that works across processes."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from contextlib import suppress
from pathlib import Path

from filelock import FileLock, Timeout


class PathLockBase(ABC):
    def __init__(self, folder) -> None:
        path = Path(folder)
        self.path = path.resolve() if path.exists() else path

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.path})"

    @abstractmethod
    def __enter__(self):
        raise NotImplementedError

    @abstractmethod
    def __exit__(self, exc_type, exc_val, exc_tb):
        raise NotImplementedError


class DirectoryLock(PathLockBase):
    """Exclusive use of an output folder, held through a lock file inside it."""

    lock_name = ".metachain.lock"

    def __init__(self, folder, no_block=False) -> None:  # noqa: FBT002
        super().__init__(folder)
        self.no_block = no_block
        self._lock = None

    def __enter__(self):
        with suppress(OSError):
            self.path.mkdir(parents=True, exist_ok=True)
        self._lock = FileLock(str(self.path / self.lock_name))
        try:
            self._lock.acquire(timeout=0.0001)
        except Timeout:
            if self.no_block:
                raise
            logging.warning("%s is used by another run, will block until released", self.path)
            self._lock.acquire()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self._lock.release()
        self._lock = None


__all__ = [
    "DirectoryLock",
    "Timeout",
]
