"""Turn the text of environment variables and ini entries into the type of the matching CLI option."""

from __future__ import annotations

import logging
import math
from typing import ClassVar


class TypeData:
    def __init__(self, default_type, as_type) -> None:
        self.default_type = default_type
        self.as_type = as_type

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(base={self.default_type}, as={self.as_type})"

    def convert(self, value):
        return self.as_type(value)


class BoolType(TypeData):
    BOOLEAN_STATES: ClassVar[dict[str, bool]] = {
        "1": True,
        "yes": True,
        "true": True,
        "on": True,
        "0": False,
        "no": False,
        "false": False,
        "off": False,
    }

    def convert(self, value):
        key = value.strip().lower()
        if key not in self.BOOLEAN_STATES:
            msg = f"not a boolean: {value}"
            raise ValueError(msg)
        return self.BOOLEAN_STATES[key]


class NumberType(TypeData):
    """Numbers such as ``--mu``, ``--eps`` or ``--trajectories``; ``inf`` is accepted, ``nan`` never is."""

    def convert(self, value):
        result = self.as_type(value.strip() if isinstance(value, str) else value)
        if isinstance(result, float) and math.isnan(result):
            msg = f"not a number: {value}"
            raise ValueError(msg)
        return result


class NoneType(TypeData):
    """Options without a default (``--dt``, ``--max-time``), an empty value keeps them unset."""

    def convert(self, value):
        if not value or not value.strip():
            return None
        if self.as_type is type(None):
            return str(value)
        return NumberType(self.as_type, self.as_type).convert(value)


class ListType(TypeData):
    """Options taking several values, e.g. the chain lengths of ``prefactor --n``."""

    def convert(self, value):
        number = NumberType(self.as_type, self.as_type)
        return [number.convert(i) for i in self.split_values(value)]

    @staticmethod
    def split_values(value):
        """
        Split the provided value into a list.

        First this is done by newlines. If there were no newlines in the text,
        then we next try to split by comma.
        """
        if isinstance(value, (str, bytes)):
            values = value.splitlines()
            if len(values) <= 1:
                values = value.split(",")
            return [x.strip() for x in values if x.strip()]
        return list(value)


def convert(value, as_type, source):
    """Convert the value as a given type where the value comes from the given source."""
    try:
        return as_type.convert(value)
    except Exception as exception:
        logging.warning("%s failed to convert %r as %r because %r", source, value, as_type, exception)
        raise


_CONVERT = {bool: BoolType, type(None): NoneType, list: ListType, int: NumberType, float: NumberType}


def get_type(action):
    default_type = type(action.default)
    as_type = default_type if action.type is None else action.type
    return _CONVERT.get(default_type, TypeData)(default_type, as_type)


__all__ = [
    "convert",
    "get_type",
]
