from __future__ import annotations

from collections import OrderedDict
from importlib.metadata import entry_points


class PluginLoader:
    _OPTIONS = None
    _ENTRY_POINTS = None

    @classmethod
    def entry_points_for(cls, key):
        return OrderedDict((e.name, e.load()) for e in cls.entry_points().select(group=key))

    @staticmethod
    def entry_points():
        if PluginLoader._ENTRY_POINTS is None:
            PluginLoader._ENTRY_POINTS = entry_points()
        return PluginLoader._ENTRY_POINTS


class ComponentBuilder(PluginLoader):
    def __init__(self, parser, name, possible) -> None:
        self.name = name
        self._impl_class = None
        self.possible = possible
        self.main_parser = parser
        self.parser = parser.add_argument_group(title=name)
        self.add_selector_arg_parse(name, list(self.possible))

    @classmethod
    def options(cls, key):
        if cls._OPTIONS is None:
            cls._OPTIONS = cls.entry_points_for(key)
        return cls._OPTIONS

    def add_selector_arg_parse(self, name, choices):
        raise NotImplementedError

    def handle_selected_arg_parse(self, options):
        selected = getattr(options, self.name)
        if selected is None:
            return None
        if selected not in self.possible:
            msg = f"no {self.name} named {selected!r}, pick one of {', '.join(self.possible)}"
            raise RuntimeError(msg)
        self._impl_class = self.possible[selected]
        self.populate_selected_argparse(selected)
        return selected

    def populate_selected_argparse(self, selected):
        self.parser.description = f"options for {self.name} {selected}"
        self._impl_class.add_parser_arguments(self.parser)

    def create(self, options):
        return self._impl_class(options)


__all__ = [
    "ComponentBuilder",
    "PluginLoader",
]
