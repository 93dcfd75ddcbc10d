from __future__ import annotations

from argparse import SUPPRESS
from typing import Any, ClassVar, NamedTuple

from docutils import nodes as n
from docutils.parsers.rst.directives import unchanged_required
from sphinx.util.docutils import SphinxDirective
from sphinxarg.parser import parse_parser

from metachain.run.plugin.commands import BUILTIN, CommandSelector


class TableRow(NamedTuple):
    names: list[str]
    default: str
    choices: list[str] | None
    help: str


class CliTable(SphinxDirective):
    """One table for the global flags, then one per command with the options only that command takes."""

    name: ClassVar[str] = "table_cli"
    option_spec: ClassVar[dict[str, Any]] = {"module": unchanged_required, "func": unchanged_required}

    def run(self):
        module_name, attr_name = self.options["module"], self.options["func"]
        parser_creator = getattr(__import__(module_name, fromlist=[attr_name]), attr_name)
        core_result = parse_parser(parser_creator())
        content = [
            self._build_table(i["options"], i["title"], i["description"])
            for i in core_result["action_groups"]
            if i["title"] != "command"
        ]
        for command in dict.fromkeys([*BUILTIN, *CommandSelector.options("metachain.command")]):
            section = n.section("", ids=[f"section-{command}"])
            title = n.title("", command)
            section += title
            self.state.document.note_implicit_target(title)
            content.append(section)
            parser_result = parse_parser(parser_creator([command]))
            group = next(i for i in parser_result["action_groups"] if i["title"] == "command")
            rows = [i for i in group["options"] if i["name"] != ["command"]]
            content.append(self._build_table(rows, command, group["description"], prefix=f"{command}-"))
        return content

    def _build_table(self, options, title, description, prefix=""):
        table = n.table()
        table["classes"] += ["colwidths-auto"]

        options_group = n.tgroup(cols=3)
        table += options_group
        for _ in range(3):
            options_group += n.colspec()
        body = self._make_table_body(self.build_rows(options), title, description, prefix)
        options_group += body
        return table

    @staticmethod
    def build_rows(options):
        result = []
        for option in options:
            default = option["default"]
            if isinstance(default, str) and len(default) > 1 and default[0] == default[-1] == '"':
                default = default[1:-1]
                if default == SUPPRESS:
                    default = None
            result.append(TableRow(option["name"], default, option.get("choices"), option["help"]))
        return result

    def _make_table_body(self, rows, title, description, prefix):
        t_body = n.tbody()
        header_row = n.paragraph()
        header_row += n.strong(text=title)
        if description:
            header_row += n.Text(" ⇒ ")
            header_row += n.Text(description)
        t_body += n.row("", n.entry("", header_row, morecols=2))
        for row in rows:
            name_list = self._get_targeted_names(row, prefix)
            default = CliTable._get_default(row)
            help_text = CliTable._get_help_text(row)
            t_body += n.row("", n.entry("", name_list), n.entry("", default), n.entry("", help_text))
        return t_body

    def _get_targeted_names(self, row, prefix):
        names = [f"{prefix}{name.lstrip('-')}" for name in row.names]
        target = n.target("", "", ids=names, names=names)
        self.register_target_option(target)
        for index, (name, orig) in enumerate(zip(names, row.names)):
            if index:
                target += n.Text(", ")
            self_ref = n.reference(refid=name)
            self_ref += n.literal(text=orig)
            target += self_ref
        para = n.paragraph(text="")
        para += target
        return para

    @staticmethod
    def _get_help_text(row):
        help_body = n.paragraph("", "", n.Text(row.help))
        if row.choices is not None:
            help_body += n.Text("; choice of: ")
            for index, choice in enumerate(row.choices):
                if index:
                    help_body += n.Text(", ")
                help_body += n.literal(text=choice)
        return help_body

    @staticmethod
    def _get_default(row):
        if row.names[0] == "--n" and isinstance(row.default, str) and row.default.startswith("["):
            return n.Text("4, 8, 16 up to 512")
        if row.default is None:
            return n.paragraph("", text="")
        return n.literal(text=row.default if isinstance(row.default, str) else str(row.default))

    def register_target_option(self, target) -> None:
        domain = self.env.get_domain("std")
        self.state.document.note_explicit_target(target)
        for key in target["ids"]:
            domain.add_program_option(None, key, self.env.docname, key)


__all__ = ("CliTable",)
