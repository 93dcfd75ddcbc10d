from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

from metachain.version import __version__

name = "metachain"
version = ".".join(__version__.split(".")[:2])
release = __version__
copyright = f"2024-{datetime.now(tz=timezone.utc).year}, metachain developers"  # noqa: A001

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosectionlabel",
    "sphinx.ext.mathjax",
]

templates_path = []
source_suffix = ".rst"
exclude_patterns = ["_build"]

main_doc = "index"
project = name
today_fmt = "%B %d, %Y"

html_theme = "furo"
html_title, html_last_updated_fmt = project, datetime.now(tz=timezone.utc).isoformat()
pygments_style, pygments_dark_style = "sphinx", "monokai"

autoclass_content = "both"  # Include __init__ in class documentation
autodoc_member_order = "bysource"
autosectionlabel_prefix_document = True


def setup(app):
    # the CLI arguments are dynamically generated
    doc_tree = Path(app.doctreedir)
    cli_interface_doctree = doc_tree / "cli_interface.doctree"
    if cli_interface_doctree.exists():
        cli_interface_doctree.unlink()

    here = Path(__file__).parent
    if str(here) not in sys.path:
        sys.path.append(str(here))

    # noinspection PyUnresolvedReferences
    from render_cli import CliTable  # noqa: PLC0415

    app.add_directive(CliTable.name, CliTable)
