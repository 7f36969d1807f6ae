"""Plain CSV / JSON writers with a reproducibility header."""

import csv
import io as _io
import json
import math
import sys

__all__ = ["VERSION_TAG", "format_table", "write_table"]

VERSION_TAG = "ginibre-interp"


def _version():
    from . import __version__
    return __version__


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if hasattr(v, "item"):
        return v.item()
    return v


def format_table(columns, rows, config, fmt="csv"):
    """Render a table as text.

    CSV output starts with ``# ginibre-interp v<version>``, then a
    ``# config: {...}`` line holding the full run configuration (seed
    included), then the column row and the data. JSON output carries the
    same fields as ``{"version", "config", "columns", "rows"}``.
    """
    rows = [[_clean(v) for v in r] for r in rows]
    if fmt == "json":
        doc = {"version": f"{VERSION_TAG} v{_version()}", "config": config,
               "columns": list(columns), "rows": rows}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = _io.StringIO()
    buf.write(f"# {VERSION_TAG} v{_version()}\n")
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def write_table(columns, rows, config, path=None, fmt="csv"):
    """Write a table to ``path`` (or stdout when ``path`` is None or ``-``)."""
    text = format_table(columns, rows, config, fmt)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text
