"""CSV and JSON serialization of result bundles.

Numbers are written with 17 significant digits through Python formatting,
never through the locale, so files are byte-stable across environments.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

from .. import __version__
from .config import config_to_dict, parse_config
from .run import ResultBundle, Table

import yaml


def format_number(x) -> str:
    if isinstance(x, bool):
        raise TypeError("booleans are not table values")
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    return format(x, ".17g")


def _cell(x) -> str:
    if isinstance(x, str):
        if any(c in x for c in ',"\n'):
            raise ValueError(f"text cell {x!r} contains a separator")
        return x
    return format_number(x)


def table_csv(table: Table) -> str:
    lines = [f"# evanesim v{__version__}", ",".join(table.columns)]
    lines += [",".join(_cell(x) for x in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def _json_value(value, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None or isinstance(value, bool):
        return json.dumps(value)
    if isinstance(value, (int, float)):
        return format_number(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_json_value(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(_json_value(v, indent + 1) for v in value) + "]"
        items = [inner + _json_value(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def bundle_to_dict(bundle: ResultBundle) -> dict:
    return {
        "evanesim": __version__,
        "config": config_to_dict(bundle.config),
        "provenance": bundle.provenance,
        "tables": {
            name: {"columns": list(t.columns), "rows": [list(r) for r in t.rows]}
            for name, t in bundle.tables.items()
        },
    }


def bundle_json(bundle: ResultBundle) -> str:
    return _json_value(bundle_to_dict(bundle), 0) + "\n"


def load_bundle(text: str) -> ResultBundle:
    """Inverse of :func:`bundle_json`."""
    doc = json.loads(text)
    config = parse_config(yaml.safe_dump(doc["config"], sort_keys=False))
    tables = {name: Table(t["columns"], t["rows"]) for name, t in doc["tables"].items()}
    return ResultBundle(config, tables, doc["provenance"])


def emit(bundle: ResultBundle, out_dir=None, fmt=None) -> list[Path]:
    """Write the bundle; returns the files written.

    CSV: one ``<table>.csv`` per table plus ``provenance.csv``.
    JSON: a single ``results.json``.
    """
    out = Path(bundle.config.output_path if out_dir is None else out_dir)
    fmt = bundle.config.format if fmt is None else fmt
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = []
        if fmt == "json":
            path = out / "results.json"
            _write(path, bundle_json(bundle))
            return [path]
        for name, table in bundle.tables.items():
            path = out / f"{name}.csv"
            _write(path, table_csv(table))
            written.append(path)
        prov = Table(("key", "value"), sorted(_flatten(bundle.provenance)))
        path = out / "provenance.csv"
        _write(path, table_csv(prov))
        written.append(path)
        return written
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write results: {exc.strerror}", str(exc.filename or out)) from None


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, (list, tuple)):
            yield key, ";".join(_cell(x) for x in v)
        else:
            yield key, v if isinstance(v, str) else _cell(v)


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
