"""Dataset serialization to CSV (with a JSON meta sidecar) and JSON."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Union

from .spectra import Column, SpectrumDataset

FORMATS = ("csv", "json")


def _fmt(v: float) -> str:
    # repr is the shortest string that round-trips to the same double
    return repr(float(v))


def meta_sidecar(path: Union[str, Path]) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".meta.json")


def render_csv(ds: SpectrumDataset) -> str:
    lines = [",".join(f"{c.name} [{c.unit}]" for c in ds.schema)]
    lines.extend(",".join(_fmt(v) for v in row) for row in ds.rows)
    return "\n".join(lines) + "\n"


def render_json(ds: SpectrumDataset) -> str:
    doc = {
        "schema": [{"name": c.name, "unit": c.unit} for c in ds.schema],
        "rows": [list(row) for row in ds.rows],
        "meta": ds.meta,
    }
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_dataset(ds: SpectrumDataset, path: Union[str, Path], fmt: str = "csv") -> None:
    """Write ``ds`` to ``path``. CSV output puts ``meta`` in ``<stem>.meta.json``."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    path = Path(path)
    if fmt == "json":
        _atomic_write(path, render_json(ds))
    else:
        meta_text = json.dumps(ds.meta, indent=1, allow_nan=False) + "\n"
        _atomic_write(path, render_csv(ds))
        _atomic_write(meta_sidecar(path), meta_text)


def read_dataset(path: Union[str, Path], fmt: str = "csv") -> SpectrumDataset:
    path = Path(path)
    if fmt == "json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        schema = tuple(Column(c["name"], c["unit"]) for c in doc["schema"])
        rows = tuple(tuple(float(v) for v in row) for row in doc["rows"])
        return SpectrumDataset(schema, rows, doc["meta"])
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    header, *body = path.read_text(encoding="utf-8").splitlines()
    schema = []
    for cell in header.split(","):
        name, unit = cell.rsplit(" [", 1)
        schema.append(Column(name, unit.rstrip("]")))
    rows = tuple(tuple(float(v) for v in line.split(",")) for line in body if line)
    sidecar = meta_sidecar(path)
    meta = json.loads(sidecar.read_text(encoding="utf-8")) if sidecar.exists() else {}
    return SpectrumDataset(tuple(schema), rows, meta)
