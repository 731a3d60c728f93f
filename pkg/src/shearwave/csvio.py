"""Deterministic CSV output: 17 significant digits, LF endings, hashed header."""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable, Sequence


def fmt(x) -> str:
    if isinstance(x, (bool,)):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def render(columns: Sequence[str], rows: Iterable[Sequence], digest: str) -> str:
    buf = io.StringIO(newline="")
    buf.write("# " + ",".join(columns) + f" config={digest}\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    return buf.getvalue()


def write(path, columns, rows, digest: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(render(columns, rows, digest))
    return path


def read(path):
    """(columns, rows as float lists) of a file written by :func:`write`."""
    lines = Path(path).read_text().splitlines()
    header = lines[0].lstrip("# ").split(" config=")[0]
    return header.split(","), [[float(x) for x in ln.split(",")] for ln in lines[1:]]
