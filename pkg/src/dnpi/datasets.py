"""Benchmark datasets: the bundled Lenses table and readers for raw UCI files.

Only Lenses ships with the package. Monk's Problems and
Qualitative-Bankruptcy are read from their original UCI distribution files,
which the user supplies.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .data import Attribute, Dataset, load_csv
from .errors import IngestionError

__all__ = ["load_lenses", "read_uci_monks", "read_uci_qualitative_bankruptcy", "UCI_READERS"]

_MONKS_DOMAINS = {
    "a1": ("1", "2", "3"),
    "a2": ("1", "2", "3"),
    "a3": ("1", "2"),
    "a4": ("1", "2", "3"),
    "a5": ("1", "2", "3", "4"),
    "a6": ("1", "2"),
}

_QB_ATTRIBUTES = (
    "industrial_risk",
    "management_risk",
    "financial_flexibility",
    "credibility",
    "competitiveness",
    "operating_risk",
)


def load_lenses() -> Dataset:
    """The 24-instance UCI Lenses data (4 attributes, 3 classes)."""
    ref = resources.files("dnpi") / "resources" / "lenses.csv"
    with ref.open("r", encoding="utf-8") as fh:
        return load_csv(fh, class_column="lenses", name="lenses")


def _read_lines(path) -> list[str]:
    try:
        return [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from None


def read_uci_monks(path, name: str | None = None) -> Dataset:
    """Read a ``monks-N.train``/``.test`` file: class, a1..a6, instance id (dropped)."""
    rows, targets = [], []
    for lineno, line in enumerate(_read_lines(path), start=1):
        parts = line.split()
        if len(parts) != 8:
            raise IngestionError(f"{path}:{lineno}: expected 8 fields, found {len(parts)}")
        targets.append(parts[0])
        rows.append(tuple(parts[1:7]))
    attrs = tuple(Attribute(a, labels) for a, labels in _MONKS_DOMAINS.items())
    for lineno, row in enumerate(rows, start=1):
        for a, v in zip(attrs, row):
            if v not in a.labels:
                raise IngestionError(f"{path}:{lineno}: {a.name}={v!r} outside its domain")
    return Dataset(attrs, "class", ("0", "1"), tuple(rows), tuple(targets),
                   name=name or Path(path).name)


def read_uci_qualitative_bankruptcy(path, name: str = "qualitative_bankruptcy") -> Dataset:
    """Read ``Qualitative_Bankruptcy.data.txt``: six P/A/N attributes, class B or NB."""
    rows, targets = [], []
    for lineno, line in enumerate(_read_lines(path), start=1):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 7:
            raise IngestionError(f"{path}:{lineno}: expected 7 fields, found {len(parts)}")
        if any(p not in ("P", "A", "N") for p in parts[:6]) or parts[6] not in ("B", "NB"):
            raise IngestionError(f"{path}:{lineno}: unexpected value in {parts}")
        rows.append(tuple(parts[:6]))
        targets.append(parts[6])
    attrs = tuple(Attribute(a, ("P", "A", "N")) for a in _QB_ATTRIBUTES)
    return Dataset(attrs, "class", ("B", "NB"), tuple(rows), tuple(targets), name=name)


UCI_READERS = {
    "monks": read_uci_monks,
    "qualitative-bankruptcy": read_uci_qualitative_bankruptcy,
}
