"""Dataset ingestion and preprocessing.

A :class:`Dataset` holds categorical attributes as strings, numeric
attributes as floats and missing cells as ``None``. The tree builders only
accept fully categorical, complete datasets; :func:`impute_modal`,
:func:`discretize_equal_frequency` and :func:`binarize_by_gain_ratio` get raw
data there.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
from bisect import bisect_right
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .classic import gain_ratio, information_gain
from .direct import ContingencyView
from .errors import IngestionError

logger = logging.getLogger(__name__)

__all__ = [
    "Attribute",
    "Dataset",
    "load_csv",
    "write_csv",
    "read_schema",
    "write_schema",
    "impute_modal",
    "discretize_equal_frequency",
    "binarize_by_gain_ratio",
    "best_binary_threshold",
]

DEFAULT_MISSING = "?"


@dataclass(frozen=True)
class Attribute:
    name: str
    labels: tuple[str, ...] = ()
    numeric: bool = False

    @property
    def is_binary(self) -> bool:
        return not self.numeric and len(self.labels) == 2

    def to_dict(self) -> dict:
        if self.numeric:
            return {"name": self.name, "numeric": True}
        return {"name": self.name, "labels": list(self.labels)}


@dataclass(frozen=True)
class Dataset:
    attributes: tuple[Attribute, ...]
    class_name: str
    class_labels: tuple[str, ...]
    rows: tuple[tuple, ...]
    targets: tuple[str, ...]
    name: str = ""
    missing: str = DEFAULT_MISSING

    def __post_init__(self):
        if len(self.rows) != len(self.targets):
            raise IngestionError("rows and targets differ in length")

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def attribute_index(self, name: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise IngestionError(f"no attribute named {name!r}")

    def column(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def subset(self, indices: Iterable[int]) -> "Dataset":
        idx = list(indices)
        return replace(
            self,
            rows=tuple(self.rows[i] for i in idx),
            targets=tuple(self.targets[i] for i in idx),
        )

    def with_column(self, j: int, attribute: Attribute, values: Sequence) -> "Dataset":
        attrs = list(self.attributes)
        attrs[j] = attribute
        rows = tuple(row[:j] + (v,) + row[j + 1 :] for row, v in zip(self.rows, values, strict=True))
        return replace(self, attributes=tuple(attrs), rows=rows)

    def has_missing(self) -> bool:
        return any(v is None for row in self.rows for v in row)

    def is_categorical(self) -> bool:
        return not any(a.numeric for a in self.attributes) and not self.has_missing()

    def encoded(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer codes ``(X, y)`` following declared label order."""
        if not self.is_categorical():
            raise IngestionError(
                "dataset must be categorical and complete; impute and discretize first"
            )
        lookups = [{lab: i for i, lab in enumerate(a.labels)} for a in self.attributes]
        X = np.empty((len(self.rows), len(self.attributes)), dtype=np.int64)
        for r, row in enumerate(self.rows):
            for j, v in enumerate(row):
                X[r, j] = lookups[j][v]
        cls = {lab: i for i, lab in enumerate(self.class_labels)}
        y = np.fromiter((cls[t] for t in self.targets), dtype=np.int64, count=len(self.targets))
        return X, y

    def schema(self) -> dict:
        return {
            "class": self.class_name,
            "class_labels": list(self.class_labels),
            "missing": self.missing,
            "attributes": [a.to_dict() for a in self.attributes],
        }


_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _is_number(s: str) -> bool:
    return bool(_NUMBER.match(s))


def _label_sort_key(values: Iterable[str]):
    vals = list(values)
    if vals and all(_is_number(v) for v in vals):
        return lambda v: (float(v), v)
    return lambda v: v


def read_schema(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            schema = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestionError(f"cannot read schema {path}: {exc}") from None
    if not isinstance(schema, dict):
        raise IngestionError(f"schema {path} must be a JSON object")
    return schema


def write_schema(dataset: Dataset, path: str | Path, extra: Mapping | None = None) -> None:
    doc = dataset.schema()
    if extra:
        doc["provenance"] = dict(extra)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_csv(
    source,
    class_column: str | int | None = None,
    schema: Mapping | str | Path | None = None,
    missing: str | None = None,
    categorical: bool = False,
    name: str | None = None,
) -> Dataset:
    """Read a headed CSV file into a :class:`Dataset`.

    Args:
        source: path, or a file-like object with the CSV text.
        class_column: header name or position of the class column. Defaults
            to the schema's ``class`` entry, else the last column.
        schema: schema mapping or sidecar path declaring labels and numeric flags.
        missing: missing-value marker (default ``"?"``).
        categorical: disable numeric auto-detection for undeclared columns.
        name: dataset identifier; defaults to the file stem.

    A schema may omit the class column from the file (unlabeled data); the
    returned targets are then empty strings.
    """
    if isinstance(schema, (str, Path)):
        schema = read_schema(schema)
    schema = dict(schema or {})
    if missing is None:
        missing = schema.get("missing", DEFAULT_MISSING)

    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise IngestionError(f"cannot read {path}: {exc}") from None
        name = name or path.stem
    else:
        text = source.read()
        name = name or ""

    records = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not records:
        raise IngestionError("empty file: no header row")
    header = [h.strip() for h in records[0]]
    body = records[1:]
    if not body:
        raise IngestionError("file has a header but no data rows")
    for lineno, rec in enumerate(body, start=2):
        if len(rec) != len(header):
            raise IngestionError(
                f"row {lineno}: expected {len(header)} fields, found {len(rec)}"
            )

    declared = {a["name"]: a for a in schema.get("attributes", [])}
    if class_column is None:
        class_column = schema.get("class", len(header) - 1)
    unlabeled = False
    if isinstance(class_column, int):
        if not -len(header) <= class_column < len(header):
            raise IngestionError(f"class column position {class_column} out of range")
        class_pos = class_column % len(header)
    elif class_column in header:
        class_pos = header.index(class_column)
    elif declared and all(n in header for n in declared):
        class_pos = None
        unlabeled = True
    else:
        raise IngestionError(f"unknown class column {class_column!r}; header is {header}")
    class_name = header[class_pos] if class_pos is not None else str(class_column)

    attr_pos = [i for i in range(len(header)) if i != class_pos]
    if declared:
        missing_cols = [n for n in declared if n not in header]
        if missing_cols:
            raise IngestionError(f"schema attributes absent from header: {missing_cols}")
        attr_pos = [header.index(n) for n in declared]

    cells = [[c.strip() for c in rec] for rec in body]
    attributes = []
    columns = []
    for pos in attr_pos:
        col_name = header[pos]
        raw = [rec[pos] for rec in cells]
        present = [v for v in raw if v != missing]
        spec = declared.get(col_name)
        if spec is not None:
            numeric = bool(spec.get("numeric", False))
        else:
            numeric = not categorical and bool(present) and all(_is_number(v) for v in present)
        if numeric:
            try:
                values = [None if v == missing else float(v) for v in raw]
            except ValueError as exc:
                raise IngestionError(f"column {col_name!r}: {exc}") from None
            attributes.append(Attribute(col_name, numeric=True))
        else:
            if spec is not None and "labels" in spec:
                labels = tuple(str(x) for x in spec["labels"])
                allowed = set(labels)
                for lineno, v in enumerate(raw, start=2):
                    if v != missing and v not in allowed:
                        raise IngestionError(
                            f"row {lineno}, column {col_name!r}: value {v!r} not in declared labels"
                        )
            else:
                distinct = set(present)
                labels = tuple(sorted(distinct, key=_label_sort_key(distinct)))
            values = [None if v == missing else v for v in raw]
            attributes.append(Attribute(col_name, labels))
        columns.append(values)

    if unlabeled:
        targets = [""] * len(cells)
        class_labels = tuple(str(x) for x in schema.get("class_labels", ()))
    else:
        targets = [rec[class_pos] for rec in cells]
        for lineno, t in enumerate(targets, start=2):
            if t == missing or t == "":
                raise IngestionError(f"row {lineno}: class value is missing")
        if "class_labels" in schema:
            class_labels = tuple(str(x) for x in schema["class_labels"])
            unknown = sorted(set(targets) - set(class_labels))
            if unknown:
                raise IngestionError(f"class values {unknown} not in declared class labels")
        else:
            distinct = set(targets)
            class_labels = tuple(sorted(distinct, key=_label_sort_key(distinct)))

    rows = tuple(zip(*columns)) if columns else tuple(() for _ in cells)
    return Dataset(
        attributes=tuple(attributes),
        class_name=class_name,
        class_labels=class_labels,
        rows=rows,
        targets=tuple(targets),
        name=name,
        missing=missing,
    )


def _format_cell(v, missing: str) -> str:
    if v is None:
        return missing
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(dataset: Dataset, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(dataset.attribute_names) + [dataset.class_name])
        for row, t in zip(dataset.rows, dataset.targets):
            w.writerow([_format_cell(v, dataset.missing) for v in row] + [t])


def impute_modal(dataset: Dataset) -> Dataset:
    """Replace each missing cell with its column's most frequent value.

    Ties go to the label declared first (smallest value for numeric columns).
    """
    out = dataset
    for j, attr in enumerate(dataset.attributes):
        col = dataset.column(j)
        if all(v is not None for v in col):
            continue
        present = [v for v in col if v is not None]
        if not present:
            raise IngestionError(f"column {attr.name!r} has no observed values to impute from")
        order = list(attr.labels) if not attr.numeric else sorted(set(present))
        freq = {v: 0 for v in order}
        for v in present:
            freq[v] += 1
        mode = max(order, key=lambda v: freq[v])  # max keeps the first of equal keys
        out = out.with_column(j, attr, [mode if v is None else v for v in col])
    return out


def _numeric_column(dataset: Dataset, attribute: str) -> tuple[int, list[float]]:
    j = dataset.attribute_index(attribute)
    if not dataset.attributes[j].numeric:
        raise IngestionError(f"attribute {attribute!r} is not numeric")
    col = dataset.column(j)
    if any(v is None for v in col):
        raise IngestionError(f"attribute {attribute!r} has missing values; impute first")
    return j, col


def equal_frequency_cuts(values: Sequence[float], bins: int) -> list[float]:
    """Cut points ``v[floor(j*N/bins)]`` (0-based, ascending) for ``j = 1..bins-1``."""
    s = sorted(values)
    n = len(s)
    return [s[(j * n) // bins] for j in range(1, bins)]


def discretize_equal_frequency(
    dataset: Dataset, attribute: str, bins: int = 3, labels: Sequence[str] | None = None
) -> Dataset:
    """Replace a numeric attribute by ``bins`` equal-frequency categories.

    Bins are closed on the left; ties can leave bins unequal or even empty,
    but every declared label is kept in the schema.
    """
    if bins < 2:
        raise IngestionError("bins must be >= 2")
    if labels is None:
        labels = ("L", "M", "H") if bins == 3 else tuple(f"B{i + 1}" for i in range(bins))
    labels = tuple(labels)
    if len(labels) != bins:
        raise IngestionError(f"need {bins} labels, got {len(labels)}")
    j, col = _numeric_column(dataset, attribute)
    if len(set(col)) < bins:
        raise IngestionError(
            f"attribute {attribute!r} has {len(set(col))} distinct values, fewer than {bins} bins"
        )
    cuts = equal_frequency_cuts(col, bins)
    coded = [labels[bisect_right(cuts, v)] for v in col]
    return dataset.with_column(j, Attribute(attribute, labels), coded)


def best_binary_threshold(values: Sequence[float], targets: Sequence, class_labels: Sequence):
    """Midpoint threshold maximising gain ratio of the split ``<= t`` / ``> t``.

    Returns ``(threshold, gain_ratio, information_gain)``; ties keep the
    smallest threshold.
    """
    distinct = sorted(set(values))
    if len(distinct) < 2:
        raise IngestionError("a constant attribute cannot be binarized")
    cls = {c: i for i, c in enumerate(class_labels)}
    order = sorted(range(len(values)), key=lambda i: values[i])
    total = [0] * len(class_labels)
    for t in targets:
        total[cls[t]] += 1
    left = [0] * len(class_labels)
    best = None
    pos = 0
    for lo, hi in zip(distinct, distinct[1:]):
        while pos < len(order) and values[order[pos]] <= lo:
            left[cls[targets[order[pos]]]] += 1
            pos += 1
        right = [a - b for a, b in zip(total, left)]
        view = ContingencyView("split", ("le", "gt"), tuple(class_labels), (tuple(left), tuple(right)))
        gr = gain_ratio(view)
        if best is None or gr > best[1]:
            best = ((lo + hi) / 2, gr, information_gain(view))
    return best


def binarize_by_gain_ratio(dataset: Dataset, attribute: str) -> Dataset:
    """Replace a numeric attribute by the two-category split with the best gain ratio."""
    j, col = _numeric_column(dataset, attribute)
    theta, gr, gain = best_binary_threshold(col, dataset.targets, dataset.class_labels)
    if gain <= 1e-9:
        logger.warning("attribute %r: best threshold %r carries no information gain", attribute, theta)
    logger.info("attribute %r binarized at threshold %r (gain ratio %.6f)", attribute, theta, gr)
    t = f"{theta:.10g}"
    labels = (f"<={t}", f">{t}")
    coded = [labels[0] if v <= theta else labels[1] for v in col]
    return dataset.with_column(j, Attribute(attribute, labels), coded)
