"""CSV ingestion and versioned JSON model persistence.

All floats are written with ``repr`` (shortest round-trip form), so repeated
runs with the same inputs produce byte-identical artifacts and a saved model
reloads to exactly the fitted values.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .errors import CSVParseError
from .hierarchy import ScaleRecord, SparseModel
from .kernel import Dataset

SCHEMA_VERSION = 1


def ingest_csv(path, has_header: bool = False) -> Dataset:
    """Read rows of d feature columns followed by one target column.

    Rejects ragged rows, non-numeric cells, and nonfinite values with a
    diagnostic naming the offending row (1-based, header included) and column.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    start = 1 if has_header else 0
    data_rows = [(i + 1, row) for i, row in enumerate(rows) if i >= start and row]
    if not data_rows:
        raise CSVParseError(f"{path}: no data rows")
    width = len(data_rows[0][1])
    if width < 2:
        raise CSVParseError(
            f"{path}: row {data_rows[0][0]} has {width} column(s); "
            "need at least one feature and one target"
        )
    X = np.empty((len(data_rows), width - 1))
    Y = np.empty(len(data_rows))
    for out_i, (rownum, row) in enumerate(data_rows):
        if len(row) != width:
            raise CSVParseError(
                f"{path}: row {rownum} has {len(row)} columns, expected {width}"
            )
        for col, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise CSVParseError(
                    f"{path}: row {rownum}, column {col + 1}: "
                    f"non-numeric value {cell!r}"
                ) from None
            if not math.isfinite(value):
                raise CSVParseError(
                    f"{path}: row {rownum}, column {col + 1}: "
                    f"nonfinite value {cell!r}"
                )
            if col < width - 1:
                X[out_i, col] = value
            else:
                Y[out_i] = value
    return Dataset(X=X, Y=Y)


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _num(x):
    # JSON-safe scalar: infinities map to null (failed-scale sentinel)
    x = float(x)
    return x if math.isfinite(x) else None


def _record_to_dict(rec: ScaleRecord) -> dict:
    return {
        "s": rec.s,
        "epsilon_s": rec.epsilon_s,
        "l_s": rec.l_s,
        "comp_s": rec.comp_s,
        "cost": _num(rec.cost),
        "lambda": None if rec.lam is None else [float(v) for v in rec.lam],
        "q": None if rec.q is None else [int(v) for v in rec.q],
        "seed": rec.seed,
        "points": rec.points.tolist(),
    }


def _record_from_dict(d: dict) -> ScaleRecord:
    return ScaleRecord(
        s=int(d["s"]),
        epsilon_s=float(d["epsilon_s"]),
        l_s=int(d["l_s"]),
        comp_s=float(d["comp_s"]),
        cost=math.inf if d["cost"] is None else float(d["cost"]),
        lam=None if d["lambda"] is None else np.asarray(d["lambda"], dtype=float),
        q=None if d["q"] is None else tuple(int(v) for v in d["q"]),
        seed=int(d["seed"]),
        points=np.asarray(d["points"], dtype=float),
    )


def model_to_dict(model: SparseModel) -> dict:
    return {
        "t": model.t,
        "epsilon_t": model.epsilon_t,
        "X_t": model.X_t.tolist(),
        "Y_t": model.Y_t.tolist(),
        "C_t": model.C_t.tolist(),
        "Lambda_t": [float(v) for v in model.Lambda_t],
        "Q_t": [int(v) for v in model.Q_t],
        "df_res_inputs": {
            "trace_U": model.df_res_inputs[0],
            "trace_UUT": model.df_res_inputs[1],
        },
        "n_train": model.n_train,
        "history": [_record_to_dict(rec) for rec in model.history],
    }


def model_from_dict(d: dict) -> SparseModel:
    return SparseModel(
        t=int(d["t"]),
        epsilon_t=float(d["epsilon_t"]),
        X_t=np.asarray(d["X_t"], dtype=float),
        Y_t=np.asarray(d["Y_t"], dtype=float),
        C_t=np.asarray(d["C_t"], dtype=float),
        Lambda_t=np.asarray(d["Lambda_t"], dtype=float),
        Q_t=tuple(int(v) for v in d["Q_t"]),
        df_res_inputs=(
            float(d["df_res_inputs"]["trace_U"]),
            float(d["df_res_inputs"]["trace_UUT"]),
        ),
        n_train=int(d["n_train"]),
        history=[_record_from_dict(r) for r in d["history"]],
    )


def save_model(path, model: SparseModel, parameters: dict, provenance: dict) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": model_to_dict(model),
        "parameters": parameters,
        "provenance": provenance,
    }
    Path(path).write_text(json.dumps(payload, indent=1) + "\n")


def load_model(path) -> tuple[SparseModel, dict, dict]:
    payload = json.loads(Path(path).read_text())
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema_version {version!r}")
    model = model_from_dict(payload["model"])
    return model, payload.get("parameters", {}), payload.get("provenance", {})


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(path, header: list[str], rows, meta: dict | None = None) -> None:
    """Plain CSV with repr-formatted numbers and optional '#' metadata lines."""
    lines = []
    if meta:
        for key, val in meta.items():
            text = _fmt(val) if isinstance(val, (int, float, np.floating, np.integer)) else str(val)
            lines.append(f"# {key}={text}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    Path(path).write_text("\n".join(lines) + "\n")


def export_dataset_csv(path, dataset: Dataset) -> None:
    cols = [f"x_{j + 1}" for j in range(dataset.d)] + ["y"]
    rows = [list(x) + [y] for x, y in zip(dataset.X, dataset.Y)]
    write_csv(path, cols, rows)


def read_points_csv(path, has_header: bool = False) -> np.ndarray:
    """Query points: every column is a coordinate (no target column)."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    start = 1 if has_header else 0
    data_rows = [(i + 1, row) for i, row in enumerate(rows) if i >= start and row]
    if not data_rows:
        raise CSVParseError(f"{path}: no data rows")
    width = len(data_rows[0][1])
    out = np.empty((len(data_rows), width))
    for out_i, (rownum, row) in enumerate(data_rows):
        if len(row) != width:
            raise CSVParseError(
                f"{path}: row {rownum} has {len(row)} columns, expected {width}"
            )
        for col, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise CSVParseError(
                    f"{path}: row {rownum}, column {col + 1}: "
                    f"non-numeric value {cell!r}"
                ) from None
            if not math.isfinite(value):
                raise CSVParseError(
                    f"{path}: row {rownum}, column {col + 1}: nonfinite value"
                )
            out[out_i, col] = value
    return out
