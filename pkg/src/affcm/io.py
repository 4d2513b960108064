"""CSV datasets and JSON traces / reports."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .core import ConfigurationError, Dataset, IterationRecord, RunConfig, RunTrace

SCHEMA_VERSION = 1


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_csv(path, header: str = "auto") -> Dataset:
    """Load one sample per row.

    ``header`` is ``"yes"``, ``"no"`` or ``"auto"`` (header present when the
    first row holds a non-numeric cell). A final header column named
    ``label`` is read as integer labels.
    """
    if header not in ("auto", "yes", "no"):
        raise ConfigurationError(f"header must be auto, yes or no, got {header!r}")
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise ConfigurationError(f"{path} holds no rows")
    has_header = header == "yes" or (header == "auto" and not all(_is_number(c) for c in rows[0]))
    names = [c.strip() for c in rows[0]] if has_header else None
    body = rows[1:] if has_header else rows
    if not body:
        raise ConfigurationError(f"{path} holds no samples")
    width = len(body[0])
    values = np.empty((len(body), width))
    for i, row in enumerate(body):
        if len(row) != width:
            raise ConfigurationError(f"row {i + 1} has {len(row)} cells, expected {width}")
        for k, cell in enumerate(row):
            try:
                values[i, k] = float(cell)
            except ValueError:
                raise ConfigurationError(f"non-numeric cell {cell!r} at row {i + 1}, column {k + 1}") from None
    labels = None
    if names is not None and names[-1].lower() == "label":
        labels = values[:, -1]
        values = values[:, :-1]
        if not np.all(labels == np.round(labels)):
            raise ConfigurationError("label column must hold integers")
        labels = labels.astype(np.int64)
    if values.shape[1] == 0:
        raise ConfigurationError("no feature columns")
    return Dataset(values, labels)


def write_csv(data: Dataset, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        head = [f"x{k}" for k in range(data.p)]
        if data.labels is not None:
            head.append("label")
        w.writerow(head)
        for j in range(data.n):
            row = [repr(float(v)) for v in data.samples[j]]
            if data.labels is not None:
                row.append(str(int(data.labels[j])))
            w.writerow(row)


def _clean(x):
    """Plain-Python copy of ``x`` with non-finite floats mapped to ``None``."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def dumps(obj) -> str:
    # repr floats are the shortest strings that round-trip exactly
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def trace_to_dict(trace: RunTrace, with_memberships: bool = False) -> dict:
    cfg = trace.config
    stage_a, stage_b = trace.stage_counts
    out = {
        "schema": SCHEMA_VERSION,
        "algorithm": trace.algorithm,
        "config": {
            "c": cfg.n_clusters,
            "m": cfg.m,
            "eps": cfg.epsilon,
            "maxIter": cfg.max_iter,
            "seed": cfg.seed,
            "init": cfg.init,
        },
        "nSamples": trace.n_samples,
        "iterations": trace.iterations,
        "converged": trace.converged,
        "stages": {"A": stage_a, "B": stage_b},
        "perIteration": [
            {
                "t": r.t,
                "jFuzzy": r.fuzzy_objective,
                "jHard": r.hard_objective,
                "drift": r.drift,
                "filteredSamples": r.filtered_samples,
                "filteredCenterPairs": r.filtered_center_pairs,
                "nanos": r.nanos,
                "stage": r.stage,
            }
            for r in trace.records
        ],
        "filterRate": [[t, rate] for t, rate in trace.filter_rate],
        "initialCenters": trace.initial_centers,
        "centers": trace.centers,
        "metrics": trace.metrics or {},
    }
    if with_memberships and trace.memberships is not None:
        out["memberships"] = trace.memberships
    return _clean(out)


def trace_from_dict(d: dict) -> RunTrace:
    if d.get("schema") != SCHEMA_VERSION:
        raise ConfigurationError(f"unsupported trace schema {d.get('schema')!r}")
    c = d["config"]
    cfg = RunConfig(
        n_clusters=c["c"], m=c["m"], epsilon=c["eps"], max_iter=c["maxIter"],
        seed=c["seed"], init=c["init"], algorithm=d["algorithm"],
    )
    records = [
        IterationRecord(
            r["t"], r["jFuzzy"], r["jHard"], r["drift"], r["filteredSamples"],
            r["filteredCenterPairs"], r["nanos"], r.get("stage", "A"),
        )
        for r in d["perIteration"]
    ]

    def arr(key):
        return None if d.get(key) is None else np.asarray(d[key], dtype=np.float64)

    return RunTrace(
        algorithm=d["algorithm"],
        config=cfg,
        records=records,
        iterations=d["iterations"],
        converged=d["converged"],
        centers=arr("centers"),
        memberships=arr("memberships"),
        initial_centers=arr("initialCenters"),
        n_samples=d.get("nSamples", 0),
        metrics=d.get("metrics") or None,
    )


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from None
