"""CSV and report I/O.

All tables share one format: optional `# key=value` metadata lines, a
comma-separated header, then numeric rows printed with %.17g so that a
write/read cycle reproduces float64 values exactly. UTF-8, LF line
endings, `.` decimal separator.

Measured decay data uses the fixed schema `delay_s,value,sigma` (sigma
optional) with the series kind declared as `# y_kind=...` metadata.
"""
from __future__ import annotations

import json
import os
from typing import Mapping, Sequence

import numpy as np

from .domain import DecaySeries, YKind
from .errors import ConfigError

_FMT = "%.17g"

MEASURED_COLUMNS = ("delay_s", "value", "sigma")


def write_table(path: str | os.PathLike, columns: Mapping[str, Sequence[float]],
                metadata: Mapping[str, object] | None = None) -> None:
    """Write named, equal-length numeric columns with metadata comments."""
    names = list(columns)
    if not names:
        raise ValueError("no columns to write")
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    n_rows = arrays[0].size
    if any(a.ndim != 1 or a.size != n_rows for a in arrays):
        raise ValueError("columns must be equal-length 1-D arrays")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, val in (metadata or {}).items():
            fh.write(f"# {key}={val}\n")
        fh.write(",".join(names) + "\n")
        for i in range(n_rows):
            fh.write(",".join(_FMT % a[i] for a in arrays) + "\n")


def read_table(path: str | os.PathLike) -> tuple[dict[str, np.ndarray],
                                                 dict[str, str]]:
    """Read a table written by write_table: (columns, metadata)."""
    metadata: dict[str, str] = {}
    names: list[str] | None = None
    rows: list[list[float]] = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read table: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, val = body.partition("=")
                    metadata[key.strip()] = val.strip()
                continue
            if names is None:
                names = [c.strip() for c in line.split(",")]
                continue
            cells = line.split(",")
            if len(cells) != len(names):
                raise ConfigError(
                    f"{path}:{lineno}: expected {len(names)} fields, "
                    f"got {len(cells)}")
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    if names is None:
        raise ConfigError(f"{path}: missing header line")
    data = np.array(rows, dtype=float).reshape(len(rows), len(names))
    return {n: data[:, j] for j, n in enumerate(names)}, metadata


def write_measured_csv(path: str | os.PathLike, series: DecaySeries,
                       sigma: Sequence[float] | None = None) -> None:
    """Write a decay series in the measured-data schema."""
    columns: dict[str, Sequence[float]] = {"delay_s": series.t,
                                           "value": series.y}
    if sigma is not None:
        columns["sigma"] = np.asarray(sigma, dtype=float)
    metadata = {"y_kind": series.y_kind.value}
    metadata.update({k: v for k, v in series.metadata.items()
                     if k != "y_kind"})
    write_table(path, columns, metadata)


def read_measured_csv(path: str | os.PathLike) -> DecaySeries:
    """Strictly parse a measured CSV (`delay_s,value[,sigma]` plus a
    `# y_kind=...` declaration) into a DecaySeries.

    Sigma values, when present, must be positive; they are carried in
    the series metadata under "sigma".
    """
    columns, metadata = read_table(path)
    names = tuple(columns)
    if names not in (MEASURED_COLUMNS[:2], MEASURED_COLUMNS):
        raise ConfigError(
            f"{path}: header must be delay_s,value[,sigma], got "
            f"{','.join(names)}")
    if "y_kind" not in metadata:
        raise ConfigError(f"{path}: missing '# y_kind=...' metadata line")
    try:
        y_kind = YKind(metadata["y_kind"])
    except ValueError as exc:
        raise ConfigError(
            f"{path}: unknown y_kind '{metadata['y_kind']}'") from exc
    t = columns["delay_s"]
    if t.size == 0:
        raise ConfigError(f"{path}: no data rows")
    if t.size > 1 and not np.all(np.diff(t) > 0):
        raise ConfigError(f"{path}: delay_s must be strictly increasing")
    extra = {k: v for k, v in metadata.items() if k != "y_kind"}
    if "sigma" in columns:
        sigma = columns["sigma"]
        if not np.all(sigma > 0):
            raise ConfigError(f"{path}: sigma values must be positive")
        extra["sigma"] = tuple(float(s) for s in sigma)
    return DecaySeries(t=t, y=columns["value"], y_kind=y_kind,
                       metadata=extra)


def write_fit_report(path: str | os.PathLike, *, d_qd_cm2s: float,
                     scale_uev: float, offset_uev: float, sse: float,
                     warnings: Sequence[str],
                     d_grid_cm2s: Sequence[float]) -> None:
    """Write the structured diffusion-fit report as JSON."""
    report = {
        "d_qd_cm2s": d_qd_cm2s,
        "scale_uev": scale_uev,
        "offset_uev": offset_uev,
        "sse": sse,
        "warnings": list(warnings),
        "d_grid_cm2s": [float(d) for d in d_grid_cm2s],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")


def read_fit_report(path: str | os.PathLike) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
