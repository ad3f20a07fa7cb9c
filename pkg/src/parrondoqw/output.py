"""Plot-ready CSV emission with JSON sidecars.

Every emit writes a primary CSV (full double precision, 17 significant
digits, '.' decimal separator) plus a JSON sidecar carrying the flat config
echo, the RNG algorithm identifier, the seeds actually consumed, the package
version, and the wall-clock runtime. Re-running the sidecar's config echo
reproduces the CSV byte for byte; only the sidecar's runtime stamp varies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .ensemble import ClassicalWalkResult, EnsembleResult
from .errors import OutputError
from .evolution import Trajectory
from .sweep import SweepResult


@dataclass
class OutputBundle:
    """Paths written by one emit call, plus the sidecar metadata."""

    data_path: Path
    sidecar_path: Path
    extra_paths: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)


def _fmt(value) -> str:
    return format(float(value), ".17g")


def _write_csv(path: Path, header, rows):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(str(h) for h in header) + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _write_sidecar(path: Path, metadata: dict):
    try:
        with open(path, "w") as fh:
            json.dump(metadata, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _prepare_dir(out_dir) -> Path:
    if out_dir is None or str(out_dir) == "":
        raise OutputError("output directory path is empty")
    path = Path(out_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory {path}: {exc}") from exc
    return path


def _sidecar_metadata(kind: str, config_echo, extra: dict) -> dict:
    meta = {
        "kind": kind,
        "version": __version__,
        "config": dict(config_echo) if config_echo else None,
    }
    meta.update(extra)
    return meta


def emit_trajectory(
    trajectory: Trajectory,
    out_dir,
    basename: str = "trajectory",
    config_echo=None,
    runtime_seconds: float | None = None,
) -> OutputBundle:
    """Write t/expectation/variance columns, the optional P(x, t) matrix, and
    the sidecar."""
    out = _prepare_dir(out_dir)
    data_path = out / f"{basename}.csv"
    rows = (
        [str(int(t)), _fmt(e), _fmt(v)]
        for t, e, v in zip(
            trajectory.times, trajectory.expectation, trajectory.variance
        )
    )
    _write_csv(data_path, ["t", "expectation", "variance"], rows)

    extra_paths = {}
    if trajectory.distributions is not None:
        dist_path = out / f"{basename}_distribution.csv"
        positions = trajectory.final_state.geometry.positions
        dist_rows = (
            [str(int(t))] + [_fmt(p) for p in row]
            for t, row in zip(trajectory.times, trajectory.distributions)
        )
        _write_csv(dist_path, ["t"] + [str(int(x)) for x in positions], dist_rows)
        extra_paths["distribution"] = dist_path

    metadata = _sidecar_metadata(
        "trajectory",
        config_echo,
        {"trajectory": trajectory.metadata, "runtime_seconds": runtime_seconds},
    )
    sidecar = out / f"{basename}.json"
    _write_sidecar(sidecar, metadata)
    return OutputBundle(data_path, sidecar, extra_paths, metadata)


def emit_ensemble(
    result: EnsembleResult,
    out_dir,
    basename: str = "ensemble",
    config_echo=None,
    runtime_seconds: float | None = None,
) -> OutputBundle:
    out = _prepare_dir(out_dir)
    data_path = out / f"{basename}.csv"
    rows = (
        [str(int(t)), _fmt(m), _fmt(se)]
        for t, m, se in zip(result.times, result.mean_expectation, result.std_error)
    )
    _write_csv(data_path, ["t", "mean_expectation", "std_error"], rows)
    metadata = _sidecar_metadata(
        "ensemble",
        config_echo,
        {"ensemble": result.metadata, "runtime_seconds": runtime_seconds},
    )
    sidecar = out / f"{basename}.json"
    _write_sidecar(sidecar, metadata)
    return OutputBundle(data_path, sidecar, {}, metadata)


def emit_classical(
    result: ClassicalWalkResult,
    out_dir,
    basename: str = "classical",
    record_full: bool = False,
    config_echo=None,
    runtime_seconds: float | None = None,
) -> OutputBundle:
    out = _prepare_dir(out_dir)
    data_path = out / f"{basename}.csv"
    rows = (
        [str(int(t)), _fmt(e), _fmt(v)]
        for t, e, v in zip(result.times, result.expectation, result.variance)
    )
    _write_csv(data_path, ["t", "expectation", "variance"], rows)
    extra_paths = {}
    if record_full:
        dist_path = out / f"{basename}_distribution.csv"
        dist_rows = (
            [str(int(t))] + [_fmt(p) for p in row]
            for t, row in zip(result.times, result.distributions)
        )
        _write_csv(
            dist_path, ["t"] + [str(int(x)) for x in result.positions], dist_rows
        )
        extra_paths["distribution"] = dist_path
    metadata = _sidecar_metadata(
        "classical", config_echo, {"runtime_seconds": runtime_seconds}
    )
    sidecar = out / f"{basename}.json"
    _write_sidecar(sidecar, metadata)
    return OutputBundle(data_path, sidecar, extra_paths, metadata)


def emit_sweep(
    result: SweepResult,
    out_dir,
    basename: str = "sweep",
    config_echo=None,
    runtime_seconds: float | None = None,
) -> OutputBundle:
    """Write the expectation matrix (one row per axis1 value, axis value
    headers), the parallel classification matrix, and the sidecar."""
    out = _prepare_dir(out_dir)
    corner = f"{result.grid.axis1.name}\\{result.grid.axis2.name}"
    header = [corner] + [_fmt(v) for v in result.axis2_values]

    data_path = out / f"{basename}_expectation.csv"
    rows = (
        [_fmt(v1)] + [_fmt(e) for e in row]
        for v1, row in zip(result.axis1_values, result.expectation)
    )
    _write_csv(data_path, header, rows)

    class_path = out / f"{basename}_classification.csv"
    class_rows = (
        [_fmt(v1)] + list(row)
        for v1, row in zip(result.axis1_values, result.classification)
    )
    _write_csv(class_path, header, class_rows)

    metadata = _sidecar_metadata(
        "sweep",
        config_echo,
        {
            "sweep": result.metadata,
            "tie_tolerance": result.grid.tie_tolerance,
            "steps": result.grid.steps,
            "n_sites": result.grid.geometry.n_sites,
            "runtime_seconds": runtime_seconds,
        },
    )
    sidecar = out / f"{basename}.json"
    _write_sidecar(sidecar, metadata)
    return OutputBundle(data_path, sidecar, {"classification": class_path}, metadata)
