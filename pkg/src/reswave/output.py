"""Run outputs: snapshot trajectories, diagnostics, and manifests.

Snapshots are written one delimiter-separated-values file each, with a
``# t=<time>`` header line followed by a column-name line; every number is
printed with 17 significant digits so re-reading reproduces the in-memory
doubles bit-exactly.  The manifest is a flat key = value text file listing
every tunable that affects the numerics.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def front_positions(x: np.ndarray, envelope: np.ndarray,
                    fraction: float = 0.01) -> tuple[float, float]:
    """Leftmost/rightmost x where the envelope exceeds its floor by the
    given fraction of its excursion.  The floor-relative threshold makes
    the tracker meaningful both for compactly supported fields (floor 0)
    and for zero-mean amplitudes, which carry a constant pedestal where
    the physical fields vanish."""
    lo = float(envelope.min())
    thr = lo + fraction * (float(envelope.max()) - lo)
    idx = np.nonzero(envelope > thr)[0]
    if idx.size == 0:
        return float("nan"), float("nan")
    return float(x[idx[0]]), float(x[idx[-1]])


def new_manifest(**entries) -> dict:
    manifest = {"code_version": __version__}
    manifest.update(entries)
    return manifest


@dataclass
class Snapshot:
    time: float
    columns: dict[str, np.ndarray]


@dataclass
class RunOutput:
    manifest: dict
    snapshots: list[Snapshot] = field(default_factory=list)
    diagnostics: list[dict] = field(default_factory=list)
    children: dict[str, "RunOutput"] = field(default_factory=dict)
    extras: dict[str, list[dict]] = field(default_factory=dict)

    def snapshot_times(self) -> list[float]:
        return [s.time for s in self.snapshots]

    def diagnostic_series(self, key: str) -> np.ndarray:
        return np.array([d[key] for d in self.diagnostics])


def write_snapshot_file(path: str, snap: Snapshot):
    names = list(snap.columns.keys())
    cols = [np.asarray(snap.columns[k]) for k in names]
    with open(path, "w") as fh:
        fh.write(f"# t={_fmt(snap.time)}\n")
        fh.write(",".join(names) + "\n")
        for row in zip(*cols):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_snapshot_file(path: str) -> Snapshot:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# t="):
            raise ValueError(f"{path}: missing '# t=' header line")
        time = float(header[4:])
        names = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    columns = {name: data[:, i] for i, name in enumerate(names)}
    return Snapshot(time=time, columns=columns)


def write_table(path: str, rows: list[dict]):
    if not rows:
        with open(path, "w") as fh:
            fh.write("\n")
        return
    names = list(rows[0].keys())
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(float(row[k])) for k in names) + "\n")


def write_manifest(path: str, manifest: dict):
    with open(path, "w") as fh:
        for key, val in manifest.items():
            fh.write(f"{key} = {val}\n")


def read_manifest(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or "=" not in line:
                continue
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def export_snapshots(output: RunOutput, directory: str) -> list[str]:
    """Write the run to a directory; returns the created file paths.

    Layout: snapshot_NNNN.csv per snapshot, diagnostics.csv, manifest.txt,
    any extra tables by name, and one subdirectory per child run.
    """
    os.makedirs(directory, exist_ok=True)
    written = []
    try:
        for i, snap in enumerate(output.snapshots):
            path = os.path.join(directory, f"snapshot_{i:04d}.csv")
            write_snapshot_file(path, snap)
            written.append(path)
        diag_path = os.path.join(directory, "diagnostics.csv")
        write_table(diag_path, output.diagnostics)
        written.append(diag_path)
        for name, rows in output.extras.items():
            path = os.path.join(directory, f"{name}.csv")
            write_table(path, rows)
            written.append(path)
        for name, child in output.children.items():
            written.extend(export_snapshots(child, os.path.join(directory, name)))
        manifest_path = os.path.join(directory, "manifest.txt")
        write_manifest(manifest_path, output.manifest)
        written.append(manifest_path)
    except OSError as exc:
        raise OSError(f"failed writing run output under {directory}: {exc}") from exc
    return written
