"""Reading and validating exported run directories.

A run directory holds ``manifest.txt`` (flat ``key = value`` lines),
``snapshot_NNNN.csv`` files (one ``# t=<time>`` header line, a column-name
line, then comma-separated values), ``diagnostics.csv``, and optional
``envelope_diff.csv`` plus ``mrs/`` and ``dqs/`` children for comparison
runs.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

import numpy as np


class RunDataError(Exception):
    """Missing or malformed run data; the message names what is absent."""


def read_manifest(path: str) -> dict:
    if not os.path.isfile(path):
        raise RunDataError(f"missing manifest: {path}")
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or "=" not in line:
                continue
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


@dataclass
class Snapshot:
    time: float
    columns: dict[str, np.ndarray]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]


def read_snapshot(path: str) -> Snapshot:
    with open(path) as fh:
        header = fh.readline().strip()
        match = re.match(r"#\s*t=(.+)", header)
        if not match:
            raise RunDataError(f"{path}: missing '# t=' header line")
        time = float(match.group(1))
        names = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != len(names):
        raise RunDataError(f"{path}: {len(names)} columns declared, "
                           f"{data.shape[1]} found")
    return Snapshot(time=time, columns={n: data[:, i] for i, n in enumerate(names)})


def read_table(path: str) -> dict[str, np.ndarray]:
    with open(path) as fh:
        names = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return {n: data[:, i] for i, n in enumerate(names)}


@dataclass
class RunDirectory:
    """Lazy view of one exported run; validates completeness on load."""

    path: str
    manifest: dict = field(init=False)
    snapshot_paths: list[str] = field(init=False)

    def __post_init__(self):
        self.manifest = read_manifest(os.path.join(self.path, "manifest.txt"))
        self.snapshot_paths = sorted(
            os.path.join(self.path, f) for f in os.listdir(self.path)
            if re.fullmatch(r"snapshot_\d{4}\.csv", f)
        )
        declared = self.manifest.get("snapshot_times", "").split()
        if declared and len(declared) != len(self.snapshot_paths):
            missing = len(declared) - len(self.snapshot_paths)
            raise RunDataError(
                f"{self.path}: manifest declares {len(declared)} snapshots, "
                f"found {len(self.snapshot_paths)} ({missing} missing); "
                f"declared times: {', '.join(declared[:8])}"
                + ("..." if len(declared) > 8 else ""))

    def snapshots(self) -> list[Snapshot]:
        if not self.snapshot_paths:
            raise RunDataError(f"{self.path}: no snapshot files")
        return [read_snapshot(p) for p in self.snapshot_paths]

    def diagnostics(self) -> dict[str, np.ndarray]:
        path = os.path.join(self.path, "diagnostics.csv")
        if not os.path.isfile(path):
            raise RunDataError(f"{self.path}: missing diagnostics.csv")
        return read_table(path)

    def child(self, name: str) -> "RunDirectory":
        sub = os.path.join(self.path, name)
        if not os.path.isdir(sub):
            raise RunDataError(f"{self.path}: missing child run '{name}'")
        return RunDirectory(sub)

    def envelope_diff(self) -> dict[str, np.ndarray]:
        path = os.path.join(self.path, "envelope_diff.csv")
        if not os.path.isfile(path):
            raise RunDataError(f"{self.path}: missing envelope_diff.csv")
        return read_table(path)
