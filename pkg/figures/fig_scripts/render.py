"""Figure rendering from exported run directories.

Four figure types:

  contour-mrs      space-time contour of sqrt(u^2 + v^2) from a coupled run
  contour-dqs      space-time contour of |a| with the minimum marked
  front-detail     final-time overlay of the coupled solution (red) and the
                   reconstructed amplitude-flow solution (black), full view
                   plus zoom near the left front (needs a compare run)
  graph-with-cusp  |a|, Re a, Im a at the snapshot nearest the deepest dip,
                   with an inset zoom on the cusp

Rendering is read-only over the run directory and deterministic for fixed
inputs and library versions; the colormap and contour count are recorded
in the image metadata.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .loader import RunDataError, RunDirectory

FIGURES = ("contour-mrs", "contour-dqs", "front-detail", "graph-with-cusp")
COLORMAP = "viridis"
CONTOUR_LEVELS = 30
DPI = 150


@dataclass
class FigureSpec:
    run_dir: str
    figure: str
    output_image: str

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise ValueError(f"figure must be one of {FIGURES}, got {self.figure!r}")


@dataclass
class RenderResult:
    output_image: str
    metadata: dict


def _metadata(extra: dict | None = None) -> dict:
    meta = {"Software": "reswave-figures",
            "Description": f"colormap={COLORMAP} levels={CONTOUR_LEVELS}"}
    if extra:
        meta["Description"] += " " + " ".join(f"{k}={v}" for k, v in extra.items())
    return meta


def _save(fig, spec: FigureSpec, extra: dict | None = None):
    fig.savefig(spec.output_image, dpi=DPI, metadata=_metadata(extra))
    plt.close(fig)


def _stack_contour(ax, xs, times, field, xlabel, tlabel):
    mesh = ax.pcolormesh(xs, times, field, cmap=COLORMAP, shading="nearest")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(tlabel)
    return mesh


def _descend(run: RunDirectory, child: str) -> RunDirectory:
    """Comparison runs nest their trajectories; fall through to the child
    when the top level has no snapshots of its own."""
    if not run.snapshot_paths:
        return run.child(child)
    return run


def _render_contour_mrs(run: RunDirectory, spec: FigureSpec) -> RenderResult:
    snaps = _descend(run, "mrs").snapshots()
    xs = snaps[0]["x"]
    times = np.array([s.time for s in snaps])
    env = np.stack([np.sqrt(s["u"] ** 2 + s["v"] ** 2) for s in snaps])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    mesh = _stack_contour(ax, xs, times, env, "x", "t")
    fig.colorbar(mesh, ax=ax, label="(u^2 + v^2)^{1/2}")
    ax.set_title("envelope of the coupled sound-wave solution")
    _save(fig, spec)
    return RenderResult(spec.output_image, {"n_snapshots": len(snaps)})


def _render_contour_dqs(run: RunDirectory, spec: FigureSpec) -> RenderResult:
    snaps = _descend(run, "dqs").snapshots()
    zs = snaps[0]["z"]
    times = np.array([s.time for s in snaps])
    mags = np.stack([s["abs_a"] for s in snaps])
    flat = np.argmin(mags)
    i_t, i_z = np.unravel_index(flat, mags.shape)
    min_tau, min_z, min_val = float(times[i_t]), float(zs[i_z]), float(mags[i_t, i_z])

    fig, ax = plt.subplots(figsize=(6, 4.5))
    mesh = _stack_contour(ax, zs, times, mags, "z", "tau")
    fig.colorbar(mesh, ax=ax, label="|a|")
    ax.plot([min_z], [min_tau], marker="x", color="red", markersize=10,
            markeredgewidth=2)
    ax.annotate(f"min |a| = {min_val:.3g}", (min_z, min_tau),
                textcoords="offset points", xytext=(8, 8), color="red")
    ax.set_title("amplitude magnitude")
    extra = {"min_tau": f"{min_tau:.6g}", "min_z": f"{min_z:.6g}",
             "min_abs_a": f"{min_val:.6g}"}
    _save(fig, spec, extra)
    return RenderResult(spec.output_image,
                        {"min_tau": min_tau, "min_z": min_z, "min_abs_a": min_val})


def _reconstructed_u(dqs_snap, eps: float, t: float, mean0: complex = 0.0) -> np.ndarray:
    # the zero-mean amplitude carries the deviation; the spatial mean of
    # the coupled fields rotates separately as (mean_u0 + i mean_v0) e^{-it}
    a = dqs_snap["re_a"] + 1j * dqs_snap["im_a"]
    return 2.0 * eps * (a * np.exp(-1j * t)).real + (mean0 * np.exp(-1j * t)).real


def _render_front_detail(run: RunDirectory, spec: FigureSpec) -> RenderResult:
    mrs = run.child("mrs")
    dqs = run.child("dqs")
    eps = float(run.manifest["epsilon"])
    mean0 = complex(float(run.manifest.get("mean_u0", 0.0)),
                    float(run.manifest.get("mean_v0", 0.0)))
    snap_m = mrs.snapshots()[-1]
    snap_d = dqs.snapshots()[-1]
    x = snap_m["x"]
    u = snap_m["u"]
    u_rec = _reconstructed_u(snap_d, eps, snap_m.time, mean0)

    env = np.sqrt(snap_m["u"] ** 2 + snap_m["v"] ** 2)
    thr = 0.01 * env.max()
    idx = np.nonzero(env > thr)[0]
    left = x[idx[0]] if idx.size else x[0]

    fig, (ax_full, ax_zoom) = plt.subplots(1, 2, figsize=(10, 4))
    for ax, (lo, hi) in ((ax_full, (x[0], x[-1])),
                         (ax_zoom, (left - 0.4, left + 0.6))):
        sel = (x >= lo) & (x <= hi)
        ax.plot(x[sel], u[sel], color="red", lw=1.0, label="coupled solver")
        ax.plot(x[sel], u_rec[sel], color="black", lw=1.0,
                label="amplitude reconstruction")
        ax.set_xlabel("x")
        ax.set_ylabel("u")
    ax_full.set_title(f"u at t = {snap_m.time:.6g}")
    ax_zoom.set_title("detail near the left front")
    ax_full.legend(loc="upper right", fontsize=8)
    _save(fig, spec, {"t": f"{snap_m.time:.6g}"})
    return RenderResult(spec.output_image, {"t": snap_m.time, "front_left": float(left)})


def _render_graph_with_cusp(run: RunDirectory, spec: FigureSpec) -> RenderResult:
    snaps = run.snapshots()
    mins = [float(np.min(s["abs_a"])) for s in snaps]
    i_best = int(np.argmin(mins))
    snap = snaps[i_best]
    z = snap["z"]
    i_z = int(np.argmin(snap["abs_a"]))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(z, snap["abs_a"], color="blue", lw=1.0, label="|a|")
    ax.plot(z, snap["re_a"], color="red", lw=0.8, label="Re a")
    ax.plot(z, snap["im_a"], color="green", lw=0.8, label="Im a")
    ax.set_xlabel("z")
    ax.set_title(f"solution at tau = {snap.time:.6g}")
    ax.legend(loc="upper right", fontsize=8)

    # inset zoomed on the cusp
    half = max(8, len(z) // 64)
    lo, hi = max(0, i_z - half), min(len(z), i_z + half)
    inset = ax.inset_axes([0.08, 0.08, 0.34, 0.34])
    inset.plot(z[lo:hi], snap["abs_a"][lo:hi], color="blue", lw=1.0)
    inset.set_title("cusp detail", fontsize=7)
    inset.tick_params(labelsize=6)
    extra = {"tau": f"{snap.time:.6g}", "cusp_z": f"{z[i_z]:.6g}"}
    _save(fig, spec, extra)
    return RenderResult(spec.output_image,
                        {"tau": snap.time, "cusp_z": float(z[i_z]),
                         "min_abs_a": mins[i_best]})


def render(spec: FigureSpec) -> RenderResult:
    """Render one figure; returns the image path and marker metadata."""
    run = RunDirectory(spec.run_dir)
    if spec.figure == "contour-mrs":
        return _render_contour_mrs(run, spec)
    if spec.figure == "contour-dqs":
        return _render_contour_dqs(run, spec)
    if spec.figure == "front-detail":
        return _render_front_detail(run, spec)
    return _render_graph_with_cusp(run, spec)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="reswave-figure",
        description="regenerate figures from an exported run directory")
    parser.add_argument("--run-dir", required=True)
    parser.add_argument("--figure", required=True, choices=FIGURES)
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        result = render(FigureSpec(args.run_dir, args.figure, args.out))
    except RunDataError as exc:
        print(f"run data error: {exc}", file=sys.stderr)
        return 1
    print(result.output_image)
    return 0


if __name__ == "__main__":
    sys.exit(main())
