"""Regenerate the shipped sample CSVs through the pggdyn CLI.

Run from this directory with the pggdyn package installed:

    python3 make_samples.py

Every file is produced by CLI invocations only, so the plotting layer
and its samples stay decoupled from the simulation internals.  The
surface and region grids are assembled from one `equilibria` run per
grid node.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from pggdyn.cli import main as pggdyn

HERE = Path(__file__).parent

THREE_ROOT_FLAGS = ["--d", "6", "--b", "0.2", "--a", "1.1", "--delta", "18.68",
                    "--r", "1.18", "--omega", "0.039", "--mu", "0.614",
                    "--q", "0.08", "--c", "11.38"]


def run(args: list[str]) -> None:
    rc = pggdyn(args)
    if rc != 0:
        raise SystemExit(f"pggdyn {' '.join(args)} failed with {rc}")


def histograms() -> None:
    for d in (3, 6, 9, 12):
        run(["sample", "--d", str(d), "--iters", "4000", "--seed", "7",
             "--out", str(HERE / f"histogram_d{d:02d}")])


def trajectories() -> None:
    for i, x0 in enumerate((0.05, 0.15, 0.35, 0.5, 0.75, 0.98)):
        run(["simulate", *THREE_ROOT_FLAGS, "--x0", str(x0), "--t-end", "25",
             "--dt", "0.01", "--out", str(HERE / f"trajectory_{i:02d}")])


def bifurcation() -> None:
    run(["bifurcate", *THREE_ROOT_FLAGS, "--grid", "1024",
         "--out", str(HERE / "bifurcation")])


def _roots_of(args: list[str], workdir: Path) -> list[float]:
    out = workdir / "probe"
    run(["equilibria", *args, "--out", str(out), "--format", "json"])
    payload = json.loads(out.with_suffix(".json").read_text())
    return [r["x"] for r in payload["roots"]]


def surface() -> None:
    """Interior equilibrium of the incentive-free dynamics over (mu, q)."""
    rows = ["mu,q,x"]
    with tempfile.TemporaryDirectory() as tmp:
        workdir = Path(tmp)
        for i in range(15):
            mu = 0.05 + 0.9 * i / 14
            for j in range(15):
                q = 0.025 + 0.45 * j / 14
                roots = _roots_of(
                    ["--d", "7", "--r", "5", "--c", "10", "--q", f"{q:.6f}",
                     "--mu", f"{mu:.6f}", "--delta", "0", "--a", "1",
                     "--b", "1", "--omega", "0.5"], workdir)
                rows.append(f"{mu:.6f},{q:.6f},{roots[0]:.17g}")
    (HERE / "surface.csv").write_text("\n".join(rows) + "\n", newline="\n")


def regions() -> None:
    """Observed root-count regions over (c, r) at fixed mutation rates."""
    rows = ["x,y,region"]
    with tempfile.TemporaryDirectory() as tmp:
        workdir = Path(tmp)
        for i in range(25):
            c = 0.25 + 4.75 * i / 24
            for j in range(25):
                r = 1.2 + 7.6 * j / 24
                n = len(_roots_of(
                    ["--d", "9", "--r", f"{r:.6f}", "--c", f"{c:.6f}",
                     "--q", "0.1475", "--mu", "0.3", "--delta", "1",
                     "--a", "1", "--b", "1", "--omega", "0.5"], workdir))
                rows.append(f"{c:.6f},{r:.6f},{n}")
    (HERE / "regions_cr.csv").write_text("\n".join(rows) + "\n", newline="\n")


if __name__ == "__main__":
    histograms()
    trajectories()
    bifurcation()
    surface()
    regions()
    for stray in HERE.glob("*.manifest.json"):
        pass  # manifests document the runs; keep them alongside the data
    print("samples written to", HERE)
