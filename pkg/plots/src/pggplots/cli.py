"""Command line for figure regeneration.

``pggplots render --kind histogram --out fig.png data1.csv data2.csv``
draws one figure; ``pggplots all --samples DIR --out DIR`` regenerates
the full set from a directory laid out like the shipped samples.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .csvio import SchemaError
from .figures import KINDS, FigureSpec, render

__all__ = ["main", "render_sample_set"]


def render_sample_set(samples: Path, outdir: Path) -> list[Path]:
    """The five standard figures from a samples directory."""
    samples = Path(samples)
    outdir = Path(outdir)
    jobs = [
        FigureSpec(
            kind="histogram",
            inputs=tuple(sorted(str(p) for p in samples.glob("histogram_d*.csv"))),
            output=str(outdir / "histogram.png"),
            style={"labels": [p.stem.split("_")[-1] for p in
                              sorted(samples.glob("histogram_d*.csv"))],
                   "title": "equilibrium counts under random parameters"},
        ),
        FigureSpec(
            kind="trajectories",
            inputs=tuple(sorted(str(p) for p in samples.glob("trajectory_*.csv"))),
            output=str(outdir / "trajectories.png"),
            style={"title": "approach to the stable equilibria"},
        ),
        FigureSpec(
            kind="bifurcation",
            inputs=(str(samples / "bifurcation.csv"),),
            output=str(outdir / "bifurcation.png"),
            style={"title": "equilibria versus the additive mutation rate",
                   "ylim": (0.0, 1.0)},
        ),
        FigureSpec(
            kind="surface",
            inputs=(str(samples / "surface.csv"),),
            output=str(outdir / "surface.png"),
            style={"title": "interior equilibrium against both mutations",
                   "zlabel": "equilibrium"},
        ),
        FigureSpec(
            kind="regions",
            inputs=(str(samples / "regions_cr.csv"),),
            output=str(outdir / "regions.png"),
            style={"xlabel": "c", "ylabel": "r",
                   "title": "root-count regions"},
        ),
    ]
    return [render(job) for job in jobs]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="pggplots")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="draw one figure")
    p_render.add_argument("--kind", required=True, choices=sorted(KINDS))
    p_render.add_argument("--out", required=True)
    p_render.add_argument("--title")
    p_render.add_argument("inputs", nargs="+")

    p_all = sub.add_parser("all", help="regenerate the standard figure set")
    p_all.add_argument("--samples", required=True)
    p_all.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "render":
            style = {"title": args.title} if args.title else {}
            path = render(FigureSpec(kind=args.kind, inputs=tuple(args.inputs),
                                     output=args.out, style=style))
            print(path)
        else:
            for path in render_sample_set(Path(args.samples), Path(args.out)):
                print(path)
        return 0
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
