"""Turn tritangle CSV output into figure files.

The renderer never recomputes physics: it reads the delimited report files
that ``tritangle figure`` wrote and draws the curves the recipes describe.
Output is SVG with a pinned hash salt and no timestamp metadata, so rendering
the same CSVs twice produces byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt

from .recipes import RECIPES, Curve, Panel

__all__ = ["RenderError", "render", "render_all", "main"]

_HASHSALT = "tritangle-plots"


class RenderError(RuntimeError):
    """A figure cannot be rendered from the CSVs on disk."""


def _read_table(path: Path) -> tuple[list[str], list[list[str]]]:
    if not path.is_file():
        raise RenderError(f"missing CSV file: {path}")
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise RenderError(f"empty CSV file: {path}") from None
        rows = [row for row in reader if row]
    return header, rows


def _column_index(header: list[str], column: str, path: Path) -> int:
    try:
        return header.index(column)
    except ValueError:
        raise RenderError(f"column {column!r} not found in {path}") from None


def _matches(cell: str, value: float) -> bool:
    try:
        parsed = float(cell)
    except ValueError:
        return False
    return math.isclose(parsed, value, rel_tol=1e-9, abs_tol=1e-12)


def _curve_points(
    table: tuple[list[str], list[list[str]]],
    curve: Curve,
    path: Path,
) -> tuple[list[float], list[float]]:
    header, rows = table
    # The sweep axis is always the "t/param" column; the panel's xlabel only
    # names what that parameter is.
    x_idx = _column_index(header, "t/param", path)
    y_idx = _column_index(header, curve.column, path)
    if curve.where is not None:
        key_idx = _column_index(header, curve.where[0], path)
    xs: list[float] = []
    ys: list[float] = []
    for row in rows:
        if curve.where is not None and not _matches(row[key_idx], curve.where[1]):
            continue
        cell = row[y_idx]
        if cell == "":
            continue
        value = float(cell)
        xs.append(float(row[x_idx]))
        ys.append(value * value if curve.square else value)
    return xs, ys


def _draw_panel(ax: plt.Axes, panel: Panel, csv_dir: Path) -> None:
    path = csv_dir / f"{panel.csv_name}.csv"
    table = _read_table(path)
    labelled = False
    for curve in panel.curves:
        xs, ys = _curve_points(table, curve, path)
        ax.plot(xs, ys, color=curve.color, linewidth=1.1, label=curve.label)
        labelled = labelled or curve.label is not None
    ax.set_xlabel(panel.xlabel)
    ax.set_ylabel(panel.ylabel)
    if panel.title:
        ax.set_title(panel.title, fontsize=9)
    if panel.ylim is not None:
        ax.set_ylim(*panel.ylim)
    if labelled:
        ax.legend(fontsize=7, frameon=False)


def render(figure: str, csv_dir: Path | str, out_file: Path | str) -> Path:
    """Render one figure from the CSVs in ``csv_dir`` to ``out_file``."""
    try:
        recipe = RECIPES[figure]
    except KeyError:
        known = ", ".join(sorted(RECIPES))
        raise RenderError(f"unknown figure {figure!r} (expected one of {known})") from None
    csv_dir = Path(csv_dir)
    out_file = Path(out_file)
    out_file.parent.mkdir(parents=True, exist_ok=True)

    plt.rcParams["svg.hashsalt"] = _HASHSALT
    fig, axes = plt.subplots(
        recipe.rows,
        recipe.cols,
        figsize=(4.8 * recipe.cols, 3.1 * recipe.rows),
        squeeze=False,
    )
    try:
        for ax, panel in zip(axes.ravel(), recipe.panels):
            _draw_panel(ax, panel, csv_dir)
        if recipe.suptitle:
            fig.suptitle(recipe.suptitle, fontsize=11)
        fig.tight_layout()
        fig.savefig(out_file, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return out_file


def render_all(
    csv_dir: Path | str,
    out_dir: Path | str,
    only: str | None = None,
) -> tuple[list[Path], list[str]]:
    """Render every figure whose CSVs are present.

    Figures with no CSV on disk at all are skipped and reported in the second
    return value.  A figure with some but not all of its CSVs raises, naming
    the missing file, as does a directory that yields nothing.
    """
    csv_dir = Path(csv_dir)
    out_dir = Path(out_dir)
    figures = [only] if only is not None else sorted(RECIPES)
    if only is not None and only not in RECIPES:
        known = ", ".join(sorted(RECIPES))
        raise RenderError(f"unknown figure {only!r} (expected one of {known})")

    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    skipped: list[str] = []
    first_missing: Path | None = None
    for figure in figures:
        recipe = RECIPES[figure]
        paths = [csv_dir / f"{name}.csv" for name in recipe.csv_names()]
        present = [path for path in paths if path.is_file()]
        if not present:
            skipped.append(figure)
            if first_missing is None:
                first_missing = paths[0]
            continue
        # Partially present input is an error, not a silent skip; render()
        # raises with the name of the first file it cannot read.
        written.append(render(figure, csv_dir, out_dir / f"{figure}.svg"))
    if not written:
        raise RenderError(f"no figures rendered; missing CSV file: {first_missing}")
    return written, skipped


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render tritangle report CSVs into SVG figures.",
    )
    parser.add_argument("csv_dir", type=Path, help="directory holding the CSV files")
    parser.add_argument("out_dir", type=Path, help="directory for the rendered images")
    parser.add_argument(
        "--only",
        metavar="figN",
        help="render a single figure (fig1 .. fig9) instead of all of them",
    )
    args = parser.parse_args(argv)
    try:
        written, skipped = render_all(args.csv_dir, args.out_dir, only=args.only)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    for figure in skipped:
        print(f"skipped {figure}: no CSV data", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
