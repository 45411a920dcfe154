"""Deterministic headless rendering of a FigureRecipe to an image file."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

from .recipe import FigureRecipe, MissingColumnError, UnreadableInputError


def load_table(path: Path) -> pd.DataFrame:
    """Read an experiment CSV, skipping ``#``-prefixed metadata lines."""
    if not path.is_file():
        raise UnreadableInputError(f"no such input CSV: {path}")
    try:
        table = pd.read_csv(path, comment="#")
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise UnreadableInputError(f"cannot parse {path}: {exc}") from exc
    if table.empty:
        raise UnreadableInputError(f"no data rows in {path}")
    return table


def render(recipe: FigureRecipe, csv_dir: Path, out_dir: Path) -> Path:
    """Plot the recipe's series against its x column; returns the image path."""
    table = load_table(csv_dir / recipe.input)
    wanted = [recipe.x] + [s.column for s in recipe.series]
    missing = [col for col in wanted if col not in table.columns]
    if missing:
        raise MissingColumnError(
            f"{recipe.input} lacks column(s) {missing}; has {list(table.columns)}"
        )

    fig, ax = plt.subplots(figsize=(8.0, 5.0), dpi=120)
    for series in recipe.series:
        ax.plot(
            table[recipe.x],
            table[series.column],
            label=series.label,
            color=series.color,
        )
    if recipe.logx:
        ax.set_xscale("log")
    ax.set_xlabel(recipe.xlabel or recipe.x)
    if recipe.ylabel:
        ax.set_ylabel(recipe.ylabel)
    if recipe.title:
        ax.set_title(recipe.title)
    ax.legend()
    ax.grid(True, alpha=0.3)

    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / recipe.output
    fig.savefig(out_path, metadata={"Software": None})
    plt.close(fig)
    return out_path
