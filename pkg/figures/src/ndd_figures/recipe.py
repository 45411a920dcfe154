"""Figure recipes: JSON descriptions of how to plot one experiment CSV."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional


class UnreadableInputError(Exception):
    """The input CSV is missing, empty, or fails to parse."""


class MissingColumnError(Exception):
    """The recipe references a column absent from the CSV header."""


@dataclass(frozen=True)
class Series:
    """One plotted curve: a CSV column with its legend label and color."""

    column: str
    label: str
    color: Optional[str] = None


@dataclass(frozen=True)
class FigureRecipe:
    """Everything needed to turn one CSV table into one image."""

    input: str
    x: str
    series: List[Series]
    output: str
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    logx: bool = False

    def __post_init__(self) -> None:
        if not self.series:
            raise ValueError("a recipe needs at least one series")

    @classmethod
    def from_json(cls, path: Path) -> "FigureRecipe":
        with open(path) as handle:
            raw = json.load(handle)
        series = [Series(**entry) for entry in raw.pop("series")]
        return cls(series=series, **raw)
