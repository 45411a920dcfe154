"""Batch rendering of experiment CSV tables into line-plot figures."""

from .recipe import FigureRecipe, MissingColumnError, Series, UnreadableInputError
from .render import render

__version__ = "0.1.0"

__all__ = [
    "FigureRecipe",
    "MissingColumnError",
    "Series",
    "UnreadableInputError",
    "render",
]
