"""Command line batch renderer.

Usage: ``render_figures <recipes-dir> <csv-dir> <out-dir>``. Every ``*.json``
recipe in the recipes directory is rendered against the CSV directory. Exit
code 0 when every recipe rendered; 1 when any recipe failed (each failure is
reported on stderr and the remaining recipes are still attempted).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .recipe import FigureRecipe, MissingColumnError, UnreadableInputError
from .render import render


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render experiment CSV tables into publication-style figures.",
    )
    parser.add_argument("recipes_dir", type=Path)
    parser.add_argument("csv_dir", type=Path)
    parser.add_argument("out_dir", type=Path)
    args = parser.parse_args(argv)

    recipe_paths = sorted(args.recipes_dir.glob("*.json"))
    if not recipe_paths:
        print(f"error: no-recipes: nothing matching *.json in {args.recipes_dir}", file=sys.stderr)
        return 1

    failures = 0
    for path in recipe_paths:
        try:
            recipe = FigureRecipe.from_json(path)
            out = render(recipe, args.csv_dir, args.out_dir)
        except MissingColumnError as exc:
            print(f"error: missing-column: {path.name}: {exc}", file=sys.stderr)
            failures += 1
        except UnreadableInputError as exc:
            print(f"error: unreadable-input: {path.name}: {exc}", file=sys.stderr)
            failures += 1
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            print(f"error: bad-recipe: {path.name}: {exc}", file=sys.stderr)
            failures += 1
        else:
            print(out)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
