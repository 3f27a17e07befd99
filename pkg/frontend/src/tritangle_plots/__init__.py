"""Figure rendering for tritangle CSV reports."""

from .recipes import RECIPES, Curve, FigureRecipe, Panel
from .render import RenderError, render, render_all

__all__ = [
    "RECIPES",
    "Curve",
    "FigureRecipe",
    "Panel",
    "RenderError",
    "render",
    "render_all",
]
