"""Declarative descriptions of the nine figure layouts.

Each figure is a grid of panels.  A panel reads one CSV produced by the
``tritangle figure`` command and draws one line per :class:`Curve`.  Curves
select rows either from the whole file (``where=None``) or from the subset
whose leading parameter column matches a given value; the y data is a named
report column, optionally squared.

Nothing here computes physics.  The recipes only name columns and parameter
values that the CSV files already contain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

BAL = 1.0 / math.sqrt(2.0)

#: The colours the captions use.  Everything rendered maps onto these.
PALETTE = ("black", "red", "green", "blue", "orange", "gray", "magenta", "cyan")


@dataclass(frozen=True)
class Curve:
    """One line in a panel.

    ``where`` is ``None`` for single-run CSVs, or ``(column, value)`` to keep
    only the rows whose leading parameter column matches ``value``.  ``square``
    plots the square of the column (used for squared pair concurrences).
    """

    column: str
    color: str
    label: str | None = None
    where: tuple[str, float] | None = None
    square: bool = False

    def __post_init__(self) -> None:
        if self.color not in PALETTE:
            raise ValueError(f"color {self.color!r} is not in the palette")


@dataclass(frozen=True)
class Panel:
    csv_name: str
    xlabel: str
    ylabel: str
    curves: tuple[Curve, ...]
    title: str = ""
    ylim: tuple[float, float] | None = None


@dataclass(frozen=True)
class FigureRecipe:
    figure: str
    rows: int
    cols: int
    panels: tuple[Panel, ...]
    suptitle: str = ""

    def __post_init__(self) -> None:
        if len(self.panels) != self.rows * self.cols:
            raise ValueError(
                f"{self.figure}: {len(self.panels)} panels for a "
                f"{self.rows}x{self.cols} grid"
            )

    def csv_names(self) -> tuple[str, ...]:
        seen: list[str] = []
        for panel in self.panels:
            if panel.csv_name not in seen:
                seen.append(panel.csv_name)
        return tuple(seen)


def _fig1() -> FigureRecipe:
    pair = (
        Curve("c_ab", "black", "C(AB)"),
        Curve("c_ac", "red", "C(AC)"),
        Curve("c_bc", "green", "C(BC)"),
    )
    one_to_other = (
        Curve("c2_a_bc", "blue", "C2(A|BC)"),
        Curve("c2_b_ac", "orange", "C2(B|AC)"),
        Curve("c2_c_ab", "gray", "C2(C|AB)"),
    )
    global_part = (
        Curve("gtc", "magenta", "GTC"),
        Curve("fill", "cyan", "fill"),
    )
    panels = []
    for name, title in (("fig1_left", "D = 0"), ("fig1_right", "D = sqrt(3)")):
        panels.append(Panel(name, "t", "pair concurrence", pair, title=title))
    for name in ("fig1_left", "fig1_right"):
        panels.append(Panel(name, "t", "one-to-other tangle", one_to_other))
    for name in ("fig1_left", "fig1_right"):
        panels.append(Panel(name, "t", "global measures", global_part))
    return FigureRecipe(
        "fig1", 3, 2, tuple(panels), suptitle="evolved gW ring, unitary"
    )


def _fig2() -> FigureRecipe:
    left = Panel(
        "fig2_left",
        "a",
        "entanglement",
        (
            Curve("c2_a_bc", "black", "C2(A|BC)"),
            Curve("gtc", "magenta", "GTC"),
        ),
        title="gGHZ amplitude sweep",
    )
    right = Panel(
        "fig2_right",
        "t",
        "C2(A|BC)",
        (
            Curve("c2_a_bc", "red", "a = 0.25", where=("a", 0.25)),
            Curve("c2_a_bc", "green", "a = 0.5", where=("a", 0.5)),
            Curve("c2_a_bc", "blue", "a = 0.71", where=("a", BAL)),
        ),
        title="evolved gGHZ",
    )
    return FigureRecipe("fig2", 1, 2, (left, right))


def _fig3() -> FigureRecipe:
    # The 1e8 run stands in for the unitary (von Neumann) limit.
    left = Panel(
        "fig3_left",
        "t",
        "C2(A|BC)",
        (
            Curve("c2_a_bc", "black", "unitary limit", where=("gamma", 1e8)),
            Curve("c2_a_bc", "red", "gamma = 100", where=("gamma", 100.0)),
            Curve("c2_a_bc", "green", "gamma = 5", where=("gamma", 5.0)),
            Curve("c2_a_bc", "blue", "gamma = 0.5", where=("gamma", 0.5)),
        ),
        title="B = 0.1",
    )
    right = Panel(
        "fig3_right",
        "t",
        "C2(A|BC)",
        (
            Curve("c2_a_bc", "black", "unitary limit", where=("gamma", 1e8)),
            Curve("c2_a_bc", "magenta", "B = 0.1", where=("B", 0.1)),
            Curve("c2_a_bc", "orange", "B = 0.2", where=("B", 0.2)),
            Curve("c2_a_bc", "cyan", "B = 0.3", where=("B", 0.3)),
        ),
        title="gamma = 0.5",
    )
    return FigureRecipe(
        "fig3", 1, 2, (left, right), suptitle="balanced GHZ, intrinsic decoherence"
    )


def _fig4() -> FigureRecipe:
    # The two runs are identical; the panels split the report columns.
    left = Panel(
        "fig4_left",
        "d",
        "squared pair concurrence",
        (
            Curve("c_ab", "green", "C(AB)^2", square=True),
            Curve("c_bc", "blue", "C(BC)^2", square=True),
        ),
        title="pair channels",
    )
    right = Panel(
        "fig4_right",
        "d",
        "one-to-other tangle",
        (
            Curve("c2_a_bc", "black", "C2(A|BC)"),
            Curve("c2_b_ac", "red", "C2(B|AC)"),
        ),
        title="one-to-other",
    )
    return FigureRecipe(
        "fig4", 1, 2, (left, right), suptitle="W state, phase damping on A"
    )


def _adc_pair(figure: str, suptitle: str) -> FigureRecipe:
    left = Panel(
        f"{figure}_left",
        "a",
        "C2(A|BC)",
        (
            Curve("c2_a_bc", "orange", "d = 0.3", where=("d", 0.3)),
            Curve("c2_a_bc", "blue", "d = 0.5", where=("d", 0.5)),
            Curve("c2_a_bc", "gray", "d = 0.9", where=("d", 0.9)),
        ),
        title="amplitude sweep",
    )
    right = Panel(
        f"{figure}_right",
        "d",
        "C2(A|BC)",
        (
            Curve("c2_a_bc", "black", "a = 0.9", where=("a", 0.9)),
            Curve("c2_a_bc", "red", "a = 0.71", where=("a", BAL)),
            Curve("c2_a_bc", "green", "a = 0.5", where=("a", 0.5)),
        ),
        title="damping sweep",
    )
    return FigureRecipe(figure, 1, 2, (left, right), suptitle=suptitle)


def _fig7() -> FigureRecipe:
    def by_a(column: str) -> tuple[Curve, ...]:
        keys = ((BAL, "black", "0.71"), (0.5, "red", "0.5"), (0.3, "green", "0.3"))
        return tuple(
            Curve(column, color, f"a = {label}", where=("a", a))
            for a, color, label in keys
        )
    by_w = tuple(
        Curve("c2_a_bc", color, f"w = {w}", where=("w", w))
        for w, color in ((0.0, "black"), (0.1, "red"), (0.3, "green"), (0.5, "blue"))
    )
    panels = (
        Panel("fig7_gghz_c2", "t", "C2(A|BC)", by_a("c2_a_bc"), title="gGHZ, tau = 5"),
        Panel("fig7_gghz_gtc", "t", "GTC", by_a("gtc"), title="gGHZ, tau = 5"),
        Panel("fig7_mix_tau2", "t", "C2(A|BC)", by_w, title="GHZ mixture, tau = 2"),
        Panel("fig7_mix_tau20", "t", "C2(A|BC)", by_w, title="GHZ mixture, tau = 20"),
    )
    return FigureRecipe(
        "fig7", 2, 2, panels, suptitle="non-Markovian dephasing on all qubits"
    )


def _fig8() -> FigureRecipe:
    by_p = tuple(
        Curve("c_ab", color, f"p = {p}", where=("p", p))
        for p, color in (
            (0.0, "black"),
            (0.1, "red"),
            (0.5, "green"),
            (0.8, "blue"),
            (1.0, "magenta"),
        )
    )
    panels = []
    for stem, title in (
        ("fig8_w", "W superposition weight"),
        ("fig8_wbar", "flipped-W weight"),
        ("fig8_wwbar", "balanced weight"),
    ):
        panels.append(Panel(f"{stem}_cab", "d", "C(AB)", by_p, title=title))
        panels.append(
            Panel(
                f"{stem}_esd",
                "p",
                "d at sudden death",
                (Curve("d_esd", "black"),),
                title="death point",
            )
        )
    return FigureRecipe(
        "fig8", 3, 2, tuple(panels), suptitle="generalized amplitude damping on A"
    )


def _fig9() -> FigureRecipe:
    by_p = tuple(
        Curve("c_ab", color, f"p = {p}", where=("p", p))
        for p, color in ((0.0, "black"), (0.5, "red"), (1.0, "green"))
    )
    left = Panel("fig9_left", "d", "C(AB)", by_p, title="W component")
    right = Panel("fig9_right", "d", "C(AB)", by_p, title="flipped-W component")
    return FigureRecipe(
        "fig9", 1, 2, (left, right), suptitle="damping endpoints of the mixture"
    )


RECIPES: dict[str, FigureRecipe] = {
    recipe.figure: recipe
    for recipe in (
        _fig1(),
        _fig2(),
        _fig3(),
        _fig4(),
        _adc_pair("fig5", "gGHZ, amplitude damping on one qubit"),
        _adc_pair("fig6", "gGHZ, amplitude damping on all qubits"),
        _fig7(),
        _fig8(),
        _fig9(),
    )
}
