"""Truncation / quadrature budgets and the value-with-error result type."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


class SumResult(NamedTuple):
    """A truncated sum together with an a-posteriori tail bound."""

    value: complex
    tail_bound: float


@dataclass(frozen=True)
class TruncationBudget:
    """Error budget shared by series, lattice sums and quadratures.

    Every routine that truncates reports an error estimate <= its tolerance
    or raises ``BudgetError``.
    """

    series_tol: float = 1e-12
    quad_tol: float = 1e-10
    max_terms: int = 200_000
    quad_max_depth: int = 12

    def __post_init__(self) -> None:
        if self.series_tol <= 0 or self.quad_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_terms < 1 or self.quad_max_depth < 1:
            raise ValueError("term/depth budgets must be positive integers")

    def tightened(self, factor: float) -> "TruncationBudget":
        return TruncationBudget(
            series_tol=self.series_tol * factor,
            quad_tol=self.quad_tol * factor,
            max_terms=self.max_terms,
            quad_max_depth=self.quad_max_depth,
        )


@dataclass(frozen=True)
class QuadratureSpec:
    """Contour-quadrature controls for the twistor ray integrals.

    The contour is parametrized by zeta' = -u e^s; panels of unit width are
    laid out symmetrically in s and each carries ``nodes_per_panel``
    Gauss-Legendre nodes.  ``s_max`` overrides the automatic cosh-bound
    truncation.  The reported error estimate (node-doubling difference) must
    come out <= ``tol`` or the caller sees ``BudgetError``.
    """

    nodes_per_panel: int = 24
    panel_growth: float = 1.0
    s_max: float | None = None
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.nodes_per_panel < 2:
            raise ValueError("need at least 2 nodes per panel")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


DEFAULT_BUDGET = TruncationBudget()
DEFAULT_QUAD = QuadratureSpec()
