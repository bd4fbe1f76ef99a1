"""Alignment scoring: cross-kind matrices, normalization, strategy indices.

Scores are 0-3 intensities. A pair scores 0 when either component is
absent; with both present, the recorded evidence dimensions map to 1-3
(no cell or no true dimension = bare co-existence = 1, all three = 3).
All functions are pure over immutable strategies.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .corpus import AlignmentEvidence, CodedStrategy
from .taxonomy import (
    KIND_PAIRS,
    ComponentId,
    ComponentKind,
    ForesightCategory,
    catalog,
    category_of,
    order_pair,
)


@dataclass(frozen=True)
class AlignmentMatrix:
    row_kind: ComponentKind
    col_kind: ComponentKind
    rows: tuple[ComponentId, ...]
    cols: tuple[ComponentId, ...]
    cells: tuple[tuple[int, ...], ...]

    def score(self, row: int, col: int) -> int:
        return self.cells[row][col]


@dataclass(frozen=True)
class IndexReport:
    country: str
    objective_coverage: float
    implementation_specificity: float
    strategic_alignment: float
    alignment_coverage: float
    mean_alignment: float


@dataclass(frozen=True)
class ForesightSophistication:
    diversity: float
    integration_depth: float
    inclusivity: float
    composite: float


def score_cell(present_a: bool, present_b: bool, evidence: AlignmentEvidence | None) -> int:
    """0-3 intensity for one component pair."""
    if not (present_a and present_b):
        return 0
    if evidence is None:
        return 1
    return evidence.intensity


def pair_scores(strategy: CodedStrategy) -> dict[tuple[str, str], int]:
    """Scores for every co-present cross-kind pair, keyed by canonical codes."""
    cells = strategy.cell_map()
    out: dict[tuple[str, str], int] = {}
    for row_kind, col_kind in KIND_PAIRS:
        rows = strategy.present_components(row_kind)
        cols = strategy.present_components(col_kind)
        for r in rows:
            for c in cols:
                a, b = order_pair(r, c)
                key = (a.code, b.code)
                cell = cells.get(key)
                out[key] = 1 if cell is None else cell.evidence.intensity
    return out


def build_matrix(strategy: CodedStrategy, row_kind: ComponentKind,
                 col_kind: ComponentKind) -> AlignmentMatrix:
    """Dense score grid over the full catalogs for one kind pair."""
    if row_kind is col_kind:
        raise ValueError("matrix requires two distinct component kinds")
    present = {c.code for c in strategy.present_components()}
    cells_by_key = strategy.cell_map()
    rows = catalog(row_kind)
    cols = catalog(col_kind)
    grid = []
    for r in rows:
        line = []
        for c in cols:
            if r.code in present and c.code in present:
                a, b = order_pair(r, c)
                cell = cells_by_key.get((a.code, b.code))
                line.append(1 if cell is None else cell.evidence.intensity)
            else:
                line.append(0)
        grid.append(tuple(line))
    return AlignmentMatrix(row_kind=row_kind, col_kind=col_kind,
                           rows=rows, cols=cols, cells=tuple(grid))


def matrix_to_csv(matrix: AlignmentMatrix) -> bytes:
    """CSV grid with canonical codes as row/column headers."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + [c.code for c in matrix.cols])
    for comp, line in zip(matrix.rows, matrix.cells):
        writer.writerow([comp.code] + list(line))
    return buf.getvalue().encode("utf-8")


def normalized_alignment(strategy: CodedStrategy) -> float:
    """Total score over co-present pairs divided by the 3-point maximum."""
    scores = pair_scores(strategy)
    if not scores:
        return 0.0
    return sum(scores.values()) / (3 * len(scores))


def strategic_alignment_index(strategy: CodedStrategy) -> float:
    return normalized_alignment(strategy)


def objective_coverage_index(strategy: CodedStrategy) -> float:
    return len(strategy.present_components(ComponentKind.OBJECTIVE)) / 12


def implementation_specificity_index(strategy: CodedStrategy) -> float:
    """Mean specificity/3 over present instruments; 0 without instruments."""
    coding = strategy.coding_map()
    values = [
        (coding[c.code].specificity or 0) / 3
        for c in strategy.present_components(ComponentKind.INSTRUMENT)
    ]
    if not values:
        return 0.0
    return sum(values) / len(values)


def alignment_coverage(strategy: CodedStrategy) -> float:
    """Share of co-present pairs scoring >= 2 (explicitly linked)."""
    scores = pair_scores(strategy)
    if not scores:
        return 0.0
    return sum(1 for v in scores.values() if v >= 2) / len(scores)


def mean_alignment_score(strategy: CodedStrategy) -> float:
    """Mean 1-3 intensity over co-present pairs; 0 when none exist."""
    scores = pair_scores(strategy)
    if not scores:
        return 0.0
    return sum(scores.values()) / len(scores)


def objective_intensity(strategy: CodedStrategy, objective: ComponentId) -> float:
    """Mean of the three objective subscores; 0 if absent or unscored."""
    if objective.kind is not ComponentKind.OBJECTIVE:
        raise ValueError(f"{objective.code} is not an objective")
    coding = strategy.coding_map().get(objective.code)
    if coding is None or coding.prominence < 1 or coding.intensity_subscores is None:
        return 0.0
    return sum(coding.intensity_subscores) / 3


def foresight_sophistication(strategy: CodedStrategy) -> ForesightSophistication:
    """Diversity, integration depth, and inclusivity of foresight use."""
    methods = strategy.present_components(ComponentKind.FORESIGHT)
    diversity = len(methods) / 8
    scores = pair_scores(strategy)
    fi_scores = [
        v for (a, b), v in scores.items()
        if a.startswith("FOR.") and b.startswith("INS.")
    ]
    integration = (sum(fi_scores) / len(fi_scores) / 3) if fi_scores else 0.0
    if methods:
        participatory = sum(
            1 for m in methods if category_of(m) is ForesightCategory.PARTICIPATORY
        )
        inclusivity = participatory / len(methods)
    else:
        inclusivity = 0.0
    composite = (diversity + integration + inclusivity) / 3
    return ForesightSophistication(diversity, integration, inclusivity, composite)


def index_report(strategy: CodedStrategy) -> IndexReport:
    return IndexReport(
        country=strategy.meta.country,
        objective_coverage=objective_coverage_index(strategy),
        implementation_specificity=implementation_specificity_index(strategy),
        strategic_alignment=strategic_alignment_index(strategy),
        alignment_coverage=alignment_coverage(strategy),
        mean_alignment=mean_alignment_score(strategy),
    )
