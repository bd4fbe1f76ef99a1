"""Inter-coder agreement statistics and the consensus acceptance gate.

Kappas are computed in exact rational arithmetic and converted to float
at the end, so perfect agreement is exactly 1.0 and the 0.7 gate boundary
is not blurred by rounding.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Hashable, Sequence

from .corpus import Corpus, _derived_score
from .errors import AnalysisError
from .taxonomy import ALL_COMPONENTS, component_index, order_pair, parse_component

GATE_THRESHOLD = 0.7

ORDINAL_CATEGORIES = 4  # scores 0..3


class WeightScheme(Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class ReliabilityReport:
    kappa_identification: float
    kappa_alignment_weighted: float
    n_identification_decisions: int
    n_alignment_decisions: int
    passes_gate: bool


def cohen_kappa(labels_a: Sequence[Hashable], labels_b: Sequence[Hashable]) -> float:
    """Chance-corrected categorical agreement.

    kappa = (p_o - p_e) / (1 - p_e) with chance agreement p_e from the
    product of marginals. Degenerate single-category case (p_e = 1)
    returns 1 for full agreement, else 0.
    """
    if len(labels_a) != len(labels_b):
        raise AnalysisError(f"label sequences differ in length ({len(labels_a)} vs {len(labels_b)})")
    n = len(labels_a)
    if n == 0:
        raise AnalysisError("empty label sequences")
    observed = sum(1 for x, y in zip(labels_a, labels_b) if x == y)
    marg_a = Counter(labels_a)
    marg_b = Counter(labels_b)
    p_o = Fraction(observed, n)
    p_e = Fraction(sum(marg_a[c] * marg_b[c] for c in marg_a), n * n)
    if p_e == 1:
        return 1.0 if p_o == 1 else 0.0
    return float((p_o - p_e) / (1 - p_e))


def weighted_kappa(scores_a: Sequence[int], scores_b: Sequence[int],
                   weights: WeightScheme = WeightScheme.LINEAR) -> float:
    """Weighted agreement over the 0-3 ordinal scale.

    kappa_w = 1 - sum(w * observed) / sum(w * expected), disagreement
    weights |i-j|/3 (linear) or ((i-j)/3)^2 (quadratic).
    """
    if len(scores_a) != len(scores_b):
        raise AnalysisError(f"score sequences differ in length ({len(scores_a)} vs {len(scores_b)})")
    n = len(scores_a)
    if n == 0:
        raise AnalysisError("empty score sequences")
    k = ORDINAL_CATEGORIES
    for v in (*scores_a, *scores_b):
        if not 0 <= v <= k - 1:
            raise AnalysisError(f"score {v} outside 0..{k - 1}")

    table = [[0] * k for _ in range(k)]
    for x, y in zip(scores_a, scores_b):
        table[x][y] += 1
    row = [sum(table[i]) for i in range(k)]
    col = [sum(table[i][j] for i in range(k)) for j in range(k)]

    def weight(i: int, j: int) -> Fraction:
        if weights is WeightScheme.LINEAR:
            return Fraction(abs(i - j), k - 1)
        return Fraction((i - j) ** 2, (k - 1) ** 2)

    observed = sum(weight(i, j) * table[i][j] for i in range(k) for j in range(k))
    expected = Fraction(
        sum(weight(i, j) * row[i] * col[j] for i in range(k) for j in range(k)), n
    )
    if expected == 0:
        return 1.0 if observed == 0 else 0.0
    return float(1 - Fraction(observed) / expected)


def reliability_report(a: Corpus, b: Corpus) -> ReliabilityReport:
    """Agreement statistics over two coder streams of the same countries.

    Identification decisions cover every (strategy, catalog component)
    presence call; alignment decisions cover derived 0-3 scores for pairs
    both coders marked co-present, with linear weights.
    """
    by_a, by_b = a.by_country(), b.by_country()
    if set(by_a) != set(by_b):
        raise AnalysisError("country sets differ between coders")

    id_a: list[int] = []
    id_b: list[int] = []
    align_a: list[int] = []
    align_b: list[int] = []
    for country in sorted(by_a):
        sa, sb = by_a[country], by_b[country]
        present_a = {c.code for c in sa.present_components()}
        present_b = {c.code for c in sb.present_components()}
        for comp in ALL_COMPONENTS:
            id_a.append(int(comp.code in present_a))
            id_b.append(int(comp.code in present_b))
        common = sorted(present_a & present_b, key=lambda c: component_index(parse_component(c)))
        cells_a, cells_b = sa.cell_map(), sb.cell_map()
        for i, x in enumerate(common):
            for y in common[i + 1:]:
                cx, cy = parse_component(x), parse_component(y)
                if cx.kind is cy.kind:
                    continue
                p, q = order_pair(cx, cy)
                key = (p.code, q.code)
                align_a.append(_derived_score(cells_a, key))
                align_b.append(_derived_score(cells_b, key))

    kappa_id = cohen_kappa(id_a, id_b)
    if align_a:
        kappa_align = weighted_kappa(align_a, align_b, WeightScheme.LINEAR)
    else:
        kappa_align = 1.0  # no shared pairs to disagree about
    return ReliabilityReport(
        kappa_identification=kappa_id,
        kappa_alignment_weighted=kappa_align,
        n_identification_decisions=len(id_a),
        n_alignment_decisions=len(align_a),
        passes_gate=kappa_id > GATE_THRESHOLD and kappa_align > GATE_THRESHOLD,
    )
