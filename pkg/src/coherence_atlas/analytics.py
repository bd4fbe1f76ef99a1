"""Corpus-level comparative analytics: prevalence, profiles, trends,
strongest pairs, and Pearson correlation with exact t-tail significance.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from ._stats import student_t_two_tailed
from .alignment import (
    IndexReport,
    build_matrix,
    index_report,
    objective_intensity,
    pair_scores,
)
from .corpus import Corpus
from .errors import AnalysisError, CorpusParseError
from .taxonomy import (
    KIND_PAIRS,
    ComponentId,
    ComponentKind,
    catalog,
    order_pair,
)


class Grouping(Enum):
    MODEL = "model"
    REGION = "region"
    WAVE = "wave"


class Wave(Enum):
    WAVE1 = "wave1"  # 2017-2018
    WAVE2 = "wave2"  # 2019-2020
    WAVE3 = "wave3"  # 2021-2025


WAVE_YEARS = {
    Wave.WAVE1: (2017, 2018),
    Wave.WAVE2: (2019, 2020),
    Wave.WAVE3: (2021, 2025),
}


def wave_of(year: int) -> Wave:
    """Publication wave for a year; out-of-range years clamp to the edges."""
    if year <= 2018:
        return Wave.WAVE1
    if year <= 2020:
        return Wave.WAVE2
    return Wave.WAVE3


@dataclass(frozen=True)
class PrevalenceEntry:
    component: ComponentId
    count: int
    percent: float
    percent_rounded: int


@dataclass(frozen=True)
class PrevalenceTable:
    kind: ComponentKind
    n_strategies: int
    entries: tuple[PrevalenceEntry, ...]

    def entry(self, code: str) -> PrevalenceEntry:
        for e in self.entries:
            if e.component.code == code:
                return e
        raise KeyError(code)


@dataclass(frozen=True)
class GroupProfile:
    group_key: str
    members: tuple[str, ...]
    mean_indices: dict[str, float]
    mean_matrices: dict[str, tuple[tuple[float, ...], ...]]


@dataclass(frozen=True)
class PairPrevalence:
    pair: tuple[str, str]
    count: int
    percent: float


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p_two_tailed: float
    n: int


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def prevalence(corpus: Corpus, kind: ComponentKind) -> PrevalenceTable:
    """Per-component presence counts and percentages over the corpus."""
    n = len(corpus.strategies)
    if n == 0:
        raise AnalysisError("prevalence is undefined for an empty corpus")
    counts = {c.code: 0 for c in catalog(kind)}
    for strategy in corpus.strategies:
        for comp in strategy.present_components(kind):
            counts[comp.code] += 1
    entries = tuple(
        PrevalenceEntry(
            component=c,
            count=counts[c.code],
            percent=100.0 * counts[c.code] / n,
            percent_rounded=_round_half_up(100.0 * counts[c.code] / n),
        )
        for c in catalog(kind)
    )
    return PrevalenceTable(kind=kind, n_strategies=n, entries=entries)


_MATRIX_KEYS = {
    (ComponentKind.OBJECTIVE, ComponentKind.FORESIGHT): "objective_foresight",
    (ComponentKind.OBJECTIVE, ComponentKind.INSTRUMENT): "objective_instrument",
    (ComponentKind.FORESIGHT, ComponentKind.INSTRUMENT): "foresight_instrument",
}


def matrix_key(row_kind: ComponentKind, col_kind: ComponentKind) -> str:
    return _MATRIX_KEYS[(row_kind, col_kind)]


def group_profile(corpus: Corpus, grouping: Grouping) -> list[GroupProfile]:
    """Mean index and mean per-cell matrix profiles per metadata group."""
    groups: dict[str, list] = {}
    for strategy in corpus.strategies:
        if grouping is Grouping.MODEL:
            key = strategy.meta.governance_model.value
        elif grouping is Grouping.REGION:
            key = strategy.meta.region.value
        else:
            key = wave_of(strategy.meta.publication_year).value
        groups.setdefault(key, []).append(strategy)

    profiles = []
    for key in sorted(groups):
        members = groups[key]
        reports = [index_report(s) for s in members]
        mean_indices = {
            field: sum(getattr(r, field) for r in reports) / len(reports)
            for field in ("objective_coverage", "implementation_specificity",
                          "strategic_alignment", "alignment_coverage", "mean_alignment")
        }
        mean_matrices = {}
        for row_kind, col_kind in KIND_PAIRS:
            grids = [build_matrix(s, row_kind, col_kind).cells for s in members]
            rows = len(grids[0])
            cols = len(grids[0][0])
            mean_matrices[matrix_key(row_kind, col_kind)] = tuple(
                tuple(sum(g[r][c] for g in grids) / len(grids) for c in range(cols))
                for r in range(rows)
            )
        profiles.append(GroupProfile(
            group_key=key,
            members=tuple(sorted(s.meta.country for s in members)),
            mean_indices=mean_indices,
            mean_matrices=mean_matrices,
        ))
    return profiles


def strongest_pairs(corpus: Corpus, min_score: int = 3) -> list[PairPrevalence]:
    """Cross-kind pairs ranked by the share of strategies scoring >= min_score.

    The denominator is the whole corpus: a strategy missing either
    component counts as not connected. Ties keep canonical pair order.
    """
    if not 1 <= min_score <= 3:
        raise AnalysisError(f"min_score {min_score} outside 1..3")
    n = len(corpus.strategies)
    if n == 0:
        raise AnalysisError("strongest_pairs is undefined for an empty corpus")
    counts: dict[tuple[str, str], int] = {}
    pairs: list[tuple[str, str]] = []
    for row_kind, col_kind in KIND_PAIRS:
        for r in catalog(row_kind):
            for c in catalog(col_kind):
                a, b = order_pair(r, c)
                pairs.append((a.code, b.code))
                counts[(a.code, b.code)] = 0
    for strategy in corpus.strategies:
        for key, score in pair_scores(strategy).items():
            if score >= min_score:
                counts[key] += 1
    order = {key: i for i, key in enumerate(pairs)}
    ranked = sorted(pairs, key=lambda k: (-counts[k], order[k]))
    return [
        PairPrevalence(pair=key, count=counts[key], percent=100.0 * counts[key] / n)
        for key in ranked
    ]


def temporal_trends(corpus: Corpus) -> dict[str, dict[str, float]]:
    """Per-wave mean objective intensity, for waves present in the corpus."""
    by_wave: dict[Wave, list] = {}
    for strategy in corpus.strategies:
        by_wave.setdefault(wave_of(strategy.meta.publication_year), []).append(strategy)
    out: dict[str, dict[str, float]] = {}
    for wave in Wave:
        members = by_wave.get(wave)
        if not members:
            continue
        out[wave.value] = {
            obj.code: sum(objective_intensity(s, obj) for s in members) / len(members)
            for obj in catalog(ComponentKind.OBJECTIVE)
        }
    return out


def correlate(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Pearson r with a two-tailed p from the exact t-distribution tail."""
    if len(x) != len(y):
        raise AnalysisError(f"series differ in length ({len(x)} vs {len(y)})")
    n = len(x)
    if n < 3:
        raise AnalysisError(f"need at least 3 observations, got {n}")
    mean_x = sum(x) / n
    mean_y = sum(y) / n
    dx = [v - mean_x for v in x]
    dy = [v - mean_y for v in y]
    ss_x = sum(v * v for v in dx)
    ss_y = sum(v * v for v in dy)
    if ss_x == 0 or ss_y == 0:
        raise AnalysisError("correlation undefined for a constant series")
    r = sum(a * b for a, b in zip(dx, dy)) / math.sqrt(ss_x * ss_y)
    r = max(-1.0, min(1.0, r))
    return CorrelationResult(r=r, p_two_tailed=correlation_p_value(r, n), n=n)


def correlation_p_value(r: float, n: int) -> float:
    """Two-tailed significance of Pearson r at sample size n."""
    if n < 3:
        raise AnalysisError(f"need at least 3 observations, got {n}")
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt(n - 2) / math.sqrt(1.0 - r * r)
    return student_t_two_tailed(t, n - 2)


def country_comparison(corpus: Corpus) -> list[IndexReport]:
    """Index reports per country, sorted by country name."""
    return [index_report(s)
            for s in sorted(corpus.strategies, key=lambda s: s.meta.country)]


def load_indicators(data: bytes | str) -> dict[str, dict[str, float]]:
    """Parse the auxiliary indicator table (country, indicator, value)."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.reader(io.StringIO(data))
    header = next(reader, None)
    if header != ["country", "indicator", "value"]:
        raise CorpusParseError(
            f"indicator file must start with header country,indicator,value, got {header}"
        )
    out: dict[str, dict[str, float]] = {}
    for i, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise CorpusParseError(f"expected 3 columns, got {len(row)}", f"line {i}")
        country, indicator, value = row
        try:
            parsed = float(value)
        except ValueError:
            raise CorpusParseError(f"non-numeric value {value!r}", f"line {i}") from None
        out.setdefault(indicator, {})[country] = parsed
    return out
