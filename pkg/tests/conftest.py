from __future__ import annotations

import random

import pytest

from coherence_atlas import load_reference_corpus
from coherence_atlas.corpus import (
    AlignmentCell,
    AlignmentEvidence,
    CodedStrategy,
    ComponentCoding,
    Corpus,
    StrategyMeta,
)
from coherence_atlas.taxonomy import (
    ALL_COMPONENTS,
    ComponentKind,
    GovernanceModel,
    Region,
    component_index,
    order_pair,
    parse_component,
)


@pytest.fixture(scope="session")
def reference_corpus() -> Corpus:
    return load_reference_corpus()


def make_meta(country="Testland", year=2019, model=GovernanceModel.MARKET_LED,
              region=Region.EUROPE, title="Test Strategy") -> StrategyMeta:
    return StrategyMeta(country=country, strategy_title=title, publication_year=year,
                        governance_model=model, region=region)


def make_coding(code: str, prominence: int = 2, **kwargs) -> ComponentCoding:
    return ComponentCoding(parse_component(code), prominence, **kwargs)


def make_cell(a: str, b: str, lex=False, ref=False, elab=False) -> AlignmentCell:
    return AlignmentCell(parse_component(a), parse_component(b),
                         AlignmentEvidence(lex, ref, elab))


def make_strategy(codings=(), cells=(), country="Testland", year=2019,
                  model=GovernanceModel.MARKET_LED, region=Region.EUROPE) -> CodedStrategy:
    return CodedStrategy(meta=make_meta(country, year, model, region),
                         codings=tuple(codings), cells=tuple(cells))


def make_corpus(*strategies: CodedStrategy) -> Corpus:
    return Corpus(schema_version="1", strategies=tuple(strategies))


def random_strategy(rng: random.Random, max_components: int = 10,
                    country: str = "Randomia") -> CodedStrategy:
    components = rng.sample(ALL_COMPONENTS, rng.randint(0, max_components))
    codings = []
    for comp in components:
        prominence = rng.randint(1, 3)
        kwargs = {}
        if comp.kind is ComponentKind.INSTRUMENT:
            kwargs["specificity"] = rng.randint(0, 3)
        elif comp.kind is ComponentKind.FORESIGHT:
            kwargs["explicit_method"] = rng.random() < 0.5
        elif rng.random() < 0.8:
            kwargs["intensity_subscores"] = tuple(rng.randint(0, 3) for _ in range(3))
        codings.append(ComponentCoding(comp, prominence, **kwargs))
    cells = []
    for i, a in enumerate(components):
        for b in components[i + 1:]:
            if a.kind is b.kind or rng.random() < 0.5:
                continue
            explicit = rng.random() < 0.6
            evidence = AlignmentEvidence(
                lexical_proximity=rng.random() < 0.5,
                explicit_reference=explicit,
                elaboration=explicit and rng.random() < 0.4,
            )
            cells.append(AlignmentCell(*order_pair(a, b), evidence))
    codings.sort(key=lambda c: component_index(c.component))
    cells.sort(key=lambda c: (component_index(c.a), component_index(c.b)))
    return CodedStrategy(
        meta=make_meta(country=country, year=rng.randint(2017, 2025)),
        codings=tuple(codings),
        cells=tuple(cells),
    )
