#!/usr/bin/env python3
"""Build the bundled 20-country reference corpus.

Per-country component sets and cell assignments are fixed tables chosen
so the corpus reproduces the toolkit's documented aggregate targets
exactly: component prevalence percentages, the strongest-pair ranking
(85/80/70/65 at score 3), and alignment-coverage extrema of 0.35 and
~0.78. Every target is asserted before the file is written; rerunning
the script is idempotent.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from coherence_atlas.alignment import alignment_coverage, pair_scores
from coherence_atlas.analytics import prevalence, strongest_pairs
from coherence_atlas.corpus import (
    AlignmentCell,
    AlignmentEvidence,
    CodedStrategy,
    ComponentCoding,
    Corpus,
    StrategyMeta,
    dump_corpus,
    load_corpus,
    validate,
)
from coherence_atlas.taxonomy import (
    KIND_PAIRS,
    ComponentKind,
    ForesightCategory,
    GovernanceModel,
    InstrumentCategory,
    ObjectiveCategory,
    Region,
    category_of,
    component_index,
    order_pair,
    parse_component,
)

OUT_PATH = Path(__file__).resolve().parents[1] / "src" / "coherence_atlas" / "data" / "reference_corpus.json"

O = "OBJ."
F = "FOR."
I = "INS."


def _codes(prefix: str, names: str) -> list[str]:
    return [prefix + n for n in names.split()]


# country: (title, year, model, region, objectives, foresight, instruments,
#           target count of pairs scoring >= 2)
COUNTRIES: dict[str, tuple] = {
    "Canada": (
        "Pan-Canadian AI Strategy", 2017, "market_led", "north_america",
        _codes(O, "ECON_COMP SCI_LEAD WORKFORCE ETHICS INTL_COLLAB"),
        _codes(F, "HORIZON EXPERT_PANEL TREND"),
        _codes(I, "FUNDING SKILLS REGULATION TAX NETWORK INTL_AGREE"),
        42,
    ),
    "China": (
        "New Generation AI Development Plan", 2017, "state_directed", "east_asia",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR REG_FRAME INTL_COLLAB NAT_SEC"),
        _codes(F, "HORIZON EXPERT_PANEL ROADMAP TREND"),
        _codes(I, "FUNDING INSTITUTION PROCUREMENT STANDARDS DEMO"),
        41,
    ),
    "Finland": (
        "Finland's AI Era", 2017, "rights_based", "europe",
        _codes(O, "ECON_COMP SCI_LEAD PUB_SECTOR WORKFORCE SOC_WELFARE ETHICS REG_FRAME DATA_ECO"),
        _codes(F, "HORIZON SCENARIO DELPHI EXPERT_PANEL WORKSHOP"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION STANDARDS NETWORK"),
        92,
    ),
    "France": (
        "AI for Humanity", 2018, "state_directed", "europe",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR WORKFORCE SOC_WELFARE ETHICS "
                  "REG_FRAME DATA_ECO INTL_COLLAB NAT_SEC"),
        _codes(F, "HORIZON SCENARIO DELPHI EXPERT_PANEL CROSS_IMPACT"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION PROCUREMENT TAX STANDARDS NETWORK INTL_AGREE"),
        103,
    ),
    "Germany": (
        "AI Strategy for Germany", 2018, "risk_focused", "europe",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR WORKFORCE SOC_WELFARE ETHICS "
                  "REG_FRAME INTL_COLLAB ENV_SUST"),
        _codes(F, "SCENARIO DELPHI EXPERT_PANEL ROADMAP WORKSHOP CROSS_IMPACT"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION PROCUREMENT STANDARDS DEMO NETWORK INTL_AGREE"),
        143,
    ),
    "India": (
        "National Strategy for AI", 2018, "hybrid", "south_asia",
        _codes(O, "ECON_COMP IND_DIGI WORKFORCE SOC_WELFARE ETHICS DATA_ECO NAT_SEC"),
        _codes(F, "ROADMAP TREND"),
        _codes(I, "FUNDING SKILLS PROCUREMENT TAX DEMO"),
        27,
    ),
    "Japan": (
        "AI Strategy 2019", 2019, "market_led", "east_asia",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR WORKFORCE ETHICS INTL_COLLAB NAT_SEC"),
        _codes(F, "HORIZON DELPHI EXPERT_PANEL ROADMAP TREND"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION PROCUREMENT TAX STANDARDS DEMO NETWORK INTL_AGREE"),
        99,
    ),
    "Netherlands": (
        "Strategic Action Plan for AI", 2019, "rights_based", "europe",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR SOC_WELFARE ETHICS REG_FRAME "
                  "DATA_ECO INTL_COLLAB ENV_SUST"),
        _codes(F, "HORIZON SCENARIO EXPERT_PANEL WORKSHOP CROSS_IMPACT"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION STANDARDS NETWORK INTL_AGREE"),
        108,
    ),
    "Norway": (
        "National Strategy for AI", 2020, "rights_based", "europe",
        _codes(O, "ECON_COMP SCI_LEAD PUB_SECTOR SOC_WELFARE ETHICS REG_FRAME INTL_COLLAB ENV_SUST"),
        _codes(F, "HORIZON SCENARIO EXPERT_PANEL WORKSHOP"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION NETWORK INTL_AGREE"),
        75,
    ),
    "Singapore": (
        "National AI Strategy", 2019, "state_directed", "southeast_asia",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR ETHICS DATA_ECO INTL_COLLAB"),
        _codes(F, "HORIZON EXPERT_PANEL ROADMAP TREND"),
        _codes(I, "FUNDING SKILLS INSTITUTION PROCUREMENT STANDARDS DEMO"),
        52,
    ),
    "South Korea": (
        "National Strategy for AI", 2019, "hybrid", "east_asia",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR WORKFORCE SOC_WELFARE ETHICS "
                  "REG_FRAME DATA_ECO NAT_SEC"),
        _codes(F, "SCENARIO DELPHI EXPERT_PANEL ROADMAP CROSS_IMPACT"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION PROCUREMENT TAX STANDARDS DEMO"),
        97,
    ),
    "UAE": (
        "National AI Strategy 2031", 2019, "state_directed", "middle_east",
        _codes(O, "ECON_COMP IND_DIGI NAT_SEC"),
        _codes(F, "ROADMAP"),
        _codes(I, "PROCUREMENT DEMO"),
        5,
    ),
    "United Kingdom": (
        "National AI Strategy", 2021, "market_led", "europe",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR WORKFORCE ETHICS REG_FRAME "
                  "DATA_ECO INTL_COLLAB NAT_SEC"),
        _codes(F, "HORIZON SCENARIO EXPERT_PANEL TREND"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION PROCUREMENT TAX STANDARDS DEMO NETWORK INTL_AGREE"),
        121,
    ),
    "United States": (
        "American AI Initiative", 2019, "market_led", "north_america",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR WORKFORCE ETHICS REG_FRAME "
                  "DATA_ECO INTL_COLLAB NAT_SEC"),
        _codes(F, "HORIZON EXPERT_PANEL ROADMAP TREND"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION PROCUREMENT TAX STANDARDS NETWORK INTL_AGREE"),
        100,
    ),
    "Brazil": (
        "Brazilian AI Strategy", 2021, "hybrid", "latin_america",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI WORKFORCE"),
        _codes(F, "HORIZON TREND"),
        _codes(I, "FUNDING SKILLS"),
        7,
    ),
    "Spain": (
        "Spanish Strategy for AI", 2020, "rights_based", "europe",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR WORKFORCE SOC_WELFARE ETHICS "
                  "REG_FRAME INTL_COLLAB ENV_SUST"),
        _codes(F, "SCENARIO EXPERT_PANEL WORKSHOP"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION DEMO NETWORK INTL_AGREE"),
        82,
    ),
    "Australia": (
        "Australia's AI Action Plan", 2021, "market_led", "oceania",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI ETHICS DATA_ECO NAT_SEC"),
        _codes(F, "HORIZON EXPERT_PANEL"),
        _codes(I, "FUNDING SKILLS REGULATION TAX STANDARDS NETWORK"),
        33,
    ),
    "Denmark": (
        "National Strategy for AI", 2019, "rights_based", "europe",
        _codes(O, "ECON_COMP SCI_LEAD PUB_SECTOR WORKFORCE SOC_WELFARE ETHICS REG_FRAME "
                  "DATA_ECO INTL_COLLAB ENV_SUST"),
        _codes(F, "HORIZON SCENARIO EXPERT_PANEL WORKSHOP"),
        _codes(I, "FUNDING SKILLS REGULATION INSTITUTION STANDARDS NETWORK INTL_AGREE"),
        98,
    ),
    "Sweden": (
        "National Approach to AI", 2018, "rights_based", "europe",
        _codes(O, "SCI_LEAD WORKFORCE SOC_WELFARE ETHICS ENV_SUST"),
        _codes(F, "SCENARIO WORKSHOP"),
        _codes(I, "FUNDING SKILLS REGULATION NETWORK"),
        26,
    ),
    "Italy": (
        "National Strategy for AI", 2020, "hybrid", "europe",
        _codes(O, "ECON_COMP SCI_LEAD IND_DIGI PUB_SECTOR SOC_WELFARE ETHICS REG_FRAME INTL_COLLAB"),
        _codes(F, "SCENARIO EXPERT_PANEL ROADMAP"),
        _codes(I, "FUNDING REGULATION INSTITUTION PROCUREMENT DEMO INTL_AGREE"),
        54,
    ),
}

# Countries holding a fully evidenced (score 3) cell for each anchor pair.
SCORE3_PAIRS: dict[tuple[str, str], list[str]] = {
    ("OBJ.ECON_COMP", "INS.FUNDING"): [
        "Canada", "China", "Finland", "France", "Germany", "Japan", "Netherlands",
        "Norway", "Singapore", "South Korea", "United Kingdom", "United States",
        "Brazil", "Spain", "Australia", "Denmark", "Italy",
    ],
    ("OBJ.SCI_LEAD", "FOR.EXPERT_PANEL"): [
        "Canada", "China", "Finland", "France", "Germany", "Japan", "Netherlands",
        "Norway", "Singapore", "South Korea", "United Kingdom", "United States",
        "Spain", "Australia", "Denmark", "Italy",
    ],
    ("OBJ.PUB_SECTOR", "INS.INSTITUTION"): [
        "China", "Finland", "France", "Germany", "Japan", "Netherlands", "Norway",
        "Singapore", "South Korea", "United Kingdom", "United States", "Spain",
        "Denmark", "Italy",
    ],
    ("OBJ.ETHICS", "INS.REGULATION"): [
        "Canada", "Finland", "France", "Germany", "Japan", "Netherlands", "Norway",
        "United Kingdom", "United States", "Spain", "Denmark", "Sweden", "Italy",
    ],
    ("FOR.ROADMAP", "INS.FUNDING"): [
        "China", "Germany", "India", "Japan", "Singapore", "South Korea",
        "United States", "Italy",
    ],
}

# Expected prevalence counts over the 20 strategies.
EXPECTED_COUNTS = {
    "OBJ.ECON_COMP": 19, "OBJ.SCI_LEAD": 18, "OBJ.IND_DIGI": 15, "OBJ.PUB_SECTOR": 14,
    "OBJ.WORKFORCE": 13, "OBJ.SOC_WELFARE": 11, "OBJ.ETHICS": 17, "OBJ.REG_FRAME": 12,
    "OBJ.DATA_ECO": 10, "OBJ.INTL_COLLAB": 13, "OBJ.NAT_SEC": 9, "OBJ.ENV_SUST": 6,
    "FOR.HORIZON": 13, "FOR.SCENARIO": 11, "FOR.DELPHI": 5, "FOR.EXPERT_PANEL": 16,
    "FOR.ROADMAP": 9, "FOR.TREND": 8, "FOR.WORKSHOP": 7, "FOR.CROSS_IMPACT": 4,
    "INS.FUNDING": 19, "INS.SKILLS": 17, "INS.REGULATION": 15, "INS.INSTITUTION": 14,
    "INS.PROCUREMENT": 11, "INS.TAX": 8, "INS.STANDARDS": 12, "INS.DEMO": 10,
    "INS.NETWORK": 13, "INS.INTL_AGREE": 11,
}

# Category emphases per governance model: components in these categories
# get prominence 3 (and full specificity for instruments).
AFFINITY = {
    "market_led": {ObjectiveCategory.ECONOMIC_TRANSFORMATION,
                   ForesightCategory.DATA_DRIVEN, InstrumentCategory.FUNDING},
    "state_directed": {ObjectiveCategory.ECONOMIC_TRANSFORMATION,
                       ForesightCategory.PARTICIPATORY, InstrumentCategory.CAPACITY_BUILDING},
    "rights_based": {ObjectiveCategory.GOVERNANCE_FRAMEWORKS,
                     ForesightCategory.PARTICIPATORY, InstrumentCategory.REGULATORY},
    "risk_focused": {ObjectiveCategory.GOVERNANCE_FRAMEWORKS,
                     ForesightCategory.SCENARIO_BASED, InstrumentCategory.REGULATORY},
    "hybrid": {ObjectiveCategory.SOCIETAL_APPLICATIONS,
               ForesightCategory.EXPERT_BASED, InstrumentCategory.CAPACITY_BUILDING},
}

FILLER_PATTERNS = (
    AlignmentEvidence(lexical_proximity=True, explicit_reference=True, elaboration=False),
    AlignmentEvidence(lexical_proximity=False, explicit_reference=True, elaboration=False),
    AlignmentEvidence(lexical_proximity=True, explicit_reference=False, elaboration=False),
)
FULL_EVIDENCE = AlignmentEvidence(True, True, True)
NO_EVIDENCE = AlignmentEvidence(False, False, False)


def _coding(country_idx: int, code: str, model: str) -> ComponentCoding:
    component = parse_component(code)
    gi = component_index(component)
    category = category_of(component)
    if category in AFFINITY[model]:
        prominence = 3
    elif (country_idx + gi) % 4 == 0:
        prominence = 1
    else:
        prominence = 2
    kind = component.kind
    if kind is ComponentKind.INSTRUMENT:
        specificity = 3 if category in AFFINITY[model] else 2
        if (country_idx + gi) % 5 == 0:
            specificity = max(1, specificity - 1)
        return ComponentCoding(component, prominence, specificity=specificity)
    if kind is ComponentKind.FORESIGHT:
        if model in ("rights_based", "risk_focused"):
            explicit = True
        elif model == "state_directed":
            explicit = (country_idx + gi) % 3 == 0
        else:
            explicit = (country_idx + gi) % 3 != 0
        return ComponentCoding(component, prominence, explicit_method=explicit)
    textual = prominence
    implementation = max(1, prominence - (country_idx + gi) % 2)
    resourcing = max(1, prominence - (country_idx + gi + 1) % 2)
    return ComponentCoding(component, prominence,
                           intensity_subscores=(textual, implementation, resourcing))


def _present_pairs(objectives, foresight, instruments) -> list[tuple[str, str]]:
    by_kind = {
        ComponentKind.OBJECTIVE: objectives,
        ComponentKind.FORESIGHT: foresight,
        ComponentKind.INSTRUMENT: instruments,
    }
    pairs = []
    for row_kind, col_kind in KIND_PAIRS:
        for a in by_kind[row_kind]:
            for b in by_kind[col_kind]:
                x, y = order_pair(parse_component(a), parse_component(b))
                pairs.append((x.code, y.code))
    return pairs


def build_corpus() -> Corpus:
    strategies = []
    for country_idx, (country, spec) in enumerate(COUNTRIES.items()):
        title, year, model, region, objectives, foresight, instruments, coverage_target = spec
        codings = [
            _coding(country_idx, code, model)
            for code in objectives + foresight + instruments
        ]
        pairs = _present_pairs(objectives, foresight, instruments)
        pair_set = set(pairs)
        mandatory = [p for p in SCORE3_PAIRS if country in SCORE3_PAIRS[p]]
        for p in mandatory:
            assert p in pair_set, f"{country}: anchor pair {p} not co-present"

        cells = [AlignmentCell(parse_component(a), parse_component(b), FULL_EVIDENCE)
                 for a, b in mandatory]
        fill_needed = coverage_target - len(mandatory)
        assert fill_needed >= 0, f"{country}: coverage target below anchor count"
        remaining = [p for p in pairs if p not in set(mandatory)]
        assert fill_needed <= len(remaining), f"{country}: coverage target too high"
        for j in range(fill_needed):
            a, b = remaining[j]
            cells.append(AlignmentCell(parse_component(a), parse_component(b),
                                       FILLER_PATTERNS[j % 3]))
        for a, b in remaining[fill_needed:fill_needed + 2]:
            cells.append(AlignmentCell(parse_component(a), parse_component(b), NO_EVIDENCE))

        meta = StrategyMeta(country=country, strategy_title=title, publication_year=year,
                            governance_model=GovernanceModel(model), region=Region(region))
        strategies.append(CodedStrategy(meta=meta, codings=tuple(codings), cells=tuple(cells)))
    return Corpus(schema_version="1", strategies=tuple(strategies))


def check(corpus: Corpus) -> None:
    report = validate(corpus)
    assert not report.findings, f"unexpected findings: {report.findings}"
    assert len(corpus.strategies) == 20

    for kind in ComponentKind:
        table = prevalence(corpus, kind)
        for entry in table.entries:
            expected = EXPECTED_COUNTS[entry.component.code]
            assert entry.count == expected, (
                f"{entry.component.code}: count {entry.count} != {expected}"
            )

    ranked = strongest_pairs(corpus, min_score=3)
    expected_top = [
        (("OBJ.ECON_COMP", "INS.FUNDING"), 85.0),
        (("OBJ.SCI_LEAD", "FOR.EXPERT_PANEL"), 80.0),
        (("OBJ.PUB_SECTOR", "INS.INSTITUTION"), 70.0),
        (("OBJ.ETHICS", "INS.REGULATION"), 65.0),
        (("FOR.ROADMAP", "INS.FUNDING"), 40.0),
    ]
    for got, (pair, percent) in zip(ranked[:5], expected_top):
        assert got.pair == pair and got.percent == percent, (
            f"pair ranking mismatch: {got} != {pair} {percent}"
        )

    coverages = {}
    for strategy in corpus.strategies:
        target = COUNTRIES[strategy.meta.country][7]
        n_pairs = len(pair_scores(strategy))
        got = alignment_coverage(strategy)
        assert abs(got - target / n_pairs) < 1e-12, strategy.meta.country
        coverages[strategy.meta.country] = got
    low = min(coverages, key=coverages.get)
    high = max(coverages, key=coverages.get)
    assert low == "Brazil" and abs(coverages[low] - 0.35) < 1e-12
    assert high == "Finland" and abs(coverages[high] - 0.78) <= 0.005
    for country, value in coverages.items():
        if country not in (low, high):
            assert 0.36 < value < 0.77, f"{country} coverage {value} crowds the extrema"


def main() -> None:
    corpus = build_corpus()
    check(corpus)
    data = dump_corpus(corpus)
    load_corpus(data)  # full round-trip sanity
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    OUT_PATH.write_bytes(data)
    print(f"wrote {OUT_PATH} ({len(data)} bytes, {len(corpus.strategies)} strategies)")


if __name__ == "__main__":
    main()
