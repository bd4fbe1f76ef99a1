from __future__ import annotations

import random

import oracles
import pytest
from conftest import make_cell, make_coding, make_strategy, random_strategy

from coherence_atlas.alignment import (
    alignment_coverage,
    build_matrix,
    foresight_sophistication,
    implementation_specificity_index,
    index_report,
    matrix_to_csv,
    mean_alignment_score,
    normalized_alignment,
    objective_coverage_index,
    objective_intensity,
    score_cell,
    strategic_alignment_index,
)
from coherence_atlas.corpus import AlignmentCell, AlignmentEvidence, CodedStrategy
from coherence_atlas.taxonomy import ALL_COMPONENTS, ComponentKind, catalog, parse_component


def evidence(lex=False, ref=False, elab=False):
    return AlignmentEvidence(lex, ref, elab)


# ---------------------------------------------------------------------------
# score_cell


def test_score_absent_component_is_zero():
    assert score_cell(False, True, None) == 0
    assert score_cell(True, False, evidence(True, True, True)) == 0


def test_score_all_three_dimensions_is_three():
    assert score_cell(True, True, evidence(True, True, True)) == 3


def test_score_coexistence_without_cell_is_one():
    assert score_cell(True, True, None) == 1
    assert score_cell(True, True, evidence()) == 1


def test_score_partial_evidence_is_two():
    assert score_cell(True, True, evidence(ref=True)) == 2
    assert score_cell(True, True, evidence(lex=True)) == 2
    assert score_cell(True, True, evidence(lex=True, ref=True)) == 2


# ---------------------------------------------------------------------------
# build_matrix


def test_empty_strategy_gives_zero_matrix():
    matrix = build_matrix(make_strategy(), ComponentKind.OBJECTIVE, ComponentKind.FORESIGHT)
    assert len(matrix.cells) == 12 and len(matrix.cells[0]) == 8
    assert all(v == 0 for row in matrix.cells for v in row)


def test_all_components_no_cells_gives_all_ones():
    codings = []
    for component in ALL_COMPONENTS:
        if component.kind is ComponentKind.INSTRUMENT:
            codings.append(make_coding(component.code, 2, specificity=1))
        elif component.kind is ComponentKind.FORESIGHT:
            codings.append(make_coding(component.code, 2, explicit_method=False))
        else:
            codings.append(make_coding(component.code, 2, intensity_subscores=(1, 1, 1)))
    strategy = make_strategy(codings)
    for row_kind, col_kind in [(ComponentKind.OBJECTIVE, ComponentKind.FORESIGHT),
                               (ComponentKind.OBJECTIVE, ComponentKind.INSTRUMENT),
                               (ComponentKind.FORESIGHT, ComponentKind.INSTRUMENT)]:
        matrix = build_matrix(strategy, row_kind, col_kind)
        assert all(v == 1 for row in matrix.cells for v in row)


def test_matrix_rejects_same_kind():
    with pytest.raises(ValueError):
        build_matrix(make_strategy(), ComponentKind.OBJECTIVE, ComponentKind.OBJECTIVE)


def test_matrix_matches_per_cell_oracle_on_random_strategies():
    rng = random.Random(41)
    for _ in range(100):
        strategy = random_strategy(rng)
        for row_kind, col_kind in [(ComponentKind.OBJECTIVE, ComponentKind.FORESIGHT),
                                   (ComponentKind.OBJECTIVE, ComponentKind.INSTRUMENT),
                                   (ComponentKind.FORESIGHT, ComponentKind.INSTRUMENT)]:
            got = build_matrix(strategy, row_kind, col_kind)
            expected = oracles.matrix(strategy, row_kind, col_kind)
            assert [list(r) for r in got.cells] == expected


def test_matrix_csv_shape():
    strategy = make_strategy([
        make_coding("OBJ.ECON_COMP", 3, intensity_subscores=(3, 3, 3)),
        make_coding("FOR.HORIZON", 2, explicit_method=True),
    ])
    data = matrix_to_csv(build_matrix(strategy, ComponentKind.OBJECTIVE,
                                      ComponentKind.FORESIGHT)).decode()
    lines = data.splitlines()
    assert len(lines) == 13
    assert lines[0].split(",")[1] == "FOR.HORIZON"
    assert lines[1].split(",")[0] == "OBJ.ECON_COMP"


# ---------------------------------------------------------------------------
# indices: stated examples


def _full_strategy(cell_evidence):
    codings = []
    cells = []
    for component in ALL_COMPONENTS:
        if component.kind is ComponentKind.INSTRUMENT:
            codings.append(make_coding(component.code, 3, specificity=3))
        elif component.kind is ComponentKind.FORESIGHT:
            codings.append(make_coding(component.code, 3, explicit_method=True))
        else:
            codings.append(make_coding(component.code, 3, intensity_subscores=(3, 3, 3)))
    if cell_evidence is not None:
        for i, a in enumerate(ALL_COMPONENTS):
            for b in ALL_COMPONENTS[i + 1:]:
                if a.kind is b.kind:
                    continue
                cells.append(AlignmentCell(a, b, cell_evidence))
    return make_strategy(codings, cells)


def test_normalized_alignment_maximum():
    strategy = _full_strategy(evidence(True, True, True))
    assert normalized_alignment(strategy) == 1.0


def test_normalized_alignment_coexistence_only():
    strategy = _full_strategy(None)
    assert normalized_alignment(strategy) == pytest.approx(1 / 3, abs=1e-12)


def test_normalized_alignment_empty():
    assert normalized_alignment(make_strategy()) == 0.0


def test_sai_equals_normalized_and_mean_over_three():
    rng = random.Random(43)
    for _ in range(100):
        strategy = random_strategy(rng)
        sai = strategic_alignment_index(strategy)
        assert sai == normalized_alignment(strategy)
        assert sai == pytest.approx(mean_alignment_score(strategy) / 3, abs=1e-15)


def test_objective_coverage_examples():
    assert objective_coverage_index(_full_strategy(None)) == 1.0
    half = make_strategy([make_coding(c.code, 2, intensity_subscores=(2, 2, 2))
                          for c in catalog(ComponentKind.OBJECTIVE)[:6]])
    assert objective_coverage_index(half) == 0.5
    assert objective_coverage_index(make_strategy()) == 0.0


def test_specificity_index_examples():
    full = _full_strategy(None)
    assert implementation_specificity_index(full) == 1.0
    assert implementation_specificity_index(make_strategy()) == 0.0
    two = make_strategy([
        make_coding("INS.FUNDING", 2, specificity=1),
        make_coding("INS.SKILLS", 2, specificity=2),
    ])
    assert implementation_specificity_index(two) == pytest.approx(0.5, abs=1e-12)


def test_alignment_coverage_examples():
    explicit = _full_strategy(evidence(ref=True))
    assert alignment_coverage(explicit) == 1.0
    assert alignment_coverage(_full_strategy(None)) == 0.0
    assert alignment_coverage(make_strategy()) == 0.0


def test_alignment_coverage_counting():
    # 10 co-present pairs (5 objectives x 2 instruments), 4 with evidence.
    objectives = [c.code for c in catalog(ComponentKind.OBJECTIVE)[:5]]
    codings = [make_coding(code, 2, intensity_subscores=(2, 2, 2)) for code in objectives]
    codings += [make_coding("INS.FUNDING", 2, specificity=2),
                make_coding("INS.SKILLS", 2, specificity=2)]
    cells = [make_cell(code, "INS.FUNDING", ref=True) for code in objectives[:4]]
    strategy = make_strategy(codings, cells)
    assert alignment_coverage(strategy) == pytest.approx(0.4, abs=1e-12)


def test_mean_alignment_examples():
    assert mean_alignment_score(_full_strategy(evidence(True, True, True))) == 3.0
    assert mean_alignment_score(make_strategy()) == 0.0
    codings = [make_coding("OBJ.ECON_COMP", 2, intensity_subscores=(2, 2, 2)),
               make_coding("FOR.HORIZON", 2, explicit_method=True),
               make_coding("INS.FUNDING", 2, specificity=2)]
    cells = [make_cell("OBJ.ECON_COMP", "INS.FUNDING", lex=True, ref=True, elab=True),
             make_cell("FOR.HORIZON", "INS.FUNDING", ref=True)]
    # scores: 3 (full), 2 (partial), 1 (bare co-existence of OBJ x FOR)
    assert mean_alignment_score(make_strategy(codings, cells)) == pytest.approx(2.0, abs=1e-12)


def test_objective_intensity_examples():
    econ = parse_component("OBJ.ECON_COMP")
    full = make_strategy([make_coding("OBJ.ECON_COMP", 3, intensity_subscores=(3, 3, 3))])
    assert objective_intensity(full, econ) == 3.0
    assert objective_intensity(make_strategy(), econ) == 0.0
    mixed = make_strategy([make_coding("OBJ.ECON_COMP", 2, intensity_subscores=(1, 2, 3))])
    assert objective_intensity(mixed, econ) == pytest.approx(2.0, abs=1e-12)


def test_objective_intensity_rejects_non_objective():
    with pytest.raises(ValueError):
        objective_intensity(make_strategy(), parse_component("INS.FUNDING"))


def test_foresight_sophistication_full_construction():
    # All 8 methods, all foresight-instrument pairs fully evidenced,
    # participatory category holds 2 of the 8 methods.
    codings = [make_coding(c.code, 3, explicit_method=True)
               for c in catalog(ComponentKind.FORESIGHT)]
    codings += [make_coding(c.code, 3, specificity=3)
                for c in catalog(ComponentKind.INSTRUMENT)]
    cells = [make_cell(f.code, i.code, lex=True, ref=True, elab=True)
             for f in catalog(ComponentKind.FORESIGHT)
             for i in catalog(ComponentKind.INSTRUMENT)]
    got = foresight_sophistication(make_strategy(codings, cells))
    assert got.diversity == 1.0
    assert got.integration_depth == 1.0
    assert got.inclusivity == pytest.approx(0.25, abs=1e-12)
    assert got.composite == pytest.approx(0.75, abs=1e-12)


def test_foresight_sophistication_empty():
    got = foresight_sophistication(make_strategy())
    assert (got.diversity, got.integration_depth, got.inclusivity, got.composite) \
        == (0.0, 0.0, 0.0, 0.0)


def test_foresight_sophistication_single_participatory_method():
    strategy = make_strategy([make_coding("FOR.WORKSHOP", 2, explicit_method=True)])
    got = foresight_sophistication(strategy)
    assert got.diversity == pytest.approx(0.125, abs=1e-12)
    assert got.integration_depth == 0.0
    assert got.inclusivity == 1.0
    assert got.composite == pytest.approx(0.375, abs=1e-12)


# ---------------------------------------------------------------------------
# oracle equivalence and properties


def test_indices_match_exhaustive_oracle():
    rng = random.Random(47)
    for _ in range(300):
        strategy = random_strategy(rng)
        assert normalized_alignment(strategy) == pytest.approx(
            oracles.normalized_alignment(strategy), abs=1e-12)
        assert objective_coverage_index(strategy) == pytest.approx(
            oracles.objective_coverage(strategy), abs=1e-12)
        assert implementation_specificity_index(strategy) == pytest.approx(
            oracles.implementation_specificity(strategy), abs=1e-12)
        assert alignment_coverage(strategy) == pytest.approx(
            oracles.alignment_coverage(strategy), abs=1e-12)
        assert mean_alignment_score(strategy) == pytest.approx(
            oracles.mean_alignment(strategy), abs=1e-12)


def test_indices_invariant_under_input_reordering():
    rng = random.Random(53)
    for _ in range(50):
        strategy = random_strategy(rng)
        shuffled_codings = list(strategy.codings)
        shuffled_cells = list(strategy.cells)
        rng.shuffle(shuffled_codings)
        rng.shuffle(shuffled_cells)
        other = CodedStrategy(meta=strategy.meta, codings=tuple(shuffled_codings),
                              cells=tuple(shuffled_cells))
        assert index_report(other) == index_report(strategy)


def _upgrade_one_cell(rng, strategy):
    """Strengthen one co-present pair's evidence; None if already maximal."""
    from coherence_atlas.taxonomy import order_pair

    present = strategy.present_components()
    pairs = [(a, b) for i, a in enumerate(present) for b in present[i + 1:]
             if a.kind is not b.kind]
    if not pairs:
        return None
    cells = {cell.key(): cell for cell in strategy.cells}
    rng.shuffle(pairs)
    for a, b in pairs:
        x, y = order_pair(a, b)
        cell = cells.get((x.code, y.code))
        if cell is None:
            cells[(x.code, y.code)] = AlignmentCell(x, y, AlignmentEvidence(
                lexical_proximity=True, explicit_reference=False, elaboration=False))
        else:
            ev = cell.evidence
            if not ev.lexical_proximity:
                upgraded = AlignmentEvidence(True, ev.explicit_reference, ev.elaboration)
            elif not ev.explicit_reference:
                upgraded = AlignmentEvidence(True, True, ev.elaboration)
            elif not ev.elaboration:
                upgraded = AlignmentEvidence(True, True, True)
            else:
                continue
            cells[(x.code, y.code)] = AlignmentCell(x, y, upgraded)
        return CodedStrategy(meta=strategy.meta, codings=strategy.codings,
                             cells=tuple(cells.values()))
    return None


def test_upgrading_evidence_never_decreases_alignment_indices():
    rng = random.Random(59)
    checked = 0
    while checked < 200:
        strategy = random_strategy(rng)
        upgraded = _upgrade_one_cell(rng, strategy)
        if upgraded is None:
            continue
        checked += 1
        assert normalized_alignment(upgraded) >= normalized_alignment(strategy)
        assert alignment_coverage(upgraded) >= alignment_coverage(strategy)
        assert mean_alignment_score(upgraded) >= mean_alignment_score(strategy)


def test_adding_component_never_decreases_objective_coverage():
    rng = random.Random(61)
    for _ in range(200):
        strategy = random_strategy(rng)
        present = {c.code for c in strategy.present_components()}
        absent = [c for c in ALL_COMPONENTS if c.code not in present]
        if not absent:
            continue
        component = rng.choice(absent)
        if component.kind is ComponentKind.INSTRUMENT:
            coding = make_coding(component.code, 1, specificity=1)
        elif component.kind is ComponentKind.FORESIGHT:
            coding = make_coding(component.code, 1, explicit_method=False)
        else:
            coding = make_coding(component.code, 1, intensity_subscores=(1, 1, 1))
        bigger = CodedStrategy(meta=strategy.meta,
                               codings=strategy.codings + (coding,),
                               cells=strategy.cells)
        assert objective_coverage_index(bigger) >= objective_coverage_index(strategy)
