from __future__ import annotations

import json

import pytest
from conftest import make_cell, make_coding, make_corpus, make_meta, make_strategy, random_strategy
from coherence_atlas.corpus import (
    Adjudication,
    Severity,
    dump_corpus,
    export_cells_csv,
    export_codings_csv,
    export_csv,
    load_adjudications,
    load_corpus,
    merge_coders,
    validate,
)
from coherence_atlas.errors import CorpusParseError, CorpusValidationError, MergeError

import random


MINIMAL = {
    "schema_version": "1",
    "strategies": [
        {
            "meta": {
                "country": "Testland",
                "strategy_title": "Test Strategy",
                "publication_year": 2019,
                "governance_model": "market_led",
                "region": "europe",
            },
            "codings": [
                {"component": "OBJ.ECON_COMP", "prominence": 3,
                 "intensity_subscores": [3, 2, 3]},
                {"component": "INS.FUNDING", "prominence": 2, "specificity": 2},
                {"component": "FOR.HORIZON", "prominence": 1, "explicit_method": True},
            ],
            "cells": [
                {"a": "OBJ.ECON_COMP", "b": "INS.FUNDING",
                 "evidence": {"lexical_proximity": True, "explicit_reference": True,
                              "elaboration": True}},
            ],
        }
    ],
}


def doc(**overrides) -> str:
    base = json.loads(json.dumps(MINIMAL))
    base.update(overrides)
    return json.dumps(base)


def test_load_minimal_document():
    corpus = load_corpus(doc())
    assert len(corpus.strategies) == 1
    strategy = corpus.strategies[0]
    assert strategy.meta.country == "Testland"
    assert len(strategy.codings) == 3
    assert strategy.cells[0].evidence.intensity == 3


def test_load_reference_corpus(reference_corpus):
    assert len(reference_corpus.strategies) == 20
    assert validate(reference_corpus).findings == ()


def test_empty_strategy_list_is_valid():
    corpus = load_corpus(doc(strategies=[]))
    assert corpus.strategies == ()


def test_malformed_json_names_position():
    with pytest.raises(CorpusParseError, match="line"):
        load_corpus("{not json")


def test_unknown_component_is_parse_error_with_path():
    bad = json.loads(doc())
    bad["strategies"][0]["codings"][0]["component"] = "OBJ.NOPE"
    with pytest.raises(CorpusParseError, match=r"strategies\[0\].codings\[0\]"):
        load_corpus(json.dumps(bad))


def test_wrong_schema_version_rejected():
    with pytest.raises(CorpusParseError, match="schema_version"):
        load_corpus(doc(schema_version="2"))


def test_cell_referencing_uncoded_component_is_validation_error():
    bad = json.loads(doc())
    bad["strategies"][0]["cells"].append(
        {"a": "OBJ.SCI_LEAD", "b": "INS.FUNDING", "evidence": {}}
    )
    with pytest.raises(CorpusValidationError, match="uncoded component OBJ.SCI_LEAD"):
        load_corpus(json.dumps(bad))


def test_validation_error_lists_every_violation():
    bad = json.loads(doc())
    bad["strategies"][0]["codings"].append({"component": "OBJ.ECON_COMP", "prominence": 2})
    bad["strategies"][0]["cells"].append(
        {"a": "OBJ.SCI_LEAD", "b": "INS.FUNDING", "evidence": {}}
    )
    with pytest.raises(CorpusValidationError) as info:
        load_corpus(json.dumps(bad))
    messages = [f.message for f in info.value.findings]
    assert any("duplicate coding" in m for m in messages)
    assert any("uncoded component" in m for m in messages)


def test_elaboration_requires_explicit_reference():
    bad = json.loads(doc())
    bad["strategies"][0]["cells"][0]["evidence"] = {
        "lexical_proximity": True, "explicit_reference": False, "elaboration": True,
    }
    with pytest.raises(CorpusValidationError, match="elaboration requires explicit_reference"):
        load_corpus(json.dumps(bad))


def test_kind_restricted_fields_rejected():
    bad = json.loads(doc())
    bad["strategies"][0]["codings"][0]["specificity"] = 2  # objective
    with pytest.raises(CorpusValidationError, match="only valid for instruments"):
        load_corpus(json.dumps(bad))


def test_duplicate_country_rejected():
    bad = json.loads(doc())
    bad["strategies"].append(json.loads(json.dumps(bad["strategies"][0])))
    with pytest.raises(CorpusValidationError, match="duplicate country"):
        load_corpus(json.dumps(bad))


def test_year_2016_is_warning_not_error():
    odd = json.loads(doc())
    odd["strategies"][0]["meta"]["publication_year"] = 2016
    corpus = load_corpus(json.dumps(odd))
    report = validate(corpus)
    assert [f.severity for f in report.findings] == [Severity.WARNING]
    assert "2016" in report.findings[0].message


def test_prominence_zero_is_warning():
    odd = json.loads(doc())
    odd["strategies"][0]["codings"].append({"component": "OBJ.NAT_SEC", "prominence": 0})
    corpus = load_corpus(json.dumps(odd))
    report = validate(corpus)
    assert report.ok
    assert any("prominence 0" in f.message for f in report.warnings)
    # prominence-0 codings count as absent
    present = corpus.strategies[0].present_components()
    assert all(c.code != "OBJ.NAT_SEC" for c in present)


def test_valid_corpus_has_zero_findings():
    assert validate(load_corpus(doc())).findings == ()


def test_codings_and_cells_are_canonically_ordered():
    shuffled = json.loads(doc())
    shuffled["strategies"][0]["codings"].reverse()
    corpus = load_corpus(json.dumps(shuffled))
    codes = [c.component.code for c in corpus.strategies[0].codings]
    assert codes == ["OBJ.ECON_COMP", "FOR.HORIZON", "INS.FUNDING"]


def test_dump_load_round_trip(reference_corpus):
    dumped = dump_corpus(reference_corpus)
    assert load_corpus(dumped) == reference_corpus
    assert dump_corpus(load_corpus(dumped)) == dumped


def test_round_trip_random_strategies():
    rng = random.Random(7)
    corpus = make_corpus(*(random_strategy(rng, country=f"C{i}") for i in range(8)))
    assert load_corpus(dump_corpus(corpus)) == corpus


def test_export_csv_counts():
    corpus = load_corpus(doc())
    codings = export_codings_csv(corpus).decode().splitlines()
    cells = export_cells_csv(corpus).decode().splitlines()
    assert len(codings) == 1 + 3
    assert len(cells) == 1 + 1
    assert codings[0].startswith("country,component,kind,prominence")


def test_export_csv_empty_corpus_is_header_only():
    corpus = load_corpus(doc(strategies=[]))
    files = export_csv(corpus)
    assert files["codings.csv"].decode().count("\n") == 1
    assert files["cells.csv"].decode().count("\n") == 1


def test_export_csv_deterministic(reference_corpus):
    assert export_csv(reference_corpus) == export_csv(reference_corpus)


def test_csv_quoting_commas_in_country():
    strategy = make_strategy(
        codings=[make_coding("OBJ.ECON_COMP", 2, intensity_subscores=(1, 1, 1))],
        country="Testland, The",
    )
    data = export_codings_csv(make_corpus(strategy)).decode()
    assert '"Testland, The"' in data


# ---------------------------------------------------------------------------
# merge_coders


def _two_coder_pair():
    codings = [
        make_coding("OBJ.ECON_COMP", 3, intensity_subscores=(3, 2, 3)),
        make_coding("INS.FUNDING", 2, specificity=2),
    ]
    cells = [make_cell("OBJ.ECON_COMP", "INS.FUNDING", lex=True, ref=True, elab=True)]
    a = make_corpus(make_strategy(codings, cells))
    b = make_corpus(make_strategy(codings, cells))
    return a, b


def test_merge_identical_corpora_is_identity(reference_corpus):
    assert merge_coders(reference_corpus, reference_corpus, []) == reference_corpus


def test_merge_country_mismatch():
    a, _ = _two_coder_pair()
    b = make_corpus(make_strategy([make_coding("OBJ.ECON_COMP", 1,
                                               intensity_subscores=(1, 1, 1))],
                                  country="Elsewhere"))
    with pytest.raises(MergeError, match="country sets differ"):
        merge_coders(a, b, [])


def test_merge_component_disagreement_include():
    a, b = _two_coder_pair()
    extra = make_coding("FOR.HORIZON", 2, explicit_method=True)
    a = make_corpus(make_strategy(list(a.strategies[0].codings) + [extra],
                                  a.strategies[0].cells))
    adjudications = [Adjudication(country="Testland", component="FOR.HORIZON",
                                  decision="include")]
    merged = merge_coders(a, b, adjudications)
    codes = [c.component.code for c in merged.strategies[0].codings]
    assert "FOR.HORIZON" in codes
    # coding comes from the coder who has it
    assert merged.strategies[0].coding_map()["FOR.HORIZON"] == extra


def test_merge_component_disagreement_exclude():
    a, b = _two_coder_pair()
    extra = make_coding("FOR.HORIZON", 2, explicit_method=True)
    a = make_corpus(make_strategy(list(a.strategies[0].codings) + [extra],
                                  a.strategies[0].cells))
    merged = merge_coders(a, b, [Adjudication(country="Testland",
                                              component="FOR.HORIZON",
                                              decision="exclude")])
    assert merged == b


def test_merge_unresolved_component_disagreement():
    a, b = _two_coder_pair()
    extra = make_coding("FOR.HORIZON", 2, explicit_method=True)
    a = make_corpus(make_strategy(list(a.strategies[0].codings) + [extra],
                                  a.strategies[0].cells))
    with pytest.raises(MergeError, match="FOR.HORIZON"):
        merge_coders(a, b, [])


def test_merge_score_disagreement_requires_adjudication():
    a, b = _two_coder_pair()
    weaker = make_cell("OBJ.ECON_COMP", "INS.FUNDING", lex=True)
    b = make_corpus(make_strategy(b.strategies[0].codings, [weaker]))
    with pytest.raises(MergeError, match=r"OBJ.ECON_COMP, INS.FUNDING"):
        merge_coders(a, b, [])


def test_merge_score_disagreement_resolved_by_coder_b():
    a, b = _two_coder_pair()
    weaker = make_cell("OBJ.ECON_COMP", "INS.FUNDING", lex=True)
    b = make_corpus(make_strategy(b.strategies[0].codings, [weaker]))
    merged = merge_coders(a, b, [Adjudication(
        country="Testland", pair=("OBJ.ECON_COMP", "INS.FUNDING"), decision="coder_b")])
    assert merged.strategies[0].cells == (weaker,)


def test_merge_cell_from_single_identifier():
    # Only coder A codes FOR.HORIZON; after inclusion its cells come from A.
    a, b = _two_coder_pair()
    extra_coding = make_coding("FOR.HORIZON", 2, explicit_method=True)
    extra_cell = make_cell("FOR.HORIZON", "INS.FUNDING", ref=True)
    a = make_corpus(make_strategy(list(a.strategies[0].codings) + [extra_coding],
                                  list(a.strategies[0].cells) + [extra_cell]))
    merged = merge_coders(a, b, [Adjudication(country="Testland",
                                              component="FOR.HORIZON",
                                              decision="include")])
    assert extra_cell in merged.strategies[0].cells


def test_load_adjudications_file():
    raw = json.dumps({"adjudications": [
        {"country": "Testland", "component": "for.horizon", "decision": "include"},
        {"country": "Testland", "pair": ["INS.FUNDING", "OBJ.ECON_COMP"],
         "decision": "coder_a"},
    ]})
    adjudications = load_adjudications(raw)
    assert adjudications[0].component == "FOR.HORIZON"
    # pair stored in canonical order
    assert adjudications[1].pair == ("OBJ.ECON_COMP", "INS.FUNDING")


def test_adjudication_requires_component_or_pair():
    with pytest.raises(CorpusParseError, match="exactly one"):
        load_adjudications(json.dumps([{"country": "X", "decision": "include"}]))
