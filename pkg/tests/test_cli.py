from __future__ import annotations

import hashlib
import json
import os

import pytest
from conftest import make_cell, make_coding, make_corpus, make_strategy

from coherence_atlas import reference_corpus_bytes
from coherence_atlas.cli import main
from coherence_atlas.corpus import dump_corpus


@pytest.fixture(scope="module")
def fixture_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "reference.json"
    path.write_bytes(reference_corpus_bytes())
    return str(path)


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_reference_corpus(fixture_path, capsys):
    code, out, _ = run(capsys, "validate", fixture_path)
    assert code == 0
    assert json.loads(out)["findings"] == []


def test_validate_reports_errors_with_exit_one(tmp_path, capsys):
    bad = json.loads(reference_corpus_bytes())
    bad["strategies"][0]["codings"].append(
        {"component": "OBJ.ECON_COMP", "prominence": 2})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1
    findings = json.loads(out)["findings"]
    assert any("duplicate coding" in f["message"] for f in findings)


def test_missing_file_is_exit_two(capsys):
    code, _, err = run(capsys, "indices", "--corpus", "missing.json")
    assert code == 2
    assert "missing.json" in err


def test_unknown_argument_is_exit_two(fixture_path):
    with pytest.raises(SystemExit) as info:
        main(["indices", "--corpus", fixture_path, "--bogus"])
    assert info.value.code == 2


def test_indices_json_output(fixture_path, capsys):
    code, out, _ = run(capsys, "indices", "--corpus", fixture_path)
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 20
    assert {"country", "objective_coverage", "alignment_coverage",
            "strategic_alignment", "mean_alignment",
            "implementation_specificity"} <= set(rows[0])


def test_indices_pretty_table(fixture_path, capsys):
    code, out, _ = run(capsys, "indices", "--corpus", fixture_path, "--pretty")
    assert code == 0
    assert out.splitlines()[0].startswith("country")


def test_reliability_gate_pass_and_merge(fixture_path, tmp_path, capsys):
    adjudications = tmp_path / "adj.json"
    adjudications.write_text(json.dumps({"adjudications": []}))
    merged_out = tmp_path / "merged.json"
    code, out, _ = run(capsys, "reliability", "--coder-a", fixture_path,
                       "--coder-b", fixture_path,
                       "--adjudications", str(adjudications),
                       "--out", str(merged_out))
    assert code == 0
    payload = json.loads(out)
    assert payload["passes_gate"] is True
    assert payload["merge"]["status"] == "ok"
    assert merged_out.read_bytes() == reference_corpus_bytes()


def test_reliability_gate_failure_exits_one(tmp_path, capsys):
    a = make_corpus(make_strategy(
        [make_coding("OBJ.ECON_COMP", 2, intensity_subscores=(2, 2, 2))], country="X"))
    b = make_corpus(make_strategy(
        [make_coding("OBJ.ETHICS", 2, intensity_subscores=(2, 2, 2))], country="X"))
    pa, pb = tmp_path / "a.json", tmp_path / "b.json"
    pa.write_bytes(dump_corpus(a))
    pb.write_bytes(dump_corpus(b))
    code, out, _ = run(capsys, "reliability", "--coder-a", str(pa), "--coder-b", str(pb))
    assert code == 1
    assert json.loads(out)["passes_gate"] is False


def test_matrices_for_one_country(fixture_path, capsys):
    code, out, _ = run(capsys, "matrices", "--corpus", fixture_path,
                       "--country", "Finland")
    assert code == 0
    payload = json.loads(out)
    grids = payload["Finland"]
    assert len(grids["objective_foresight"]) == 12
    assert len(grids["objective_foresight"][0]) == 8
    assert len(grids["foresight_instrument"]) == 8


def test_matrices_unknown_country(fixture_path, capsys):
    code, _, err = run(capsys, "matrices", "--corpus", fixture_path,
                       "--country", "Atlantis")
    assert code == 1
    assert "Atlantis" in err


def test_network_dot_export(fixture_path, capsys):
    code, out, _ = run(capsys, "network", "--corpus", fixture_path,
                       "--country", "Finland", "--format", "dot")
    assert code == 0
    assert out.startswith("graph ")


def test_network_cooccurrence_json(fixture_path, capsys):
    code, out, _ = run(capsys, "network", "--corpus", fixture_path,
                       "--cooccurrence", "objective", "--format", "json",
                       "--communities")
    assert code == 0
    doc = json.loads(out)
    assert doc["provenance"] == "corpus_cooccurrence"
    assert all("community" in n for n in doc["nodes"])


def test_communities_output(fixture_path, capsys):
    code, out, _ = run(capsys, "communities", "--corpus", fixture_path,
                       "--country", "Finland")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["communities"]) == 19
    assert isinstance(payload["modularity"], float)


def test_compare_by_wave(fixture_path, capsys):
    code, out, _ = run(capsys, "compare", "--corpus", fixture_path,
                       "--group-by", "wave")
    assert code == 0
    groups = json.loads(out)
    assert [g["group"] for g in groups] == ["wave1", "wave2", "wave3"]


def test_correlate_cli(fixture_path, tmp_path, capsys):
    lines = ["country,indicator,value"]
    for i, country in enumerate(sorted(json.loads(reference_corpus_bytes())
                                       and [s["meta"]["country"] for s in
                                            json.loads(reference_corpus_bytes())["strategies"]])):
        lines.append(f"{country},readiness,{0.3 + 0.02 * i:.2f}")
    indicators = tmp_path / "indicators.csv"
    indicators.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "correlate", "--corpus", fixture_path,
                       "--indicators", str(indicators), "--against", "coverage")
    assert code == 0
    payload = json.loads(out)
    assert payload["readiness"]["n"] == 20
    assert -1.0 <= payload["readiness"]["r"] <= 1.0


def test_render_heatmap_to_file(fixture_path, tmp_path, capsys):
    out_file = tmp_path / "heatmap.svg"
    code, _, _ = run(capsys, "render", "heatmap", "--corpus", fixture_path,
                     "--country", "Finland", "--matrix", "obj-for",
                     "--out", str(out_file))
    assert code == 0
    assert out_file.read_text().startswith("<?xml")


def test_render_network_env_seed(fixture_path, tmp_path, capsys):
    out_a = tmp_path / "a.svg"
    out_b = tmp_path / "b.svg"
    out_c = tmp_path / "c.svg"
    os.environ["COHERENCE_SEED"] = "7"
    try:
        run(capsys, "render", "network", "--corpus", fixture_path,
            "--cooccurrence", "instrument", "--out", str(out_a))
    finally:
        del os.environ["COHERENCE_SEED"]
    run(capsys, "render", "network", "--corpus", fixture_path,
        "--cooccurrence", "instrument", "--seed", "7", "--out", str(out_b))
    run(capsys, "render", "network", "--corpus", fixture_path,
        "--cooccurrence", "instrument", "--out", str(out_c))
    assert out_a.read_bytes() == out_b.read_bytes()
    assert out_a.read_bytes() != out_c.read_bytes()  # default seed 42 differs


def test_render_bars_stdout(fixture_path, capsys):
    code, out, _ = run(capsys, "render", "bars", "--corpus", fixture_path,
                       "--metric", "coverage")
    assert code == 0
    assert out.startswith("<?xml")


def test_taxonomy_dump(capsys):
    code, out, _ = run(capsys, "taxonomy", "dump")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["components"]) == 30


def test_report_manifest_and_content(fixture_path, tmp_path, capsys):
    out_dir = tmp_path / "report"
    code, out, _ = run(capsys, "report", "--corpus", fixture_path,
                       "--out", str(out_dir))
    assert code == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    raw = reference_corpus_bytes()
    assert manifest["corpus_digest"] == hashlib.sha256(raw).hexdigest()
    paths = [a["path"] for a in manifest["artifacts"]]
    for slug in ("finland", "brazil", "south_korea"):
        matching = [p for p in paths if p.startswith(f"countries/{slug}/matrix_")]
        assert len(matching) == 3
    for entry in manifest["artifacts"]:
        digest = hashlib.sha256((out_dir / entry["path"]).read_bytes()).hexdigest()
        assert digest == entry["sha256"]
