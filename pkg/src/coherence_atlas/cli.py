"""Command-line entry point: load, validate, analyze, render, report.

Exit codes: 0 success, 1 validation or analysis failure (including a
failed reliability gate), 2 I/O or argument errors. Machine output is
JSON on stdout unless --out redirects artifacts to files. The CLI is a
thin composition layer; no analytics are computed here.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import re
import sys
from pathlib import Path

from . import __version__
from .alignment import (
    build_matrix,
    foresight_sophistication,
    index_report,
    matrix_to_csv,
    pair_scores,
)
from .analytics import (
    Grouping,
    correlate,
    country_comparison,
    group_profile,
    load_indicators,
    matrix_key,
    prevalence,
    strongest_pairs,
    temporal_trends,
)
from .corpus import (
    Corpus,
    dump_corpus,
    load_adjudications,
    load_corpus,
    merge_coders,
    validate,
)
from .errors import (
    AnalysisError,
    CatalogError,
    CoherenceAtlasError,
    CorpusParseError,
    CorpusValidationError,
    MergeError,
)
from .network import (
    PolicyNetwork,
    build_cooccurrence_network,
    build_policy_network,
    centralities,
    detect_communities,
)
from .reliability import reliability_report
from .render import (
    DEFAULT_SEED,
    GraphFormat,
    LabeledGrid,
    LayoutSeed,
    Palette,
    export_graph,
    render_bars,
    render_heatmap,
    render_network,
)
from .taxonomy import KIND_PAIRS, ComponentKind, taxonomy_document

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_KIND_NAMES = {
    "objective": ComponentKind.OBJECTIVE,
    "foresight": ComponentKind.FORESIGHT,
    "instrument": ComponentKind.INSTRUMENT,
}

_MATRIX_NAMES = {
    "obj-for": (ComponentKind.OBJECTIVE, ComponentKind.FORESIGHT),
    "obj-ins": (ComponentKind.OBJECTIVE, ComponentKind.INSTRUMENT),
    "for-ins": (ComponentKind.FORESIGHT, ComponentKind.INSTRUMENT),
}

_AGAINST_FIELDS = {
    "coverage": "alignment_coverage",
    "mean": "mean_alignment",
    "sai": "strategic_alignment",
}


def _emit(payload, pretty: bool = False) -> None:
    if pretty and isinstance(payload, list) and payload and isinstance(payload[0], dict):
        keys = list(payload[0].keys())
        widths = [max(len(k), *(len(_cell(row.get(k))) for row in payload)) for k in keys]
        print("  ".join(k.ljust(w) for k, w in zip(keys, widths)))
        for row in payload:
            print("  ".join(_cell(row.get(k)).ljust(w) for k, w in zip(keys, widths)))
        return
    print(json.dumps(payload, indent=2))


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def _read_corpus(path: str) -> Corpus:
    with open(path, "rb") as fh:
        return load_corpus(fh.read())


def _layout_seed(args) -> LayoutSeed:
    if getattr(args, "seed", None) is not None:
        return LayoutSeed(args.seed)
    env = os.environ.get("COHERENCE_SEED")
    return LayoutSeed(int(env)) if env else LayoutSeed(DEFAULT_SEED)


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")


def _strategy(corpus: Corpus, country: str):
    by_country = corpus.by_country()
    if country not in by_country:
        raise AnalysisError(f"country {country!r} not in corpus "
                            f"(available: {', '.join(sorted(by_country))})")
    return by_country[country]


def _warn_degenerate(strategy) -> None:
    if not strategy.present_components():
        print(f"warning: {strategy.meta.country}: no components present; "
              "indices default to 0", file=sys.stderr)
    elif not pair_scores(strategy):
        print(f"warning: {strategy.meta.country}: no co-present component pairs; "
              "alignment indices default to 0", file=sys.stderr)


def _write_or_print(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_validate(args) -> int:
    with open(args.corpus, "rb") as fh:
        raw = fh.read()
    try:
        corpus = load_corpus(raw)
        findings = validate(corpus).findings
    except CorpusValidationError as exc:
        findings = exc.findings
    payload = [
        {"severity": f.severity.value, "path": f.path, "message": f.message}
        for f in findings
    ]
    _emit({"file": args.corpus, "findings": payload}, pretty=False)
    return EXIT_FAILURE if any(f.severity.value == "error" for f in findings) else EXIT_OK


def _cmd_reliability(args) -> int:
    a = _read_corpus(args.coder_a)
    b = _read_corpus(args.coder_b)
    report = reliability_report(a, b)
    payload = dataclasses.asdict(report)
    status = EXIT_OK if report.passes_gate else EXIT_FAILURE
    if args.adjudications:
        with open(args.adjudications, "rb") as fh:
            adjudications = load_adjudications(fh.read())
        try:
            merged = merge_coders(a, b, adjudications)
            payload["merge"] = {"status": "ok", "unresolved": []}
            if args.out:
                Path(args.out).write_bytes(dump_corpus(merged))
                payload["merge"]["written"] = args.out
        except MergeError as exc:
            payload["merge"] = {"status": "unresolved", "unresolved": exc.disagreements}
            status = EXIT_FAILURE
    _emit(payload, args.pretty)
    return status


def _cmd_matrices(args) -> int:
    corpus = _read_corpus(args.corpus)
    strategies = [_strategy(corpus, args.country)] if args.country else list(corpus.strategies)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for strategy in strategies:
            for row_kind, col_kind in KIND_PAIRS:
                matrix = build_matrix(strategy, row_kind, col_kind)
                name = f"{_slug(strategy.meta.country)}_{matrix_key(row_kind, col_kind)}.csv"
                (out / name).write_bytes(matrix_to_csv(matrix))
        print(json.dumps({"written": len(strategies) * 3, "directory": args.out}))
        return EXIT_OK
    payload = {}
    for strategy in strategies:
        entry = {}
        for row_kind, col_kind in KIND_PAIRS:
            matrix = build_matrix(strategy, row_kind, col_kind)
            entry[matrix_key(row_kind, col_kind)] = [list(row) for row in matrix.cells]
        payload[strategy.meta.country] = entry
    _emit(payload)
    return EXIT_OK


def _cmd_indices(args) -> int:
    corpus = _read_corpus(args.corpus)
    for strategy in corpus.strategies:
        _warn_degenerate(strategy)
    rows = [dataclasses.asdict(r) for r in country_comparison(corpus)]
    if args.sophistication:
        by_country = corpus.by_country()
        for row in rows:
            row.update(
                {f"foresight_{k}": v for k, v in
                 dataclasses.asdict(foresight_sophistication(by_country[row["country"]])).items()}
            )
    _emit(rows, args.pretty)
    return EXIT_OK


def _build_network(args, corpus: Corpus) -> PolicyNetwork:
    if args.cooccurrence:
        return build_cooccurrence_network(corpus, _KIND_NAMES[args.cooccurrence])
    return build_policy_network(_strategy(corpus, args.country))


def _cmd_network(args) -> int:
    corpus = _read_corpus(args.corpus)
    network = _build_network(args, corpus)
    communities = detect_communities(network).assignment if args.communities else None
    data = export_graph(network, GraphFormat(args.format), communities)
    _write_or_print(data, args.out)
    return EXIT_OK


def _cmd_communities(args) -> int:
    corpus = _read_corpus(args.corpus)
    network = build_policy_network(_strategy(corpus, args.country))
    partition = detect_communities(network)
    payload = {
        "country": args.country,
        "modularity": partition.modularity,
        "communities": [
            {"component": component.code, "community": community}
            for (component, _), community in zip(network.nodes, partition.assignment)
        ],
    }
    _emit(payload)
    return EXIT_OK


def _cmd_compare(args) -> int:
    corpus = _read_corpus(args.corpus)
    profiles = group_profile(corpus, Grouping(args.group_by))
    payload = [
        {
            "group": p.group_key,
            "members": list(p.members),
            "mean_indices": p.mean_indices,
            "mean_matrices": {k: [list(r) for r in grid] for k, grid in p.mean_matrices.items()},
        }
        for p in profiles
    ]
    _emit(payload if not args.pretty else [
        {"group": p.group_key, "n": len(p.members), **p.mean_indices} for p in profiles
    ], args.pretty)
    return EXIT_OK


def _cmd_correlate(args) -> int:
    corpus = _read_corpus(args.corpus)
    with open(args.indicators, "rb") as fh:
        indicators = load_indicators(fh.read())
    field = _AGAINST_FIELDS[args.against]
    reports = {r.country: getattr(r, field) for r in country_comparison(corpus)}
    payload = {}
    for name in sorted(indicators):
        values = indicators[name]
        common = sorted(set(values) & set(reports))
        missing = sorted(set(reports) - set(values))
        if missing:
            print(f"warning: indicator {name!r} missing for: {', '.join(missing)}",
                  file=sys.stderr)
        result = correlate([values[c] for c in common], [reports[c] for c in common])
        payload[name] = dataclasses.asdict(result)
    _emit(payload, args.pretty)
    return EXIT_OK


def _cmd_render(args) -> int:
    corpus = _read_corpus(args.corpus)
    if args.what == "heatmap":
        if args.comparison:
            rows = country_comparison(corpus)
            grid = LabeledGrid(
                row_labels=tuple(r.country for r in rows),
                col_labels=("coverage", "specificity", "sai", "alignment_coverage", "mean"),
                values=tuple(
                    (r.objective_coverage, r.implementation_specificity,
                     r.strategic_alignment, r.alignment_coverage, r.mean_alignment / 3)
                    for r in rows
                ),
            )
            data = render_heatmap(grid, Palette(), vmax=1.0, title="country comparison")
        else:
            row_kind, col_kind = _MATRIX_NAMES[args.matrix]
            matrix = build_matrix(_strategy(corpus, args.country), row_kind, col_kind)
            grid = LabeledGrid(
                row_labels=tuple(c.code for c in matrix.rows),
                col_labels=tuple(c.code for c in matrix.cols),
                values=tuple(tuple(float(v) for v in row) for row in matrix.cells),
            )
            data = render_heatmap(grid, Palette(), vmax=3.0,
                                  title=f"{args.country}: {matrix_key(row_kind, col_kind)}")
    elif args.what == "network":
        network = _build_network(args, corpus)
        data = render_network(network, _layout_seed(args), args.min_weight)
    else:
        field = _AGAINST_FIELDS[args.metric]
        series = [(r.country, getattr(r, field)) for r in country_comparison(corpus)]
        data = render_bars(series, args.orientation, title=args.metric)
    _write_or_print(data, args.out)
    return EXIT_OK


def _cmd_taxonomy(args) -> int:
    _emit(taxonomy_document())
    return EXIT_OK


def _manifest_entry(root: Path, path: Path) -> dict:
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    return {"path": str(path.relative_to(root)).replace(os.sep, "/"), "sha256": digest}


def _cmd_report(args) -> int:
    with open(args.corpus, "rb") as fh:
        raw = fh.read()
    corpus = load_corpus(raw)
    seed = _layout_seed(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    palette = Palette()

    def write(rel: str, data: bytes) -> None:
        path = out / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)

    def write_json(rel: str, payload) -> None:
        write(rel, (json.dumps(payload, indent=2) + "\n").encode("utf-8"))

    write_json("taxonomy.json", taxonomy_document())
    write_json("indices.json", [dataclasses.asdict(r) for r in country_comparison(corpus)])
    write_json("prevalence.json", {
        kind.value: [
            {"component": e.component.code, "count": e.count,
             "percent": e.percent, "percent_rounded": e.percent_rounded}
            for e in prevalence(corpus, kind).entries
        ]
        for kind in ComponentKind
    })
    write_json("strongest_pairs.json", [
        {"pair": list(p.pair), "count": p.count, "percent": p.percent}
        for p in strongest_pairs(corpus, min_score=3)
    ])
    for grouping in Grouping:
        write_json(f"groups_{grouping.value}.json", [
            {"group": p.group_key, "members": list(p.members), "mean_indices": p.mean_indices,
             "mean_matrices": {k: [list(r) for r in g] for k, g in p.mean_matrices.items()}}
            for p in group_profile(corpus, grouping)
        ])
    write_json("temporal_trends.json", temporal_trends(corpus))

    rows = country_comparison(corpus)
    comparison = LabeledGrid(
        row_labels=tuple(r.country for r in rows),
        col_labels=("coverage", "specificity", "sai", "alignment_coverage", "mean"),
        values=tuple(
            (r.objective_coverage, r.implementation_specificity, r.strategic_alignment,
             r.alignment_coverage, r.mean_alignment / 3)
            for r in rows
        ),
    )
    write("comparison_heatmap.svg", render_heatmap(comparison, palette, vmax=1.0,
                                                   title="country comparison"))
    write("coverage_bars.svg", render_bars(
        [(r.country, r.alignment_coverage) for r in rows], title="alignment coverage"))
    write("mean_alignment_bars.svg", render_bars(
        [(r.country, r.mean_alignment) for r in rows], title="mean alignment"))

    for kind in ComponentKind:
        network = build_cooccurrence_network(corpus, kind)
        partition = detect_communities(network)
        base = f"cooccurrence/{kind.value}"
        write(f"{base}.json", export_graph(network, GraphFormat.NODE_LINK_JSON, partition.assignment))
        write(f"{base}.graphml", export_graph(network, GraphFormat.GRAPHML, partition.assignment))
        write(f"{base}.dot", export_graph(network, GraphFormat.DOT, partition.assignment))
        write(f"{base}.svg", render_network(network, seed))

    for strategy in corpus.strategies:
        _warn_degenerate(strategy)
        slug = _slug(strategy.meta.country)
        for row_kind, col_kind in KIND_PAIRS:
            matrix = build_matrix(strategy, row_kind, col_kind)
            key = matrix_key(row_kind, col_kind)
            write(f"countries/{slug}/matrix_{key}.csv", matrix_to_csv(matrix))
            grid = LabeledGrid(
                row_labels=tuple(c.code for c in matrix.rows),
                col_labels=tuple(c.code for c in matrix.cols),
                values=tuple(tuple(float(v) for v in row) for row in matrix.cells),
            )
            write(f"countries/{slug}/heatmap_{key}.svg",
                  render_heatmap(grid, palette, vmax=3.0,
                                 title=f"{strategy.meta.country}: {key}"))
        network = build_policy_network(strategy)
        partition = detect_communities(network)
        write(f"countries/{slug}/network.json",
              export_graph(network, GraphFormat.NODE_LINK_JSON, partition.assignment))
        write(f"countries/{slug}/network.graphml",
              export_graph(network, GraphFormat.GRAPHML, partition.assignment))
        write(f"countries/{slug}/network.dot",
              export_graph(network, GraphFormat.DOT, partition.assignment))
        write(f"countries/{slug}/network.svg", render_network(network, seed))
        write_json(f"countries/{slug}/communities.json", {
            "country": strategy.meta.country,
            "modularity": partition.modularity,
            "communities": [
                {"component": component.code, "community": community}
                for (component, _), community in zip(network.nodes, partition.assignment)
            ],
        })
        cent = centralities(network)
        write_json(f"countries/{slug}/centralities.json", [
            {"component": component.code, "degree": cent.degree[i],
             "betweenness": cent.betweenness[i], "eigenvector": cent.eigenvector[i]}
            for i, (component, _) in enumerate(network.nodes)
        ])

    artifacts = sorted(p for p in out.rglob("*") if p.is_file() and p.name != "manifest.json")
    manifest = {
        "tool_version": __version__,
        "corpus_digest": hashlib.sha256(raw).hexdigest(),
        "artifacts": [_manifest_entry(out, p) for p in artifacts],
    }
    write_json("manifest.json", manifest)
    print(json.dumps({"out": str(out), "artifacts": len(artifacts)}))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherence-atlas",
        description="Strategic-alignment analytics over coded strategy corpora.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a corpus file")
    p.add_argument("corpus")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("reliability", help="inter-coder agreement report")
    p.add_argument("--coder-a", required=True)
    p.add_argument("--coder-b", required=True)
    p.add_argument("--adjudications")
    p.add_argument("--out", help="write the merged consensus corpus here")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=_cmd_reliability)

    p = sub.add_parser("matrices", help="alignment matrices per country")
    p.add_argument("--corpus", required=True)
    p.add_argument("--country")
    p.add_argument("--out", help="write CSV grids into this directory")
    p.set_defaults(func=_cmd_matrices)

    p = sub.add_parser("indices", help="per-country index reports")
    p.add_argument("--corpus", required=True)
    p.add_argument("--sophistication", action="store_true",
                   help="include foresight sophistication columns")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=_cmd_indices)

    p = sub.add_parser("network", help="export a component network")
    p.add_argument("--corpus", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--country")
    group.add_argument("--cooccurrence", choices=sorted(_KIND_NAMES))
    p.add_argument("--format", required=True, choices=["graphml", "dot", "json"])
    p.add_argument("--communities", action="store_true",
                   help="annotate nodes with detected communities")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_network)

    p = sub.add_parser("communities", help="community partition for a country")
    p.add_argument("--corpus", required=True)
    p.add_argument("--country", required=True)
    p.set_defaults(func=_cmd_communities)

    p = sub.add_parser("compare", help="group profiles by model, region, or wave")
    p.add_argument("--corpus", required=True)
    p.add_argument("--group-by", required=True, choices=["model", "region", "wave"])
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("correlate", help="correlate indicators against an index")
    p.add_argument("--corpus", required=True)
    p.add_argument("--indicators", required=True)
    p.add_argument("--against", required=True, choices=sorted(_AGAINST_FIELDS))
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("render", help="render an SVG figure")
    p.add_argument("what", choices=["heatmap", "network", "bars"])
    p.add_argument("--corpus", required=True)
    p.add_argument("--country")
    p.add_argument("--cooccurrence", choices=sorted(_KIND_NAMES))
    p.add_argument("--matrix", choices=sorted(_MATRIX_NAMES))
    p.add_argument("--comparison", action="store_true")
    p.add_argument("--metric", choices=sorted(_AGAINST_FIELDS), default="coverage")
    p.add_argument("--orientation", choices=["horizontal", "vertical"], default="horizontal")
    p.add_argument("--min-weight", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("report", help="full analysis report directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("taxonomy", help="taxonomy operations")
    p.add_argument("action", choices=["dump"])
    p.set_defaults(func=_cmd_taxonomy)

    return parser


def _check_render_args(args, parser) -> None:
    if args.command != "render":
        return
    if args.what == "heatmap" and not args.comparison:
        if not (args.matrix and args.country):
            parser.error("render heatmap requires --comparison or both --matrix and --country")
    if args.what == "network" and not (args.country or args.cooccurrence):
        parser.error("render network requires --country or --cooccurrence")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _check_render_args(args, parser)
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except IsADirectoryError as exc:
        print(f"error: {exc.filename} is a directory", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusParseError, CorpusValidationError, MergeError,
            AnalysisError, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except CoherenceAtlasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
