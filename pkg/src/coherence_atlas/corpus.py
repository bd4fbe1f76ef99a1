"""Coded-strategy data model: JSON corpus format, validation, dual-coder merge.

A corpus is one coder's stream. Dual coding is represented as two corpora
plus an adjudication list; `merge_coders` builds the consensus corpus.
All loaded values are immutable and safe to share across analysis tasks.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

from .errors import CorpusParseError, CorpusValidationError, MergeError
from .taxonomy import (
    ComponentId,
    ComponentKind,
    GovernanceModel,
    Region,
    component_index,
    order_pair,
    parse_component,
)

SCHEMA_VERSION = "1"

YEAR_RANGE = (2017, 2025)


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: Severity
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity is Severity.WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class StrategyMeta:
    country: str
    strategy_title: str
    publication_year: int
    governance_model: GovernanceModel
    region: Region


@dataclass(frozen=True)
class ComponentCoding:
    component: ComponentId
    prominence: int
    specificity: int | None = None          # instruments only
    explicit_method: bool | None = None     # foresight only
    intensity_subscores: tuple[int, int, int] | None = None  # objectives only


@dataclass(frozen=True)
class AlignmentEvidence:
    lexical_proximity: bool = False
    explicit_reference: bool = False
    elaboration: bool = False

    @property
    def dimension_count(self) -> int:
        return int(self.lexical_proximity) + int(self.explicit_reference) + int(self.elaboration)

    @property
    def intensity(self) -> int:
        """1-3 intensity once both components are present."""
        d = self.dimension_count
        return 3 if d == 3 else (2 if d >= 1 else 1)


@dataclass(frozen=True)
class AlignmentCell:
    a: ComponentId
    b: ComponentId
    evidence: AlignmentEvidence

    def key(self) -> tuple[str, str]:
        x, y = order_pair(self.a, self.b)
        return x.code, y.code


@dataclass(frozen=True)
class CodedStrategy:
    meta: StrategyMeta
    codings: tuple[ComponentCoding, ...]
    cells: tuple[AlignmentCell, ...]
    coder_id: str | None = None

    def coding_map(self) -> dict[str, ComponentCoding]:
        return {c.component.code: c for c in self.codings}

    def present_components(self, kind: ComponentKind | None = None) -> tuple[ComponentId, ...]:
        """Components coded with prominence >= 1, in catalog order."""
        out = [
            c.component
            for c in self.codings
            if c.prominence >= 1 and (kind is None or c.component.kind is kind)
        ]
        return tuple(sorted(out, key=component_index))

    def cell_map(self) -> dict[tuple[str, str], AlignmentCell]:
        return {cell.key(): cell for cell in self.cells}


@dataclass(frozen=True)
class Corpus:
    schema_version: str
    strategies: tuple[CodedStrategy, ...]

    def countries(self) -> tuple[str, ...]:
        return tuple(s.meta.country for s in self.strategies)

    def by_country(self) -> dict[str, CodedStrategy]:
        return {s.meta.country: s for s in self.strategies}


@dataclass(frozen=True)
class Adjudication:
    """Consensus ruling for one coder disagreement.

    Component rulings use decision 'include' or 'exclude'; cell rulings
    name the winning coder, 'coder_a' or 'coder_b'.
    """

    country: str
    decision: str
    component: str | None = None
    pair: tuple[str, str] | None = None


# ---------------------------------------------------------------------------
# Parsing


def _expect(obj: Any, typ: type, path: str) -> Any:
    if not isinstance(obj, typ) or (typ is int and isinstance(obj, bool)):
        raise CorpusParseError(f"expected {typ.__name__}, got {type(obj).__name__}", path)
    return obj


def _parse_meta(raw: Any, path: str) -> StrategyMeta:
    _expect(raw, dict, path)
    for key in ("country", "strategy_title", "publication_year", "governance_model", "region"):
        if key not in raw:
            raise CorpusParseError(f"missing field {key!r}", path)
    try:
        model = GovernanceModel(raw["governance_model"])
    except ValueError:
        raise CorpusParseError(
            f"unknown governance model {raw['governance_model']!r}", f"{path}.governance_model"
        ) from None
    try:
        region = Region(raw["region"])
    except ValueError:
        raise CorpusParseError(f"unknown region {raw['region']!r}", f"{path}.region") from None
    return StrategyMeta(
        country=_expect(raw["country"], str, f"{path}.country"),
        strategy_title=_expect(raw["strategy_title"], str, f"{path}.strategy_title"),
        publication_year=_expect(raw["publication_year"], int, f"{path}.publication_year"),
        governance_model=model,
        region=region,
    )


def _parse_coding(raw: Any, path: str) -> ComponentCoding:
    _expect(raw, dict, path)
    if "component" not in raw or "prominence" not in raw:
        raise CorpusParseError("coding requires 'component' and 'prominence'", path)
    try:
        component = parse_component(_expect(raw["component"], str, f"{path}.component"))
    except Exception as exc:
        raise CorpusParseError(str(exc), f"{path}.component") from None
    subscores = raw.get("intensity_subscores")
    if subscores is not None:
        _expect(subscores, list, f"{path}.intensity_subscores")
        if len(subscores) != 3:
            raise CorpusParseError("intensity_subscores must have 3 entries", f"{path}.intensity_subscores")
        subscores = tuple(_expect(v, int, f"{path}.intensity_subscores[{i}]") for i, v in enumerate(subscores))
    explicit = raw.get("explicit_method")
    if explicit is not None:
        _expect(explicit, bool, f"{path}.explicit_method")
    specificity = raw.get("specificity")
    if specificity is not None:
        _expect(specificity, int, f"{path}.specificity")
    return ComponentCoding(
        component=component,
        prominence=_expect(raw["prominence"], int, f"{path}.prominence"),
        specificity=specificity,
        explicit_method=explicit,
        intensity_subscores=subscores,
    )


def _parse_cell(raw: Any, path: str) -> AlignmentCell:
    _expect(raw, dict, path)
    for key in ("a", "b", "evidence"):
        if key not in raw:
            raise CorpusParseError(f"missing field {key!r}", path)
    try:
        a = parse_component(_expect(raw["a"], str, f"{path}.a"))
        b = parse_component(_expect(raw["b"], str, f"{path}.b"))
    except Exception as exc:
        raise CorpusParseError(str(exc), path) from None
    ev = _expect(raw["evidence"], dict, f"{path}.evidence")
    flags = {}
    for key in ("lexical_proximity", "explicit_reference", "elaboration"):
        flags[key] = _expect(ev.get(key, False), bool, f"{path}.evidence.{key}")
    return AlignmentCell(a=a, b=b, evidence=AlignmentEvidence(**flags))


def _parse_strategy(raw: Any, path: str) -> CodedStrategy:
    _expect(raw, dict, path)
    if "meta" not in raw:
        raise CorpusParseError("missing field 'meta'", path)
    meta = _parse_meta(raw["meta"], f"{path}.meta")
    codings = [
        _parse_coding(c, f"{path}.codings[{i}]")
        for i, c in enumerate(_expect(raw.get("codings", []), list, f"{path}.codings"))
    ]
    cells = [
        _parse_cell(c, f"{path}.cells[{i}]")
        for i, c in enumerate(_expect(raw.get("cells", []), list, f"{path}.cells"))
    ]
    coder_id = raw.get("coder_id")
    if coder_id is not None:
        _expect(coder_id, str, f"{path}.coder_id")
    # Canonical internal order regardless of file order.
    codings.sort(key=lambda c: component_index(c.component))
    cells.sort(key=lambda c: (component_index(c.a), component_index(c.b)))
    cells = [AlignmentCell(*order_pair(c.a, c.b), c.evidence) for c in cells]
    cells.sort(key=lambda c: (component_index(c.a), component_index(c.b)))
    return CodedStrategy(meta=meta, codings=tuple(codings), cells=tuple(cells), coder_id=coder_id)


def load_corpus(data: bytes | str) -> Corpus:
    """Parse and validate a JSON corpus document in one pass.

    Raises CorpusParseError for malformed documents and
    CorpusValidationError listing every invariant violation; a returned
    Corpus is always valid (warnings aside).
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusParseError(f"not valid UTF-8: {exc}") from None
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CorpusParseError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    _expect(raw, dict, "$")
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise CorpusParseError(f"unsupported schema_version {version!r}", "$.schema_version")
    strategies = tuple(
        _parse_strategy(s, f"$.strategies[{i}]")
        for i, s in enumerate(_expect(raw.get("strategies", []), list, "$.strategies"))
    )
    corpus = Corpus(schema_version=version, strategies=strategies)
    report = validate(corpus)
    if not report.ok:
        raise CorpusValidationError(report.errors)
    return corpus


def load_corpus_file(path) -> Corpus:
    with open(path, "rb") as fh:
        return load_corpus(fh.read())


# ---------------------------------------------------------------------------
# Validation


def _validate_strategy(s: CodedStrategy, path: str, out: list[Finding]) -> None:
    err = lambda p, m: out.append(Finding(Severity.ERROR, p, m))
    warn = lambda p, m: out.append(Finding(Severity.WARNING, p, m))

    lo, hi = YEAR_RANGE
    if not lo <= s.meta.publication_year <= hi:
        warn(f"{path}.meta.publication_year",
             f"publication_year {s.meta.publication_year} outside [{lo}, {hi}]")

    seen: set[str] = set()
    present: set[str] = set()
    for i, c in enumerate(s.codings):
        p = f"{path}.codings[{i}]"
        if c.component.code in seen:
            err(p, f"duplicate coding for component {c.component.code}")
        seen.add(c.component.code)
        if not 0 <= c.prominence <= 3:
            err(f"{p}.prominence", f"prominence {c.prominence} outside 0..3")
        elif c.prominence == 0:
            warn(p, f"prominence 0 coding present for {c.component.code}")
        else:
            present.add(c.component.code)
        kind = c.component.kind
        if c.specificity is not None:
            if kind is not ComponentKind.INSTRUMENT:
                err(f"{p}.specificity", "specificity is only valid for instruments")
            elif not 0 <= c.specificity <= 3:
                err(f"{p}.specificity", f"specificity {c.specificity} outside 0..3")
        if c.explicit_method is not None and kind is not ComponentKind.FORESIGHT:
            err(f"{p}.explicit_method", "explicit_method is only valid for foresight methods")
        if c.intensity_subscores is not None:
            if kind is not ComponentKind.OBJECTIVE:
                err(f"{p}.intensity_subscores", "intensity_subscores are only valid for objectives")
            else:
                for j, v in enumerate(c.intensity_subscores):
                    if not 0 <= v <= 3:
                        err(f"{p}.intensity_subscores[{j}]", f"subscore {v} outside 0..3")

    seen_pairs: set[tuple[str, str]] = set()
    for i, cell in enumerate(s.cells):
        p = f"{path}.cells[{i}]"
        if cell.a.kind is cell.b.kind:
            err(p, f"cell pairs two components of the same kind ({cell.a.code}, {cell.b.code})")
        if cell.a.code == cell.b.code:
            err(p, f"cell pairs {cell.a.code} with itself")
        key = cell.key()
        if key in seen_pairs:
            err(p, f"duplicate cell for pair ({key[0]}, {key[1]})")
        seen_pairs.add(key)
        for comp in (cell.a, cell.b):
            if comp.code not in present:
                err(p, f"cell references uncoded component {comp.code}")
        if cell.evidence.elaboration and not cell.evidence.explicit_reference:
            err(f"{p}.evidence", "elaboration requires explicit_reference")


def validate(corpus: Corpus) -> ValidationReport:
    """Collect every invariant violation as a finding; never raises."""
    out: list[Finding] = []
    seen_countries: set[str] = set()
    for i, s in enumerate(corpus.strategies):
        path = f"$.strategies[{i}]"
        if s.meta.country in seen_countries:
            out.append(Finding(Severity.ERROR, f"{path}.meta.country",
                               f"duplicate country {s.meta.country!r}"))
        seen_countries.add(s.meta.country)
        _validate_strategy(s, path, out)
    return ValidationReport(findings=tuple(out))


# ---------------------------------------------------------------------------
# Canonical serialization


def _coding_to_json(c: ComponentCoding) -> dict:
    out: dict[str, Any] = {"component": c.component.code, "prominence": c.prominence}
    if c.specificity is not None:
        out["specificity"] = c.specificity
    if c.explicit_method is not None:
        out["explicit_method"] = c.explicit_method
    if c.intensity_subscores is not None:
        out["intensity_subscores"] = list(c.intensity_subscores)
    return out


def _cell_to_json(c: AlignmentCell) -> dict:
    return {
        "a": c.a.code,
        "b": c.b.code,
        "evidence": {
            "lexical_proximity": c.evidence.lexical_proximity,
            "explicit_reference": c.evidence.explicit_reference,
            "elaboration": c.evidence.elaboration,
        },
    }


def corpus_to_document(corpus: Corpus) -> dict:
    strategies = []
    for s in corpus.strategies:
        entry: dict[str, Any] = {
            "meta": {
                "country": s.meta.country,
                "strategy_title": s.meta.strategy_title,
                "publication_year": s.meta.publication_year,
                "governance_model": s.meta.governance_model.value,
                "region": s.meta.region.value,
            },
            "codings": [_coding_to_json(c) for c in s.codings],
            "cells": [_cell_to_json(c) for c in s.cells],
        }
        if s.coder_id is not None:
            entry["coder_id"] = s.coder_id
        strategies.append(entry)
    return {"schema_version": corpus.schema_version, "strategies": strategies}


def dump_corpus(corpus: Corpus) -> bytes:
    """Canonical JSON serialization; load(dump(x)) == x."""
    return (json.dumps(corpus_to_document(corpus), indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# CSV export


def _csv_bytes(header: list[str], rows: Iterable[list]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def export_codings_csv(corpus: Corpus) -> bytes:
    """One row per coding, ordered by country then catalog order."""
    rows = []
    for s in sorted(corpus.strategies, key=lambda s: s.meta.country):
        for c in s.codings:
            sub = c.intensity_subscores or ("", "", "")
            rows.append([
                s.meta.country,
                c.component.code,
                c.component.kind.value,
                c.prominence,
                "" if c.specificity is None else c.specificity,
                "" if c.explicit_method is None else str(c.explicit_method).lower(),
                sub[0], sub[1], sub[2],
            ])
    return _csv_bytes(
        ["country", "component", "kind", "prominence", "specificity", "explicit_method",
         "intensity_textual", "intensity_implementation", "intensity_resource"],
        rows,
    )


def export_cells_csv(corpus: Corpus) -> bytes:
    """One row per alignment cell, ordered by country then pair order."""
    rows = []
    for s in sorted(corpus.strategies, key=lambda s: s.meta.country):
        for c in s.cells:
            rows.append([
                s.meta.country,
                c.a.code,
                c.b.code,
                str(c.evidence.lexical_proximity).lower(),
                str(c.evidence.explicit_reference).lower(),
                str(c.evidence.elaboration).lower(),
            ])
    return _csv_bytes(
        ["country", "component_a", "component_b",
         "lexical_proximity", "explicit_reference", "elaboration"],
        rows,
    )


def export_csv(corpus: Corpus) -> dict[str, bytes]:
    return {"codings.csv": export_codings_csv(corpus), "cells.csv": export_cells_csv(corpus)}


# ---------------------------------------------------------------------------
# Dual-coder merge


def load_adjudications(data: bytes | str) -> tuple[Adjudication, ...]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CorpusParseError(f"malformed JSON: {exc.msg}") from None
    entries = raw.get("adjudications", raw) if isinstance(raw, dict) else raw
    _expect(entries, list, "$.adjudications")
    out = []
    for i, e in enumerate(entries):
        path = f"$.adjudications[{i}]"
        _expect(e, dict, path)
        if "country" not in e or "decision" not in e:
            raise CorpusParseError("adjudication requires 'country' and 'decision'", path)
        pair = e.get("pair")
        if pair is not None:
            _expect(pair, list, f"{path}.pair")
            if len(pair) != 2:
                raise CorpusParseError("pair must have 2 codes", f"{path}.pair")
            a, b = (parse_component(p) for p in pair)
            x, y = order_pair(a, b)
            pair = (x.code, y.code)
        component = e.get("component")
        if component is not None:
            component = parse_component(component).code
        if (component is None) == (pair is None):
            raise CorpusParseError("adjudication needs exactly one of 'component' or 'pair'", path)
        out.append(Adjudication(country=e["country"], decision=e["decision"],
                                component=component, pair=pair))
    return tuple(out)


def _derived_score(cells: dict[tuple[str, str], AlignmentCell], key: tuple[str, str]) -> int:
    """0-3 intensity for a co-present pair, by the evidence rule."""
    cell = cells.get(key)
    return 1 if cell is None else cell.evidence.intensity


def merge_coders(a: Corpus, b: Corpus, adjudications: Iterable[Adjudication] = ()) -> Corpus:
    """Build the consensus corpus from two coder streams.

    Component-identification disagreements (coded with prominence >= 1 by
    exactly one coder) and cell-score disagreements (derived 0-3 scores
    differ) must each be covered by an adjudication; anything unresolved
    raises MergeError naming every open item. Where both coders agree on
    a derived score but differ in evidence detail, coder A's record wins.
    """
    by_a, by_b = a.by_country(), b.by_country()
    if set(by_a) != set(by_b):
        only_a = sorted(set(by_a) - set(by_b))
        only_b = sorted(set(by_b) - set(by_a))
        raise MergeError(
            f"country sets differ (only coder A: {only_a}; only coder B: {only_b})"
        )

    adj_component: dict[tuple[str, str], str] = {}
    adj_pair: dict[tuple[str, str, str], str] = {}
    for adj in adjudications:
        if adj.component is not None:
            adj_component[(adj.country, adj.component)] = adj.decision
        else:
            adj_pair[(adj.country, *adj.pair)] = adj.decision

    unresolved: list[str] = []
    merged: list[CodedStrategy] = []
    for country in a.countries():
        sa, sb = by_a[country], by_b[country]
        map_a, map_b = sa.coding_map(), sb.coding_map()
        present_a = {c for c, v in map_a.items() if v.prominence >= 1}
        present_b = {c for c, v in map_b.items() if v.prominence >= 1}

        codings: list[ComponentCoding] = []
        consensus_present: set[str] = set()
        for code in sorted(present_a | present_b, key=lambda c: component_index(parse_component(c))):
            if code in present_a and code in present_b:
                codings.append(map_a[code])
                consensus_present.add(code)
                continue
            decision = adj_component.get((country, code))
            if decision is None:
                unresolved.append(f"{country}: component {code} coded by one coder only")
            elif decision == "include":
                codings.append(map_a[code] if code in present_a else map_b[code])
                consensus_present.add(code)
            elif decision != "exclude":
                unresolved.append(f"{country}: component {code} has unknown decision {decision!r}")

        cells_a, cells_b = sa.cell_map(), sb.cell_map()
        cells: list[AlignmentCell] = []
        pair_keys = sorted(
            set(cells_a) | set(cells_b),
            key=lambda k: (component_index(parse_component(k[0])), component_index(parse_component(k[1]))),
        )
        for key in pair_keys:
            if not (key[0] in consensus_present and key[1] in consensus_present):
                continue
            in_a = key[0] in present_a and key[1] in present_a
            in_b = key[0] in present_b and key[1] in present_b
            if in_a and in_b:
                score_a = _derived_score(cells_a, key)
                score_b = _derived_score(cells_b, key)
                if score_a == score_b:
                    chosen = cells_a.get(key, cells_b.get(key))
                else:
                    decision = adj_pair.get((country, *key))
                    if decision is None:
                        unresolved.append(
                            f"{country}: pair ({key[0]}, {key[1]}) scored {score_a} by coder A, "
                            f"{score_b} by coder B"
                        )
                        continue
                    if decision == "coder_a":
                        chosen = cells_a.get(key)
                    elif decision == "coder_b":
                        chosen = cells_b.get(key)
                    else:
                        unresolved.append(
                            f"{country}: pair ({key[0]}, {key[1]}) has unknown decision {decision!r}"
                        )
                        continue
            else:
                chosen = cells_a.get(key) if in_a else cells_b.get(key)
            if chosen is not None:
                cells.append(chosen)

        merged.append(CodedStrategy(meta=sa.meta, codings=tuple(codings),
                                    cells=tuple(cells), coder_id=sa.coder_id))

    if unresolved:
        raise MergeError(
            f"{len(unresolved)} unresolved disagreement(s): " + "; ".join(unresolved),
            unresolved,
        )
    return Corpus(schema_version=a.schema_version, strategies=tuple(merged))
