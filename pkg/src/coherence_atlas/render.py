"""Deterministic visual exports: SVG heatmaps, network drawings, bar
charts, and GraphML/DOT/node-link graph interchange.

Every render is a pure function of its inputs (plus an explicit layout
seed); repeated calls produce byte-identical output. No clocks, no
ambient randomness, no raster libraries.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from math import sqrt
from xml.sax.saxutils import escape

import numpy as np

from .errors import CorpusParseError
from .network import NetworkProvenance, PolicyNetwork
from .taxonomy import ComponentId, ComponentKind, parse_component

DEFAULT_SEED = 42

KIND_COLORS = {
    ComponentKind.OBJECTIVE: "#d62728",   # red
    ComponentKind.FORESIGHT: "#1f77b4",   # blue
    ComponentKind.INSTRUMENT: "#2ca02c",  # green
}

LAYOUT_ITERATIONS = 500


@dataclass(frozen=True)
class Palette:
    low: str = "#F7FBFF"
    high: str = "#08306B"

    def color_at(self, fraction: float) -> str:
        """Linear sRGB interpolation; fraction clamped to [0, 1]."""
        t = max(0.0, min(1.0, fraction))
        lo = _parse_hex(self.low)
        hi = _parse_hex(self.high)
        rgb = tuple(round(a + (b - a) * t) for a, b in zip(lo, hi))
        return "#{:02x}{:02x}{:02x}".format(*rgb)


@dataclass(frozen=True)
class LayoutSeed:
    seed: int = DEFAULT_SEED


@dataclass(frozen=True)
class LabeledGrid:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]


class GraphFormat(Enum):
    GRAPHML = "graphml"
    DOT = "dot"
    NODE_LINK_JSON = "json"


def _parse_hex(color: str) -> tuple[int, int, int]:
    c = color.lstrip("#")
    return int(c[0:2], 16), int(c[2:4], 16), int(c[4:6], 16)


def _fmt(x: float) -> str:
    """Minimal stable numeral: integers bare, floats to <= 3 decimals."""
    if x == int(x):
        return str(int(x))
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return s if s not in ("-0", "") else "0"


def _fmt_value(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return f"{x:.6g}"


def _svg_document(width: float, height: float, body: list[str]) -> bytes:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n'
    )
    return (head + "\n".join(body) + "\n</svg>\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Heatmap


def render_heatmap(grid: LabeledGrid, palette: Palette = Palette(),
                   vmax: float | None = None, title: str = "") -> bytes:
    """One rect per cell, colored at value/vmax along the palette.

    For 0-3 score matrices pass vmax=3 so intensities map to fixed
    fractions; otherwise the grid maximum is used (1 when all zero).
    """
    if not grid.values or not grid.values[0]:
        raise ValueError("heatmap requires a non-empty grid")
    if len(grid.row_labels) != len(grid.values) or any(
        len(row) != len(grid.col_labels) for row in grid.values
    ):
        raise ValueError("grid labels do not match value dimensions")
    if vmax is None:
        vmax = max((v for row in grid.values for v in row), default=0.0) or 1.0

    cell = 26
    left = 10 + 8 * max(len(s) for s in grid.row_labels)
    top = 16 + 6 * max(len(s) for s in grid.col_labels)
    if title:
        top += 20
    legend_h = 46
    width = left + cell * len(grid.col_labels) + 20
    height = top + cell * len(grid.row_labels) + legend_h

    body = ['<style>text { font-family: monospace; font-size: 11px; }</style>']
    if title:
        body.append(f'<text x="{_fmt(left)}" y="16" font-weight="bold">{escape(title)}</text>')
    for j, label in enumerate(grid.col_labels):
        x = left + j * cell + cell / 2
        body.append(
            f'<text x="{_fmt(x)}" y="{_fmt(top - 6)}" text-anchor="start" '
            f'transform="rotate(-60 {_fmt(x)} {_fmt(top - 6)})">{escape(label)}</text>'
        )
    for i, label in enumerate(grid.row_labels):
        y = top + i * cell + cell / 2 + 4
        body.append(f'<text x="{_fmt(left - 6)}" y="{_fmt(y)}" text-anchor="end">{escape(label)}</text>')
    for i, row in enumerate(grid.values):
        for j, value in enumerate(row):
            x = left + j * cell
            y = top + i * cell
            color = palette.color_at(value / vmax)
            tooltip = f"{grid.row_labels[i]} x {grid.col_labels[j]} = {_fmt_value(value)}"
            body.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{cell}" height="{cell}" '
                f'fill="{color}" stroke="#ffffff" stroke-width="1">'
                f'<title>{escape(tooltip)}</title></rect>'
            )
    # Legend: five swatches from low to high.
    ly = top + cell * len(grid.row_labels) + 14
    body.append(f'<text x="{_fmt(left)}" y="{_fmt(ly + 12)}" text-anchor="end">0</text>')
    for k in range(5):
        frac = k / 4
        body.append(
            f'<rect x="{_fmt(left + 6 + k * 22)}" y="{_fmt(ly)}" width="22" height="16" '
            f'fill="{palette.color_at(frac)}" stroke="#888888" stroke-width="0.5"/>'
        )
    body.append(f'<text x="{_fmt(left + 6 + 5 * 22 + 6)}" y="{_fmt(ly + 12)}">{_fmt_value(vmax)}</text>')
    return _svg_document(width, height, body)


# ---------------------------------------------------------------------------
# Network drawing


def _layout(network: PolicyNetwork, seed: int) -> np.ndarray:
    """Seeded Fruchterman-Reingold with a fixed iteration budget."""
    n = network.node_count
    rng = random.Random(seed)
    pos = np.array([[rng.random(), rng.random()] for _ in range(n)], dtype=float)
    if n <= 1:
        return pos
    weights = np.zeros((n, n))
    for i, j, w in network.edges:
        weights[i, j] = w
        weights[j, i] = w
    if weights.max() > 0:
        weights = weights / weights.max()
    k = sqrt(1.0 / n)
    temperature = 0.1
    cooling = temperature / (LAYOUT_ITERATIONS + 1)
    for _ in range(LAYOUT_ITERATIONS):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((delta * delta).sum(axis=2))
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 0.01)
        repulsion = (k * k) / (dist * dist)
        attraction = weights * dist / k
        force = (delta * (repulsion - attraction)[:, :, None]).sum(axis=1)
        length = np.sqrt((force * force).sum(axis=1))
        length = np.maximum(length, 1e-9)
        pos += force / length[:, None] * np.minimum(length, temperature)[:, None]
        temperature -= cooling
    return pos


def render_network(network: PolicyNetwork, seed: LayoutSeed = LayoutSeed(),
                   min_weight: float | None = None) -> bytes:
    """Force-directed SVG drawing; node color by kind, width by weight."""
    width, height = 640.0, 480.0
    margin = 60.0
    body = ['<style>text { font-family: monospace; font-size: 10px; }</style>']

    edges = network.edges
    if min_weight is not None:
        edges = tuple(e for e in edges if e[2] >= min_weight)

    if network.node_count > 0:
        pos = _layout(network, seed.seed)
        lo = pos.min(axis=0)
        hi = pos.max(axis=0)
        span = np.maximum(hi - lo, 1e-9)
        scaled = (pos - lo) / span
        xs = margin + scaled[:, 0] * (width - 2 * margin)
        ys = margin + scaled[:, 1] * (height - 2 * margin)
        max_w = max((e[2] for e in edges), default=1.0)
        max_size = max((size for _, size in network.nodes), default=1.0) or 1.0
        for i, j, w in edges:
            body.append(
                f'<line x1="{_fmt(xs[i])}" y1="{_fmt(ys[i])}" '
                f'x2="{_fmt(xs[j])}" y2="{_fmt(ys[j])}" '
                f'stroke="#999999" stroke-width="{_fmt(0.8 + 2.4 * w / max_w)}"/>'
            )
        for idx, (component, size) in enumerate(network.nodes):
            radius = 5.0 + 9.0 * size / max_size
            color = KIND_COLORS[component.kind]
            body.append(
                f'<circle cx="{_fmt(xs[idx])}" cy="{_fmt(ys[idx])}" r="{_fmt(radius)}" '
                f'fill="{color}" stroke="#333333" stroke-width="0.8">'
                f'<title>{escape(component.code)} (size {_fmt_value(size)})</title></circle>'
            )
            body.append(
                f'<text x="{_fmt(xs[idx] + radius + 2)}" y="{_fmt(ys[idx] + 3)}">'
                f'{escape(component.code)}</text>'
            )
    # Legend (always drawn, even for empty networks).
    for row, kind in enumerate(ComponentKind):
        y = height - 46 + row * 14
        body.append(f'<circle cx="14" cy="{_fmt(y)}" r="5" fill="{KIND_COLORS[kind]}"/>')
        body.append(f'<text x="24" y="{_fmt(y + 3)}">{kind.value}</text>')
    return _svg_document(width, height, body)


# ---------------------------------------------------------------------------
# Bar chart


def render_bars(series: list[tuple[str, float]], orientation: str = "horizontal",
                title: str = "") -> bytes:
    """Labeled bars scaled to the maximum value."""
    if orientation not in ("horizontal", "vertical"):
        raise ValueError(f"unknown orientation {orientation!r}")
    peak = max((v for _, v in series), default=0.0) or 1.0
    body = ['<style>text { font-family: monospace; font-size: 11px; }</style>']
    if orientation == "horizontal":
        label_w = 10 + 8 * max((len(s) for s, _ in series), default=1)
        bar_max = 360.0
        top = 30.0 if title else 10.0
        width = label_w + bar_max + 70
        height = top + 20.0 * len(series) + 10
        if title:
            body.append(f'<text x="{_fmt(label_w)}" y="18" font-weight="bold">{escape(title)}</text>')
        for i, (label, value) in enumerate(series):
            y = top + i * 20.0
            length = bar_max * value / peak
            body.append(f'<text x="{_fmt(label_w - 6)}" y="{_fmt(y + 12)}" text-anchor="end">{escape(label)}</text>')
            body.append(
                f'<rect x="{_fmt(label_w)}" y="{_fmt(y + 2)}" width="{_fmt(length)}" '
                f'height="14" fill="#4477aa"><title>{escape(label)} = {_fmt_value(value)}</title></rect>'
            )
            body.append(f'<text x="{_fmt(label_w + length + 4)}" y="{_fmt(y + 12)}">{_fmt_value(value)}</text>')
        return _svg_document(width, height, body)

    bar_w = 26.0
    bar_max = 260.0
    top = 40.0 if title else 20.0
    width = 40 + bar_w * 1.5 * max(len(series), 1)
    height = top + bar_max + 60
    if title:
        body.append(f'<text x="20" y="18" font-weight="bold">{escape(title)}</text>')
    for i, (label, value) in enumerate(series):
        x = 30 + i * bar_w * 1.5
        length = bar_max * value / peak
        y = top + bar_max - length
        body.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" height="{_fmt(length)}" '
            f'fill="#4477aa"><title>{escape(label)} = {_fmt_value(value)}</title></rect>'
        )
        tx = x + bar_w / 2
        ty = top + bar_max + 10
        body.append(
            f'<text x="{_fmt(tx)}" y="{_fmt(ty)}" text-anchor="end" '
            f'transform="rotate(-60 {_fmt(tx)} {_fmt(ty)})">{escape(label)}</text>'
        )
    return _svg_document(width, height, body)


# ---------------------------------------------------------------------------
# Graph interchange


def export_graph(network: PolicyNetwork, fmt: GraphFormat,
                 communities: tuple[int, ...] | None = None) -> bytes:
    """Serialize a network with code/kind/size (and community) attributes."""
    if communities is not None and len(communities) != network.node_count:
        raise ValueError("community assignment length does not match node count")
    if fmt is GraphFormat.GRAPHML:
        return _to_graphml(network, communities)
    if fmt is GraphFormat.DOT:
        return _to_dot(network, communities)
    return _to_node_link(network, communities)


def _to_graphml(network: PolicyNetwork, communities) -> bytes:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns"',
        '         xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"',
        '         xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns'
        ' http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">',
        '  <key id="d0" for="node" attr.name="code" attr.type="string"/>',
        '  <key id="d1" for="node" attr.name="kind" attr.type="string"/>',
        '  <key id="d2" for="node" attr.name="size" attr.type="double"/>',
        '  <key id="d3" for="node" attr.name="community" attr.type="long"/>',
        '  <key id="d4" for="edge" attr.name="weight" attr.type="double"/>',
        f'  <graph id="{network.provenance.value}" edgedefault="undirected">',
    ]
    for idx, (component, size) in enumerate(network.nodes):
        lines.append(f'    <node id="n{idx}">')
        lines.append(f'      <data key="d0">{escape(component.code)}</data>')
        lines.append(f'      <data key="d1">{component.kind.value}</data>')
        lines.append(f'      <data key="d2">{_fmt_value(size)}</data>')
        if communities is not None:
            lines.append(f'      <data key="d3">{communities[idx]}</data>')
        lines.append('    </node>')
    for eidx, (i, j, w) in enumerate(network.edges):
        lines.append(f'    <edge id="e{eidx}" source="n{i}" target="n{j}">')
        lines.append(f'      <data key="d4">{_fmt_value(w)}</data>')
        lines.append('    </edge>')
    lines.append('  </graph>')
    lines.append('</graphml>')
    return ("\n".join(lines) + "\n").encode("utf-8")


def _to_dot(network: PolicyNetwork, communities) -> bytes:
    lines = ["graph coherence {"]
    for idx, (component, size) in enumerate(network.nodes):
        attrs = [f'kind="{component.kind.value}"', f"size={_fmt_value(size)}"]
        if communities is not None:
            attrs.append(f"community={communities[idx]}")
        lines.append(f'  "{component.code}" [{", ".join(attrs)}];')
    for i, j, w in network.edges:
        lines.append(
            f'  "{network.nodes[i][0].code}" -- "{network.nodes[j][0].code}" '
            f'[weight={_fmt_value(w)}];'
        )
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _to_node_link(network: PolicyNetwork, communities) -> bytes:
    nodes = []
    for idx, (component, size) in enumerate(network.nodes):
        entry = {"id": component.code, "kind": component.kind.value, "size": size}
        if communities is not None:
            entry["community"] = communities[idx]
        nodes.append(entry)
    links = [
        {"source": network.nodes[i][0].code, "target": network.nodes[j][0].code, "weight": w}
        for i, j, w in network.edges
    ]
    doc = {
        "directed": False,
        "provenance": network.provenance.value,
        "nodes": nodes,
        "links": links,
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def network_from_node_link(data: bytes | str) -> PolicyNetwork:
    """Load a node-link document back into a PolicyNetwork."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CorpusParseError(f"malformed node-link JSON: {exc.msg}") from None
    try:
        provenance = NetworkProvenance(doc["provenance"])
        nodes = tuple(
            (parse_component(n["id"]), float(n["size"])) for n in doc["nodes"]
        )
        index = {component.code: i for i, (component, _) in enumerate(nodes)}
        edges = tuple(
            (index[e["source"]], index[e["target"]], float(e["weight"]))
            for e in doc["links"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusParseError(f"invalid node-link document: {exc}") from None
    return PolicyNetwork(nodes=nodes, edges=edges, provenance=provenance)
