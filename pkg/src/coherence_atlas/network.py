"""Component networks: construction, centralities, communities, profile.

Betweenness uses exact rational arithmetic for path lengths and
dependency accumulation, so shortest-path ties are detected exactly and
results are identical under any node relabeling. Community detection is
a greedy modularity optimizer with a fixed visit order; with exact
arithmetic for gains, its tie-breaking is fully deterministic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import sqrt

import numpy as np

from .alignment import pair_scores
from .corpus import CodedStrategy, Corpus
from .taxonomy import ComponentId, ComponentKind, catalog, order_pair


class NetworkProvenance(Enum):
    STRATEGY_ALIGNMENT = "strategy_alignment"
    CORPUS_COOCCURRENCE = "corpus_cooccurrence"


@dataclass(frozen=True)
class PolicyNetwork:
    nodes: tuple[tuple[ComponentId, float], ...]
    edges: tuple[tuple[int, int, float], ...]
    provenance: NetworkProvenance

    def __post_init__(self):
        n = len(self.nodes)
        seen = set()
        for i, j, w in self.edges:
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) references missing node")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            if w <= 0:
                raise ValueError(f"edge ({i}, {j}) has non-positive weight {w}")
            seen.add(key)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def adjacency(self) -> list[dict[int, float]]:
        adj: list[dict[int, float]] = [{} for _ in self.nodes]
        for i, j, w in self.edges:
            adj[i][j] = w
            adj[j][i] = w
        return adj


@dataclass(frozen=True)
class CentralityReport:
    degree: tuple[float, ...]
    betweenness: tuple[float, ...]
    eigenvector: tuple[float, ...]


@dataclass(frozen=True)
class CommunityPartition:
    assignment: tuple[int, ...]
    modularity: float


@dataclass(frozen=True)
class NetworkProfile:
    centralization: float
    integration: float
    modularity: float


def build_policy_network(strategy: CodedStrategy) -> PolicyNetwork:
    """Per-strategy alignment network: node size = prominence, edge = score."""
    present = strategy.present_components()
    coding = strategy.coding_map()
    nodes = tuple((c, float(coding[c.code].prominence)) for c in present)
    index = {c.code: i for i, (c, _) in enumerate(nodes)}
    edges = []
    for (a, b), score in sorted(pair_scores(strategy).items(),
                                key=lambda kv: (index[kv[0][0]], index[kv[0][1]])):
        edges.append((index[a], index[b], float(score)))
    return PolicyNetwork(nodes=nodes, edges=tuple(edges),
                         provenance=NetworkProvenance.STRATEGY_ALIGNMENT)


def build_cooccurrence_network(corpus: Corpus, kind: ComponentKind) -> PolicyNetwork:
    """Single-kind network over the corpus: weights count shared strategies."""
    counts: dict[str, int] = {}
    pair_counts: dict[tuple[str, str], int] = {}
    for strategy in corpus.strategies:
        present = strategy.present_components(kind)
        for c in present:
            counts[c.code] = counts.get(c.code, 0) + 1
        for i, a in enumerate(present):
            for b in present[i + 1:]:
                x, y = order_pair(a, b)
                key = (x.code, y.code)
                pair_counts[key] = pair_counts.get(key, 0) + 1
    components = [c for c in catalog(kind) if c.code in counts]
    nodes = tuple((c, float(counts[c.code])) for c in components)
    index = {c.code: i for i, (c, _) in enumerate(nodes)}
    edges = tuple(
        (index[a], index[b], float(w))
        for (a, b), w in sorted(pair_counts.items(),
                                key=lambda kv: (index[kv[0][0]], index[kv[0][1]]))
    )
    return PolicyNetwork(nodes=nodes, edges=edges,
                         provenance=NetworkProvenance.CORPUS_COOCCURRENCE)


# ---------------------------------------------------------------------------
# Centralities


def _edge_lengths(network: PolicyNetwork) -> list[dict[int, Fraction]]:
    """Distance 1/weight per edge, as exact rationals."""
    lengths: list[dict[int, Fraction]] = [{} for _ in network.nodes]
    for i, j, w in network.edges:
        length = Fraction(1) / (Fraction(int(w)) if float(w).is_integer() else Fraction(w))
        lengths[i][j] = length
        lengths[j][i] = length
    return lengths


def _betweenness(network: PolicyNetwork) -> list[Fraction]:
    """Brandes accumulation with exact shortest-path arithmetic."""
    n = network.node_count
    lengths = _edge_lengths(network)
    scores = [Fraction(0) for _ in range(n)]
    for s in range(n):
        dist: dict[int, Fraction] = {s: Fraction(0)}
        sigma = [0] * n
        sigma[s] = 1
        preds: list[list[int]] = [[] for _ in range(n)]
        done = [False] * n
        order: list[int] = []
        heap: list[tuple[Fraction, int]] = [(Fraction(0), s)]
        while heap:
            d, v = heapq.heappop(heap)
            if done[v]:
                continue
            done[v] = True
            order.append(v)
            for w, length in lengths[v].items():
                nd = d + length
                old = dist.get(w)
                if old is None or nd < old:
                    dist[w] = nd
                    sigma[w] = sigma[v]
                    preds[w] = [v]
                    heapq.heappush(heap, (nd, w))
                elif nd == old and not done[w]:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [Fraction(0) for _ in range(n)]
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += Fraction(sigma[v], sigma[w]) * (1 + delta[w])
            if w != s:
                scores[w] += delta[w]
    return scores


def _eigenvector(network: PolicyNetwork) -> list[float]:
    """Power iteration on A + I per connected component, max-rescaled to 1."""
    n = network.node_count
    adj = network.adjacency()
    values = [0.0] * n
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        component = []
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            component.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        component.sort()
        if len(component) < 2:
            continue
        local = {v: i for i, v in enumerate(component)}
        k = len(component)
        matrix = np.zeros((k, k))
        for v in component:
            for w, weight in adj[v].items():
                matrix[local[v], local[w]] = weight
        x = np.full(k, 1 / sqrt(k))
        for _ in range(1000):
            y = matrix @ x + x  # shift by I keeps bipartite cases convergent
            norm = float(np.linalg.norm(y))
            y = y / norm
            if float(np.max(np.abs(y - x))) < 1e-10:
                x = y
                break
            x = y
        for v in component:
            values[v] = float(x[local[v]])
    peak = max(values, default=0.0)
    if peak > 0:
        values = [v / peak for v in values]
    return values


def centralities(network: PolicyNetwork) -> CentralityReport:
    """Degree, betweenness, and eigenvector centrality per node.

    Degree is weighted and normalized by (n-1) * max edge weight;
    betweenness uses distance 1/weight, pair-normalized with endpoints
    excluded; eigenvector is computed per connected component and scaled
    so the global maximum is 1. Singleton and edgeless graphs yield zeros.
    """
    n = network.node_count
    if n == 0:
        return CentralityReport((), (), ())
    if not network.edges or n == 1:
        zeros = tuple(0.0 for _ in range(n))
        return CentralityReport(zeros, zeros, zeros)

    max_weight = max(w for _, _, w in network.edges)
    strength = [0.0] * n
    for i, j, w in network.edges:
        strength[i] += w
        strength[j] += w
    degree = tuple(s / ((n - 1) * max_weight) for s in strength)

    if n < 3:
        betweenness = tuple(0.0 for _ in range(n))
    else:
        norm = Fraction((n - 1) * (n - 2))  # doubled raw scores over ordered pairs
        betweenness = tuple(float(b / norm) for b in _betweenness(network))

    return CentralityReport(degree=degree, betweenness=betweenness,
                            eigenvector=tuple(_eigenvector(network)))


# ---------------------------------------------------------------------------
# Communities


def modularity(network: PolicyNetwork, assignment: tuple[int, ...] | list[int]) -> float:
    """Newman Q of a node-to-community assignment under edge weights."""
    if len(assignment) != network.node_count:
        raise ValueError("assignment length does not match node count")
    if not network.edges:
        return 0.0
    m2 = Fraction(0)
    degree = [Fraction(0) for _ in range(network.node_count)]
    for i, j, w in network.edges:
        wf = Fraction(int(w)) if float(w).is_integer() else Fraction(w)
        degree[i] += wf
        degree[j] += wf
        m2 += 2 * wf
    internal: dict[int, Fraction] = {}
    totals: dict[int, Fraction] = {}
    for i, j, w in network.edges:
        if assignment[i] == assignment[j]:
            wf = Fraction(int(w)) if float(w).is_integer() else Fraction(w)
            internal[assignment[i]] = internal.get(assignment[i], Fraction(0)) + 2 * wf
    for v, d in enumerate(degree):
        totals[assignment[v]] = totals.get(assignment[v], Fraction(0)) + d
    q = Fraction(0)
    for community, total in totals.items():
        q += internal.get(community, Fraction(0)) / m2 - (total / m2) ** 2
    return float(q)


class _Aggregate:
    """Working graph for the greedy optimizer; weights stay rational."""

    def __init__(self, size: int):
        self.size = size
        self.adj: list[dict[int, Fraction]] = [{} for _ in range(size)]
        self.self_loops = [Fraction(0) for _ in range(size)]

    def add_edge(self, i: int, j: int, w: Fraction) -> None:
        if i == j:
            self.self_loops[i] += w
        else:
            self.adj[i][j] = self.adj[i].get(j, Fraction(0)) + w
            self.adj[j][i] = self.adj[j].get(i, Fraction(0)) + w

    def degree(self, i: int) -> Fraction:
        return sum(self.adj[i].values(), Fraction(0)) + 2 * self.self_loops[i]


def _local_moves(graph: _Aggregate, m2: Fraction) -> list[int]:
    """One level of greedy moves; nodes visited in index order."""
    community = list(range(graph.size))
    totals = [graph.degree(i) for i in range(graph.size)]
    degrees = [graph.degree(i) for i in range(graph.size)]
    improved = True
    while improved:
        improved = False
        for v in range(graph.size):
            home = community[v]
            k_v = degrees[v]
            links: dict[int, Fraction] = {}
            for w, weight in graph.adj[v].items():
                c = community[w]
                links[c] = links.get(c, Fraction(0)) + weight
            totals[home] -= k_v
            best_c = home
            best_gain = links.get(home, Fraction(0)) - totals[home] * k_v / m2
            for c in sorted(links):
                if c == best_c:
                    continue
                gain = links[c] - totals[c] * k_v / m2
                if gain > best_gain or (gain == best_gain and c < best_c):
                    best_gain = gain
                    best_c = c
            totals[best_c] += k_v
            if best_c != home:
                community[v] = best_c
                improved = True
    return community


def detect_communities(network: PolicyNetwork) -> CommunityPartition:
    """Greedy two-phase modularity optimization, fully deterministic.

    Nodes are visited in catalog (index) order, ties break toward the
    lowest community id, and the reported modularity is recomputed from
    the final assignment.
    """
    n = network.node_count
    if n == 0:
        return CommunityPartition(assignment=(), modularity=0.0)
    if not network.edges:
        return CommunityPartition(assignment=tuple(range(n)), modularity=0.0)

    m2 = Fraction(0)
    graph = _Aggregate(n)
    for i, j, w in network.edges:
        wf = Fraction(int(w)) if float(w).is_integer() else Fraction(w)
        graph.add_edge(i, j, wf)
        m2 += 2 * wf

    membership = list(range(n))  # original node -> current community label
    while True:
        community = _local_moves(graph, m2)
        labels = sorted(set(community))
        if len(labels) == graph.size:
            break
        relabel = {old: new for new, old in enumerate(labels)}
        membership = [relabel[community[c]] for c in membership]
        merged = _Aggregate(len(labels))
        for i in range(graph.size):
            ci = relabel[community[i]]
            merged.self_loops[ci] += graph.self_loops[i]
            for j, w in graph.adj[i].items():
                if j < i:
                    continue
                cj = relabel[community[j]]
                merged.add_edge(ci, cj, w)
        graph = merged

    # Dense ids in order of first appearance over node index.
    relabel: dict[int, int] = {}
    assignment = []
    for c in membership:
        if c not in relabel:
            relabel[c] = len(relabel)
        assignment.append(relabel[c])
    assignment = tuple(assignment)
    return CommunityPartition(assignment=assignment,
                              modularity=modularity(network, assignment))


def network_profile(network: PolicyNetwork) -> NetworkProfile:
    """Freeman centralization, edge density, and partition modularity."""
    n = network.node_count
    if n < 3:
        centralization = 0.0
    else:
        counts = [0] * n
        for i, j, _ in network.edges:
            counts[i] += 1
            counts[j] += 1
        peak = max(counts)
        centralization = sum(peak - c for c in counts) / ((n - 1) * (n - 2))
    integration = len(network.edges) / (n * (n - 1) / 2) if n >= 2 else 0.0
    return NetworkProfile(
        centralization=centralization,
        integration=integration,
        modularity=detect_communities(network).modularity,
    )
