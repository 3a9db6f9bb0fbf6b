"""
Network construction from preprocessed norms.

build_directed -> undirect_max -> reduce gives the "reduced" network used
by the activation experiments; net_stats and compare produce the summary
tables.

Dependencies:
    - numpy
    - pandas
    - scipy

"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np
import pandas as pd
from scipy import sparse
from scipy.sparse import csgraph

from freeassoc.lexicon import Lexicon
from freeassoc.networks.semantic_network import DirectedNetwork, NetworkException, SemanticNetwork
from freeassoc.norms.norms_table import RESPONSE_COLUMNS, NormsTable

FILTER_ORDER = ["lexicon", "idiosyncratic_edges", "largest_component"]


@dataclass(frozen=True)
class NetStats:
    nodes: int
    edges: int
    density: float
    avg_degree: float

    @classmethod
    def from_counts(cls, nodes: int, edges: int) -> "NetStats":
        density = 2.0 * edges / (nodes * (nodes - 1)) if nodes > 1 else 0.0
        avg_degree = 2.0 * edges / nodes if nodes > 0 else 0.0
        return cls(nodes=nodes, edges=edges, density=density, avg_degree=avg_degree)

    def to_dict(self) -> dict:
        return asdict(self)

    def display(self) -> dict:
        """Rounded the way the summary tables print them"""
        return {"nodes": self.nodes, "edges": self.edges, "density": round(self.density, 4),
                "avg_degree": round(self.avg_degree, 1)}


@dataclass(frozen=True)
class OverlapReport:
    nodes_a: int
    nodes_b: int
    nodes_common: int
    edges_a: int
    edges_b: int
    edges_common: int
    pct_nodes_a_not_in_b: float
    pct_nodes_common: float
    pct_nodes_b_not_in_a: float
    pct_edges_a_not_in_b: float
    pct_edges_common: float
    pct_edges_b_not_in_a: float

    def to_dict(self) -> dict:
        return asdict(self)

    def display(self) -> dict:
        return {k: (round(v) if k.startswith("pct_") else v) for k, v in asdict(self).items()}


def build_directed(t: NormsTable) -> DirectedNetwork:
    """
    One arc per (cue, response) pair weighted by its number of occurrences.
    Blank responses are skipped; a cue with no responses is an isolated node.
    """
    frame = t.frame
    pairs = pd.concat([frame[["cue", col]].set_axis(["cue", "response"], axis=1) for col in RESPONSE_COLUMNS],
                      ignore_index=True)
    pairs = pairs[pairs["response"] != ""]
    echoes = pairs["cue"] == pairs["response"]
    if echoes.any():
        logging.warning(f"Skipping {int(echoes.sum())} responses equal to their cue")
        pairs = pairs[~echoes]

    labels = sorted(set(frame["cue"]) | set(pairs["response"]))
    index = pd.Index(labels)
    rows = index.get_indexer(pairs["cue"])
    cols = index.get_indexer(pairs["response"])
    n = len(labels)
    arcs = sparse.coo_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(n, n))
    g = DirectedNetwork(labels, arcs)
    logging.info(f"Built {g}")
    return g


def undirect_max(g: DirectedNetwork, source: str = "") -> SemanticNetwork:
    """Collapse u->v and v->u into one undirected edge carrying the larger weight"""
    arcs = g.arcs
    if arcs.diagonal().any():
        raise NetworkException("Directed network has self-loops")
    undirected = arcs.maximum(arcs.T)
    return SemanticNetwork(g.labels, undirected, {"source": source, "filters": []})


def _largest_component(g: SemanticNetwork) -> np.ndarray:
    """Indices of the largest component; ties go to the component holding the smallest label"""
    count, membership = csgraph.connected_components(g.adjacency, directed=False)
    sizes = np.bincount(membership, minlength=count)
    largest = sizes.max()
    # labels are sorted, so the first node index reached belongs to the
    # component with the lexicographically smallest member
    first_members = np.full(count, g.node_count, dtype=np.int64)
    np.minimum.at(first_members, membership, np.arange(g.node_count))
    candidates = np.flatnonzero(sizes == largest)
    winner = candidates[np.argmin(first_members[candidates])]
    return np.flatnonzero(membership == winner)


def reduce(g: SemanticNetwork, lex: Lexicon) -> SemanticNetwork:
    """
    Apply, in order: drop nodes not in the lexicon word list, drop edges of
    weight 1, keep the largest connected component.

    Raises:
        NetworkException:
            if nothing is left
    """
    metadata = dict(g.metadata)
    removed = {}

    in_lexicon = np.array([label in lex.valid_words for label in g.labels], dtype=bool)
    removed["lexicon_nodes"] = int((~in_lexicon).sum())
    g = g.subgraph(in_lexicon)

    adj = g.adjacency.copy()
    removed["idiosyncratic_edges"] = int((adj.data == 1).sum() // 2)
    adj.data[adj.data == 1] = 0
    adj.eliminate_zeros()
    g = SemanticNetwork(g.labels, adj)

    if g.node_count == 0 or g.edge_count == 0:
        raise NetworkException("Reduced network is empty")
    keep = _largest_component(g)
    removed["outside_largest_component"] = g.node_count - len(keep)

    metadata["filters"] = list(metadata.get("filters", [])) + FILTER_ORDER
    metadata["removed"] = removed
    reduced = g.subgraph(keep, metadata)
    logging.info(f"Reduced network: removed {removed}, kept {reduced}")
    return reduced


def net_stats(g: SemanticNetwork) -> NetStats:
    return NetStats.from_counts(g.node_count, g.edge_count)


def _pct(part: int, whole: int) -> float:
    return float(Fraction(100 * part, whole)) if whole else 0.0


def overlap_percentages(size_a: int, size_b: int, common: int) -> Tuple[float, float, float]:
    """
    (|A \\ B| / |A|, |A & B| / |A | B|, |B \\ A| / |B|) as percentages, from
    set sizes alone.  An empty denominator gives 0.
    """
    if common > min(size_a, size_b) or common < 0:
        raise NetworkException(f"Intersection {common} is impossible for sets of size {size_a} and {size_b}")
    return (_pct(size_a - common, size_a),
            _pct(common, size_a + size_b - common),
            _pct(size_b - common, size_b))


def compare(a: SemanticNetwork, b: SemanticNetwork) -> OverlapReport:
    """
    Node overlap of two networks, and edge overlap restricted to the
    subgraphs induced by their common nodes.  Edges are unordered label
    pairs; weights are ignored.
    """
    nodes_a, nodes_b = set(a.labels), set(b.labels)
    common = nodes_a & nodes_b

    def induced_edges(g: SemanticNetwork) -> set:
        return {(u, v) for u, v, _ in g.edges() if u in common and v in common}

    edges_a, edges_b = induced_edges(a), induced_edges(b)
    edges_common = edges_a & edges_b

    node_pcts = overlap_percentages(len(nodes_a), len(nodes_b), len(common))
    edge_pcts = overlap_percentages(len(edges_a), len(edges_b), len(edges_common))
    return OverlapReport(
        nodes_a=len(nodes_a), nodes_b=len(nodes_b), nodes_common=len(common),
        edges_a=len(edges_a), edges_b=len(edges_b), edges_common=len(edges_common),
        pct_nodes_a_not_in_b=node_pcts[0], pct_nodes_common=node_pcts[1], pct_nodes_b_not_in_a=node_pcts[2],
        pct_edges_a_not_in_b=edge_pcts[0], pct_edges_common=edge_pcts[1], pct_edges_b_not_in_a=edge_pcts[2]
    )
