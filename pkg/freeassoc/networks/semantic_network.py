"""
Word association graphs in compressed sparse row form.

Node i carries the label labels[i]; labels are kept in sorted order, so
index order and lexicographic order coincide.  A SemanticNetwork is
undirected: its adjacency matrix is symmetric with positive integer
weights and an empty diagonal.

Edge lists on disk are three column TSV files, word1<TAB>word2<TAB>weight,
with word1 < word2 and lines sorted by (word1, word2).

Dependencies:
    - numpy
    - scipy

"""

from __future__ import annotations

import os
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from freeassoc import FreeAssocException


class NetworkException(FreeAssocException):
    pass


def _canonical(adjacency) -> sparse.csr_matrix:
    adj = sparse.csr_matrix(adjacency, dtype=np.int64)
    adj.sum_duplicates()
    adj.eliminate_zeros()
    adj.sort_indices()
    return adj


class DirectedNetwork:
    """
    Cue -> response arcs weighted by how often the response was given.

    Arguments:
        labels: Sequence[str]
            sorted node labels
        arcs: sparse matrix
            arcs[i, j] = count of response labels[j] to cue labels[i]
    """

    def __init__(self, labels: Sequence[str], arcs):
        self.labels: Tuple[str, ...] = tuple(labels)
        self.arcs: sparse.csr_matrix = _canonical(arcs)
        if self.arcs.shape != (len(self.labels), len(self.labels)):
            raise NetworkException(f"Arc matrix shape {self.arcs.shape} does not match {len(self.labels)} labels")

    def __repr__(self):
        return f"DirectedNetwork with {self.node_count} nodes and {self.arc_count} arcs"

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def arc_count(self) -> int:
        return int(self.arcs.nnz)

    def weight(self, source: str, target: str) -> int:
        index = {label: i for i, label in enumerate(self.labels)}
        return int(self.arcs[index[source], index[target]])


class SemanticNetwork:
    """
    Undirected weighted word graph.

    Arguments:
        labels: Sequence[str]
            node labels, strictly increasing
        adjacency: sparse matrix
            symmetric, integer weights >= 1, no self-loops
        metadata: Optional[Mapping]
            source name, applied filters and similar bookkeeping

    Raises:
        NetworkException:
            if the labels are not sorted and unique, or the adjacency is
            not a valid undirected weighted graph
    """

    def __init__(self, labels: Sequence[str], adjacency, metadata: Optional[Mapping] = None):
        self._labels: Tuple[str, ...] = tuple(labels)
        self._adjacency: sparse.csr_matrix = _canonical(adjacency)
        self._metadata: Dict = dict(metadata or {})
        self._index: Optional[Dict[str, int]] = None
        self._strength: Optional[np.ndarray] = None
        self._validate()

    def __repr__(self):
        return f"SemanticNetwork with {self.node_count} nodes and {self.edge_count} edges"

    def __contains__(self, label) -> bool:
        return label in self.index

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemanticNetwork):
            return NotImplemented
        return self._labels == other._labels and (self._adjacency != other._adjacency).nnz == 0

    def _validate(self):
        n = len(self._labels)
        if any(a >= b for a, b in zip(self._labels, self._labels[1:])):
            raise NetworkException("Node labels must be unique and sorted")
        if self._adjacency.shape != (n, n):
            raise NetworkException(f"Adjacency shape {self._adjacency.shape} does not match {n} labels")
        if self._adjacency.diagonal().any():
            raise NetworkException("Self-loops are not allowed")
        if self._adjacency.nnz and self._adjacency.data.min() < 1:
            raise NetworkException("Edge weights must be positive")
        if (self._adjacency != self._adjacency.T).nnz:
            raise NetworkException("Adjacency must be symmetric")

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[str, str, int]], nodes: Iterable[str] = (),
                   metadata: Optional[Mapping] = None) -> "SemanticNetwork":
        """
        Build a network from (word1, word2, weight) triples.  A pair given
        more than once keeps its largest weight.  `nodes` adds labels that
        may have no edges.
        """
        edges = list(edges)
        labels = sorted(set(nodes) | {u for u, _, _ in edges} | {v for _, v, _ in edges})
        index = {label: i for i, label in enumerate(labels)}
        n = len(labels)
        if not edges:
            return cls(labels, sparse.csr_matrix((n, n), dtype=np.int64), metadata)
        rows = np.array([index[u] for u, _, _ in edges], dtype=np.int64)
        cols = np.array([index[v] for _, v, _ in edges], dtype=np.int64)
        weights = np.array([w for _, _, w in edges], dtype=np.int64)
        if (rows == cols).any():
            raise NetworkException("Self-loops are not allowed")
        # keep the largest weight per unordered pair
        lo, hi = np.minimum(rows, cols), np.maximum(rows, cols)
        order = np.lexsort((-weights, hi, lo))
        lo, hi, weights = lo[order], hi[order], weights[order]
        first = np.ones(len(lo), dtype=bool)
        first[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
        lo, hi, weights = lo[first], hi[first], weights[first]
        upper = sparse.coo_matrix((weights, (lo, hi)), shape=(n, n))
        return cls(labels, upper + upper.T, metadata)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def adjacency(self) -> sparse.csr_matrix:
        return self._adjacency

    @property
    def metadata(self) -> Dict:
        return self._metadata

    @property
    def index(self) -> Dict[str, int]:
        if self._index is None:
            self._index = {label: i for i, label in enumerate(self._labels)}
        return self._index

    @property
    def node_count(self) -> int:
        return len(self._labels)

    @property
    def edge_count(self) -> int:
        return int(self._adjacency.nnz // 2)

    @property
    def strength(self) -> np.ndarray:
        """Sum of edge weights per node, as float64"""
        if self._strength is None:
            self._strength = np.asarray(self._adjacency.sum(axis=1), dtype=np.float64).ravel()
        return self._strength

    @property
    def degree(self) -> np.ndarray:
        return np.diff(self._adjacency.indptr).astype(np.float64)

    def index_of(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise NetworkException(f"Unknown node {label!r}")

    def neighbors(self, label: str) -> List[Tuple[str, int]]:
        i = self.index_of(label)
        start, end = self._adjacency.indptr[i], self._adjacency.indptr[i + 1]
        return [(self._labels[j], int(w)) for j, w in
                zip(self._adjacency.indices[start:end], self._adjacency.data[start:end])]

    def weight(self, u: str, v: str) -> int:
        return int(self._adjacency[self.index_of(u), self.index_of(v)])

    def edges(self) -> Iterator[Tuple[str, str, int]]:
        """Yields (word1, word2, weight) with word1 < word2, in lexicographic order"""
        upper = sparse.triu(self._adjacency, k=1, format="csr")
        upper.sort_indices()
        for i in range(upper.shape[0]):
            start, end = upper.indptr[i], upper.indptr[i + 1]
            for j, w in zip(upper.indices[start:end], upper.data[start:end]):
                yield self._labels[i], self._labels[j], int(w)

    def subgraph(self, keep: np.ndarray, metadata: Optional[Mapping] = None) -> "SemanticNetwork":
        """Induced subgraph on the node indices (or boolean mask) in `keep`"""
        keep = np.asarray(keep)
        if keep.dtype == bool:
            keep = np.flatnonzero(keep)
        keep = np.sort(keep)
        return SemanticNetwork([self._labels[i] for i in keep], self._adjacency[keep][:, keep],
                               metadata if metadata is not None else self._metadata)


def write_edge_list(g: SemanticNetwork, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as outf:
        for u, v, w in g.edges():
            outf.write(f"{u}\t{v}\t{w}\n")


def read_edge_list(path: str, metadata: Optional[Mapping] = None) -> SemanticNetwork:
    """
    Raises:
        NetworkException:
            missing file or a line that is not word1<TAB>word2<TAB>weight
            with a positive integer weight
    """
    if not os.path.isfile(path):
        raise NetworkException(f"{path}: file not found")
    edges = []
    with open(path, "r", encoding="utf-8") as infile:
        for lineno, line in enumerate(infile, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise NetworkException(f"{path}:{lineno}: expected 3 tab separated columns, found {len(fields)}")
            try:
                weight = int(fields[2])
            except ValueError:
                raise NetworkException(f"{path}:{lineno}: weight {fields[2]!r} is not an integer")
            if weight < 1:
                raise NetworkException(f"{path}:{lineno}: weight must be positive")
            if fields[0] == fields[1]:
                raise NetworkException(f"{path}:{lineno}: self-loop on {fields[0]!r}")
            edges.append((fields[0], fields[1], weight))
    meta = {"source": os.path.basename(path)}
    meta.update(metadata or {})
    return SemanticNetwork.from_edges(edges, metadata=meta)
