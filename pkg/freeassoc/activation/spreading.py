"""
Spreading activation over a SemanticNetwork.

At every step each node keeps a fraction `retention` of its activation
and hands the rest to its neighbours in proportion to edge weight (or
evenly, unweighted).  After
distribution the whole vector is multiplied by (1 - decay), then entries
below `suppress` are set to zero.  With decay = suppress = 0 the total
activation never changes.

Each step is one sparse matrix-vector product over the CSR adjacency,
whose rows have sorted column indices, so the summation order is fixed
and results are bit-reproducible.

Dependencies:
    - numpy
    - pandas
    - scipy

"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import sparse

from freeassoc import FreeAssocException
from freeassoc.networks.semantic_network import SemanticNetwork


class ActivationException(FreeAssocException):
    pass


@dataclass(frozen=True)
class ActivationParams:
    """
    Arguments:
        retention:float
            fraction of activation a node keeps each step
            Default: 0.5
        decay:float
            fraction of all activation lost after each step
            Default: 0.0
        suppress:float
            activation below this is zeroed after each step
            Default: 0.0
        initial_activation:Optional[float]
            activation placed on the prime; None means the node count
            Default: None
        iterations:Optional[int]
            number of steps; None means twice the unweighted diameter
            Default: None
        weighted:bool
            distribute by edge weight rather than evenly
            Default: True
    """
    retention: float = 0.5
    decay: float = 0.0
    suppress: float = 0.0
    initial_activation: Optional[float] = None
    iterations: Optional[int] = None
    weighted: bool = True

    def __post_init__(self):
        if not 0.0 <= self.retention <= 1.0:
            raise ActivationException(f"retention must be in [0, 1], got {self.retention}")
        if not 0.0 <= self.decay <= 1.0:
            raise ActivationException(f"decay must be in [0, 1], got {self.decay}")
        if self.suppress < 0:
            raise ActivationException(f"suppress must be non-negative, got {self.suppress}")
        if self.initial_activation is not None and not self.initial_activation > 0:
            raise ActivationException(f"initial activation must be positive, got {self.initial_activation}")
        if self.iterations is not None and self.iterations < 1:
            raise ActivationException(f"iterations must be at least 1, got {self.iterations}")

    @property
    def resolved(self) -> bool:
        return self.initial_activation is not None and self.iterations is not None

    def resolve(self, g: SemanticNetwork) -> "ActivationParams":
        """Fill in the network-dependent defaults"""
        if self.resolved:
            return self
        initial = self.initial_activation
        if initial is None:
            initial = float(g.node_count)
        iterations = self.iterations
        if iterations is None:
            from freeassoc.activation.diameter import diameter
            iterations = 2 * diameter(g)
        return replace(self, initial_activation=initial, iterations=iterations)

    def to_dict(self) -> dict:
        return asdict(self)


class ActivationVector:
    """Final activation per node, indexed like the network"""

    def __init__(self, labels: Sequence[str], values: np.ndarray, index: Optional[Dict[str, int]] = None):
        self.labels: Tuple[str, ...] = tuple(labels)
        self.values: np.ndarray = values
        self._index = index

    def __repr__(self):
        return f"ActivationVector over {len(self.labels)} nodes, total {self.total():.6g}"

    def __getitem__(self, label: str) -> float:
        if self._index is None:
            self._index = {l: i for i, l in enumerate(self.labels)}
        return float(self.values[self._index[label]])

    def total(self) -> float:
        return float(self.values.sum())


class ActivationMatrix:
    """
    |V| x |primes| final activation levels; column j is the result of
    activating primes[j].

    Arguments:
        labels: Sequence[str]
            row (node) labels
        primes: Sequence[str]
            column keys, may repeat
        values: np.ndarray
            shape (len(labels), len(primes))
    """

    def __init__(self, labels: Sequence[str], primes: Sequence[str], values: np.ndarray):
        self.labels: Tuple[str, ...] = tuple(labels)
        self.primes: Tuple[str, ...] = tuple(primes)
        self.values: np.ndarray = np.asarray(values, dtype=np.float64)
        if self.values.shape != (len(self.labels), len(self.primes)):
            raise ActivationException(f"Matrix shape {self.values.shape} does not match "
                                      f"{len(self.labels)} nodes x {len(self.primes)} primes")
        self._row = {l: i for i, l in enumerate(self.labels)}
        self._col = {}
        for j, p in enumerate(self.primes):
            self._col.setdefault(p, j)

    def __repr__(self):
        return f"ActivationMatrix {self.values.shape[0]} nodes x {self.values.shape[1]} primes"

    def row_index(self, node: str) -> int:
        try:
            return self._row[node]
        except KeyError:
            raise ActivationException(f"Unknown node {node!r}")

    def column_index(self, prime: str) -> int:
        try:
            return self._col[prime]
        except KeyError:
            raise ActivationException(f"Unknown prime {prime!r}")

    def column(self, prime: str) -> np.ndarray:
        return self.values[:, self.column_index(prime)]

    def value(self, node: str, prime: str) -> float:
        return float(self.values[self.row_index(node), self.column_index(prime)])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.values, index=pd.Index(self.labels, name="node"), columns=list(self.primes))
        return frame

    def write_csv(self, path: str) -> None:
        self.to_frame().to_csv(path, encoding="utf-8", lineterminator="\n", float_format="%.17g")


def transition_operator(g: SemanticNetwork, weighted: bool) -> Tuple[sparse.csr_matrix, np.ndarray]:
    """(W, 1/strength) with 1/strength = 0 on isolated nodes"""
    if weighted:
        w = g.adjacency.astype(np.float64)
        strength = g.strength
    else:
        w = g.adjacency.copy().astype(np.float64)
        w.data[:] = 1.0
        strength = g.degree
    inverse = np.zeros_like(strength)
    np.divide(1.0, strength, out=inverse, where=strength > 0)
    return w, inverse


def propagate(w: sparse.csr_matrix, inverse: np.ndarray, start: int, p: ActivationParams) -> np.ndarray:
    """Run p.iterations steps from `start`; p must be resolved"""
    a = np.zeros(w.shape[0], dtype=np.float64)
    a[start] = p.initial_activation
    stuck = inverse == 0
    keep = p.retention
    give = 1.0 - p.retention
    for _ in range(p.iterations):
        if give > 0 and stuck.any() and a[stuck].any():
            raise ActivationException("A node without edges holds activation it cannot distribute")
        # W is symmetric: (W @ share)[v] = sum over neighbours u of w(u, v) * share[u]
        share = give * a * inverse
        a = keep * a + w @ share
        if p.decay:
            a *= 1.0 - p.decay
        if p.suppress:
            a[a < p.suppress] = 0.0
    return a


def spread(g: SemanticNetwork, prime: str, p: ActivationParams) -> ActivationVector:
    """
    Activate `prime` and return the final activation of every node.

    Raises:
        ActivationException:
            unknown prime, or activation stranded on an isolated node
    """
    if prime not in g:
        raise ActivationException(f"Unknown prime {prime!r}")
    p = p.resolve(g)
    w, inverse = transition_operator(g, p.weighted)
    return ActivationVector(g.labels, propagate(w, inverse, g.index_of(prime), p), g.index)
