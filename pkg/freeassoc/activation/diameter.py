"""
Exact unweighted diameter of a connected network.

A double sweep from the highest-degree node gives a lower bound and a
central node u; the iFUB refinement then scans the BFS levels of u from the
outside in, stopping as soon as no pair of nodes closer to u can beat the
current lower bound.  On word association graphs this typically costs a few
dozen BFS runs instead of |V|.

Dependencies:
    - numpy
    - scipy

"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csgraph

from freeassoc.activation.spreading import ActivationException
from freeassoc.networks.semantic_network import SemanticNetwork

# BFS sources handled per shortest_path call when scanning a level
CHUNK = 256


def bfs_distances(adjacency, sources) -> np.ndarray:
    """Hop distances from each source (rows) to every node (columns)"""
    d = csgraph.shortest_path(adjacency, method="D", directed=False, unweighted=True, indices=sources)
    return np.atleast_2d(d)


def _max_eccentricity(adjacency, nodes: np.ndarray) -> int:
    best = 0
    for start in range(0, len(nodes), CHUNK):
        d = bfs_distances(adjacency, nodes[start:start + CHUNK])
        best = max(best, int(d.max()))
    return best


def _midpoint(adjacency, a: int, b: int, length: int) -> int:
    """A node halfway along a shortest a-b path"""
    _, predecessors = csgraph.shortest_path(adjacency, method="D", directed=False, unweighted=True,
                                            indices=a, return_predecessors=True)
    predecessors = np.atleast_2d(predecessors)[0]
    node = b
    for _ in range(length - length // 2):
        node = predecessors[node]
    return int(node)


def diameter(g: SemanticNetwork) -> int:
    """
    Longest shortest path, in hops.

    Raises:
        ActivationException:
            if the network is empty or disconnected
    """
    n = g.node_count
    if n == 0:
        raise ActivationException("Diameter of an empty network is undefined")
    if n == 1:
        return 0
    adjacency = g.adjacency
    components, _ = csgraph.connected_components(adjacency, directed=False)
    if components != 1:
        raise ActivationException(f"Network is disconnected ({components} components)")

    # double sweep
    r = int(np.argmax(g.degree))
    d_r = bfs_distances(adjacency, r)[0]
    a = int(np.argmax(d_r))
    d_a = bfs_distances(adjacency, a)[0]
    b = int(np.argmax(d_a))
    lower = int(d_a[b])

    u = _midpoint(adjacency, a, b, lower)
    d_u = bfs_distances(adjacency, u)[0].astype(np.int64)
    ecc_u = int(d_u.max())

    lower = max(lower, ecc_u)
    upper = 2 * ecc_u
    i = ecc_u
    while upper > lower:
        fringe = np.flatnonzero(d_u == i)
        b_i = _max_eccentricity(adjacency, fringe)
        if max(lower, b_i) > 2 * (i - 1):
            return max(lower, b_i)
        lower = max(lower, b_i)
        upper = 2 * (i - 1)
        i -= 1
    return lower
