import networkx as nx
import numpy as np
from pytest import approx, raises
from scipy import sparse

from freeassoc.lexicon import Lexicon
from freeassoc.networks import (DirectedNetwork, NetStats, NetworkException, SemanticNetwork, build_directed,
                                compare, net_stats, overlap_percentages, reduce, undirect_max)
from freeassoc.norms import NormsTable

table = NormsTable.from_rows([
    ("dog", "cat", "bone", ""),
    ("dog", "cat", "", ""),
    ("cat", "dog", "mouse", ""),
    ("cat", "mouse", "", ""),
    ("mouse", "cheese", "", ""),
    ("zebra", "stripe", "", ""),
])
lex = Lexicon(["bone", "cat", "dog", "mouse", "stripe", "zebra"], {}, {}, {})

directed = build_directed(table)
full = undirect_max(directed, source="fixture")
reduced = reduce(full, lex)


def test_directed_weights():
    assert(directed.weight("dog", "cat") == 2)
    assert(directed.weight("cat", "dog") == 1)
    assert(directed.weight("dog", "bone") == 1)
    assert(directed.weight("bone", "dog") == 0)
    assert(directed.arc_count == 6)


def test_undirect_keeps_max():
    assert(full.weight("cat", "dog") == 2)
    assert(full.weight("cat", "mouse") == 2)
    assert(full.node_count == 7)
    assert(full.edge_count == 5)
    assert(full.metadata["source"] == "fixture")


def test_reduce():
    assert(reduced.labels == ("cat", "dog", "mouse"))
    assert(list(reduced.edges()) == [("cat", "dog", 2), ("cat", "mouse", 2)])
    assert(reduced.metadata["filters"] == ["lexicon", "idiosyncratic_edges", "largest_component"])
    assert(reduced.metadata["removed"] == {"lexicon_nodes": 1, "idiosyncratic_edges": 2,
                                           "outside_largest_component": 3})


def test_reduce_is_connected_without_weight_one():
    assert(all(w >= 2 for _, _, w in reduced.edges()))


def test_echo_responses_skipped():
    g = build_directed(NormsTable.from_rows([("dog", "dog", "cat", "")]))
    assert(g.arc_count == 1)


def test_largest_component_tie():
    g = SemanticNetwork.from_edges([("x", "y", 2), ("a", "b", 2)])
    r = reduce(g, Lexicon(["a", "b", "x", "y"], {}, {}, {}))
    assert(r.labels == ("a", "b"))


def test_reduce_empty():
    with raises(NetworkException):
        reduce(full, Lexicon(["zebra"], {}, {}, {}))


def test_stats_from_counts():
    stats = NetStats.from_counts(116640, 1164026).display()
    assert(stats["density"] == 0.0002)
    assert(stats["avg_degree"] == 20.0)


def test_stats_complete_graph():
    k4 = SemanticNetwork.from_edges([(a, b, 1) for a in "abcd" for b in "abcd" if a < b])
    stats = net_stats(k4)
    assert(stats.density == 1.0)
    assert(stats.avg_degree == 3.0)


def test_stats_path():
    stats = net_stats(SemanticNetwork.from_edges([("a", "b", 1), ("b", "c", 1)]))
    assert(round(stats.density, 3) == 0.667)
    assert(round(stats.avg_degree, 3) == 1.333)


def test_stats_single_node():
    stats = NetStats.from_counts(1, 0)
    assert(stats.density == 0.0)
    assert(stats.avg_degree == 0.0)


def test_overlap_percentages():
    a_only, common, b_only = overlap_percentages(24308, 20339, 16530)
    assert((round(a_only), round(common), round(b_only)) == (32, 59, 19))


def test_overlap_percentages_empty():
    assert(overlap_percentages(0, 0, 0) == (0.0, 0.0, 0.0))


def test_overlap_impossible():
    with raises(NetworkException):
        overlap_percentages(3, 2, 5)


def test_compare():
    a = SemanticNetwork.from_edges([("a", "b", 2), ("b", "c", 2)])
    b = SemanticNetwork.from_edges([("b", "c", 5), ("c", "d", 2)])
    report = compare(a, b)
    assert(report.nodes_common == 2)
    assert(report.pct_nodes_a_not_in_b == approx(100 / 3))
    assert(report.pct_nodes_common == approx(50.0))
    assert(report.pct_nodes_b_not_in_a == approx(100 / 3))
    assert(report.edges_a == 1)
    assert(report.edges_common == 1)
    assert(report.pct_edges_common == approx(100.0))
    assert(report.pct_edges_a_not_in_b == 0.0)


def test_compare_self():
    report = compare(reduced, reduced)
    assert(report.pct_nodes_common == 100.0)
    assert(report.pct_edges_common == 100.0)


def test_undirect_max_random_graphs():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(2, 21))
        dense = rng.integers(0, 4, size=(n, n)) * (rng.random((n, n)) < 0.3)
        np.fill_diagonal(dense, 0)
        labels = [f"w{i:02d}" for i in range(n)]
        directed_net = DirectedNetwork(labels, sparse.coo_matrix(dense))
        g = undirect_max(directed_net)
        assert(g.edge_count <= directed_net.arc_count)
        for i in range(n):
            for j in range(i + 1, n):
                assert(g.weight(labels[i], labels[j]) == max(dense[i, j], dense[j, i]))


def test_compare_percentages_consistent():
    rng = np.random.default_rng(5)
    vocabulary = [f"w{i:02d}" for i in range(30)]
    for _ in range(20):
        nets = []
        for _ in range(2):
            words = sorted(str(w) for w in rng.choice(vocabulary, size=int(rng.integers(2, 15)), replace=False))
            nets.append(SemanticNetwork.from_edges([(u, v, 2) for u, v in zip(words, words[1:])]))
        report = compare(*nets)
        from_a = report.nodes_a * (100 - report.pct_nodes_a_not_in_b) / 100
        from_b = report.nodes_b * (100 - report.pct_nodes_b_not_in_a) / 100
        assert(round(from_a) == round(from_b) == report.nodes_common)
        union = report.nodes_a + report.nodes_b - report.nodes_common
        assert(report.pct_nodes_common == approx(100 * report.nodes_common / union))


def test_compare_disjoint():
    a = SemanticNetwork.from_edges([("a", "b", 2)])
    b = SemanticNetwork.from_edges([("x", "y", 3), ("y", "z", 2)])
    report = compare(a, b)
    assert((report.pct_nodes_a_not_in_b, report.pct_nodes_common, report.pct_nodes_b_not_in_a)
           == (100.0, 0.0, 100.0))
    assert(report.edges_a == report.edges_b == 0)


def test_avg_degree_from_density():
    for nodes, edges in [(2, 1), (3, 2), (4, 6), (116640, 1164026), (20339, 254007)]:
        stats = NetStats.from_counts(nodes, edges)
        assert(0.0 <= stats.density <= 1.0)
        assert(stats.avg_degree == approx(stats.density * (nodes - 1), rel=1e-12))
    stats = net_stats(full)
    assert(stats.avg_degree == approx(stats.density * (stats.nodes - 1), rel=1e-12))


def test_largest_component_matches_networkx():
    rng = np.random.default_rng(17)
    checked = 0
    for _ in range(30):
        n = int(rng.integers(4, 21))
        labels = [f"w{i:02d}" for i in range(n)]
        edges = [(labels[i], labels[j], 2) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.12]
        if not edges:
            continue
        h = nx.Graph()
        h.add_edges_from((u, v) for u, v, _ in edges)
        sizes = sorted((len(c) for c in nx.connected_components(h)), reverse=True)
        if len(sizes) > 1 and sizes[0] == sizes[1]:
            continue
        r = reduce(SemanticNetwork.from_edges(edges), Lexicon(labels, {}, {}, {}))
        assert(set(r.labels) == max(nx.connected_components(h), key=len))
        checked += 1
    assert(checked > 0)
