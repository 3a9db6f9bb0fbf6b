from .semantic_network import (SemanticNetwork, DirectedNetwork, NetworkException, read_edge_list,
                               write_edge_list)
from .netbuild import (NetStats, OverlapReport, build_directed, undirect_max, reduce, net_stats, compare,
                       overlap_percentages)
