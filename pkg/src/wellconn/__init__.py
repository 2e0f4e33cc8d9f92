"""Audit and repair the edge-connectivity of graph clusterings."""
__version__ = "0.1.0"

from .clustering import Clustering, cluster_stats, is_refinement, parse_clustering, write_clustering
from .connectivity import (ConnectivityClass, classify_cluster, connectivity_profile, log10_threshold,
                           min_edge_cut, parse_threshold)
from .dl import compare_dl, dl_dc, edge_count_matrix
from .graph import Graph, connected_components, degree_sequence, induced_subgraph, parse_edge_list
from .metrics import ami, ari, contingency, nmi
from .mincut import KERNEL
from .treatments import (TreatmentMode, components_reclusterer, external_reclusterer, treat, treat_cc,
                         treat_cm, treat_wcc)
