"""
Interconnection-network families and their connectivity/diagnosability
parameters: kappa, extra connectivity kappa_1 and pessimistic
diagnosability t_p.
"""

from topodiag.analysis import analyze_graph, kappa_h_exact, kappa_h_upper, min_boundary
from topodiag.diagnosability import is_tt_diagnosable, t_p
from topodiag.generators import Family, TopologySpec, build, spec_from_options
from topodiag.graph import Graph, vertex_connectivity
from topodiag.theorem import check_conditions, family_table

__version__ = "0.1.0"

__all__ = [
    "Family",
    "Graph",
    "TopologySpec",
    "analyze_graph",
    "build",
    "check_conditions",
    "family_table",
    "is_tt_diagnosable",
    "kappa_h_exact",
    "kappa_h_upper",
    "min_boundary",
    "spec_from_options",
    "t_p",
    "vertex_connectivity",
]
