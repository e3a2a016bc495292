"""Role discovery on graphs, explained through graphlet orbits.

The toolkit covers the full workflow: orbit censuses (graphlets of 2-5
nodes), structural role embeddings (GraphWave, RolX, plus import of
external embeddings), k-means role candidates validated by silhouette in
the orbit space, surrogate-forest explanations (permutation importance,
ALE/PDP effect curves), and Rao-Stirling interdisciplinarity reports.
"""

__version__ = "0.1.0"

from .graph import Graph, NodeTable, load_edge_list, load_node_table
from .orbits import OrbitMatrix, LogOrbitMatrix, count_orbits, log_transform
from .graphlets import count_orbits_bruteforce

__all__ = [
    "Graph",
    "NodeTable",
    "load_edge_list",
    "load_node_table",
    "OrbitMatrix",
    "LogOrbitMatrix",
    "count_orbits",
    "count_orbits_bruteforce",
    "log_transform",
    "__version__",
]
