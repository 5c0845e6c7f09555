"""Exact finite tools for Ramsey-Turan problems: graphs, certificates,
constructions, an exhaustive solver and the partition machinery."""

__version__ = "0.1.0"

from .graph import Graph, VertexPartition  # noqa: E402
from .rt import RTQuery, rt_exact  # noqa: E402

__all__ = ["Graph", "VertexPartition", "RTQuery", "rt_exact", "__version__"]
