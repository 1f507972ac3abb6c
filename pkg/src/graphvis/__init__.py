"""Interactive graph analytics engine.

Core objects: :class:`~graphvis.graph.Graph` for the mutable structure,
:class:`~graphvis.cache.StatsCache` for incrementally maintained measures,
and the analytics/partitions/generators/explore modules on top.  The HTTP
service lives in :mod:`graphvis.service`.
"""

from .graph import EdgeRecord, Graph, Mutation, NodeRecord
from .cache import StatsCache, apply_mutation
from . import (analytics, errors, explore, formats, generators, layout,
               partitions, workspace)

__version__ = "0.1.0"

__all__ = [
    "Graph", "NodeRecord", "EdgeRecord", "Mutation",
    "StatsCache", "apply_mutation",
    "analytics", "errors", "explore", "formats", "generators", "layout",
    "partitions", "workspace",
    "__version__",
]
