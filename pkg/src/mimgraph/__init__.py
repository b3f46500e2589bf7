"""mimgraph: molecular interaction map editor core.

Scene model, semi-automatic orthogonal edge router, XML/SBML/SVG formats,
a local HTTP service and a batch CLI.
"""

from .model import (
    Anchor,
    Category,
    EdgeAnchor,
    InteractionEdge,
    InteractionKind,
    MapMeta,
    NodeAnchor,
    RoutingMode,
    SceneMap,
    Side,
    SpeciesKind,
    SpeciesNode,
    Violation,
)
from .router import CostModel, RouteResult, route

__version__ = "0.1.0"

__all__ = [
    "Anchor",
    "Category",
    "CostModel",
    "EdgeAnchor",
    "InteractionEdge",
    "InteractionKind",
    "MapMeta",
    "NodeAnchor",
    "RouteResult",
    "RoutingMode",
    "SceneMap",
    "Side",
    "SpeciesKind",
    "SpeciesNode",
    "Violation",
    "route",
]
