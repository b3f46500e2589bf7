from __future__ import annotations

import pytest

from mimgraph import (
    InteractionKind,
    NodeAnchor,
    SceneMap,
    Side,
    SpeciesKind,
    SpeciesNode,
)


def make_pair_scene() -> SceneMap:
    """Two horizontally aligned proteins, nothing between them."""
    scene = SceneMap()
    scene.add_species(SpeciesNode("a", SpeciesKind.PROTEIN, "A", 0, 100, 60, 40))
    scene.add_species(SpeciesNode("b", SpeciesKind.PROTEIN, "B", 400, 100, 60, 40))
    return scene


@pytest.fixture
def pair_scene() -> SceneMap:
    return make_pair_scene()


@pytest.fixture
def routed_scene(pair_scene: SceneMap) -> SceneMap:
    pair_scene.add_interaction(
        InteractionKind.COVALENT_MODIFICATION,
        NodeAnchor("a", Side.E),
        NodeAnchor("b", Side.W),
        edge_id="e1",
    )
    return pair_scene
