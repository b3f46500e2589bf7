"""Export to a minimal SBML structural subset.

Every species node becomes an SBML species; every reaction edge becomes a
reaction with its source as reactant and target as product. Contingencies
attached to a reaction's line join it as modifier species references with
the glyph recorded in an annotation; contingencies targeting a species are
kept as model-level annotations only. No kinetics, units or compartments
beyond a single default one.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from ..errors import InvalidMap
from ..model import Category, EdgeAnchor, NodeAnchor, SceneMap

SBML_NS = "http://www.sbml.org/sbml/level3/version1/core"
ANNOT_NS = "urn:mimgraph:annotations"

_ID_OK = re.compile(r"[^A-Za-z0-9_]")


def _sanitize_ids(ids: list[str]) -> dict[str, str]:
    """Deterministic mapping of scene ids to valid SBML SId values."""
    out: dict[str, str] = {}
    taken: set[str] = set()
    for raw in sorted(ids):
        sid = _ID_OK.sub("_", raw) or "_"
        if not (sid[0].isalpha() or sid[0] == "_"):
            sid = "_" + sid
        candidate = sid
        k = 2
        while candidate in taken:
            candidate = f"{sid}_{k}"
            k += 1
        taken.add(candidate)
        out[raw] = candidate
    return out


def export_sbml(scene: SceneMap) -> bytes:
    violations = scene.validate()
    if violations:
        raise InvalidMap("; ".join(str(v) for v in violations))

    ET.register_namespace("", SBML_NS)
    ET.register_namespace("mim", ANNOT_NS)
    sbml = ET.Element(f"{{{SBML_NS}}}sbml", {"level": "3", "version": "1"})
    model = ET.SubElement(sbml, f"{{{SBML_NS}}}model")
    if scene.meta.name:
        model.set("name", scene.meta.name)
    model.set("id", "map")

    species_ids = _sanitize_ids(list(scene.nodes))

    species_list = ET.SubElement(model, f"{{{SBML_NS}}}listOfSpecies")
    for nid in sorted(scene.nodes):
        node = scene.nodes[nid]
        ET.SubElement(species_list, f"{{{SBML_NS}}}species", {
            "id": species_ids[nid],
            "name": node.label or nid,
            "compartment": "default",
            "hasOnlySubstanceUnits": "false",
            "boundaryCondition": "false",
            "constant": "false",
        })

    reactions = [e for _, e in sorted(scene.edges.items())
                 if e.kind.category is Category.REACTION]
    contingencies = [e for _, e in sorted(scene.edges.items())
                     if e.kind.category is Category.CONTINGENCY]
    reaction_ids = _sanitize_ids([e.id for e in reactions])

    reaction_list = ET.SubElement(model, f"{{{SBML_NS}}}listOfReactions")
    for edge in reactions:
        rxn = ET.SubElement(reaction_list, f"{{{SBML_NS}}}reaction", {
            "id": reaction_ids[edge.id],
            "name": edge.kind.value,
            "reversible": "false",
        })
        reactants = ET.SubElement(rxn, f"{{{SBML_NS}}}listOfReactants")
        ET.SubElement(reactants, f"{{{SBML_NS}}}speciesReference", {
            "species": species_ids[edge.source.node],
            "stoichiometry": "1",
            "constant": "true",
        })
        products = ET.SubElement(rxn, f"{{{SBML_NS}}}listOfProducts")
        ET.SubElement(products, f"{{{SBML_NS}}}speciesReference", {
            "species": species_ids[edge.target.node],
            "stoichiometry": "1",
            "constant": "true",
        })

        modifiers = [c for c in contingencies
                     if isinstance(c.target, EdgeAnchor) and c.target.edge == edge.id]
        if modifiers:
            mod_list = ET.SubElement(rxn, f"{{{SBML_NS}}}listOfModifiers")
            annot = ET.SubElement(rxn, f"{{{SBML_NS}}}annotation")
            for c in modifiers:
                ET.SubElement(mod_list, f"{{{SBML_NS}}}modifierSpeciesReference", {
                    "species": species_ids[c.source.node],
                })
                ET.SubElement(annot, f"{{{ANNOT_NS}}}contingency", {
                    "edge": c.id,
                    "glyph": c.kind.value,
                    "species": species_ids[c.source.node],
                })

    # contingencies that do not modify a reaction (they target a species, or
    # the line of another contingency) survive as model-level annotations
    reaction_edge_ids = {e.id for e in reactions}
    leftovers = [c for c in contingencies
                 if isinstance(c.target, NodeAnchor)
                 or c.target.edge not in reaction_edge_ids]
    if leftovers:
        annot = ET.SubElement(model, f"{{{SBML_NS}}}annotation")
        for c in leftovers:
            attrs = {
                "edge": c.id,
                "glyph": c.kind.value,
                "source": species_ids[c.source.node],
            }
            if isinstance(c.target, NodeAnchor):
                attrs["targetSpecies"] = species_ids[c.target.node]
            else:
                attrs["targetEdge"] = c.target.edge
            ET.SubElement(annot, f"{{{ANNOT_NS}}}speciesContingency", attrs)

    ET.indent(sbml, space="  ")
    body = ET.tostring(sbml, encoding="unicode")
    return ('<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n").encode("utf-8")
