import random
import xml.etree.ElementTree as ET

import pytest

from mimgraph import (
    EdgeAnchor,
    InteractionKind,
    NodeAnchor,
    SceneMap,
    Side,
    SpeciesKind,
    SpeciesNode,
)
from mimgraph.errors import (
    InvalidMap,
    MalformedXml,
    SchemaViolation,
    UnresolvedAnchor,
    UnsupportedVersion,
)
from mimgraph.formats import export_sbml, parse_map, render_svg, serialize_map
from mimgraph.formats.mapxml import fmt_num
from mimgraph.formats.svg import MARKER_SHAPES
from mapgen import random_map
from conftest import make_pair_scene

SBML_NS = "{http://www.sbml.org/sbml/level3/version1/core}"


class TestNumberFormatting:
    def test_integral_values_print_bare(self):
        assert fmt_num(100.0) == "100"
        assert fmt_num(-3.0) == "-3"

    def test_fractional_values_round_trip(self):
        for v in (0.1, 1 / 3, 123.456, -0.875, 1e-9):
            assert float(fmt_num(v)) == v


class TestSerializeParse:
    def test_empty_map_has_version_header(self):
        data = serialize_map(SceneMap())
        assert data.startswith(b'<?xml version="1.0" encoding="UTF-8"?>')
        root = ET.fromstring(data)
        assert root.tag == "map"
        assert root.get("version") == "1"
        assert len(root) == 0

    def test_two_species_one_reaction_structure(self, routed_scene):
        root = ET.fromstring(serialize_map(routed_scene))
        assert len(root.findall("node")) == 2
        edges = root.findall("edge")
        assert len(edges) == 1
        assert len(edges[0].findall("pt")) >= 2
        assert edges[0].find("from").get("node") == "a"
        assert edges[0].find("to").get("node") == "b"

    def test_parse_round_trip_is_canonical_on_corpus(self):
        rng = random.Random(2024)
        for _ in range(20):
            scene = random_map(rng)
            doc = serialize_map(scene)
            assert serialize_map(parse_map(doc)) == doc

    def test_serialize_is_deterministic(self):
        scene = random_map(random.Random(5))
        assert serialize_map(scene) == serialize_map(scene)

    def test_parsed_map_passes_validate(self, routed_scene):
        reparsed = parse_map(serialize_map(routed_scene))
        assert reparsed.validate() == []
        assert sorted(reparsed.nodes) == sorted(routed_scene.nodes)
        assert reparsed.edges["e1"].waypoints == routed_scene.edges["e1"].waypoints

    def test_invalid_map_refused_for_serialization(self, routed_scene):
        del routed_scene.nodes["b"]
        with pytest.raises(InvalidMap):
            serialize_map(routed_scene)


class TestParseErrors:
    def test_malformed_xml_reports_position(self):
        with pytest.raises(MalformedXml) as err:
            parse_map(b"<map version='1'><node")
        assert "line 1" in str(err.value)

    def test_edge_referencing_missing_node(self):
        doc = (b'<?xml version="1.0"?><map version="1">'
               b'<node id="a" kind="protein" label="A" x="0" y="0" w="10" h="10" r="2"/>'
               b'<edge id="e1" kind="covalent_modification" mode="manual">'
               b'<from node="a" side="e" offset="0.5"/><to node="ghost" side="w" offset="0.5"/>'
               b'<pt x="10" y="5"/><pt x="20" y="5"/></edge></map>')
        with pytest.raises(UnresolvedAnchor) as err:
            parse_map(doc)
        assert "e1" in str(err.value)

    def test_unknown_glyph_named_in_error(self):
        doc = (b'<map version="1">'
               b'<node id="a" kind="protein" label="A" x="0" y="0" w="10" h="10" r="2"/>'
               b'<node id="b" kind="protein" label="B" x="50" y="0" w="10" h="10" r="2"/>'
               b'<edge id="e1" kind="frobnication" mode="manual">'
               b'<from node="a" side="e" offset="0.5"/><to node="b" side="w" offset="0.5"/>'
               b'</edge></map>')
        with pytest.raises(SchemaViolation) as err:
            parse_map(doc)
        assert "frobnication" in str(err.value)

    def test_unsupported_version(self):
        with pytest.raises(UnsupportedVersion):
            parse_map(b'<map version="99"/>')

    def test_missing_version(self):
        with pytest.raises(SchemaViolation):
            parse_map(b"<map/>")

    def test_wrong_root_element(self):
        with pytest.raises(SchemaViolation):
            parse_map(b'<diagram version="1"/>')

    def test_duplicate_node_id(self):
        doc = (b'<map version="1">'
               b'<node id="a" kind="protein" label="A" x="0" y="0" w="10" h="10" r="2"/>'
               b'<node id="a" kind="dna" label="A2" x="50" y="0" w="10" h="10" r="0"/>'
               b'</map>')
        with pytest.raises(SchemaViolation):
            parse_map(doc)

    def test_bad_number(self):
        doc = b'<map version="1"><node id="a" kind="protein" label="A" x="wat" y="0" w="10" h="10"/></map>'
        with pytest.raises(SchemaViolation):
            parse_map(doc)

    def test_unknown_attributes_ignored(self, routed_scene):
        doc = serialize_map(routed_scene).decode()
        doc = doc.replace('<edge id="e1"', '<edge id="e1" error="test note"')
        reparsed = parse_map(doc)
        assert reparsed.validate() == []


class TestSbmlExport:
    def _subset_check(self, data: bytes, scene: SceneMap):
        """Structural oracle for the supported SBML subset."""
        root = ET.fromstring(data)
        assert root.tag == f"{SBML_NS}sbml"
        assert root.get("level") == "3" and root.get("version") == "1"
        model = root.find(f"{SBML_NS}model")
        assert model is not None
        species = model.find(f"{SBML_NS}listOfSpecies")
        reactions = model.find(f"{SBML_NS}listOfReactions")
        assert species is not None and reactions is not None
        sids = {s.get("id") for s in species}
        assert len(sids) == len(scene.nodes)
        for rxn in reactions:
            for kind in ("listOfReactants", "listOfProducts"):
                refs = rxn.find(f"{SBML_NS}{kind}")
                assert refs is not None and len(refs) == 1
                assert refs[0].get("species") in sids
            mods = rxn.find(f"{SBML_NS}listOfModifiers")
            if mods is not None:
                for m in mods:
                    assert m.get("species") in sids
        return root

    def test_reaction_maps_to_reactant_and_product(self, routed_scene):
        data = export_sbml(routed_scene)
        root = self._subset_check(data, routed_scene)
        rxn = root.find(f"{SBML_NS}model/{SBML_NS}listOfReactions/{SBML_NS}reaction")
        reactant = rxn.find(f"{SBML_NS}listOfReactants/{SBML_NS}speciesReference")
        product = rxn.find(f"{SBML_NS}listOfProducts/{SBML_NS}speciesReference")
        assert reactant.get("species") == "a"
        assert product.get("species") == "b"

    def test_contingency_becomes_modifier_with_glyph_annotation(self, routed_scene):
        routed_scene.add_species(SpeciesNode("c", SpeciesKind.PROTEIN, "C", 200, 300, 60, 40))
        routed_scene.add_interaction(
            InteractionKind.INHIBITION, NodeAnchor("c", Side.N), EdgeAnchor("e1", 0.5))
        data = export_sbml(routed_scene)
        root = self._subset_check(data, routed_scene)
        rxn = root.find(f"{SBML_NS}model/{SBML_NS}listOfReactions/{SBML_NS}reaction")
        modifier = rxn.find(f"{SBML_NS}listOfModifiers/{SBML_NS}modifierSpeciesReference")
        assert modifier is not None and modifier.get("species") == "c"
        annot = rxn.find(f"{SBML_NS}annotation")
        assert b"inhibition" in ET.tostring(annot)

    def test_empty_map_is_valid_subset(self):
        data = export_sbml(SceneMap())
        root = ET.fromstring(data)
        model = root.find(f"{SBML_NS}model")
        assert len(model.find(f"{SBML_NS}listOfSpecies")) == 0
        assert len(model.find(f"{SBML_NS}listOfReactions")) == 0

    def test_species_contingency_is_annotation_only(self, pair_scene):
        pair_scene.add_interaction(
            InteractionKind.STIMULATION, NodeAnchor("a", Side.E), NodeAnchor("b", Side.W))
        data = export_sbml(pair_scene)
        root = ET.fromstring(data)
        model = root.find(f"{SBML_NS}model")
        assert len(model.find(f"{SBML_NS}listOfReactions")) == 0
        annot = model.find(f"{SBML_NS}annotation")
        assert annot is not None and len(annot) == 1

    def test_awkward_ids_are_sanitized(self):
        scene = SceneMap()
        scene.add_species(SpeciesNode("p53/s15-P", SpeciesKind.PROTEIN, "p53", 0, 0, 10, 10))
        scene.add_species(SpeciesNode("p53 s15 P", SpeciesKind.PROTEIN, "p53b", 50, 50, 10, 10))
        scene.add_species(SpeciesNode("9cis", SpeciesKind.OTHER, "retinoid", 100, 100, 10, 10))
        data = export_sbml(scene)
        root = ET.fromstring(data)
        sids = [s.get("id") for s in root.find(f"{SBML_NS}model/{SBML_NS}listOfSpecies")]
        assert len(set(sids)) == 3
        for sid in sids:
            assert sid[0].isalpha() or sid[0] == "_"
            assert all(ch.isalnum() or ch == "_" for ch in sid)

    def test_export_is_deterministic(self, routed_scene):
        assert export_sbml(routed_scene) == export_sbml(routed_scene)


class TestSvgRender:
    def test_single_protein_renders_rounded_rect_and_label(self):
        scene = SceneMap()
        scene.add_species(SpeciesNode("p", SpeciesKind.PROTEIN, "p53 & co", 10, 10, 80, 40, r=9))
        root = ET.fromstring(render_svg(scene))
        ns = "{http://www.w3.org/2000/svg}"
        rects = root.findall(f"{ns}rect")
        texts = root.findall(f"{ns}text")
        assert len(rects) == 1 and rects[0].get("rx") == "9"
        assert len(texts) == 1 and texts[0].text == "p53 & co"

    def test_dna_renders_square_corners(self):
        scene = SceneMap()
        scene.add_species(SpeciesNode("g", SpeciesKind.DNA, "gene", 0, 0, 90, 30, r=8))
        root = ET.fromstring(render_svg(scene))
        rect = root.find("{http://www.w3.org/2000/svg}rect")
        assert rect.get("rx") == "0"

    def test_inhibition_edge_ends_in_bar_marker(self, routed_scene):
        routed_scene.add_species(SpeciesNode("c", SpeciesKind.PROTEIN, "C", 200, 300, 60, 40))
        routed_scene.add_interaction(
            InteractionKind.INHIBITION, NodeAnchor("c", Side.N), EdgeAnchor("e1", 0.5))
        svg = render_svg(routed_scene).decode()
        assert 'marker-end="url(#mk-inhibition)"' in svg
        assert 'id="mk-inhibition"' in svg

    def test_every_glyph_has_exactly_one_marker(self):
        assert set(MARKER_SHAPES) == set(InteractionKind)
        svg = render_svg(SceneMap()).decode()
        for kind in InteractionKind:
            assert svg.count(f'id="mk-{kind.value}"') == 1

    def test_figure_scale_map_renders_completely(self):
        # around 15 species and 20 interactions on a spaced lattice: every
        # element present, no two node boxes overlapping
        scene = SceneMap()
        rng = random.Random(77)
        for i in range(15):
            scene.add_species(SpeciesNode(
                f"n{i}", rng.choice(list(SpeciesKind)), f"N{i}",
                (i % 5) * 180.0, (i // 5) * 160.0, 90, 44))
        ids = sorted(scene.nodes)
        made = 0
        tries = 0
        while made < 20 and tries < 200:
            tries += 1
            a, b = rng.sample(ids, 2)
            kind = rng.choice(list(InteractionKind))
            try:
                if kind.category.value == "contingency" and scene.edges and rng.random() < 0.4:
                    base = rng.choice(sorted(scene.edges))
                    scene.add_interaction(kind, scene.auto_anchor(a, (400, 300)),
                                          EdgeAnchor(base, round(rng.random(), 2)))
                else:
                    scene.add_interaction(
                        kind,
                        scene.auto_anchor(a, scene.nodes[b].center),
                        scene.auto_anchor(b, scene.nodes[a].center))
                made += 1
            except Exception:
                continue
        assert made == 20
        data = render_svg(scene)
        root = ET.fromstring(data)
        ns = "{http://www.w3.org/2000/svg}"
        assert len(root.findall(f"{ns}rect")) == 15
        assert len(root.findall(f"{ns}polyline")) == 20
        assert len(root.findall(f"{ns}text")) == 15
        markers = root.findall(f"{ns}defs/{ns}marker")
        assert len(markers) == len(InteractionKind)
        for polyline in root.findall(f"{ns}polyline"):
            assert polyline.get("marker-end", "").startswith("url(#mk-")
        # node boxes must not overlap pairwise
        boxes = [(n.x, n.y, n.x + n.w, n.y + n.h) for n in scene.nodes.values()]
        for i, (ax1, ay1, ax2, ay2) in enumerate(boxes):
            for bx1, by1, bx2, by2 in boxes[i + 1:]:
                assert ax2 <= bx1 or bx2 <= ax1 or ay2 <= by1 or by2 <= ay1
        assert render_svg(scene) == data

    def test_invalid_map_refused(self, routed_scene):
        routed_scene.edges["e1"].waypoints = [(0.0, 0.0), (3.0, 4.0)]
        with pytest.raises(InvalidMap):
            render_svg(routed_scene)


def test_round_trip_on_many_random_maps():
    rng = random.Random(31337)
    for _ in range(60):
        scene = random_map(rng)
        doc = serialize_map(scene)
        again = parse_map(doc)
        assert again.validate() == []
        assert serialize_map(again) == doc
