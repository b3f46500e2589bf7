from .mapxml import parse_map, serialize_map
from .sbml import export_sbml
from .svg import render_svg

__all__ = ["parse_map", "serialize_map", "export_sbml", "render_svg"]
