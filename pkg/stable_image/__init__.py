"""Exact analysis of iterated images of polynomial plane maps and of cofinite set dynamics."""
from .algebra import MultiPoly, PolyMap
from .parser import parse_map, parse_point, parse_poly, parse_spec, print_canonical
from .settings import DEFAULT_SETTINGS, SolverSettings, load_settings

__version__ = "0.1.0"
