"""Built-in maps and self-map specs used by the samples, the tests and the docs."""
from typing import Dict

from .algebra import PolyMap
from .algorithms.setdyn import CofiniteSelfMap
from .parser import parse_map, parse_spec

MAPS: Dict[str, str] = {
    # open, non-injective, omits exactly the origin
    "example6": "f(x,y) = (x - 2*(x*y+1) - y*(x*y+1)^2, -1 - y*(x*y+1))",
    "automorphism": "f(x,y) = (x, y + x^2)",
    "identity": "f(x,y) = (x, y)",
    "swap": "f(x,y) = (y, x)",
    "square": "f(x,y) = (x^2, y)",
    "fold": "f(x,y) = (x^2, x*y)",
}

SPECS: Dict[str, str] = {
    "shift": "rays: 1\n",
    "merge": "rays: 2\nmap: ray:1:0 -> ray:0:1\n",
    "three_ray": "rays: 3\nmap: ray:1:0 -> ray:0:1\nmap: ray:2:0 -> ray:0:4\n",
    "two_core": "core: c1 c2\nmap: core:c1 -> core:c2\nmap: core:c2 -> core:c2\n",
    "fixed_core": "core: c\nmap: core:c -> core:c\n",
    "feeder": "rays: 1\ncore: c\nmap: core:c -> ray:0:0\n",
}


def get_map(name: str) -> PolyMap:
    if name not in MAPS:
        raise KeyError(f"no built-in map {name!r}; choose from {sorted(MAPS)}")
    return parse_map(MAPS[name])


def get_spec(name: str) -> CofiniteSelfMap:
    if name not in SPECS:
        raise KeyError(f"no built-in spec {name!r}; choose from {sorted(SPECS)}")
    return parse_spec(SPECS[name])
