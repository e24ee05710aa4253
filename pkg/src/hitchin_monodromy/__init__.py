"""Mod-2 monodromy of the SL(2) Hitchin fibration, computed on a Copeland graph."""

from .copeland import build_complex, validate_checklist
from .generators import build_generators, theorem_group, verify_group_relations
from .orbits import component_count, enumerate_orbits, orbit_invariant

__all__ = [
    "build_complex",
    "build_generators",
    "component_count",
    "enumerate_orbits",
    "orbit_invariant",
    "theorem_group",
    "validate_checklist",
    "verify_group_relations",
]
__version__ = "0.1.0"
