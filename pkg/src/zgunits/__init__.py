"""zgunits: exact unit groups of integral group rings of finite abelian
groups, including cyclotomic unit groups and the constructable-unit index."""

from ._backend import BACKEND
from .abgroup import AbelianGroup, ayoub_rank, parse_group_spec
from .config import Config, DEFAULT
from .cyclotomic import CycElt
from .cycunits import UnitGroupDesc, full_unit_group
from .groupring import GroupRingElement, inverse_in_zg, primitive_idempotents
from .hoechsmann import hoechsmann_index
from .intlinalg import Lattice, hnf, integer_kernel, intersect, pure_closure, snf
from .merge import MergedUnitGroup, unit_group_zg
from .relations import relation_lattice_cyc, relation_lattice_toral

__all__ = [
    "AbelianGroup",
    "BACKEND",
    "Config",
    "CycElt",
    "DEFAULT",
    "GroupRingElement",
    "Lattice",
    "MergedUnitGroup",
    "UnitGroupDesc",
    "ayoub_rank",
    "full_unit_group",
    "hnf",
    "hoechsmann_index",
    "integer_kernel",
    "intersect",
    "inverse_in_zg",
    "parse_group_spec",
    "primitive_idempotents",
    "pure_closure",
    "relation_lattice_cyc",
    "relation_lattice_toral",
    "snf",
    "unit_group_zg",
]

__version__ = "0.1.0"
