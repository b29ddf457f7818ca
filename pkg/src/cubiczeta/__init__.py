"""Class numbers of integral binary cubic forms and exact checks of their zeta-function relations."""

from .forms import IDENTITY, SIGMA, TAU, BinaryCubicForm, GroupElement, act, discriminant, hessian
from .kernel import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .lattices import LATTICES, ClassNumberTable, InsufficientCutoff, build_tables, member, membership_mask
from .orbits import (OrbitRecord, brute_force_orbits, canonicalize, enumerate_orbits, load_or_enumerate, reduce,
                     same_orbit, stabilizer_order)
from .relations import RELATIONS, PartialZetaSpec, Report, ZetaData, partial_zeta, required_cutoff, verify
from .series import DirichletSeries, QRoot3, SeriesPair, equal_up_to, linear_combine, twist

__version__ = "0.1.0"

__all__ = [
    "IDENTITY", "SIGMA", "TAU", "BinaryCubicForm", "GroupElement", "act", "discriminant", "hessian",
    "KERNEL_IMPLEMENTATION", "LATTICES", "ClassNumberTable", "InsufficientCutoff", "build_tables", "member",
    "membership_mask", "OrbitRecord", "brute_force_orbits", "canonicalize", "enumerate_orbits",
    "load_or_enumerate", "reduce", "same_orbit", "stabilizer_order", "RELATIONS", "PartialZetaSpec", "Report",
    "ZetaData", "partial_zeta", "required_cutoff", "verify", "DirichletSeries", "QRoot3", "SeriesPair",
    "equal_up_to", "linear_combine", "twist",
]
