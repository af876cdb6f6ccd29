"""Kazhdan-Lusztig polynomials of symmetric and affine symmetric groups,
parabolic double cosets as integer matrices, and intersection cohomology of
orbit closures for the equioriented linear and cyclic quivers."""

from .qpoly import ONE, Q, ZERO, QPoly
from .symgroup import Perm
from .affsymgroup import AffPerm
from .cosetmat import BlockSpec, CosetMatrix
from .affcosetmat import PeriodicMatrix
from .quiverorbits import CyclicMultisegment, Multisegment, Segment, StandardForm

__all__ = [
    "ONE", "Q", "ZERO", "QPoly", "Perm", "AffPerm", "BlockSpec", "CosetMatrix",
    "PeriodicMatrix", "Segment", "Multisegment", "CyclicMultisegment", "StandardForm",
]
