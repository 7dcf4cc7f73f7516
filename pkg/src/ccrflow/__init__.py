"""Numerical laboratory for CCR flows of isometric representations of cones.

Submodules:
    cone: polyhedral cones, duals, order and ray decompositions.
    fock, truncated: the Weyl-affine calculus and a truncated Fock oracle.
    isometric: lattice module representations, defect spaces, intertwiners.
    ccr: the product system of decomposable vectors.
    elog: e-logarithms and their kernels.
    reconstruction: recovering the representation from the kernel.
    cocycles: local positive contractive cocycles.
    twisted: twisted shift systems and the existence of units.
    suites, cli: seeded verification suites and the ``ccrflow-lab`` command.
"""

from . import ccr, cocycles, cone, elog, fock, isometric, reconstruction, truncated, twisted
from .cone import Cone
from .errors import CCRFlowError, ConfigError
from .fock import WeylAffineOp, adjoint, compose, weyl
from .grid import GridFunction, GridSpace
from .isometric import DirectSumRep, ModuleRep, PModule, Window
from .suites import run_suite
from .twisted import TwistedSystem

__version__ = "0.1.0"

__all__ = [
    "CCRFlowError",
    "Cone",
    "ConfigError",
    "DirectSumRep",
    "GridFunction",
    "GridSpace",
    "ModuleRep",
    "PModule",
    "TwistedSystem",
    "WeylAffineOp",
    "Window",
    "adjoint",
    "ccr",
    "cocycles",
    "compose",
    "cone",
    "elog",
    "fock",
    "isometric",
    "reconstruction",
    "run_suite",
    "truncated",
    "twisted",
    "weyl",
]
