"""qpw -- a workbench for quivers with potentials.

Exact (rational / small prime field) machinery for quiver mutation, mutation
class exploration, potentials with their reduced parts, truncated Jacobian
quotients, King stability of nilpotent modules, two-term-complex E-invariants,
and an end-to-end witness pipeline that emits re-checkable certificates of
"infinitely many stable modules in one dimension vector".
"""

__version__ = "0.1.0"

from .quiver import Quiver, Arrow, build_quiver, mutate, full_subquiver, canonical_form, is_connected
from .classify import classify, find_non_dynkin_core
from .qp import QP, Potential, qp_mutate, reduce, nondegeneracy_probe
from .jacobian import truncated_quotient
from .witness import WitnessOptions, run_witness

__all__ = [
    "__version__",
    "Quiver",
    "Arrow",
    "build_quiver",
    "mutate",
    "full_subquiver",
    "canonical_form",
    "is_connected",
    "classify",
    "find_non_dynkin_core",
    "QP",
    "Potential",
    "qp_mutate",
    "reduce",
    "nondegeneracy_probe",
    "truncated_quotient",
    "WitnessOptions",
    "run_witness",
]
