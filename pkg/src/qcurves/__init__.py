"""Q-curve recognition for elliptic curves over number fields."""

from .ellnf import EllipticCurveNF, curve_from_j, integralize, j_invariant
from .exceptions import QCurveError
from .isogclass import build_class_graph, heuristic_reducible_primes, roots_in_K
from .nfarith import NumberField, make_number_field
from .qcore import Certificate, certificate_from_graph, verify_core_properties
from .qctest import QCurveConfig, Verdict, is_q_curve

__all__ = [
    "Certificate",
    "EllipticCurveNF",
    "NumberField",
    "QCurveConfig",
    "QCurveError",
    "Verdict",
    "build_class_graph",
    "certificate_from_graph",
    "curve_from_j",
    "heuristic_reducible_primes",
    "integralize",
    "is_q_curve",
    "j_invariant",
    "make_number_field",
    "roots_in_K",
    "verify_core_properties",
]
