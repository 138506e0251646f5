"""Decide whether an elliptic curve over a number field is a Q-curve."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from sympy import factorint

from .cmtest import load_cm_table, is_cm_j
from .ellnf import EllipticCurveNF, curve_from_j
from .exceptions import NoCentralClassFound, RamifiedOrNonMaximal, Undecided, UnsupportedField
from .ffarith import DEFAULT_NORM_BOUND
from .isogclass import (
    DEFAULT_B1,
    DEFAULT_B2,
    DEFAULT_HEIGHT_BITS,
    DEFAULT_MAX_VERTICES,
    IsogenyClassGraph,
    LocalData,
    build_class_graph,
    heuristic_reducible_primes,
)
from .nfarith import NFElement, element_minimal_polynomial, make_number_field, padic_valuation, primes_above, primes_up_to
from .qcore import Certificate, certificate_from_graph, squarefree_part, verify_core_properties

YES, NO, NO_HEURISTIC = "YES", "NO", "NO_HEURISTIC"


@dataclass
class QCurveConfig:
    b1: int = DEFAULT_B1
    b2: int = DEFAULT_B2
    norm_bound: int = DEFAULT_NORM_BOUND
    max_rounds: int = 3
    max_vertices: int = DEFAULT_MAX_VERTICES
    max_height_bits: int = DEFAULT_HEIGHT_BITS
    modpoly_dir: str | None = None
    cm_data: str | None = None


@dataclass(frozen=True)
class Reason:
    kind: str
    p: int | None = None
    clause: str | None = None

    def to_json(self):
        out = {"kind": self.kind}
        if self.p is not None:
            out["p"] = self.p
            out["clause"] = self.clause
        return out


@dataclass(frozen=True)
class LocalObstruction:
    """A prime p at which the slots of K disagree; ``witness`` is enough to recheck it."""

    p: int
    clause: str
    witness: dict


@dataclass
class Verdict:
    answer: str
    reason: Reason
    certificate: Certificate | None = None
    bounds_used: tuple = (DEFAULT_B1, DEFAULT_B2)
    rigorous: bool = True
    witnesses: list = field(default_factory=list)
    graph: IsogenyClassGraph | None = None
    core_report: object = None
    cm_undecided: bool = False

    def to_json(self):
        out = {
            "answer": self.answer,
            "reason": self.reason.to_json(),
            "rigorous": self.rigorous,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        out["bounds_used"] = list(self.bounds_used)
        if self.witnesses:
            out["witnesses"] = self.witnesses
        return out


def element_to_json(x: NFElement):
    return [str(c) for c in x.coords]


# ---------------------------------------------------------------------------
# necessary conditions

def bad_prime_candidates(j: NFElement):
    """Unramified primes that may carry a negative valuation of j.

    Away from disc(g) the ring Z[a] is maximal, so such a prime must divide
    the common denominator of the coordinates of j.
    """
    if j.den == 1:
        return set()
    return {p for p in factorint(j.den) if j.field.poly_disc % p}


def bad_prime_test(j: NFElement, candidate_primes) -> LocalObstruction | None:
    """Slots above one p must agree on whether v(j) < 0."""
    if j.is_zero():
        return None
    for p in sorted(candidate_primes):
        try:
            slots = primes_above(j.field, p)
        except RamifiedOrNonMaximal:
            continue
        vals = [padic_valuation(j, s) for s in slots]
        if len({v < 0 for v in vals}) > 1:
            witness = {
                "clause": "bad_prime",
                "p": p,
                "slots": [{"factor": list(s.factor), "valuation": v} for s, v in zip(slots, vals)],
            }
            return LocalObstruction(p, "bad_prime", witness)
    return None


def good_prime_test(E: EllipticCurveNF, B1: int, norm_bound: int = DEFAULT_NORM_BOUND,
                    local: LocalData | None = None) -> LocalObstruction | None:
    """Slots above a good p must share the reduction type and, if ordinary,
    the squarefree part of a^2 - 4N(p)."""
    local = local or LocalData(E, norm_bound)
    for p in primes_up_to(B1):
        data = local.slots(p)
        if not data or len(data) < 2:
            continue
        if any(rd is None or not rd.good for rd in data):
            continue
        kinds = {rd.supersingular for rd in data}
        detail = None
        if len(kinds) > 1:
            detail = "mixed ordinary and supersingular reduction"
        elif kinds == {False}:
            ds = [rd.frobenius_discriminant for rd in data]
            if any(d >= 0 for d in ds):
                detail = "non-negative Frobenius discriminant at an ordinary slot"
            elif len({squarefree_part(-d) for d in ds}) > 1:
                detail = "Frobenius discriminants with different squarefree parts"
        if detail:
            witness = {
                "clause": "good_prime",
                "p": p,
                "detail": detail,
                "ainvs": [element_to_json(a) for a in local.curve.ainvs],
                "slots": [
                    {
                        "factor": list(rd.slot.factor),
                        "trace": rd.trace,
                        "norm": rd.norm,
                        "supersingular": rd.supersingular,
                    }
                    for rd in data
                ],
            }
            return LocalObstruction(p, "good_prime", witness)
    return None


# ---------------------------------------------------------------------------
# the decision procedure

def field_of_j(j: NFElement) -> NFElement:
    """j as an element of Q(j) = Q[x]/(g) with g monic integral, g(D j) = 0."""
    m = element_minimal_polynomial(j)
    d = len(m) - 1
    if d == j.field.degree:
        return j
    D = lcm(*(c.denominator for c in m))
    g = [int(c * D ** (d - i)) for i, c in enumerate(m)]
    K = make_number_field(g)
    return K.gen() / D


def _path_witnesses(G: IsogenyClassGraph, cert: Certificate):
    out = []
    for i, m in enumerate(G.min_polys):
        if tuple(m) == tuple(cert.central_poly):
            out.append({"vertex": element_to_json(G.vertices[i]), "path": G.path(G.origin, i)})
    return out


def _local_no(obs: LocalObstruction, bounds, cm_undecided: bool) -> Verdict:
    # without a CM decision the obstruction is reported but not trusted as final
    answer = NO_HEURISTIC if cm_undecided else NO
    return Verdict(answer, Reason("LocalObstruction", obs.p, obs.clause), None, bounds,
                   not cm_undecided, [obs.witness], cm_undecided=cm_undecided)


def is_q_curve(E, config: QCurveConfig | None = None) -> Verdict:
    """Run the Q-curve test on a curve (or a j-invariant) over a number field."""
    config = config or QCurveConfig()
    j = E if isinstance(E, NFElement) else E.j
    if j.field.degree < 1:
        raise UnsupportedField("the base field must have degree at least 1")
    bounds = (config.b1, config.b2)

    if j.is_rational():
        cert = Certificate.rational(j.rational())
        return Verdict(YES, Reason("RationalJ"), cert, bounds, True)

    j = field_of_j(j)
    if j.is_rational():
        cert = Certificate.rational(j.rational())
        return Verdict(YES, Reason("RationalJ"), cert, bounds, True)

    cm_undecided = False
    table = load_cm_table(config.cm_data)
    try:
        D = is_cm_j(j, table)
    except Undecided:
        D, cm_undecided = None, True
    if D is not None:
        cert = Certificate.cm(D, table.polynomial(D))
        return Verdict(YES, Reason("CM"), cert, bounds, True)

    obs = bad_prime_test(j, bad_prime_candidates(j))
    if obs:
        return _local_no(obs, bounds, cm_undecided)

    # the test only depends on j, so work with a fixed model
    curve = curve_from_j(j)
    local = LocalData(curve, config.norm_bound)
    odd = j.field.degree % 2 == 1
    B1, B2 = config.b1, config.b2
    graph = None
    for _ in range(max(config.max_rounds, 1)):
        bounds = (B1, B2)
        obs = good_prime_test(curve, B1, config.norm_bound, local)
        if obs:
            return _local_no(obs, bounds, cm_undecided)
        primes = heuristic_reducible_primes(curve, B1, B2, config.norm_bound, local)
        graph = build_class_graph(j, primes, config.max_vertices, config.modpoly_dir,
                                  config.max_height_bits)
        found = bool(graph.rational_vertices()) or not odd
        if found:
            try:
                cert = certificate_from_graph(graph)
            except NoCentralClassFound:
                cert = None
            if cert is not None:
                report = verify_core_properties(graph, cert)
                return Verdict(YES, Reason("ConjugateClassFound"), cert, bounds, True,
                               _path_witnesses(graph, cert), graph, report, cm_undecided)
        B1 *= 2
    return Verdict(NO_HEURISTIC, Reason("Exhausted"), None, bounds, False, graph=graph,
                   cm_undecided=cm_undecided)
