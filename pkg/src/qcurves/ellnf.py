"""Elliptic curves over number fields: invariants, models, and reduction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm

from .exceptions import FieldTooLarge, SingularCurve
from .ffarith import DEFAULT_NORM_BOUND, count_points
from .nfarith import NFElement, NumberField, PrimeSlot, padic_valuation, reduce_element, vp


class EllipticCurveNF:
    """Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over K."""

    def __init__(self, field: NumberField, ainvs):
        if len(ainvs) == 2:
            ainvs = (0, 0, 0) + tuple(ainvs)
        if len(ainvs) != 5:
            raise ValueError("expected 2 or 5 a-invariants")
        self.field = field
        self.ainvs = tuple(field.element(a) for a in ainvs)
        if self.discriminant.is_zero():
            raise SingularCurve("discriminant is zero")
        c4, c6, d = self.c4, self.c6, self.discriminant
        if c4 ** 3 - c6 ** 2 != 1728 * d:
            raise ArithmeticError("c4^3 - c6^2 != 1728 * discriminant")

    def __repr__(self):
        return f"EllipticCurveNF({self.field!r}, {list(self.ainvs)})"

    def __eq__(self, other):
        return isinstance(other, EllipticCurveNF) and self.field == other.field and self.ainvs == other.ainvs

    def __hash__(self):
        return hash((self.field, self.ainvs))

    @cached_property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = a1 * a3 + 2 * a4
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @cached_property
    def c4(self):
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @cached_property
    def c6(self):
        b2, b4, b6, _ = self.b_invariants
        return -(b2 ** 3) + 36 * b2 * b4 - 216 * b6

    @cached_property
    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @cached_property
    def j(self):
        return self.c4 ** 3 / self.discriminant

    def j_invariant(self):
        return self.j

    def is_integral(self):
        return all(a.den == 1 for a in self.ainvs)

    def quadratic_twist(self, d):
        """Twist by the nonzero element d of K (short model in c4, c6)."""
        d = self.field.element(d)
        return EllipticCurveNF(self.field, (-27 * self.c4 * d ** 2, -54 * self.c6 * d ** 3))

    def scale(self, u):
        """Model with a_i replaced by u^i a_i; isomorphic over K."""
        u = self.field.element(u)
        a1, a2, a3, a4, a6 = self.ainvs
        return EllipticCurveNF(self.field, (u * a1, u ** 2 * a2, u ** 3 * a3, u ** 4 * a4, u ** 6 * a6))

    def base_change(self, K: NumberField):
        """Embed a curve over Q into K."""
        if self.field.degree != 1:
            raise ValueError("only curves over Q can be base-changed this way")
        return EllipticCurveNF(K, tuple(K.element(a.rational()) for a in self.ainvs))


def j_invariant(E: EllipticCurveNF) -> NFElement:
    return E.j


def curve_from_j(j: NFElement) -> EllipticCurveNF:
    """A curve over K = parent(j) with j-invariant j."""
    K = j.field
    if j == 0:
        return EllipticCurveNF(K, (0, 1))
    if j == 1728:
        return EllipticCurveNF(K, (1, 0))
    k = 1728 - j
    return EllipticCurveNF(K, (3 * j * k, 2 * j * k * k))


def integralize(E: EllipticCurveNF) -> EllipticCurveNF:
    """Rescale by a positive integer u so that every a_i has integral coordinates."""
    if E.is_integral():
        return E
    dens = [a.den for a in E.ainvs]
    u = 1
    from sympy import factorint

    for p in factorint(lcm(*dens)):
        need = 0
        for i, d in zip((1, 2, 3, 4, 6), dens):
            if d % p == 0:
                v = vp(d, p)
                need = max(need, -(-v // i))
        u *= p ** need
    return E.scale(u)


@dataclass(frozen=True)
class ReductionData:
    """Local data at one prime slot; ``trace`` is None at bad slots."""

    slot: PrimeSlot
    good: bool
    trace: int | None
    norm: int
    supersingular: bool | None

    @property
    def frobenius_discriminant(self):
        """a^2 - 4 N(p), the discriminant of the Frobenius polynomial."""
        if not self.good:
            return None
        return self.trace * self.trace - 4 * self.norm

    def as_dict(self):
        return {
            "p": self.slot.p,
            "slot": self.slot.slot_index,
            "residue_degree": self.slot.residue_degree,
            "good": self.good,
            "trace": self.trace,
            "norm": self.norm,
            "supersingular": self.supersingular,
        }


def reduce_and_trace(E: EllipticCurveNF, slot: PrimeSlot, norm_bound: int = DEFAULT_NORM_BOUND) -> ReductionData:
    """Reduce an integral model at ``slot`` and count points if the reduction is good."""
    if not E.is_integral():
        raise ValueError("model must be integral; call integralize() first")
    if slot.norm > norm_bound:
        raise FieldTooLarge(f"N(p) = {slot.norm} exceeds {norm_bound}")
    if padic_valuation(E.discriminant, slot) > 0:
        return ReductionData(slot, False, None, slot.norm, None)
    F = slot.residue_field
    reduced = [reduce_element(a, slot).rep for a in E.ainvs]
    _, trace = count_points(F, reduced, norm_bound)
    return ReductionData(slot, True, trace, slot.norm, trace % slot.p == 0)



def trace_of_frobenius(E: EllipticCurveNF, slot: PrimeSlot, norm_bound: int = DEFAULT_NORM_BOUND):
    """a_p of an integral model at ``slot``, or None at a bad slot."""
    return reduce_and_trace(E, slot, norm_bound).trace
