from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qcurves.ellnf import EllipticCurveNF, curve_from_j, integralize, j_invariant, reduce_and_trace
from qcurves.exceptions import SingularCurve
from qcurves.ffarith import FqField, count_points
from qcurves.nfarith import make_number_field, primes_above

from conftest import sqrt2_field

Q = make_number_field([0, 1])
K2 = sqrt2_field()


def test_j_examples():
    assert j_invariant(EllipticCurveNF(Q, [0, 0, 0, 1, 0])) == 1728
    assert j_invariant(EllipticCurveNF(Q, [0, 0, 0, 0, 1])) == 0
    E = EllipticCurveNF(Q, [0, 0, 0, -1, 1])
    assert E.c4 == 48 and E.discriminant == -368
    assert j_invariant(E) == Fraction(-6912, 23)


def test_singular():
    with pytest.raises(SingularCurve):
        EllipticCurveNF(Q, [0, 0])


def test_integralize():
    E = EllipticCurveNF(Q, [0, 0, 0, Fraction(1, 4), 0])
    F = integralize(E)
    assert F.is_integral() and F.j == E.j
    G = EllipticCurveNF(Q, [1, 0, 1, 4, -6])
    assert integralize(G) is G
    H = EllipticCurveNF(Q, [0, 0, 0, 0, Fraction(1, 27)])
    assert integralize(H).is_integral() and integralize(H).j == 0


def test_reduce_and_trace_examples():
    E = EllipticCurveNF(Q, [1, 0])
    (s5,) = primes_above(Q, 5)
    rd = reduce_and_trace(E, s5)
    assert (rd.good, rd.trace, rd.norm) == (True, 2, 5)
    (s2,) = primes_above(Q, 2)
    assert not reduce_and_trace(E, s2).good


def test_reduction_sqrt2_slot_root3():
    E = EllipticCurveNF(K2, [0, K2.gen()])
    slot = next(s for s in primes_above(K2, 7) if int(s.local_root) == 3)
    rd = reduce_and_trace(E, slot)
    _, t = count_points(FqField.prime_field(7), [0, 3])
    assert rd.trace == t


def test_curve_from_j():
    for j in [K2.element(0), K2.element(1728), 60992 - 43136 * K2.gen(), K2.element(Fraction(1, 7))]:
        assert curve_from_j(j).j == j


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(-20, 20), min_size=10, max_size=10),
    st.lists(st.integers(-9, 9), min_size=2, max_size=2).filter(any),
)
def test_scaling_keeps_j(coeffs, u):
    try:
        E = EllipticCurveNF(K2, [coeffs[2 * i:2 * i + 2] for i in range(5)])
    except SingularCurve:
        return
    uu = K2.element(u)
    assert E.scale(uu).j == E.j
    assert E.quadratic_twist(uu).j == E.j
    assert integralize(E.scale(Fraction(1, 3))).j == E.j


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=5, max_size=5))
def test_base_change_traces(ainvs):
    try:
        E = EllipticCurveNF(Q, ainvs)
    except SingularCurve:
        return
    EK = E.base_change(K2)
    for p in (7, 17, 23, 31):
        (sq,) = primes_above(Q, p)
        base = reduce_and_trace(E, sq)
        for s in primes_above(K2, p):
            rd = reduce_and_trace(EK, s)
            assert rd.good == base.good
            if rd.good:
                assert rd.trace == base.trace
                if not rd.supersingular:
                    assert rd.frobenius_discriminant < 0
