import random
from fractions import Fraction
from math import lcm
from types import SimpleNamespace

import pytest
from hypothesis import given, settings, strategies as st

from qcurves.ellnf import EllipticCurveNF, curve_from_j
from qcurves.exceptions import UnsupportedField
from qcurves.nfarith import make_number_field
from qcurves.qcore import squarefree_part
from qcurves.qctest import (
    NO,
    NO_HEURISTIC,
    YES,
    QCurveConfig,
    bad_prime_candidates,
    bad_prime_test,
    field_of_j,
    good_prime_test,
    is_q_curve,
)

from conftest import sqrt2_field
from oracles import NaiveGF, naive_discriminant_zero, naive_point_count, sympy_valuation

Q = make_number_field([0, 1])
K2 = sqrt2_field()
r2 = K2.gen()

EXPECTED = {
    "14a1": (YES, "RationalJ"),
    "rational-cm-1728": (YES, "RationalJ"),
    "strict-quadratic": (YES, "ConjugateClassFound"),
    "nonstrict-quadratic": (YES, "ConjugateClassFound"),
    "quartic-core": (YES, "ConjugateClassFound"),
    "quadratic-cm-15": (YES, "CM"),
    "bad-prime-control": (NO, "LocalObstruction"),
    "good-prime-control": (NO, "LocalObstruction"),
    "cubic-7-isogenous": (YES, "ConjugateClassFound"),
    "cubic-control": (NO, "LocalObstruction"),
    "good-prime-integral-j": (NO, "LocalObstruction"),
}


@pytest.mark.parametrize("label", sorted(EXPECTED))
def test_corpus_verdicts(verdicts, label):
    v = verdicts[label]
    assert (v.answer, v.reason.kind) == EXPECTED[label]


@pytest.mark.parametrize("label", sorted(EXPECTED))
def test_verdict_invariants(verdicts, label):
    v = verdicts[label]
    if v.answer == YES:
        assert v.certificate is not None and v.rigorous
        v.certificate.check()
    elif v.answer == NO:
        assert v.rigorous and v.reason.kind == "LocalObstruction" and v.witnesses
    else:
        assert not v.rigorous


def test_strict_certificate(verdicts):
    c = verdicts["strict-quadratic"].certificate
    assert (c.r, c.rho, c.level, len(c.H) - 1) == (1, 1, 2, 2)


def test_nonstrict_has_128(verdicts):
    G = verdicts["nonstrict-quadratic"].graph
    assert len(G) >= 4
    assert K2.element(128) in G.vertices


def test_cm_15(verdicts):
    assert verdicts["quadratic-cm-15"].certificate.cm_disc == -15


def test_1728_over_quadratic_is_rational_j():
    v = is_q_curve(EllipticCurveNF(K2, (r2 + 1, 0)))
    assert (v.answer, v.reason.kind) == (YES, "RationalJ")
    assert v.certificate.H == (Fraction(-1728), Fraction(1))


def test_j_in_subfield_is_reduced():
    K4 = make_number_field([121, 0, -30, 0, 1])
    a = K4.gen()
    s2 = (a ** 3 - 19 * a) / 22
    j = field_of_j(60992 - 43136 * s2)
    assert j.field.degree == 2
    v = is_q_curve(60992 - 43136 * s2)
    assert (v.certificate.r, v.certificate.rho, v.certificate.level) == (1, 1, 2)


def test_unsupported_field():
    j = SimpleNamespace(field=SimpleNamespace(degree=0))
    with pytest.raises(UnsupportedField):
        is_q_curve(SimpleNamespace(j=j))


# ---------------------------------------------------------------------------
# local tests

def test_bad_prime_example():
    j = (3 - r2) / 7
    obs = bad_prime_test(j, bad_prime_candidates(j))
    assert obs.p == 7 and obs.clause == "bad_prime"
    assert sorted(s["valuation"] for s in obs.witness["slots"]) == [-1, 0]


def test_bad_prime_passes_on_rational_denominator():
    j = K2.element(Fraction(1, 7))
    assert bad_prime_test(j, {7}) is None


def test_bad_prime_vacuous_over_q():
    j = Q.element(Fraction(5, 49))
    assert bad_prime_test(j, bad_prime_candidates(j)) is None


def test_good_prime_example():
    E = EllipticCurveNF(K2, (r2, 1))
    obs = good_prime_test(E, 100)
    assert obs is not None and obs.p <= 100
    assert obs.p == 7


def test_good_prime_vacuous_over_q():
    assert good_prime_test(EllipticCurveNF(Q, (1, 0, 1, 4, -6)), 200) is None


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 30))
@settings(max_examples=40, deadline=None)
def test_bad_prime_agrees_with_sympy(x, y, d):
    j = (x + y * r2) / d
    if j.is_zero():
        return
    obs = bad_prime_test(j, bad_prime_candidates(j))
    for p in bad_prime_candidates(j):
        vals = [sympy_valuation([-2, 0, 1], p, list(f), j.coords) for f in _factors_mod(p)]
        split = len({v < 0 for v in vals}) > 1
        if split:
            assert obs is not None
    if obs is not None:
        vals = [sympy_valuation([-2, 0, 1], obs.p, s["factor"], j.coords) for s in obs.witness["slots"]]
        assert vals == [s["valuation"] for s in obs.witness["slots"]]


def _factors_mod(p):
    from qcurves.nfarith import primes_above

    return [s.factor for s in primes_above(K2, p)]


def _recheck_good_witness(w):
    """Recount points at every slot of the witness with the naive oracle."""
    ainvs = [[Fraction(c) for c in a] for a in w["ainvs"]]
    sqf, kinds = set(), set()
    for s in w["slots"]:
        F = NaiveGF(w["p"], s["factor"])
        red = []
        for a in ainvs:
            den = lcm(*(c.denominator for c in a))
            red.append(F.reduce([int(c * den) for c in a], den))
        assert not naive_discriminant_zero(F, red)
        q = w["p"] ** F.f
        trace = q + 1 - naive_point_count(F, red)
        assert trace == s["trace"] and q == s["norm"]
        kinds.add(trace % w["p"] == 0)
        if trace % w["p"]:
            sqf.add(squarefree_part(4 * q - trace * trace))
    assert len(kinds) > 1 or len(sqf) > 1


def test_good_prime_witness_recheck(verdicts):
    w = verdicts["good-prime-integral-j"].witnesses[0]
    _recheck_good_witness(w)
    obs = good_prime_test(EllipticCurveNF(K2, (r2, 1)), 100)
    _recheck_good_witness(obs.witness)


# ---------------------------------------------------------------------------
# bounds and twists

def test_tiny_b2_is_heuristic_no(corpus):
    v = is_q_curve(corpus["strict-quadratic"].curve(), QCurveConfig(b2=1))
    assert v.answer == NO_HEURISTIC and v.reason.kind == "Exhausted" and not v.rigorous
    assert v.bounds_used == (4000, 1)


@pytest.mark.parametrize("label", ["strict-quadratic", "nonstrict-quadratic", "cubic-7-isogenous"])
def test_monotone_at_doubled_bounds(corpus, verdicts, label):
    v = verdicts[label]
    w = is_q_curve(corpus[label].curve(), QCurveConfig(b1=2000, b2=2000))
    assert w.answer == v.answer == YES
    assert w.certificate == v.certificate


def test_twists_keep_verdict(verdicts, corpus):
    E = corpus["strict-quadratic"].curve()
    base = verdicts["strict-quadratic"].to_json()
    rng = random.Random(1)
    for _ in range(3):
        d = K2.element([rng.randint(-9, 9), rng.randint(1, 9)])
        w = is_q_curve(E.quadratic_twist(d)).to_json()
        assert w == base


def test_twist_of_obstructed_curve():
    E = curve_from_j((3 - r2) / 7)
    for d in (-1, 3, 1 + r2):
        v = is_q_curve(E.quadratic_twist(d))
        assert (v.answer, v.reason.p) == (NO, 7)
