import pytest
from hypothesis import given, settings, strategies as st

from qcurves.exceptions import FieldTooLarge, SingularCurve
from qcurves.ffarith import FqField, count_points, fp_is_irreducible, poly_roots_fq

from oracles import NaiveGF, naive_discriminant_zero, naive_point_count


def ints(field, rep):
    return sorted(int(x) for x in rep)


def test_roots_examples():
    F7 = FqField.prime_field(7)
    assert ints(F7, poly_roots_fq([-2, 0, 1], F7)) == [3, 4]
    F3 = FqField.prime_field(3)
    assert poly_roots_fq([1, 0, 1], F3) == set()
    F5 = FqField.prime_field(5)
    assert ints(F5, poly_roots_fq([0, -1, 0, 1], F5)) == [0, 1, 4]


def test_roots_large_field_seed_independent():
    p = 10007
    F = FqField.prime_field(p)
    h = [1]
    for r in (5, 17, 9999):
        h = [(a - r * b) % p for a, b in zip([0] + h, h + [0])]
    h = [(a + b) % p for a, b in zip([0, 0] + h, h + [0, 0])]  # times x^2 + 1, no roots as p = 3 mod 4
    base = poly_roots_fq(h, F, seed=0)
    for seed in range(1, 5):
        assert poly_roots_fq(h, F, seed=seed) == base
    assert sorted(int(x) for x in base) == [5, 17, 9999]


def test_point_count_examples():
    F5 = FqField.prime_field(5)
    assert count_points(F5, [1, 0]) == (4, 2)
    assert count_points(F5, [0, 1]) == (6, 0)
    F3 = FqField.prime_field(3)
    assert count_points(F3, [-1, 0]) == (4, 0)


def test_point_count_errors():
    F5 = FqField.prime_field(5)
    with pytest.raises(SingularCurve):
        count_points(F5, [0, 0])
    with pytest.raises(FieldTooLarge):
        count_points(FqField.prime_field(101), [1, 1], norm_bound=100)


def _irreducible_moduli(p, f, limit=2):
    import itertools

    out = []
    for tail in itertools.product(range(p), repeat=f):
        h = list(tail) + [1]
        if fp_is_irreducible(h, p):
            out.append(tuple(h))
            if len(out) == limit:
                break
    return out


FIELDS = [(p, (0, 1)) for p in (2, 3, 5, 7, 11, 13)]
FIELDS += [(p, h) for p, f in [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (3, 3), (7, 2), (11, 2), (13, 2)] for h in _irreducible_moduli(p, f, 1)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.lists(st.integers(0, 10 ** 6), min_size=5 * 4, max_size=5 * 4))
def test_point_count_matches_naive(field_def, raw):
    p, h = field_def
    F = FqField(p, h)
    f = F.f
    ainvs = [tuple(raw[i * 4 + k] % p for k in range(f)) for i in range(5)]
    G = NaiveGF(p, h)
    if naive_discriminant_zero(G, ainvs):
        with pytest.raises(SingularCurve):
            count_points(F, ainvs)
        return
    order, trace = count_points(F, ainvs)
    assert order == naive_point_count(G, ainvs)
    assert trace == F.q + 1 - order
    assert trace * trace <= 4 * F.q


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([5, 7, 11, 13, 17, 19, 23]), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_supersingular_is_trace_zero(p, a, b):
    F = FqField.prime_field(p)
    if (4 * a ** 3 + 27 * b ** 2) % p == 0:
        return
    _, t = count_points(F, [a, b])
    assert (t % p == 0) == (t == 0)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(101, (0, 1)), (4099, (0, 1)), (101, (2, 0, 1))]), st.lists(st.integers(0, 10 ** 6), min_size=3, max_size=6))
def test_roots_are_roots(field_def, coeffs):
    p, h = field_def
    F = FqField(p, h)
    poly = [F.from_int(c) for c in coeffs] + [F.one()]
    roots = poly_roots_fq(poly, F)
    assert len(roots) <= len(poly) - 1
    for r in roots:
        assert not any(F.peval(poly, r.rep))
