"""Reducible-prime sieve, roots of polynomials in K, and the K-isogeny graph of j."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm, prod

import numpy as np
from sympy import nextprime

from .ellnf import EllipticCurveNF, integralize, reduce_and_trace
from .exceptions import FieldTooLarge, HeightExceeded, RamifiedOrNonMaximal, Truncated
from .ffarith import (
    DEFAULT_NORM_BOUND,
    fp_deriv,
    fp_factor_squarefree,
    fp_gcd,
    fp_powmod,
    fp_sub,
    fp_trim,
)
from .modpoly import available_levels, default_modpoly_dir, evaluate_at_j, load_modpoly
from .nfarith import (
    NFElement,
    NumberField,
    _slot_idempotent,
    element_minimal_polynomial,
    primes_above,
    primes_up_to,
    reduce_element,
    ring_inverse,
    ring_mul,
)

DEFAULT_B1 = 1000
DEFAULT_B2 = 1000
DEFAULT_MAX_VERTICES = 128
DEFAULT_HEIGHT_BITS = 20000


# ---------------------------------------------------------------------------
# local data shared by the sieve and the good-prime test

class LocalData:
    """Lazily computed reduction data of an integral model, one entry per p.

    ``slots(p)`` returns None when p is ramified, otherwise a list holding a
    :class:`ReductionData` per slot, or None for slots whose residue field
    exceeds the norm bound.
    """

    def __init__(self, E: EllipticCurveNF, norm_bound: int = DEFAULT_NORM_BOUND):
        self.curve = integralize(E)
        self.norm_bound = norm_bound
        self._cache = {}

    def slots(self, p: int):
        if p not in self._cache:
            try:
                slots = primes_above(self.curve.field, p)
            except RamifiedOrNonMaximal:
                self._cache[p] = None
                return None
            data = []
            for s in slots:
                try:
                    data.append(reduce_and_trace(self.curve, s, self.norm_bound))
                except FieldTooLarge:
                    data.append(None)
            self._cache[p] = data
        return self._cache[p]


def _is_nonresidue(d: int, ell: int) -> bool:
    if ell == 2:
        return False
    r = d % ell
    return r != 0 and pow(r, (ell - 1) // 2, ell) == ell - 1


def heuristic_reducible_primes(E: EllipticCurveNF, B1: int, B2: int,
                               norm_bound: int = DEFAULT_NORM_BOUND,
                               local: LocalData | None = None):
    """Primes l <= B2 surviving the Frobenius-discriminant sieve over p <= B1.

    A reducible l forces every d = a^2 - 4N(p) at a good slot (with p != l)
    to be a square modulo l, so any slot with d a non-residue rules l out.
    """
    if B2 < 2:
        return set()
    local = local or LocalData(E, norm_bound)
    alive = set(primes_up_to(B2))
    for p in primes_up_to(B1):
        data = local.slots(p)
        if not data:
            continue
        for rd in data:
            if rd is None or not rd.good:
                continue
            d = rd.frobenius_discriminant
            alive = {ell for ell in alive if ell == p or not _is_nonresidue(d, ell)}
        if alive <= {2}:
            break
    return alive


# ---------------------------------------------------------------------------
# polynomials over K (lists of NFElement, constant term first)

def _nf_trim(f):
    f = list(f)
    while f and f[-1].is_zero():
        f.pop()
    return f


def _nf_divmod(a, b):
    a = _nf_trim(a)
    b = _nf_trim(b)
    lead_inv = b[-1].inverse()
    q = [b[0].field.zero()] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * lead_inv
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - c * bi
        a = _nf_trim(a)
    return q, a


def _nf_gcd(a, b):
    a, b = _nf_trim(a), _nf_trim(b)
    while b:
        a, b = b, _nf_divmod(a, b)[1]
    inv = a[-1].inverse()
    return [c * inv for c in a]


def nf_poly_eval(f, x: NFElement) -> NFElement:
    acc = x.field.zero()
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _squarefree_part(f):
    df = [i * c for i, c in enumerate(f)][1:]
    g = _nf_gcd(f, df)
    if len(g) == 1:
        return f
    return _nf_divmod(f, g)[0]


# ---------------------------------------------------------------------------
# roots in K by p-adic lifting

@dataclass(frozen=True)
class RootSearch:
    """Verified roots of f in K.

    ``upper_bound`` is the least number of roots modulo a split prime seen
    while sampling, which bounds the number of roots in K.  ``complete`` is
    False only when a search was cut off by the height or combination caps.
    """

    roots: frozenset
    upper_bound: int
    complete: bool


def _fp_roots(h, p):
    """Distinct roots in GF(p) of an integer polynomial h (already reduced)."""
    h = fp_trim(list(h))
    if len(h) <= 1:
        return []
    xp = fp_powmod([0, 1], p, h, p)
    lin = fp_gcd(h, fp_sub(xp, [0, 1], p), p)
    if len(lin) <= 1:
        return []
    return sorted((-fac[0]) % p for fac in fp_factor_squarefree(lin, p))


def _local_roots(f, slots):
    """Roots of f at each (degree one) slot, or None if f is not squarefree there."""
    out = []
    for s in slots:
        p = s.p
        h = [reduce_element(c, s).rep[0] for c in f]
        if len(fp_gcd(fp_trim(list(h)), fp_deriv(h, p), p)) > 1:
            return None
        out.append(_fp_roots(h, p))
    return out


def _split_primes(K: NumberField, den: int, start: int):
    """Completely split primes >= start not dividing den or disc(g)."""
    p = start - 1
    while True:
        p = nextprime(p)
        if den % p == 0 or K.poly_disc % p == 0:
            continue
        slots = primes_above(K, p)
        if all(s.residue_degree == 1 for s in slots):
            yield p, slots


def _log2_abs_bound(c: NFElement, logs_theta):
    """Upper bounds on log2 |sigma(c)| for each complex embedding sigma."""
    out = []
    for lt in logs_theta:
        terms = [x.bit_length() + k * lt for k, x in enumerate(c.nums) if x]
        if not terms:
            out.append(float("-inf"))
        else:
            out.append(max(terms) + math.log2(len(terms)) - math.log2(c.den) + 1e-9)
    return out


def coordinate_bound_bits(f, D: int) -> int:
    """Bits b with 2^b > 2 |coordinate of D*beta| for every root beta of monic f in K.

    Every embedding of a root is bounded by Fujiwara's bound 2 max |c_{n-i}|^(1/i);
    coordinates follow from the inverse Vandermonde matrix of the embeddings,
    whose entries are estimated numerically and then doubled for safety.
    """
    K = f[0].field
    n = K.degree
    roots = np.roots(np.array(K.defining_poly[::-1], dtype=float)) if n > 1 else np.array([0.0])
    logs_theta = [math.log2(max(abs(t), 1e-300)) for t in roots]
    m = len(f) - 1
    per_coeff = [_log2_abs_bound(c, logs_theta) for c in f]
    log_r = []
    for s in range(len(roots)):
        cands = []
        for i in range(1, m + 1):
            lc = per_coeff[m - i][s]
            if i == m:
                lc -= 1
            cands.append(lc / i)
        log_r.append(1 + max(max(cands), 0.0))
    if n > 1:
        V = np.vander(roots, n, increasing=True)
        Vinv = np.linalg.inv(V)
        log_w = math.log2(2 * float(np.max(np.sum(np.abs(Vinv), axis=1))))
    else:
        log_w = 0.0
    top = max(log_r) + log_w + math.log2(D)
    return max(int(math.ceil(top)) + 3, 8)


def _symmetric(a, M):
    return a - M if 2 * a > M else a


def _lift_root(f, K, slots, local, D, need_bits, max_bits):
    """Newton-lift the local root to precision 2^need_bits and test the candidate.

    Returns (root or None, decided).  Once the modulus exceeds the height
    bound a failed check proves no root of K reduces to ``local``.
    """
    p = slots[0].p
    n = K.degree
    alpha = [0] * n
    for s, r in zip(slots, local):
        e = _slot_idempotent(s, 1)
        alpha = [(a + r * c) % p for a, c in zip(alpha, e)]
    df = [i * c for i, c in enumerate(f)][1:]
    k = 1
    previous = None
    while True:
        k *= 2
        M = p ** k
        coeffs = [[x * pow(c.den, -1, M) % M for x in c.nums] for c in f]
        dcoeffs = [[x * pow(c.den, -1, M) % M for x in c.nums] for c in df]
        fa = _ring_eval(coeffs, alpha, K, M)
        dfa = _ring_eval(dcoeffs, alpha, K, M)
        step = ring_mul(fa, ring_inverse(dfa, K, p, k), K, M)
        alpha = [(a - b) % M for a, b in zip(alpha, step)]
        cand = tuple(_symmetric(D * a % M, M) for a in alpha)
        final = M.bit_length() > need_bits
        if cand == previous or final:
            beta = K.element([Fraction(c, D) for c in cand])
            if nf_poly_eval(f, beta).is_zero():
                return beta, True
            if final:
                return None, True
        previous = cand
        if M.bit_length() > max_bits:
            return None, False


def _ring_eval(coeffs, x, K, M):
    acc = [0] * K.degree
    for c in reversed(coeffs):
        acc = ring_mul(acc, x, K, M)
        acc = [(a + b) % M for a, b in zip(acc, c)]
    return acc


def find_roots(f, max_bits: int = DEFAULT_HEIGHT_BITS, sample: int = 6,
               max_combinations: int = 4096, start: int = 1009) -> RootSearch:
    """Roots in K of a nonzero polynomial f over K.

    Candidates come from roots modulo a completely split prime p, one per
    choice of local root at every prime above p, Newton-lifted p-adically.
    Every root returned is checked exactly.  A candidate lifted beyond the
    height bound of :func:`coordinate_bound_bits` that fails the check is
    ruled out, so the search is complete unless ``max_bits`` or
    ``max_combinations`` cut it short.
    """
    f = _nf_trim(f)
    if not f:
        raise ValueError("zero polynomial")
    K = f[0].field
    lead = f[-1].inverse()
    f = [c * lead for c in f]
    if len(f) == 1:
        return RootSearch(frozenset(), 0, True)
    den = lcm(*(c.den for c in f))
    candidates = []
    misses = 0
    for p, slots in _split_primes(K, den, start):
        local = _local_roots(f, slots)
        if local is None:
            misses += 1
            if misses >= 8 and not candidates:
                sf = _squarefree_part(f)
                if len(sf) < len(f):
                    return find_roots(sf, max_bits, sample, max_combinations, start)
            continue
        candidates.append((p, slots, local))
        if min(len(r) for r in local) == 0 or len(candidates) >= sample:
            break
    bound = min(min(len(r) for r in local) for _, _, local in candidates)
    if bound == 0:
        return RootSearch(frozenset(), 0, True)
    p, slots, local = min(candidates, key=lambda c: prod(len(r) for r in c[2]))
    D = den * abs(K.poly_disc)
    need = coordinate_bound_bits(f, D)
    roots = set()
    complete = prod(len(r) for r in local) <= max_combinations
    for choice in itertools.islice(itertools.product(*local), max_combinations):
        beta, decided = _lift_root(f, K, slots, choice, D, need, max_bits)
        complete = complete and decided
        if beta is not None:
            roots.add(beta)
            if len(roots) == bound:
                complete = True
                break
    return RootSearch(frozenset(roots), bound, complete)


def roots_in_K(f, max_bits: int = DEFAULT_HEIGHT_BITS, strict: bool = True):
    """Set of roots of f in K.

    With ``strict`` (the default) a search that cannot certify completeness
    raises :class:`HeightExceeded`; the verified roots found so far are kept
    on the exception as ``roots``.
    """
    res = find_roots(f, max_bits)
    if strict and not res.complete:
        err = HeightExceeded(
            f"found {len(res.roots)} of at most {res.upper_bound} roots within {max_bits} bits"
        )
        err.roots = set(res.roots)
        raise err
    return set(res.roots)


# ---------------------------------------------------------------------------
# class graph

@dataclass
class IsogenyClassGraph:
    field: NumberField
    vertices: list
    edges: list
    min_polys: list
    origin: int = 0
    primes: tuple = ()
    truncated: bool = False
    complete: bool = True
    missing_levels: tuple = ()
    _adj: dict = dc_field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.vertices)

    def index(self, j) -> int:
        return self.vertices.index(j)

    def adjacency(self):
        if self._adj is None:
            adj = {i: [] for i in range(len(self.vertices))}
            for u, v, ell in self.edges:
                adj[u].append((v, ell))
                adj[v].append((u, ell))
            self._adj = adj
        return self._adj

    def path(self, u: int, v: int):
        """Edge labels along a shortest path from u to v, or None if disconnected."""
        adj = self.adjacency()
        prev = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                break
            for y, ell in adj[x]:
                if y not in prev:
                    prev[y] = (x, ell)
                    queue.append(y)
        if v not in prev:
            return None
        labels = []
        while prev[v] is not None:
            v, ell = prev[v]
            labels.append(ell)
        return labels[::-1]

    def is_connected(self):
        return all(self.path(self.origin, v) is not None for v in range(len(self.vertices)))

    def rational_vertices(self):
        return [i for i, j in enumerate(self.vertices) if j.is_rational()]


def _int_minpoly(j):
    return tuple(Fraction(c) for c in element_minimal_polynomial(j))


def build_class_graph(E, primes, max_vertices: int = DEFAULT_MAX_VERTICES,
                      modpoly_dir=None, max_bits: int = DEFAULT_HEIGHT_BITS,
                      strict: bool = False) -> IsogenyClassGraph:
    """Breadth-first closure of j(E) under K-rational l-isogenies, l in ``primes``.

    ``E`` may also be a j-invariant.  Hitting ``max_vertices`` sets the
    ``truncated`` flag (or raises :class:`Truncated` when ``strict``).
    Levels absent from the database are recorded in ``missing_levels`` and
    make the graph incomplete, as does any root search that cannot certify
    its own completeness.
    """
    j0 = E if isinstance(E, NFElement) else E.j
    K = j0.field
    directory = modpoly_dir or default_modpoly_dir()
    have = set(available_levels(directory))
    levels = sorted(ell for ell in primes if ell in have)
    missing = tuple(sorted(ell for ell in primes if ell not in have))
    polys = {ell: load_modpoly(directory, ell) for ell in levels}

    vertices = [j0]
    index = {j0: 0}
    edges = set()
    truncated = False
    complete = not missing
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for ell in levels:
            res = find_roots(evaluate_at_j(polys[ell], vertices[u]), max_bits)
            complete = complete and res.complete
            for r in res.roots:
                if r == vertices[u]:
                    continue
                if r not in index:
                    if len(vertices) >= max_vertices:
                        truncated = True
                        continue
                    index[r] = len(vertices)
                    vertices.append(r)
                    queue.append(index[r])
                v = index[r]
                edges.add((min(u, v), max(u, v), ell))
    if truncated and strict:
        raise Truncated(f"isogeny class exceeds {max_vertices} vertices")
    return IsogenyClassGraph(
        field=K,
        vertices=vertices,
        edges=sorted(edges),
        min_polys=[_int_minpoly(j) for j in vertices],
        origin=0,
        primes=tuple(levels),
        truncated=truncated,
        complete=complete and not truncated,
        missing_levels=missing,
    )
