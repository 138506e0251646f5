"""Square classes of isogeny degrees, central classes, and certificates."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint

from .exceptions import Disconnected, NoCentralClassFound, PropertyViolation
from .isogclass import IsogenyClassGraph


def squarefree_part(n: int) -> int:
    if n < 1:
        raise ValueError("expected a positive integer")
    out = 1
    for p, e in factorint(n).items():
        if e % 2:
            out *= p
    return out


def prime_factors(n: int):
    return sorted(factorint(n)) if n > 1 else []


@dataclass(frozen=True, order=True)
class SquareClass:
    """A positive rational modulo squares, stored as its squarefree representative."""

    rep: int

    def __post_init__(self):
        if self.rep < 1 or squarefree_part(self.rep) != self.rep:
            raise ValueError(f"{self.rep} is not a positive squarefree integer")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return square_class(self.rep * other.rep)

    def __int__(self):
        return self.rep

    def __repr__(self):
        return f"SquareClass({self.rep})"


def square_class(n: int) -> SquareClass:
    return SquareClass(squarefree_part(n))


def pairwise_degree_class(G: IsogenyClassGraph, u: int, v: int) -> SquareClass:
    """Product of edge degrees along a path from u to v, modulo squares."""
    labels = G.path(u, v)
    if labels is None:
        raise Disconnected(f"vertices {u} and {v} are not connected")
    n = 1
    for ell in labels:
        n *= ell
    return square_class(n)


def isogeny_degree_upper_bound(G: IsogenyClassGraph, u: int, v: int) -> int:
    """Least product of edge degrees over paths from u to v.

    Composites of cyclic isogenies along a path need not be cyclic, so this
    only bounds the smallest isogeny degree from above.
    """
    adj = G.adjacency()
    best = {u: 1}
    heap = [(1, u)]
    while heap:
        d, x = heapq.heappop(heap)
        if x == v:
            return d
        if d > best.get(x, d):
            continue
        for y, ell in adj[x]:
            nd = d * ell
            if nd < best.get(y, nd + 1):
                best[y] = nd
                heapq.heappush(heap, (nd, y))
    raise Disconnected(f"vertices {u} and {v} are not connected")


def path_independence_violations(G: IsogenyClassGraph):
    """Edges whose degree class disagrees with the classes of a spanning tree from the origin."""
    base = {v: pairwise_degree_class(G, G.origin, v) for v in range(len(G))}
    return [
        (u, v, ell) for u, v, ell in G.edges
        if base[u] * square_class(ell) != base[v]
    ]


# ---------------------------------------------------------------------------
# conjugacy classes

@dataclass(frozen=True)
class ConjugacyGroup:
    poly: tuple
    members: tuple

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def complete(self) -> bool:
        return len(self.members) == self.degree


def conjugacy_partition(G: IsogenyClassGraph):
    """Vertices grouped by minimal polynomial, ordered by (degree, coefficients)."""
    groups = {}
    for i, m in enumerate(G.min_polys):
        groups.setdefault(tuple(m), []).append(i)
    return sorted(
        (ConjugacyGroup(poly, tuple(members)) for poly, members in groups.items()),
        key=lambda g: (g.degree, g.poly),
    )


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


# ---------------------------------------------------------------------------
# certificates

def _json_rational(c: Fraction):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class Certificate:
    """(r, rho, N, H) for a non-CM Q-curve, or the discriminant D for a CM one."""

    kind: str
    r: int | None
    rho: int | None
    level: int | None
    central_poly: tuple
    cm_disc: int | None = None

    @classmethod
    def rational(cls, j0) -> "Certificate":
        j0 = Fraction(j0)
        return cls("NonCM", 0, 0, 1, (-j0, Fraction(1)))

    @classmethod
    def cm(cls, D: int, H) -> "Certificate":
        return cls("CM", None, None, None, tuple(Fraction(c) for c in H), D)

    @property
    def H(self):
        return self.central_poly

    def check(self):
        """Raise PropertyViolation unless the numeric invariants hold."""
        if self.kind == "CM":
            if self.cm_disc is None or self.cm_disc >= 0:
                raise PropertyViolation("cm_disc", f"{self.cm_disc}")
            return
        N, r, rho = self.level, self.r, self.rho
        if N < 1 or squarefree_part(N) != N:
            raise PropertyViolation("level_squarefree", f"N = {N}")
        if r != len(prime_factors(N)):
            raise PropertyViolation("r_is_omega_N", f"r = {r}, N = {N}")
        if not 0 <= rho <= r:
            raise PropertyViolation("rho_le_r", f"rho = {rho}, r = {r}")
        if len(self.central_poly) - 1 != 2 ** rho:
            raise PropertyViolation("deg_H", f"deg H = {len(self.central_poly) - 1}, rho = {rho}")
        linear = len(self.central_poly) == 2
        states = (r == 0, rho == 0, N == 1, linear)
        if len(set(states)) != 1:
            raise PropertyViolation("rational_chain", f"r={r} rho={rho} N={N} deg H={len(self.central_poly) - 1}")

    def to_json(self):
        out = {"kind": self.kind}
        if self.kind == "CM":
            out["cm_disc"] = self.cm_disc
        out["r"] = self.r
        out["rho"] = self.rho
        out["level"] = self.level
        out["H"] = [_json_rational(c) for c in self.central_poly]
        return out

    @classmethod
    def from_json(cls, obj) -> "Certificate":
        H = tuple(Fraction(c) for c in obj["H"])
        return cls(obj["kind"], obj["r"], obj["rho"], obj["level"], H, obj.get("cm_disc"))


def degree_classes(G: IsogenyClassGraph, members):
    """delta: square class of the degree from the first member to each member."""
    c0 = members[0]
    return [pairwise_degree_class(G, c0, c) for c in members]


def _level_of(classes) -> int:
    primes = set()
    for c in classes:
        primes.update(prime_factors(c.rep))
    N = 1
    for p in primes:
        N *= p
    return N


def central_group(G: IsogenyClassGraph):
    """The complete conjugacy group of least 2-power degree whose degree classes have the right size."""
    for g in conjugacy_partition(G):
        if not g.complete or not _is_power_of_two(g.degree):
            continue
        image = set(degree_classes(G, g.members))
        if len(image) == g.degree:
            return g
    raise NoCentralClassFound("no complete conjugacy class of 2-power degree in the graph")


def certificate_from_graph(G: IsogenyClassGraph) -> Certificate:
    g = central_group(G)
    rho = g.degree.bit_length() - 1
    classes = [
        pairwise_degree_class(G, u, v) for u, v in itertools.combinations(g.members, 2)
    ]
    N = _level_of(classes)
    cert = Certificate("NonCM", len(prime_factors(N)), rho, N, tuple(Fraction(c) for c in g.poly))
    cert.check()
    return cert


@dataclass(frozen=True)
class CoreReport:
    degree_set: tuple
    subgroup: bool
    divisors_squarefree: bool
    full_core: bool
    homomorphism: bool
    conjugate_degrees_divisible: bool
    odd_degree_rational: bool | None

    def as_dict(self):
        return {
            "degree_set": list(self.degree_set),
            "subgroup": self.subgroup,
            "divisors_squarefree": self.divisors_squarefree,
            "full_core": self.full_core,
            "homomorphism": self.homomorphism,
            "conjugate_degrees_divisible": self.conjugate_degrees_divisible,
            "odd_degree_rational": self.odd_degree_rational,
        }


def _divisors_of_squarefree(N: int):
    ps = prime_factors(N)
    out = []
    for k in range(len(ps) + 1):
        for combo in itertools.combinations(ps, k):
            d = 1
            for p in combo:
                d *= p
            out.append(d)
    return sorted(out)


def verify_core_properties(G: IsogenyClassGraph, cert: Certificate) -> CoreReport:
    """Check the structural consequences of ``cert`` on the graph.

    Raises PropertyViolation naming the first clause that fails; a failure
    means a bug upstream, not a statement about the curve.
    """
    if cert.kind != "NonCM":
        raise ValueError("core properties only apply to non-CM certificates")
    cert.check()
    groups = [g for g in conjugacy_partition(G) if g.poly == tuple(cert.central_poly)]
    if not groups or not groups[0].complete:
        raise PropertyViolation("central_class_present", "H is not a complete class of the graph")
    members = groups[0].members
    N, rho = cert.level, cert.rho

    deltas = degree_classes(G, members)
    degree_set = tuple(sorted({c.rep for c in deltas}))
    divisors = _divisors_of_squarefree(N)

    closed = all(square_class(a * b).rep in degree_set for a in degree_set for b in degree_set)
    subgroup = closed and 1 in degree_set and len(degree_set) == 2 ** rho
    if not subgroup:
        raise PropertyViolation("degree_subgroup", f"degree set {degree_set}, rho = {rho}")

    pair = [pairwise_degree_class(G, u, v).rep for u, v in itertools.combinations(members, 2)]
    squarefree_ok = all(d in divisors for d in pair + list(degree_set))
    if not squarefree_ok:
        raise PropertyViolation("pairwise_divisors", f"degrees {sorted(set(pair))} vs N = {N}")

    hom = True
    for u, v, w in itertools.product(members, repeat=3):
        if pairwise_degree_class(G, u, w) != pairwise_degree_class(G, u, v) * pairwise_degree_class(G, v, w):
            hom = False
            break
    if not hom:
        raise PropertyViolation("homomorphism", "degree classes do not compose")

    c0 = members[0]
    reached = {pairwise_degree_class(G, c0, v).rep for v in range(len(G))}
    full_core = all(d in reached for d in divisors)

    divisible = all((len(m) - 1) % (2 ** rho) == 0 for m in G.min_polys)
    if not divisible:
        raise PropertyViolation("conjugate_degree_divisibility", f"2^{rho} does not divide every vertex degree")

    odd = None
    if G.field.degree % 2 == 1:
        odd = N == 1
        if not odd:
            raise PropertyViolation("odd_degree_rational", f"N = {N} over a field of odd degree")

    return CoreReport(degree_set, subgroup, squarefree_ok, full_core, hom, divisible, odd)
