"""CM detection against a bundled table of Hilbert class polynomials.

Table lines read ``D h c_0 c_1 ... c_{h-1} 1``: the discriminant, the class
number, and the coefficients of H_D in ascending order.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from .exceptions import ParseError, Undecided
from .nfarith import NFElement, element_minimal_polynomial


def default_cm_data_path() -> Path:
    return Path(str(resources.files("qcurves") / "data" / "cm_hilbert.txt"))


class CMTable:
    """Discriminants D < 0 with their class polynomials H_D."""

    def __init__(self, entries):
        self.entries = tuple((int(D), tuple(int(c) for c in H)) for D, H in entries)
        self._by_poly = {}
        seen = set()
        for D, H in self.entries:
            if D in seen:
                raise ValueError(f"duplicate discriminant {D}")
            seen.add(D)
            if D >= 0 or D % 4 not in (0, 1):
                raise ValueError(f"{D} is not a negative discriminant")
            if H[-1] != 1:
                raise ValueError(f"H_{D} is not monic")
            self._by_poly[H] = D
        self.max_degree = max((len(H) - 1 for _, H in self.entries), default=0)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def discriminant_of(self, poly):
        return self._by_poly.get(tuple(poly))

    def polynomial(self, D):
        for d, H in self.entries:
            if d == D:
                return H
        raise KeyError(D)

    def degree_counts(self):
        counts = {}
        for _, H in self.entries:
            counts[len(H) - 1] = counts.get(len(H) - 1, 0) + 1
        return dict(sorted(counts.items()))


def parse_cm_table(text) -> CMTable:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        fields = raw.split()
        if not fields:
            continue
        try:
            nums = [int(t) for t in fields]
        except ValueError:
            raise ParseError(f"non-integer token in {raw!r}", lineno) from None
        if len(nums) < 3:
            raise ParseError("expected D h c_0 ... 1", lineno)
        D, h, coeffs = nums[0], nums[1], nums[2:]
        if len(coeffs) != h + 1:
            raise ParseError(f"H_{D} has {len(coeffs) - 1} as degree, class number says {h}", lineno)
        entries.append((D, coeffs))
    return CMTable(entries)


@lru_cache(maxsize=8)
def _load(path: str) -> CMTable:
    return parse_cm_table(Path(path).read_text())


def load_cm_table(path=None) -> CMTable:
    return _load(str(Path(path or default_cm_data_path()).resolve()))


def is_cm_j(j: NFElement, table: CMTable | None = None):
    """Return the CM discriminant of ``j``, or None if ``j`` is not a CM j-invariant.

    Raises :class:`Undecided` when ``j`` is integral but its degree exceeds
    the table's class numbers.
    """
    table = table or load_cm_table()
    m = element_minimal_polynomial(j)
    if any(c.denominator != 1 for c in m):
        return None
    degree = len(m) - 1
    if degree > table.max_degree:
        raise Undecided(degree, table.max_degree)
    return table.discriminant_of(int(c) for c in m)
