"""Classical modular polynomials Phi_l(X, Y) read from ``phi_j_<l>.txt`` tables.

Each table line is ``[i,k] c`` with i >= k, meaning c X^i Y^k (and, by
symmetry, c X^k Y^i).  A ``MANIFEST`` file in the directory lists the levels
it provides.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .exceptions import MissingLevel, ParseError
from .nfarith import NFElement

_LINE = re.compile(r"^\[(\d+),(\d+)\]\s+(-?\d+)$")


def default_modpoly_dir() -> Path:
    return Path(str(resources.files("qcurves") / "data" / "modpoly"))


@dataclass(frozen=True)
class ModPoly:
    level: int
    coeffs: dict  # (i, k) with i >= k -> int

    def coefficient(self, i, k):
        return self.coeffs.get((i, k) if i >= k else (k, i), 0)

    def rows(self):
        """Y-polynomials of each X-power: rows()[i][k] = coefficient of X^i Y^k."""
        n = self.level + 2
        return [[self.coefficient(i, k) for k in range(n)] for i in range(n)]

    def __call__(self, x, y):
        """Evaluate at a pair of ints, Fractions, or elements of one number field."""
        n = self.level + 2
        xs = [1]
        ys = [1]
        for _ in range(n - 1):
            xs.append(xs[-1] * x)
            ys.append(ys[-1] * y)
        total = 0
        for (i, k), c in self.coeffs.items():
            total = total + c * xs[i] * ys[k]
            if i != k:
                total = total + c * xs[k] * ys[i]
        return total


def parse_modpoly(text, level):
    coeffs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ParseError(f"malformed coefficient line {raw!r}", lineno)
        i, k, c = int(m.group(1)), int(m.group(2)), int(m.group(3))
        if i < k:
            raise ParseError(f"exponent pair [{i},{k}] must have i >= k", lineno)
        if i > level + 1:
            raise ParseError(f"exponent {i} exceeds level + 1 = {level + 1}", lineno)
        if (i, k) in coeffs:
            raise ParseError(f"duplicate exponent pair [{i},{k}]", lineno)
        if c:
            coeffs[(i, k)] = c
    if coeffs.get((level + 1, 0)) != 1:
        raise ParseError(f"Phi_{level} must have X^{level + 1} coefficient 1")
    if (level + 1, level + 1) in coeffs:
        raise ParseError(f"Phi_{level} must not contain X^{level + 1} Y^{level + 1}")
    if any(i == level + 1 and k > 0 for (i, k) in coeffs):
        raise ParseError(f"Phi_{level} is not monic of degree {level + 1} in X")
    return ModPoly(level, coeffs)


def available_levels(directory=None):
    directory = Path(directory) if directory else default_modpoly_dir()
    manifest = directory / "MANIFEST"
    if manifest.exists():
        return sorted(int(t) for t in manifest.read_text().split())
    return sorted(int(p.stem.rsplit("_", 1)[1]) for p in directory.glob("phi_j_*.txt"))


@lru_cache(maxsize=64)
def _load_cached(directory: str, level: int) -> ModPoly:
    path = Path(directory) / f"phi_j_{level}.txt"
    if not path.exists():
        raise MissingLevel(f"no table for level {level} in {directory}")
    return parse_modpoly(path.read_text(), level)


def load_modpoly(path=None, level=None) -> ModPoly:
    """Load Phi_level from a directory (default: the bundled tables) or a file path."""
    if level is None:
        raise TypeError("level is required")
    if path is None:
        path = default_modpoly_dir()
    path = Path(path)
    if path.is_file():
        return parse_modpoly(path.read_text(), level)
    return _load_cached(str(path.resolve()), level)


def evaluate_at_j(phi: ModPoly, j: NFElement):
    """Coefficients (constant first) of Phi(X, j); monic of degree level + 1."""
    K = j.field
    n = phi.level + 2
    jp = [K.one()]
    for _ in range(n - 1):
        jp.append(jp[-1] * j)
    den = lcm(*(x.den for x in jp))
    # accumulate integer numerators over a common denominator of all powers
    out = []
    for row in phi.rows():
        acc = [0] * K.degree
        for k, c in enumerate(row):
            if c:
                scale = c * (den // jp[k].den)
                for t, v in enumerate(jp[k].nums):
                    acc[t] += scale * v
        out.append(NFElement._make(K, acc, den))
    return out
