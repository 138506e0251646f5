"""Generate the bundled Hilbert class polynomial table for h(D) <= MAXH.

Development-only script (needs python-flint). Class numbers are counted
from reduced primitive forms; H_D comes from flint.

    python tools/gen_cmdata.py --max-h 10 --max-disc 20000 --out src/qcurves/data/cm_hilbert.txt
"""

import argparse
from math import gcd, isqrt
from pathlib import Path

import flint


def class_number(D):
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-h", type=int, default=10)
    ap.add_argument("--max-disc", type=int, default=20000)
    ap.add_argument("--out", type=Path, required=True)
    args = ap.parse_args()
    rows = []
    for absd in range(3, args.max_disc + 1):
        D = -absd
        if D % 4 not in (0, 1):
            continue
        h = class_number(D)
        if h <= args.max_h:
            H = flint.fmpz_poly.hilbert_class_poly(D)
            coeffs = [int(c) for c in H.coeffs()]
            assert len(coeffs) == h + 1 and coeffs[-1] == 1
            rows.append((D, h, coeffs))
    rows.sort(key=lambda r: (r[1], -r[0]))
    lines = [" ".join(map(str, [D, h] + coeffs)) for D, h, coeffs in rows]
    args.out.write_text("\n".join(lines) + "\n")
    counts = {}
    for _, h, _ in rows:
        counts[h] = counts.get(h, 0) + 1
    print(len(rows), sorted(counts.items()), max(-r[0] for r in rows))


if __name__ == "__main__":
    main()
