"""Generate classical modular polynomial tables from q-expansions.

Development-only script (needs python-flint); the package reads the text
files it writes and never imports flint.

    python tools/gen_modpoly.py 2 3 5 7 ... --out src/qcurves/data/modpoly
"""

import argparse
from pathlib import Path

import flint


def sigma3_series(prec):
    s = [0] * prec
    for d in range(1, prec):
        for n in range(d, prec, d):
            s[n] += d ** 3
    return s


def qj_series(prec):
    """q * j(q) to O(q^prec)."""
    s3 = sigma3_series(prec)
    e4 = flint.fmpz_poly([1] + [240 * s3[n] for n in range(1, prec)])
    # prod (1 - q^n)^24 via Euler's pentagonal expansion, then power
    eta = [0] * prec
    k = 0
    while True:
        done = True
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e < prec:
                eta[e] += -1 if kk % 2 else 1
                done = False
        if done:
            break
        k += 1
    eta24 = flint.fmpz_poly(eta).pow_trunc(24, prec)
    # series inverse of eta24 by Newton iteration
    inv = flint.fmpz_poly([1])
    n = 1
    while n < prec:
        n = min(2 * n, prec)
        inv = inv.mul_low(2 - eta24.mul_low(inv, n), n)
    num = e4.pow_trunc(3, prec)
    return num.mul_low(inv, prec)


def modular_polynomial(ell):
    prec = ell * (ell + 2) + 4
    qj = qj_series(prec)
    qjc = [int(c) for c in qj.coeffs()] + [0] * prec

    # [j^m]_n = [(qj)^m]_{n+m}
    powers = [None, qj]
    for m in range(2, ell + 2):
        powers.append(powers[-1].mul_low(qj, prec))
    pc = [None] + [[int(c) for c in P.coeffs()] + [0] * (prec + 1) for P in powers[1:]]

    def jpow_coeff(m, n):
        if m == 0:
            return 1 if n == 0 else 0
        idx = n + m
        if idx < 0:
            return 0
        if idx >= prec:
            raise ValueError("precision")
        return pc[m][idx]

    # Laurent series in q stored as dict exponent -> int, exponents in [lo, hi]
    hi = ell + 1
    lo = -1

    def S(m):
        # ell * sum_{ell | n} [j^m]_n q^{n/ell}
        out = {}
        for e in range(lo, hi + 1):
            out[e] = ell * jpow_coeff(m, ell * e)
        return out

    def mul(a, b, lo_, hi_):
        out = {}
        for ea, ca in a.items():
            if not ca:
                continue
            for eb, cb in b.items():
                e = ea + eb
                if lo_ <= e <= hi_:
                    out[e] = out.get(e, 0) + ca * cb
        return out

    Ss = [None] + [S(m) for m in range(1, ell + 1)]
    es = [{0: 1}]
    for m in range(1, ell + 1):
        acc = {}
        for i in range(1, m + 1):
            term = mul(es[m - i], Ss[i], lo, hi)
            sgn = 1 if i % 2 else -1
            for e, c in term.items():
                acc[e] = acc.get(e, 0) + sgn * c
        em = {}
        for e, c in acc.items():
            q, r = divmod(c, m)
            if r:
                raise ArithmeticError("Newton identity not integral")
            em[e] = q
        es.append(em)
    # F(X) = sum_m (-1)^m e_m X^{ell-m}
    F = {ell - m: {e: (-1) ** m * c for e, c in es[m].items()} for m in range(ell + 1)}
    # j(q^ell) up to q^ell (exponents -ell, 0, ell)
    jl = {ell * n: jpow_coeff(1, n) for n in (-1, 0, 1)}
    # Phi(X) = F(X) * (X - j(q^ell)), coefficient series on [-(ell+1), 0]
    lo2, hi2 = -(ell + 1), 0
    Phi = {}
    for k in range(ell + 2):
        c = {}
        if k - 1 in F:
            for e, v in F[k - 1].items():
                if lo2 <= e <= hi2:
                    c[e] = c.get(e, 0) + v
        if k in F:
            for e, v in mul(F[k], jl, lo2, hi2).items():
                c[e] = c.get(e, 0) - v
        Phi[k] = c
    # express each coefficient series as a polynomial in j
    table = {}
    for i, ser in Phi.items():
        ser = dict(ser)
        for k in range(ell + 1, -1, -1):
            a = ser.get(-k, 0)
            if a:
                table[(i, k)] = a
                for n in range(-k, 1):
                    ser[n] = ser.get(n, 0) - a * jpow_coeff(k, n)
        if any(ser.get(n, 0) for n in range(lo2, hi2 + 1)):
            raise ArithmeticError(f"residual series for X^{i}")
    return table


def write_table(ell, table, outdir):
    for (i, k), c in table.items():
        if table.get((k, i)) != c:
            raise ArithmeticError(f"asymmetric coefficient {(i, k)} for ell={ell}")
    lines = [f"[{i},{k}] {c}" for (i, k), c in sorted(table.items()) if i >= k]
    (outdir / f"phi_j_{ell}.txt").write_text("\n".join(lines) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("levels", type=int, nargs="+")
    ap.add_argument("--out", type=Path, required=True)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for ell in args.levels:
        table = modular_polynomial(ell)
        write_table(ell, table, args.out)
        print(ell, len(table))
    present = sorted(int(p.stem.split("_")[-1]) for p in args.out.glob("phi_j_*.txt"))
    (args.out / "MANIFEST").write_text("\n".join(map(str, present)) + "\n")


if __name__ == "__main__":
    main()
