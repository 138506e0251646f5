"""Command line front end and the plain-text curve corpus format.

Corpus lines read ``label | g | a1 | a2 | a3 | a4 | a6`` where ``g`` lists
the integer coefficients of the defining polynomial (constant term first,
comma separated) and each a_i lists its rational coordinates in the power
basis, separated by semicolons.  Blank lines and lines starting with ``#``
are ignored; an empty label is allowed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .ellnf import EllipticCurveNF
from .exceptions import NetworkDisabled, NotFound, ParseError, QCurveError
from .nfarith import make_number_field
from .qctest import QCurveConfig, is_q_curve

LMFDB_API = "https://www.lmfdb.org/api"
_LABEL = re.compile(r"^\d+\.\d+\.\d+\.\d+-[0-9.]+-[a-z]+\d+$|^\d+\.[a-z]+\d+$")


@dataclass(frozen=True)
class CurveRecord:
    label: str | None
    field_poly: tuple
    ainvs: tuple

    def __post_init__(self):
        n = len(self.field_poly) - 1
        if len(self.ainvs) != 5:
            raise ValueError("expected five a-invariants")
        for i, a in enumerate(self.ainvs):
            if len(a) != n:
                raise ValueError(f"a-invariant {i + 1} has {len(a)} coordinates, field degree is {n}")

    def curve(self) -> EllipticCurveNF:
        K = make_number_field(list(self.field_poly))
        return EllipticCurveNF(K, [list(a) for a in self.ainvs])

    def to_line(self) -> str:
        parts = [self.label or "", ",".join(str(c) for c in self.field_poly)]
        parts += [";".join(str(c) for c in a) for a in self.ainvs]
        return " | ".join(parts)


def parse_curve_line(line: str, lineno: int | None = None) -> CurveRecord:
    fields = [t.strip() for t in line.split("|")]
    if len(fields) != 7:
        raise ParseError(f"expected 7 '|'-separated fields, found {len(fields)}", lineno)
    label = fields[0] or None
    try:
        g = tuple(int(t) for t in fields[1].split(","))
    except ValueError:
        raise ParseError(f"bad field polynomial {fields[1]!r}", lineno) from None
    try:
        ainvs = tuple(tuple(Fraction(c.strip()) for c in f.split(";")) for f in fields[2:])
    except (ValueError, ZeroDivisionError):
        raise ParseError("bad rational coordinate", lineno) from None
    try:
        return CurveRecord(label, g, ainvs)
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def parse_curve_text(text: str):
    records = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        records.append(parse_curve_line(line, lineno))
    return records


def parse_curve_file(path):
    return parse_curve_text(Path(path).read_text())


def write_curve_file(path, records):
    Path(path).write_text("".join(r.to_line() + "\n" for r in records))


# ---------------------------------------------------------------------------
# LMFDB

def _fetch_json(url):
    with urllib.request.urlopen(url, timeout=30) as resp:
        return json.loads(resp.read().decode())


def _lmfdb_record(label):
    if "." in label and "-" in label:
        q = urllib.parse.urlencode({"label": label, "_format": "json"})
        data = _fetch_json(f"{LMFDB_API}/ec_nfcurves/?{q}").get("data", [])
        if not data:
            raise NotFound(label)
        rec = data[0]
        field_label = rec["field_label"]
        q = urllib.parse.urlencode({"label": field_label, "_format": "json"})
        fdata = _fetch_json(f"{LMFDB_API}/nf_fields/?{q}").get("data", [])
        if not fdata:
            raise NotFound(field_label)
        g = tuple(int(c) for c in fdata[0]["coeffs"])
        ainvs = rec["ainvs"]
        if isinstance(ainvs, str):
            ainvs = [a.split(",") for a in ainvs.split(";")]
        coords = tuple(tuple(Fraction(str(c)) for c in a) for a in ainvs)
        return CurveRecord(label, g, coords)
    q = urllib.parse.urlencode({"lmfdb_label": label, "_format": "json"})
    data = _fetch_json(f"{LMFDB_API}/ec_curvedata/?{q}").get("data", [])
    if not data:
        raise NotFound(label)
    ainvs = tuple((Fraction(int(a)),) for a in data[0]["ainvs"])
    return CurveRecord(label, (0, 1), ainvs)


def fetch_lmfdb_curve(label: str, cache_dir, online: bool = False) -> CurveRecord:
    """Curve record for an LMFDB label, served from ``cache_dir`` when possible.

    Network access only happens with ``online=True``; fetched records are
    written to ``<cache_dir>/<label>.curve``.
    """
    if not _LABEL.match(label):
        raise NotFound(f"not an elliptic curve label: {label!r}")
    cache = Path(cache_dir)
    path = cache / f"{label}.curve"
    if path.exists():
        records = parse_curve_file(path)
        if records:
            return records[0]
    if not online:
        raise NetworkDisabled(f"{label} is not cached and networking is off")
    try:
        rec = _lmfdb_record(label)
    except urllib.error.HTTPError as exc:
        if exc.code == 404:
            raise NotFound(label) from None
        raise
    cache.mkdir(parents=True, exist_ok=True)
    write_curve_file(path, [rec])
    return rec


# ---------------------------------------------------------------------------
# command line

def _coords(text):
    return [Fraction(c.strip()) for c in text.split(";")]


def build_parser():
    ap = argparse.ArgumentParser(prog="qcurves", description="Test whether elliptic curves over number fields are Q-curves.")
    src = ap.add_argument_group("input")
    src.add_argument("--field", help="defining polynomial, integer coefficients constant term first, e.g. --field=-2,0,1")
    src.add_argument("--ainvs", nargs="+", metavar="A", help="2 or 5 a-invariants, coordinates separated by ';' (one quoted, space-separated argument also works)")
    src.add_argument("--j", help="a j-invariant instead of a curve (coordinates separated by ';')")
    src.add_argument("--input", help="corpus file with one curve per line")
    src.add_argument("--label", action="append", default=[], help="LMFDB label (repeatable)")
    src.add_argument("--cache-dir", default=".lmfdb-cache", help="cache directory for LMFDB records")
    src.add_argument("--online", action="store_true", help="allow network access for LMFDB labels")
    ap.add_argument("--b1", type=int, default=1000)
    ap.add_argument("--b2", type=int, default=1000)
    ap.add_argument("--norm-bound", type=int, default=500000)
    ap.add_argument("--max-rounds", type=int, default=3)
    ap.add_argument("--max-vertices", type=int, default=128)
    ap.add_argument("--modpoly-dir")
    ap.add_argument("--cm-data")
    ap.add_argument("--json", action="store_true", help="one JSON object per line")
    return ap


def _jobs(args):
    """Yield (label, curve or j) in input order."""
    if args.input:
        for rec in parse_curve_file(args.input):
            yield rec.label, rec.curve()
    for label in args.label:
        yield label, fetch_lmfdb_curve(label, args.cache_dir, args.online).curve()
    if args.field:
        K = make_number_field([int(t) for t in args.field.split(",")])
        if args.j:
            yield None, K.element(_coords(args.j))
        if args.ainvs:
            vectors = [t for a in args.ainvs for t in a.split()]
            yield None, EllipticCurveNF(K, [_coords(a) for a in vectors])


def _summary(label, v):
    head = f"{label}: " if label else ""
    text = f"{head}{v.answer} ({v.reason.kind}"
    if v.reason.p is not None:
        text += f" at p={v.reason.p}, {v.reason.clause}"
    text += ")"
    c = v.certificate
    if c is not None and c.kind == "NonCM":
        text += f" r={c.r} rho={c.rho} N={c.level} H={[str(x) for x in c.H]}"
    elif c is not None:
        text += f" D={c.cm_disc}"
    return text


def run_cli(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # usage errors already went to stderr; report them as a status
        return exc.code if isinstance(exc.code, int) else 2
    if not (args.input or args.label or args.field):
        ap.print_usage(sys.stderr)
        print("qcurves: error: give --input, --label, or --field with --ainvs/--j", file=sys.stderr)
        return 2
    if args.field and not (args.ainvs or args.j):
        print("qcurves: error: --field needs --ainvs or --j", file=sys.stderr)
        return 2
    config = QCurveConfig(
        b1=args.b1, b2=args.b2, norm_bound=args.norm_bound, max_rounds=args.max_rounds,
        max_vertices=args.max_vertices, modpoly_dir=args.modpoly_dir, cm_data=args.cm_data,
    )
    try:
        jobs = list(_jobs(args))
    except (QCurveError, ValueError, OSError, ArithmeticError) as exc:
        print(f"qcurves: input error: {exc}", file=sys.stderr)
        return 2
    for label, target in jobs:
        v = is_q_curve(target, config)
        if args.json:
            out = {"label": label} if label else {}
            out.update(v.to_json())
            print(json.dumps(out), flush=True)
        else:
            print(_summary(label, v), flush=True)
    return 0


def main():
    sys.exit(run_cli())
