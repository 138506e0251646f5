import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from qcurves.cli import parse_curve_file  # noqa: E402
from qcurves.nfarith import make_number_field  # noqa: E402

CORPUS = HERE / "fixtures" / "corpus.txt"


def sqrt2_field():
    return make_number_field([-2, 0, 1])


def quartic_field():
    """Q(sqrt2, sqrt13) = Q(a), a = sqrt2 + sqrt13."""
    return make_number_field([121, 0, -30, 0, 1])


def quartic_j():
    K = quartic_field()
    a = K.gen()
    s2 = (a ** 3 - 19 * a) / 22
    s13 = (41 * a - a ** 3) / 22
    return (-30862080 * s13 - 111275008) * s2 - 43645440 * s13 - 157366464


@pytest.fixture(scope="session")
def corpus():
    return {r.label: r for r in parse_curve_file(CORPUS)}


@pytest.fixture(scope="session")
def verdicts(corpus):
    """Default-config verdicts for every corpus curve, computed once."""
    from qcurves.qctest import is_q_curve

    return {label: is_q_curve(rec.curve()) for label, rec in corpus.items()}


@pytest.fixture(scope="session")
def graphs(corpus, verdicts):
    """Class graphs behind the YES fixtures, plus the rational class 14a."""
    from qcurves.isogclass import build_class_graph

    out = {label: v.graph for label, v in verdicts.items() if v.graph is not None}
    out["14a1"] = build_class_graph(corpus["14a1"].curve(), {2, 3})
    return out


# criterion number -> (title, passed); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
