import random
from fractions import Fraction

import pytest

from bruhat_flows import fixtures as fx
from bruhat_flows.exactalg import Poly
from bruhat_flows.cells import CellSpec, build_doubled_system, compute_bracket_table, torus_extension
from bruhat_flows.doublecells import DoubleCellSpec, kz_system
from bruhat_flows.rootdata import cartan_type


@pytest.fixture(scope="session")
def a1():
    return fx.a1_root_data()


@pytest.fixture(scope="session")
def a2():
    return cartan_type("A2")


@pytest.fixture(scope="session")
def g2():
    return cartan_type("G2")


@pytest.fixture(scope="session")
def a2_spec(a2):
    return CellSpec(a2, fx.A2_WORD)


@pytest.fixture(scope="session")
def g2_spec(g2):
    return CellSpec(g2, fx.G2_WORD)


@pytest.fixture(scope="session")
def a2_table(a2_spec):
    return compute_bracket_table(a2_spec, "interp")


@pytest.fixture(scope="session")
def g2_table(g2_spec):
    return compute_bracket_table(g2_spec, "interp")


@pytest.fixture(scope="session")
def a1_tables(a1):
    return {n: compute_bracket_table(CellSpec(a1, (1,) * n), "interp") for n in range(1, 7)}


@pytest.fixture(scope="session")
def a1_doubled(a1, a1_tables):
    ds = build_doubled_system((1, 1), a1)
    return ds, a1_tables[4]


@pytest.fixture(scope="session")
def a2_doubled(a2, a2_table):
    # (u^{-1}, u) for u = (1,2,1) is the fixture word itself
    return build_doubled_system((1, 2, 1), a2), a2_table


@pytest.fixture(scope="session")
def g2_doubled(g2, g2_table):
    return build_doubled_system((2, 1, 2), g2), g2_table


@pytest.fixture(scope="session")
def a2_kz(a2, a2_table):
    kz = kz_system((1, 2, 1), a2)
    return kz, torus_extension(a2_table, a2, with_xi0=True)


@pytest.fixture(scope="session")
def a2_dspec(a2):
    return DoubleCellSpec(a2, (1, 2, 1), (1, 2, 1))


@pytest.fixture
def rng():
    return random.Random(20240607)


def rational(rng, lo=-9, hi=9, den=4):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_homogeneous(spec, variables, rng, terms=3):
    """A T-homogeneous polynomial: monomials sharing one weight."""
    by_weight = {}
    for _ in range(200):
        exps = {v: rng.randint(0, 2) for v in variables}
        w = spec.rd.zero()
        for v, e in exps.items():
            w = w + spec.weights[int(v[1:]) - 1] * e
        by_weight.setdefault(tuple(w), []).append(exps)
    pool = max(by_weight.values(), key=len)
    f = Poly.const(0)
    for exps in pool[:terms]:
        f = f + Poly.monomial(exps, rng.randint(1, 5))
    w = spec.rd.zero()
    for v, e in pool[0].items():
        w = w + spec.weights[int(v[1:]) - 1] * e
    return f, w


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
