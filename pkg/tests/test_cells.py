import random
from fractions import Fraction

import pytest

from bruhat_flows import fixtures as fx
from bruhat_flows.cells import (
    CellSpec,
    bs_point_eval,
    check_log_canonical_pair,
    chart_transition,
    compute_bracket_table,
    dressed_interval,
    extract_bs_coords,
    jacobian_rank,
    on_open_leaf,
    random_open_leaf_point,
    tau_chart,
    tau_eval,
    torus_extension,
    torus_monomial,
    y_full,
    y_interval,
)
from bruhat_flows.exactalg import Poly, log_canonical_coefficient, parse_poly, poisson_bracket
from bruhat_flows.repkit import NotInBigCell, identity
from bruhat_flows.rootdata import Weight, pairing, weyl_act

from conftest import random_homogeneous, rational


def test_bs_point_eval_examples(a1):
    assert bs_point_eval(CellSpec(a1, ()), []) == [identity(2)]
    spec = CellSpec(a1, (1, 1))
    x1, x2 = spec.xvar(1), spec.xvar(2)
    assert spec.product(1, 2) == [[x1 * x2 - 1, -x1], [x2, Poly.const(-1)]]
    with pytest.raises(ValueError):
        bs_point_eval(spec, [1])


def test_top_left_entry_is_euler_continuant(a1):
    spec = CellSpec(a1, (1,) * 6)
    xs = spec.variables
    for k in range(1, 7):
        assert spec.product(1, k)[0][0] == fx.euler_continuant(xs[:k])


def test_extract_single_letter(a2):
    spec = CellSpec(a2, (1,))
    xs, b = extract_bs_coords([spec.rep.p(1, Fraction(5))], spec)
    assert xs == [5] and b == identity(3)
    xs, _ = extract_bs_coords([spec.rep.u(1, Fraction(-2, 7), -1)], spec)
    assert xs == [Fraction(-7, 2)]


def test_extract_round_trip(g2_spec, rng):
    x = [rational(rng) for _ in range(g2_spec.n)]
    flags = [g2_spec.rep.p(a, c) for a, c in zip(g2_spec.word, x)]
    xs, b = extract_bs_coords(flags, g2_spec)
    assert xs == x and b == identity(7)


def test_chart_transition_is_reciprocal_on_one_letter(a1):
    (x,) = chart_transition(CellSpec(a1, (1,)))
    assert x == Poly.var("eps1", -1)


def test_y_interval_examples(a1, a2_spec):
    spec = CellSpec(a1, (1,) * 5)
    assert y_interval(spec, [1], 3, 2).poly == 1
    xs = spec.variables
    for i in range(1, 6):
        for j in range(i, 6):
            assert y_interval(spec, [1], i, j).poly == fx.euler_continuant(xs[i - 1:j])
    assert y_interval(a2_spec, [0, 1], 2, 5).poly == parse_poly("x2*x5 - x3*x4 + 1")
    with pytest.raises(ValueError):
        y_interval(spec, [-1], 1, 2)
    with pytest.raises(ValueError):
        y_interval(spec, [1], 3, 1)


def test_a2_open_leaf_minors(a2, a2_spec):
    for k, text in fx.A2_OPEN_LEAF.items():
        assert y_full(a2_spec, a2.omega(k)).poly == parse_poly(text)


def test_minor_of_absent_letter_is_one(a2):
    spec = CellSpec(a2, (1, 1, 1))
    assert y_full(spec, a2.omega(2)).poly == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_chart_equals_interp_a1(a1, a1_tables, n):
    chart = compute_bracket_table(CellSpec(a1, (1,) * n), "chart")
    assert chart.entries == a1_tables[n].entries
    want = fx.a1_pattern(n)
    assert all(a1_tables[n].get(*k) == p for k, p in want.items())


def test_chart_equals_interp_a2(a2_spec, a2_table):
    assert compute_bracket_table(a2_spec, "chart").entries == a2_table.entries
    assert all(a2_table.get(*k) == p for k, p in fx.a2_table().items())


def test_chart_equals_interp_g2(g2_spec, g2_table):
    assert compute_bracket_table(g2_spec, "chart").entries == g2_table.entries
    assert all(g2_table.get(*k) == p for k, p in fx.g2_table().items())


def test_unknown_method(a1):
    with pytest.raises(ValueError):
        compute_bracket_table(CellSpec(a1, (1,)), "guess")


@pytest.mark.parametrize("name", ["a2_table", "g2_table"])
def test_tables_are_homogeneous_and_jacobi(name, request):
    from bruhat_flows.exactalg import jacobi_check

    bt = request.getfixturevalue(name)
    assert bt.homogeneity_violations() == []
    assert jacobi_check(bt)[0]


@pytest.mark.parametrize("name", ["a2", "g2"])
def test_first_and_last_coordinate_structure(name, request):
    spec = request.getfixturevalue(f"{name}_spec")
    bt = request.getfixturevalue(f"{name}_table")
    rng = random.Random(5)
    n = spec.n
    for _ in range(4):
        f, lam_f = random_homogeneous(spec, spec.variables[1:], rng)
        x1 = spec.xvar(1)
        rest = poisson_bracket(x1, f, bt) + pairing(lam_f, spec.rd.alpha(spec.word[0]), spec.rd) * x1 * f
        assert "x1" not in rest.variables()
        g, lam_g = random_homogeneous(spec, spec.variables[:-1], rng)
        xn = spec.xvar(n)
        last = weyl_act(spec.word[:-1], spec.rd.alpha(spec.word[-1]), spec.rd)
        rest = poisson_bracket(xn, g, bt) - pairing(lam_g, last, spec.rd) * xn * g
        assert f"x{n}" not in rest.variables()


@pytest.mark.parametrize("name", ["a2", "g2"])
def test_full_minor_brackets_with_homogeneous_functions(name, request):
    spec = request.getfixturevalue(f"{name}_spec")
    bt = request.getfixturevalue(f"{name}_table")
    rd = spec.rd
    rng = random.Random(6)
    for _ in range(3):
        lam = Weight([rng.randint(0, 2), rng.randint(0, 2)])
        if not any(lam):
            continue
        y = y_full(spec, lam).poly
        f, lam_f = random_homogeneous(spec, spec.variables, rng)
        coef = -pairing(lam + weyl_act(spec.word, lam, rd), lam_f, rd)
        assert poisson_bracket(y, f, bt) == coef * y * f


def test_full_minor_pairs(a2_spec, a2_table, g2_spec, g2_table):
    for spec, bt in ((a2_spec, a2_table), (g2_spec, g2_table)):
        rd = spec.rd
        lams = [Weight([1, 0]), Weight([0, 1]), Weight([1, 1]), Weight([2, 1])]
        for lam in lams:
            for mu in lams:
                want = pairing(lam, weyl_act(spec.word, mu, rd), rd) - pairing(mu, weyl_act(spec.word, lam, rd), rd)
                got = log_canonical_coefficient(y_full(spec, lam).poly, y_full(spec, mu).poly, bt)
                assert got == want


def test_tau_examples(a1, g2_spec, rng):
    spec = CellSpec(a1, (1,))
    assert tau_eval(spec, [Fraction(3)]) == [3]
    with pytest.raises(NotInBigCell):
        tau_eval(spec, [Fraction(0)])
    for _ in range(5):
        x = random_open_leaf_point(g2_spec, rng)
        t = tau_eval(g2_spec, x)
        vals = dict(zip(g2_spec.variables, x))
        for lam in ([1, 0], [0, 1], [2, 3]):
            want = t[0] ** lam[0] * t[1] ** lam[1]
            assert y_full(g2_spec, lam).poly.evaluate(vals) == want


@pytest.mark.parametrize("name", ["a2", "g2"])
def test_tau_on_chart_points(name, request, rng):
    spec = request.getfixturevalue(f"{name}_spec")
    X = chart_transition(spec)
    for _ in range(3):
        eps = [rational(rng, 1, 9) for _ in range(spec.n)]
        env = {f"eps{k}": e for k, e in enumerate(eps, start=1)}
        x = [p.evaluate(env) for p in X]
        assert tau_eval(spec, x) == tau_chart(spec, eps)


def test_torus_extension_a2(a2, a2_table):
    ext = torus_extension(a2_table, a2)
    assert ext.get("xi1", "xi2") == 0
    for (k, x), p in fx.a2_torus_rows().items():
        assert ext.get(k, x) == p
    from bruhat_flows.exactalg import jacobi_check

    assert jacobi_check(ext)[0]


def test_torus_dressing_of_full_minor(a2, a2_spec, a2_table):
    ext = torus_extension(a2_table, a2, with_xi0=True)
    for lam in ([1, 0], [0, 1], [1, 1]):
        lam = Weight(lam)
        t = torus_monomial(lam)
        y = y_full(a2_spec, lam).poly
        want = -pairing(lam, lam - weyl_act(a2_spec.word, lam, a2), a2)
        assert log_canonical_coefficient(t, y, ext) == want


def test_doubled_hamiltonians(a1_doubled, g2_doubled):
    ds, _ = a1_doubled
    assert [y.poly for y in ds.hamiltonians] == [parse_poly(fx.A1_Y[k]) for k in (1, 2)]
    ds, _ = g2_doubled
    assert [y.poly for y in ds.hamiltonians] == [parse_poly(fx.G2_Y[k]) for k in (1, 2, 3)]
    from bruhat_flows.cells import build_doubled_system

    one = build_doubled_system((1,), fx.a1_root_data())
    assert one.hamiltonians[0].poly == parse_poly("x1*x2 - 1")
    with pytest.raises(ValueError):
        build_doubled_system((1, 1), fx.a1_root_data(), require_reduced=True)


@pytest.mark.parametrize("name", ["a1_doubled", "a2_doubled", "g2_doubled"])
def test_doubled_hamiltonians_commute_and_are_independent(name, request):
    ds, bt = request.getfixturevalue(name)
    ys = [y.poly for y in ds.hamiltonians]
    for i in range(len(ys)):
        for j in range(i + 1, len(ys)):
            assert poisson_bracket(ys[i], ys[j], bt) == 0
    rng = random.Random(7)
    x = random_open_leaf_point(ds.spec, rng)
    assert jacobian_rank(ys, ds.spec.variables, x) == len(ys)


def test_log_canonical_pair_checks(a1, a2_spec, a2_table):
    spec = CellSpec(a1, (1, 1))
    bt = compute_bracket_table(spec)
    y = y_interval(spec, [1], 1, 2)
    x1 = y_interval(spec, [1], 1, 1)
    r = check_log_canonical_pair(y, y, bt, spec)
    assert r["is_log_canonical"] and r["coefficient"] == 0
    assert log_canonical_coefficient(y.poly, spec.xvar(1), bt) == -1
    r = check_log_canonical_pair(x1, y, bt, spec)
    assert r["matches"] and r["is_log_canonical"]
    rd = a2_spec.rd
    for lam in (rd.omega(1), rd.omega(2)):
        for i, j, i2, j2 in ((2, 4, 1, 6), (3, 3, 2, 5), (2, 5, 1, 5)):
            for mu in (rd.omega(1), rd.omega(2)):
                f = y_interval(a2_spec, lam, i, j)
                g = y_interval(a2_spec, mu, i2, j2)
                r = check_log_canonical_pair(f, g, a2_table, a2_spec)
                assert r["is_log_canonical"] and r["matches"], (lam, mu, i, j, i2, j2)


def test_dressed_nested_pairs(a2, a2_spec, a2_table):
    ext = torus_extension(a2_table, a2, with_xi0=True)
    rd = a2
    for lam in (rd.omega(1), rd.omega(2)):
        for mu in (rd.omega(1), rd.omega(2)):
            for i, j, i2, j2 in ((3, 4, 2, 5), (2, 5, 1, 6), (4, 4, 1, 6)):
                f = dressed_interval(a2_spec, lam, i, j)
                g = dressed_interval(a2_spec, mu, i2, j2)
                r = check_log_canonical_pair(f, g, ext, a2_spec, dressed=True)
                assert r["is_log_canonical"] and r["matches"]


def test_open_leaf_membership(a1):
    spec = CellSpec(a1, (1, 1))
    assert not on_open_leaf(spec, [Fraction(1), Fraction(1)])
    assert on_open_leaf(spec, [Fraction(2), Fraction(1)])
