"""Reference data for the three worked cells: SL2 with (s, ..., s), SL3 with
(1,2,1,1,2,1) and G2 with (2,1,2,2,1,2).

Everything here is transcribed by hand as text and parsed independently of the
bracket machinery, so it can serve as an oracle.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exactalg import Poly, QuasiPoly, parse_poly
from .exactalg.quasipoly import ONE
from .rootdata import cartan_type

A1_FORM_SCALE = Fraction(1, 2)  # <alpha, alpha> = 1


def a1_root_data():
    return cartan_type("A1", A1_FORM_SCALE)


def a1_pattern(n):
    """{x_i, x_{i+1}} = x_i x_{i+1} - 1 and {x_i, x_j} = (-1)^(j-i+1) x_i x_j otherwise."""
    out = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        p = Poly.var(f"x{i}") * Poly.var(f"x{j}")
        if j == i + 1:
            out[(f"x{i}", f"x{j}")] = p - 1
        else:
            out[(f"x{i}", f"x{j}")] = p * (-1) ** (j - i + 1)
    return out


def euler_continuant(xs):
    """E_k by E_j = x_j E_{j-1} - E_{j-2}, E_0 = 1."""
    prev, cur = Poly.const(0), Poly.const(1)
    for x in xs:
        prev, cur = cur, Poly.var(x) * cur - prev
    return cur


_A2_TEXT = """
x1 x2: -x1*x2
x1 x3: x1*x3 - 2*x2
x1 x4: -x1*x4
x1 x5: x1*x5 - 2*x4
x1 x6: 2*x1*x6 - 2
x2 x3: -x2*x3
x2 x4: x2*x4
x2 x5: 2*x2*x5 - 2*x3*x4 + 2
x2 x6: x2*x6 - 2*x3
x3 x4: 2*x3*x4 - 2
x3 x5: x3*x5
x3 x6: -x3*x6
x4 x5: -x4*x5
x4 x6: x4*x6 - 2*x5
x5 x6: -x5*x6
"""

# lambda_j in the alpha basis; {a, x_j} = -<omega_1, lambda_j> a x_j, same for b with omega_2
A2_LAMBDAS = [(1, 0), (1, 1), (0, 1), (0, -1), (-1, -1), (-1, 0)]

_G2_TEXT = """
x1 x2: -3*x1*x2
x1 x3: -6*x2^3 - 3*x1*x3
x1 x4: 3*x1*x4
x1 x5: -6*x2^2*x4 + 3*x1*x5
x1 x6: -18*x2^2*x5^2 + 6*x1*x6 - 18*x2*x5 + 6*x3*x4 - 6
x2 x3: -3*x2*x3
x2 x4: 3*x2*x4
x2 x5: 2*x2*x5 - 2*x3*x4 + 2
x2 x6: -6*x3*x5^2 + 3*x2*x6
x3 x4: 6*x3*x4 - 6
x3 x5: 3*x3*x5
x3 x6: 3*x3*x6
x4 x5: -3*x4*x5
x4 x6: -6*x5^3 - 3*x4*x6
x5 x6: -3*x5*x6
"""


def _parse_table(text):
    out = {}
    for line in text.strip().splitlines():
        head, body = line.split(":")
        a, b = head.split()
        out[(a, b)] = parse_poly(body)
    return out


def a2_table():
    return _parse_table(_A2_TEXT)


def a2_torus_rows():
    """{xi_k, x_j} with xi_1 = a, xi_2 = b; for A2 with <alpha_i, alpha_i> = 2,
    <omega_k, alpha_l> is the Kronecker delta."""
    out = {}
    for j, lam in enumerate(A2_LAMBDAS, start=1):
        for k in (1, 2):
            c = -lam[k - 1]
            if c:
                out[(f"xi{k}", f"x{j}")] = Poly.monomial({f"xi{k}": 1, f"x{j}": 1}, c)
    return out


def g2_table():
    return _parse_table(_G2_TEXT)


A2_WORD = (1, 2, 1, 1, 2, 1)
G2_WORD = (2, 1, 2, 2, 1, 2)

# y^{omega_1}, y^{omega_2} of the whole word (they cut out the open leaf)
A2_OPEN_LEAF = {
    1: "x1*x3*x4*x6 - x2*x4*x6 - x1*x6 - x1*x3*x5 + x2*x5 + 1",
    2: "x2*x5 - x3*x4 + 1",
}

G2_Y = {
    1: "x3*x4 - 1",
    2: "x2*x5 - x3*x4 + 1",
    3: ("x1*x3*x4*x6 - x2^3*x4*x6 - x1*x6 - x1*x3*x5^3 + x2^3*x5^3 + 3*x2^2*x5^2"
        " - 3*x2*x3*x4*x5 + 3*x2*x5 + x3^2*x4^2 - 2*x3*x4 + 1"),
}

A1_Y = {1: "x2*x3 - 1", 2: "x1*x2*x3*x4 - x1*x2 - x1*x4 - x3*x4 + 1"}

# KZ chain on SL3, u = v = (1,2,1); xi1 = a, xi2 = b
A2_KZ_CHAIN = [
    "xi2",
    "xi2*x4",
    "xi1",
    "xi1*x5",
    "xi1*xi2^-1*(x3*x4 - 1)",
    "xi1*xi2^-1*(x3*x4*x6 - x6 - x3*x5)",
]

# Flows.  Each coordinate is {exponent k: coefficient} meaning sum coeff * e^{k y c}
# (symbolic branch, y the Hamiltonian value written y0) or a polynomial in c
# (the y = 0 branch, written under key 0).  Unlisted coordinates are constant.

A1_FLOWS = {
    ("gamma1", "nonzero"): {
        "x1": {0: "x1 - x3/y0", 1: "x3/y0"},
        "x2": {-1: "x2"},
        "x3": {1: "x3"},
        "x4": {0: "x4 - x2/y0", -1: "x2/y0"},
    },
    ("gamma1", "zero"): {
        "x1": {0: "x1 + c*x3"},
        "x4": {0: "x4 - c*x2"},
    },
    ("gamma2", "nonzero"): {
        "x1": {-1: "x1"}, "x2": {1: "x2"}, "x3": {-1: "x3"}, "x4": {1: "x4"},
    },
}

A2_FLOWS = {
    ("phi1", "nonzero"): {
        "x2": {-1: "x2"}, "x3": {-1: "x3"}, "x4": {1: "x4"}, "x5": {1: "x5"},
    },
    ("phi3", "nonzero"): {
        "x1": {-1: "x1"}, "x2": {-1: "x2"}, "x5": {1: "x5"}, "x6": {1: "x6"},
    },
    ("phi5", "nonzero"): {
        "x1": {-1: "x1 - xi1*xi2^-1*x2*x4/y0", 1: "xi1*xi2^-1*x2*x4/y0"},
        "x3": {-1: "x3"},
        "x4": {1: "x4"},
        "x6": {1: "x6 - xi1*xi2^-1*x3*x5/y0", -1: "xi1*xi2^-1*x3*x5/y0"},
    },
    ("phi5", "zero"): {
        "x1": {0: "x1 + 2*xi1*xi2^-1*x2*x4*c"},
        "x6": {0: "x6 - 2*xi1*xi2^-1*x3*x5*c"},
    },
}

G2_FLOWS = {
    ("phi1", "nonzero"): {
        "x1": {0: "x1 - x2^3*x4/y0", 6: "x2^3*x4/y0"},
        "x3": {-6: "x3"},
        "x4": {6: "x4"},
        "x6": {0: "x6 - x3*x5^3/y0", -6: "x3*x5^3/y0"},
    },
    ("phi1", "zero"): {
        "x1": {0: "x1 + 6*x2^3*x4*c"},
        "x6": {0: "x6 - 6*x3*x5^3*c"},
    },
    ("phi2", "nonzero"): {
        "x2": {-2: "x2"}, "x3": {-6: "x3"}, "x4": {6: "x4"}, "x5": {2: "x5"},
    },
    ("phi3", "nonzero"): {
        "x1": {-6: "x1"}, "x2": {-6: "x2"}, "x3": {-12: "x3"},
        "x4": {12: "x4"}, "x5": {6: "x5"}, "x6": {6: "x6"},
    },
}


def expected_curve(spec, variables, branch):
    """QuasiPoly per coordinate for a flow fixture."""
    rate = Poly.var("y0") if branch == "nonzero" else ONE
    out = {}
    for v in variables:
        terms = spec.get(v, {0: v})
        out[v] = QuasiPoly({Fraction(k): parse_poly(t) for k, t in terms.items()}, rate)
    return out


# FZ embedding of g = (a_ij) in G^{w0,w0} for SL3: (a, b, x1..x6) as minor ratios.
# Entries are (numerator, denominator), each a 1x1 or 2x2 minor given by (rows, cols), 1-based.
A2_FZ_FORMULAS = [
    ((), ((1, 2), (2, 3))),
    ((), ((1,), (3,))),
    (((1, 3), (2, 3)), ((1, 2), (2, 3))),
    (((3,), (3,)), ((1,), (3,))),
    (((2,), (3,)), ((1,), (3,))),
    (((1, 3), (1, 2)), ((2, 3), (1, 2))),
    (((1, 2), (1, 2)), ((2, 3), (1, 2))),
    (((2,), (1,)), ((3,), (1,))),
]


def _minor(g, rows, cols):
    if len(rows) == 1:
        return Fraction(g[rows[0] - 1][cols[0] - 1])
    (r1, r2), (c1, c2) = rows, cols
    return (Fraction(g[r1 - 1][c1 - 1]) * g[r2 - 1][c2 - 1]
            - Fraction(g[r1 - 1][c2 - 1]) * g[r2 - 1][c1 - 1])


def a2_fz_expected(g):
    out = []
    for num, den in A2_FZ_FORMULAS:
        n = _minor(g, *num) if num else Fraction(1)
        out.append(n / _minor(g, *den))
    return out


def in_a2_double_cell(g):
    return bool(_minor(g, (1,), (3,)) * _minor(g, (3,), (1,))
                * _minor(g, (1, 2), (2, 3)) * _minor(g, (2, 3), (1, 2)))
