"""Root data, weights, the invariant form, and Weyl group words.

Conventions: ``cartan[i][j] = <alpha_j, alpha_i^vee>``; weights are tuples in
the fundamental-weight basis; Cartan vectors are tuples in the coroot basis;
word letters are 1-based simple-root indices.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .exactalg.linalg import inverse, rank, span_basis


class Weight(tuple):
    """Vector in the fundamental-weight basis."""

    def __new__(cls, coeffs):
        return super().__new__(cls, (Fraction(c) for c in coeffs))

    def __add__(self, other):
        return Weight(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return Weight(a - b for a, b in zip(self, other))

    def __neg__(self):
        return Weight(-a for a in self)

    def __mul__(self, k):
        return Weight(a * k for a in self)

    __rmul__ = __mul__

    def is_dominant(self):
        return all(c >= 0 for c in self)

    def is_zero(self):
        return not any(self)

    def __repr__(self):
        return "Weight(" + ", ".join(_q(c) for c in self) + ")"


def _q(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class RootData:
    def __init__(self, type_label, cartan, symmetrizer, form_scale=1):
        self.type_label = type_label
        self.cartan = tuple(tuple(int(v) for v in row) for row in cartan)
        self.symmetrizer = tuple(Fraction(d) for d in symmetrizer)
        self.form_scale = Fraction(form_scale)
        r = len(self.cartan)
        self.rank = r
        if any(len(row) != r for row in self.cartan) or len(self.symmetrizer) != r:
            raise ValueError("cartan/symmetrizer shape mismatch")
        for i in range(r):
            if self.cartan[i][i] != 2:
                raise ValueError("cartan diagonal must be 2")
            for j in range(r):
                if i != j and self.cartan[i][j] > 0:
                    raise ValueError("off-diagonal cartan entries must be <= 0")
                if self.symmetrizer[i] * self.cartan[i][j] != self.symmetrizer[j] * self.cartan[j][i]:
                    raise ValueError("symmetrizer does not symmetrize the cartan matrix")
        # <alpha_i, alpha_j>
        self.gram = tuple(
            tuple(self.form_scale * self.symmetrizer[i] * self.cartan[i][j] for j in range(r)) for i in range(r)
        )
        if any(self.gram[i][i] <= 0 for i in range(r)):
            raise ValueError("form must be positive on simple roots")
        # omega-coordinates of alpha_i: <alpha_i, alpha_j^vee> = cartan[j][i]
        self._alpha = tuple(Weight(self.cartan[j][i] for j in range(r)) for i in range(r))
        # lambda_omega = C . lambda_alpha with C[j][i] = cartan[j][i]
        self._to_alpha = inverse([list(row) for row in self.cartan])
        self._roots = None

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {
            "type": self.type_label,
            "cartan": [list(r) for r in self.cartan],
            "symmetrizer": [_q(d) for d in self.symmetrizer],
            "form_scale": _q(self.form_scale),
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["type"], data["cartan"], [Fraction(d) for d in data["symmetrizer"]], Fraction(data["form_scale"]))

    def __eq__(self, other):
        return isinstance(other, RootData) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(json.dumps(self.to_json(), sort_keys=True))

    def __repr__(self):
        return f"RootData({self.type_label}, scale={_q(self.form_scale)})"

    def with_scale(self, scale):
        return RootData(self.type_label, self.cartan, self.symmetrizer, scale)

    # -- weights -------------------------------------------------------------

    def zero(self):
        return Weight([0] * self.rank)

    def omega(self, i):
        return Weight(int(k == i - 1) for k in range(self.rank))

    def alpha(self, i):
        return self._alpha[i - 1]

    def rho(self):
        return Weight([1] * self.rank)

    def to_alpha_basis(self, lam):
        return tuple(sum(self._to_alpha[i][j] * lam[j] for j in range(self.rank)) for i in range(self.rank))

    def from_alpha_basis(self, coeffs):
        out = self.zero()
        for i, c in enumerate(coeffs):
            if c:
                out = out + self._alpha[i] * c
        return out

    def coroot_pairing(self, lam, i):
        """<lambda, alpha_i^vee>"""
        return lam[i - 1]

    def sharp(self, lam):
        """lambda^# in the coroot basis: alpha^# = (<alpha,alpha>/2) h_alpha."""
        c = self.to_alpha_basis(lam)
        return tuple(c[i] * self.gram[i][i] / 2 for i in range(self.rank))

    def tpair(self, lam, h):
        """lambda(h) for a Cartan vector h in the coroot basis."""
        return sum(Fraction(a) * b for a, b in zip(lam, h))

    def t_form(self, h1, h2):
        """Invariant form on t in the coroot basis."""
        r = self.rank
        tot = Fraction(0)
        for i in range(r):
            if not h1[i]:
                continue
            for j in range(r):
                if h2[j]:
                    g = 4 * self.gram[i][j] / (self.gram[i][i] * self.gram[j][j])
                    tot += h1[i] * h2[j] * g
        return tot

    def positive_roots(self):
        """Positive roots by height, as (alpha-coefficients, Weight)."""
        if self._roots is None:
            r = self.rank
            simple = [tuple(int(k == i) for k in range(r)) for i in range(r)]
            roots = list(simple)
            seen = set(roots)
            frontier = list(simple)
            while frontier:
                nxt = []
                for beta in frontier:
                    bw = self.from_alpha_basis(beta)
                    for i in range(r):
                        # length p of the string below beta
                        p = 0
                        down = list(beta)
                        while True:
                            down[i] -= 1
                            if tuple(down) in seen:
                                p += 1
                            else:
                                break
                        q = p - bw[i]
                        if q > 0:
                            up = list(beta)
                            up[i] += 1
                            up = tuple(up)
                            if up not in seen:
                                seen.add(up)
                                roots.append(up)
                                nxt.append(up)
                frontier = nxt
            roots.sort(key=lambda b: (sum(b), tuple(-c for c in b)))
            self._roots = [(b, self.from_alpha_basis(b)) for b in roots]
        return self._roots


def pairing(lam, mu, rd):
    """<lambda, mu> under the scaled invariant form."""
    a = rd.to_alpha_basis(lam)
    b = rd.to_alpha_basis(mu)
    tot = Fraction(0)
    for i in range(rd.rank):
        if a[i]:
            for j in range(rd.rank):
                if b[j]:
                    tot += a[i] * b[j] * rd.gram[i][j]
    return tot


def check_letters(word, rd):
    for a in word:
        if not (isinstance(a, int) and 1 <= a <= rd.rank):
            raise ValueError(f"letter {a!r} out of range 1..{rd.rank}")
    return tuple(word)


def reflect(i, lam, rd):
    k = lam[i - 1]
    return lam - rd.alpha(i) * k if k else Weight(lam)


def weyl_act(word, lam, rd):
    """Left action of the product s_{w1} s_{w2} ... on a weight."""
    check_letters(word, rd)
    lam = Weight(lam)
    for a in reversed(word):
        lam = reflect(a, lam, rd)
    return lam


def reduce_word(word, rd):
    """A reduced word for the product (leftmost-descent reduction)."""
    mu = weyl_act(word, rd.rho(), rd)
    out = []
    while True:
        i = next((k for k in range(rd.rank) if mu[k] < 0), None)
        if i is None:
            return tuple(out)
        out.append(i + 1)
        mu = reflect(i + 1, mu, rd)


def word_length(word, rd):
    return len(reduce_word(word, rd))


def same_element(w1, w2, rd):
    return weyl_act(w1, rd.rho(), rd) == weyl_act(w2, rd.rho(), rd)


def is_reduced(word, rd):
    return word_length(word, rd) == len(word)


def inverse_word(word):
    return tuple(reversed(word))


def subword(word, k, l):
    """Letters k..l (1-based, inclusive) of the word; s_{[k,l]}."""
    return tuple(word[k - 1:l])


def word_ops(word, rd):
    check_letters(word, rd)
    red = reduce_word(word, rd)
    return {"length": len(red), "reduced": red, "inverse": inverse_word(word)}


def longest_word(rd):
    """A reduced word of w_0: keep prepending descents until -rho."""
    mu = rd.rho()
    out = []
    while True:
        i = next((k for k in range(rd.rank) if mu[k] > 0), None)
        if i is None:
            return tuple(reversed(out))
        out.append(i + 1)
        mu = reflect(i + 1, mu, rd)


def coord_weights(word, rd):
    """T-weight of x_j: s_1 ... s_{j-1}(alpha_j)."""
    check_letters(word, rd)
    return [weyl_act(word[:j], rd.alpha(a), rd) for j, a in enumerate(word)]


# -- Cartan subalgebra ---------------------------------------------------------


def reflect_t(i, h, rd):
    """s_i(h) = h - alpha_i(h) h_i in the coroot basis."""
    ai = sum(Fraction(h[j]) * rd.cartan[j][i - 1] for j in range(rd.rank))
    out = [Fraction(v) for v in h]
    out[i - 1] -= ai
    return tuple(out)


def weyl_act_t(word, h, rd):
    for a in reversed(word):
        h = reflect_t(a, h, rd)
    return tuple(h)


def weyl_matrix_t(word, rd):
    """Columns are w(h_k)."""
    r = rd.rank
    cols = [weyl_act_t(word, tuple(Fraction(int(i == k)) for i in range(r)), rd) for k in range(r)]
    return [[cols[k][i] for k in range(r)] for i in range(r)]


def leaf_dimension(word, rd):
    check_letters(word, rd)
    w = weyl_matrix_t(word, rd)
    r = rd.rank
    one_minus = [[Fraction(int(i == j)) - w[i][j] for j in range(r)] for i in range(r)]
    k = rank(one_minus)
    return {"leaf_stabilizer_dim": k, "symplectic_leaf_dim": len(word) + k}


def lagrangian_data(word, rd):
    check_letters(word, rd)
    r = rd.rank
    basis = []
    for k in range(r):
        z = tuple(Fraction(int(i == k)) for i in range(r))
        wz = weyl_act_t(word, z, rd)
        basis.append((tuple(a + b for a, b in zip(z, wz)), tuple(b - a for a, b in zip(z, wz))))
    flip = [(b, a) for a, b in basis]
    p1 = span_basis([list(a) for a, _ in basis])
    p2 = span_basis([list(b) for _, b in basis])
    return {
        "basis": basis,
        "flip": flip,
        "p1": [tuple(v) for v in p1],
        "p2": [tuple(v) for v in p2],
        "dim": rank([list(a) + list(b) for a, b in basis]),
    }


def double_form(v, w, rd):
    """<(z1,z2),(z1',z2')> = <z1,z2'> + <z1',z2> on t + t."""
    return rd.t_form(v[0], w[1]) + rd.t_form(w[0], v[1])


# -- bundled Cartan types ------------------------------------------------------


def _chain(n):
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def cartan_type(label, form_scale=None):
    """RootData for a simple type label such as 'A2', 'G2', 'B3'."""
    kind, n = label[0].upper(), int(label[1:])
    if kind == "A" and n >= 1:
        a, d = _chain(n), [1] * n
    elif kind == "B" and n >= 2:
        a = _chain(n)
        a[n - 2][n - 1], a[n - 1][n - 2] = -1, -2
        d = [2] * (n - 1) + [1]
    elif kind == "C" and n >= 2:
        a = _chain(n)
        a[n - 2][n - 1], a[n - 1][n - 2] = -2, -1
        d = [1] * (n - 1) + [2]
    elif kind == "D" and n >= 3:
        a = _chain(n)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        d = [1] * n
    elif kind == "E" and n in (6, 7, 8):
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
        edges = [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)] + [(6, 7)] * (n >= 7) + [(7, 8)] * (n >= 8)
        for i, j in edges:
            a[i - 1][j - 1] = a[j - 1][i - 1] = -1
        d = [1] * n
    elif kind == "F" and n == 4:
        a = _chain(4)
        a[1][2], a[2][1] = -1, -2
        d = [2, 2, 1, 1]
    elif kind == "G" and n == 2:
        a = [[2, -3], [-1, 2]]
        d = [1, 3]
    else:
        raise ValueError(f"unknown simple type {label!r}")
    scale = Fraction(1) if form_scale is None else Fraction(form_scale)
    return RootData(f"{kind}{n}", a, d, scale)
