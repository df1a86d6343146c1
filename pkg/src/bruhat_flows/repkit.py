"""Exact matrix representations: one-parameter subgroups, Weyl representatives,
generalized minors, Gauss factorizations and the r-matrix data.

Matrices are plain lists of rows; entries may be Fraction, Poly, RatFunc or
anything else with ring operations that mix with Fraction.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from .exactalg.linalg import inverse as q_inverse
from .exactalg.linalg import solve
from .rootdata import Weight, cartan_type, is_reduced, reduce_word

# -- generic matrix helpers ------------------------------------------------------


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _is_zero(v):
    return v == 0 if isinstance(v, (int, Fraction)) else not v


def mat_mul(a, b):
    n, m, k = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        ai = a[i]
        row = [None] * k
        for t in range(m):
            x = ai[t]
            if _is_zero(x):
                continue
            bt = b[t]
            for j in range(k):
                y = bt[j]
                if _is_zero(y):
                    continue
                row[j] = x * y if row[j] is None else row[j] + x * y
        out.append([Fraction(0) if v is None else v for v in row])
    return out


def mat_prod(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = mat_mul(out, m)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[x * c for x in r] for r in a]


def commutator(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def transpose(a):
    return [list(r) for r in zip(*a)]


def is_zero_matrix(a):
    return all(_is_zero(v) for r in a for v in r)


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_inv(a):
    """Inverse over a field (Fraction, RatFunc); Gauss-Jordan without pivot search beyond nonzero."""
    if all(isinstance(v, (int, Fraction)) for r in a for v in r):
        return q_inverse(a)
    n = len(a)
    aug = [list(a[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if not _is_zero(aug[i][c])), None)
        if p is None:
            raise ValueError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and not _is_zero(aug[i][c]):
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def det(m):
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n <= 4:
        # cofactor expansion along the first row: keeps Poly entries exact
        tot = None
        for j in range(n):
            if _is_zero(m[0][j]):
                continue
            sub = [r[:j] + r[j + 1:] for r in m[1:]]
            term = m[0][j] * det(sub)
            if j % 2:
                term = -term
            tot = term if tot is None else tot + term
        return Fraction(0) if tot is None else tot
    # fraction-free Bareiss elimination (exact division works for Poly)
    a = [list(r) for r in m]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            p = next((i for i in range(k + 1, n) if not _is_zero(a[i][k])), None)
            if p is None:
                return Fraction(0)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num / prev
        prev = a[k][k]
    return a[n - 1][n - 1] if sign == 1 else -a[n - 1][n - 1]


def submatrix(g, rows, cols):
    return [[g[r][c] for c in cols] for r in rows]


# -- representation packs ---------------------------------------------------------


class RepPack:
    """A weight-graded faithful representation with simple generators.

    ``minor_sets[i]`` lists the basis indices whose wedge is a highest weight
    vector of weight omega_i, so that Delta^{omega_i}(g) = det g[S, S].
    """

    def __init__(self, name, rd, weights, e, f, minor_sets):
        self.name = name
        self.rd = rd
        self.dim = len(weights)
        self.weights = [Weight(w) for w in weights]
        self.e = {int(i): [[Fraction(v) for v in r] for r in m] for i, m in e.items()}
        self.f = {int(i): [[Fraction(v) for v in r] for r in m] for i, m in f.items()}
        self.minor_sets = {int(i): tuple(s) for i, s in minor_sets.items()}
        self._chev = None
        self._cache = {}

    def to_json(self):
        def sparse(m):
            return [[r, c, _q(v)] for r, row in enumerate(m) for c, v in enumerate(row) if v]

        return {
            "name": self.name,
            "root_data": self.rd.to_json(),
            "dim": self.dim,
            "weights": [[_q(c) for c in w] for w in self.weights],
            "e": {str(i): sparse(m) for i, m in sorted(self.e.items())},
            "f": {str(i): sparse(m) for i, m in sorted(self.f.items())},
            "minors": {str(i): list(s) for i, s in sorted(self.minor_sets.items())},
        }

    @classmethod
    def from_json(cls, data, rd=None):
        from .rootdata import RootData

        if isinstance(data, str):
            data = json.loads(data)
        rd = rd or RootData.from_json(data["root_data"])
        n = data["dim"]

        def dense(trips):
            m = zeros(n)
            for r, c, v in trips:
                m[r][c] = Fraction(v)
            return m

        return cls(
            data.get("name", "custom"), rd, [[Fraction(c) for c in w] for w in data["weights"]],
            {int(i): dense(t) for i, t in data["e"].items()},
            {int(i): dense(t) for i, t in data["f"].items()},
            {int(i): s for i, s in data["minors"].items()},
        )

    def with_root_data(self, rd):
        """Same matrices, different form scale (the group is unchanged)."""
        return RepPack(self.name, rd, self.weights, self.e, self.f, self.minor_sets)

    # -- cached building blocks ----------------------------------------------

    def chevalley(self):
        if self._chev is None:
            self._chev = build_chevalley(self.rd, self)
        return self._chev

    def _powers(self, key, m):
        ck = ("pow", key)
        if ck not in self._cache:
            pw = [identity(self.dim)]
            fact = 1
            k = 1
            cur = m
            while not is_zero_matrix(cur):
                fact *= k
                pw.append(mat_scale(cur, Fraction(1, fact)))
                k += 1
                cur = mat_mul(cur, m)
                if k > self.dim + 1:
                    raise ValueError("generator is not nilpotent")
            self._cache[ck] = pw
        return self._cache[ck]

    def u(self, i, c, sign=1):
        """u_{+alpha_i}(c) or u_{-alpha_i}(c) = exp(c e_{+-alpha_i})."""
        m = self.e[i] if sign > 0 else self.f[i]
        return exp_series(self._powers(("s", i, sign), m), c)

    def u_root(self, beta, c, sign=1):
        ch = self.chevalley()
        m = ch.e[beta] if sign > 0 else ch.f[beta]
        return exp_series(self._powers(("r", beta, sign), m), c)

    def sbar(self, i):
        ck = ("sbar", i)
        if ck not in self._cache:
            self._cache[ck] = mat_prod(self.u(i, -1), self.u(i, 1, -1), self.u(i, -1))
        return self._cache[ck]

    def sbar_inv(self, i):
        ck = ("sbar_inv", i)
        if ck not in self._cache:
            self._cache[ck] = q_inverse(self.sbar(i))
        return self._cache[ck]

    def wbar(self, word):
        """Product of sbar over the letters (word should be reduced)."""
        out = identity(self.dim)
        for a in word:
            out = mat_mul(out, self.sbar(a))
        return out

    def wbarbar(self, word):
        """(overline{w^{-1}})^{-1} for the element with the given reduced word."""
        return q_inverse(self.wbar(tuple(reversed(word))))

    def p(self, i, x):
        """p_alpha(x) = u_alpha(x) sbar_alpha."""
        return mat_mul(self.u(i, x), self.sbar(i))

    def p_inv(self, i, x):
        return mat_mul(self.sbar_inv(i), self.u(i, -x))

    def torus(self, chars):
        """Diagonal element with t^{omega_k} = chars[k-1]."""
        out = zeros(self.dim)
        for v, w in enumerate(self.weights):
            val = Fraction(1)
            for k, c in enumerate(w):
                if c:
                    val = val * (chars[k] ** int(c) if c > 0 else (1 / chars[k]) ** int(-c))
            out[v][v] = val
        return out

    def coroot(self, i, c):
        """alpha_i^vee(c)."""
        return self.torus([c if k == i - 1 else Fraction(1) for k in range(self.rd.rank)])

    def fundamental_minor(self, g, i):
        s = self.minor_sets[i]
        return det(submatrix(g, s, s))

    def weight_of_vector(self, v):
        return self.weights[v]


def exp_series(powers, c):
    """sum_k c^k M^k / k! from precomputed scaled powers."""
    n = len(powers[0])
    out = [list(r) for r in powers[0]]
    ck = None
    for k in range(1, len(powers)):
        ck = c if ck is None else ck * c
        pk = powers[k]
        for i in range(n):
            for j in range(n):
                v = pk[i][j]
                if v:
                    out[i][j] = out[i][j] + ck * v
    return out


def _q(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def one_param(kind, arg, rep):
    """Dispatcher: kind in {'u+', 'u-', 'sbar', 'wbar', 'wbarbar', 'torus', 'coroot'}."""
    if kind == "u+":
        i, c = arg
        return rep.u(i, c)
    if kind == "u-":
        i, c = arg
        return rep.u(i, c, -1)
    if kind == "sbar":
        return rep.sbar(arg)
    if kind in ("wbar", "wbarbar"):
        if not is_reduced(arg, rep.rd):
            raise ValueError("Weyl representative needs a reduced word")
        return rep.wbar(arg) if kind == "wbar" else rep.wbarbar(arg)
    if kind == "torus":
        return rep.torus(arg)
    if kind == "coroot":
        i, c = arg
        return rep.coroot(i, c)
    raise ValueError(f"unknown kind {kind!r}")


# -- minors ---------------------------------------------------------------------


def generalized_minor(g, w1, w2, lam, rep):
    """Delta_{w1 lam, w2 lam}(g) = prod Delta^{omega}(w1bar^{-1} g w2bar)^{n}."""
    lam = Weight(lam)
    if not lam.is_dominant() or any(c.denominator != 1 for c in lam):
        raise ValueError("weight must be dominant integral")
    h = g
    if w1:
        h = mat_mul(q_inverse(rep.wbar(reduce_word(w1, rep.rd))), h)
    if w2:
        h = mat_mul(h, rep.wbar(reduce_word(w2, rep.rd)))
    out = Fraction(1)
    for i, n in enumerate(lam, start=1):
        if n:
            out = out * rep.fundamental_minor(h, i) ** int(n)
    return out


def delta_lambda(g, lam, rep):
    return generalized_minor(g, (), (), lam, rep)


# -- Gauss factorizations --------------------------------------------------------


class NotInBigCell(ValueError):
    pass


def gauss_ldu(g):
    """g = L D U with L unit lower, D diagonal, U unit upper (no pivoting)."""
    n = len(g)
    a = [list(r) for r in g]
    L = identity(n)
    for k in range(n):
        piv = a[k][k]
        if _is_zero(piv):
            raise NotInBigCell(f"leading minor {k + 1} vanishes")
        inv = 1 / piv
        for i in range(k + 1, n):
            if _is_zero(a[i][k]):
                continue
            f = a[i][k] * inv
            L[i][k] = f
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    D = zeros(n)
    U = identity(n)
    for k in range(n):
        D[k][k] = a[k][k]
        inv = 1 / a[k][k]
        for j in range(k + 1, n):
            U[k][j] = a[k][j] * inv
    return L, D, U


def torus_characters(d, rep):
    """t^{omega_k} = Delta^{omega_k}(d) for a diagonal d."""
    return [rep.fundamental_minor(d, k) for k in range(1, rep.rd.rank + 1)]


def ul_factor(g):
    """g = n m with n unit upper, m unit lower."""
    n = len(g)
    J = [[Fraction(int(i + j == n - 1)) for j in range(n)] for i in range(n)]
    L, D, U = gauss_ldu(mat_prod(J, g, J))
    if any(D[k][k] != 1 for k in range(n)):
        raise NotInBigCell("not in N N_-")
    return mat_prod(J, L, J), mat_prod(J, U, J)


# -- Chevalley data and the r-matrix ---------------------------------------------


class ChevalleyData:
    def __init__(self, roots, e, f, lam_terms, chains):
        self.roots = roots  # list of alpha-coefficient tuples
        self.e = e
        self.f = f
        self.lam_terms = lam_terms  # (coefficient, f_beta, e_beta)
        self.chains = chains  # how each non-simple e_beta was built


def _cartan_coords(h, rep):
    """Coroot coordinates of a diagonal matrix acting on the weight basis."""
    r = rep.rd.rank
    rows = [[w[j] for j in range(r)] for w in rep.weights]
    rhs = [h[v][v] for v in range(rep.dim)]
    return solve(rows, rhs)


def build_chevalley(rd, rep):
    from .rootdata import pairing

    roots = [b for b, _ in rd.positive_roots()]
    index = {b: k for k, b in enumerate(roots)}
    e, f, chains = {}, {}, {}
    for b in roots:
        if sum(b) == 1:
            i = b.index(1) + 1
            e[b], f[b] = rep.e[i], rep.f[i]
            continue
        for i in range(rd.rank):
            g = list(b)
            g[i] -= 1
            g = tuple(g)
            if g in index and g in e:
                eb = commutator(rep.e[i + 1], e[g])
                fb = commutator(f[g], rep.f[i + 1])
                if not is_zero_matrix(eb) and not is_zero_matrix(fb):
                    chains[b] = (i + 1, g)
                    break
        else:
            raise ValueError(f"no commutator chain reaches root {b}")
        h = commutator(eb, fb)
        zeta = _cartan_coords(h, rep)
        bw = rd.from_alpha_basis(b)
        val = sum(bw[j] * zeta[j] for j in range(rd.rank))
        if not val:
            raise ValueError(f"degenerate normalization for root {b}")
        e[b], f[b] = eb, mat_scale(fb, Fraction(2) / val)
    lam_terms = []
    for b in roots:
        bw = rd.from_alpha_basis(b)
        lam_terms.append((pairing(bw, bw, rd) / 2, f[b], e[b]))
    return ChevalleyData(roots, e, f, lam_terms, chains)


def lambda_tensor(chev):
    """Lambda_st as a dense 4-index array T[(i,j),(k,l)] of the tensor sum."""
    n = len(chev.e[chev.roots[0]])
    out = {}
    for c, fb, eb in chev.lam_terms:
        for a, b, s in ((fb, eb, c), (eb, fb, -c)):
            for i, j in itertools.product(range(n), repeat=2):
                if not a[i][j]:
                    continue
                for k, l in itertools.product(range(n), repeat=2):
                    if b[k][l]:
                        key = (i, j, k, l)
                        out[key] = out.get(key, 0) + s * a[i][j] * b[k][l]
    return {k: v for k, v in out.items() if v}


# -- validation -----------------------------------------------------------------


def validate_rep_pack(rep, rd=None):
    """List of failed checks (empty when the pack is sound)."""
    rd = rd or rep.rd
    r = rd.rank
    fails = []
    n = rep.dim
    hs = {}
    for i in range(1, r + 1):
        if i not in rep.e or i not in rep.f:
            fails.append(f"missing generator {i}")
            continue
        for name, m in (("e", rep.e[i]), ("f", rep.f[i])):
            for a in range(n):
                for b in range(n):
                    if m[a][b]:
                        if (name == "e" and a >= b) or (name == "f" and a <= b):
                            fails.append(f"{name}{i} not strictly triangular at ({a},{b})")
                        shift = rd.alpha(i) if name == "e" else -rd.alpha(i)
                        if rep.weights[a] != rep.weights[b] + shift:
                            fails.append(f"{name}{i} does not shift weights at ({a},{b})")
        h = commutator(rep.e[i], rep.f[i])
        want = [[Fraction(int(a == b)) * rep.weights[a][i - 1] for b in range(n)] for a in range(n)]
        if not mat_eq(h, want):
            fails.append(f"[e{i}, f{i}] != h{i}")
        hs[i] = h
    if fails:
        return fails
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            aij = rd.cartan[i - 1][j - 1]
            if not mat_eq(commutator(hs[i], rep.e[j]), mat_scale(rep.e[j], aij)):
                fails.append(f"[h{i}, e{j}] != a_ij e{j}")
            if i != j:
                if not is_zero_matrix(commutator(rep.e[i], rep.f[j])):
                    fails.append(f"[e{i}, f{j}] != 0")
                for gen in ("e", "f"):
                    x = getattr(rep, gen)
                    m = x[j]
                    for _ in range(1 - aij):
                        m = commutator(x[i], m)
                    if not is_zero_matrix(m):
                        fails.append(f"Serre relation fails for {gen}{i},{gen}{j}")
    for i, s in rep.minor_sets.items():
        tot = rd.zero()
        for v in s:
            tot = tot + rep.weights[v]
        if tot != rd.omega(i):
            fails.append(f"minor set for omega_{i} has weight {tot}")
        for k in range(1, r + 1):
            for v in s:
                for a in range(n):
                    if rep.e[k][a][v] and a not in s:
                        fails.append(f"minor set for omega_{i} is not highest (e{k})")
    try:
        build_chevalley(rd, rep)
    except ValueError as exc:
        fails.append(str(exc))
    return fails


# -- bundled packs --------------------------------------------------------------


def type_a_pack(n, rd=None):
    rd = rd or cartan_type(f"A{n}")
    d = n + 1
    weights = []
    for k in range(1, d + 1):
        w = [0] * n
        if k <= n:
            w[k - 1] += 1
        if k >= 2:
            w[k - 2] -= 1
        weights.append(w)
    e, f = {}, {}
    for i in range(1, n + 1):
        m = zeros(d)
        m[i - 1][i] = Fraction(1)
        e[i] = m
        f[i] = transpose(m)
    minors = {k: tuple(range(k)) for k in range(1, n + 1)}
    return RepPack(f"A{n}-defining", rd, weights, e, f, minors)


def g2_pack(rd=None):
    """Seven-dimensional representation; alpha_1 short.

    Basis weights: 2a1+a2, a1+a2, a1, 0, -a1, -a1-a2, -2a1-a2.
    """
    rd = rd or cartan_type("G2")
    al = [(2, 1), (1, 1), (1, 0), (0, 0), (-1, 0), (-1, -1), (-2, -1)]
    weights = [rd.from_alpha_basis(a) for a in al]

    def m(entries):
        out = zeros(7)
        for (a, b), v in entries.items():
            out[a - 1][b - 1] = Fraction(v)
        return out

    e = {1: m({(1, 2): 1, (3, 4): 1, (4, 5): 1, (6, 7): 1}), 2: m({(2, 3): 1, (5, 6): -1})}
    f = {1: m({(2, 1): 1, (4, 3): 2, (5, 4): 2, (7, 6): 1}), 2: m({(3, 2): 1, (6, 5): -1})}
    return RepPack("G2-seven", rd, weights, e, f, {1: (0,), 2: (0, 1)})


def bundled_pack(rd):
    label = rd.type_label
    if label.startswith("A"):
        return type_a_pack(rd.rank, rd)
    if label == "G2":
        return g2_pack(rd)
    raise ValueError(f"no bundled representation for type {label}; supply one with --rep-pack")
