"""Generalized Bruhat cells in Bott-Samelson coordinates.

Points of the cell for a word (a_1, ..., a_n) are [p_1(x_1), ..., p_n(x_n)] with
p_k(x) = u_{alpha_{a_k}}(x) sbar_{a_k}.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import BracketTable, Poly, interpolate_entries, log_canonical_coefficient
from .repkit import (
    NotInBigCell,
    bundled_pack,
    det,
    gauss_ldu,
    identity,
    mat_mul,
    submatrix,
    torus_characters,
)
from .rootdata import (
    Weight,
    check_letters,
    coord_weights,
    is_reduced,
    pairing,
    weyl_act,
    weyl_act_t,
)


class CellSpec:
    def __init__(self, rd, word, rep=None):
        self.rd = rd
        self.word = check_letters(tuple(word), rd)
        rep = rep or bundled_pack(rd)
        if rep.rd != rd:
            rep = rep.with_root_data(rd)
        self.rep = rep
        self.n = len(self.word)
        self.variables = [f"x{k}" for k in range(1, self.n + 1)]
        self.weights = coord_weights(self.word, rd)
        self._products = {}
        self._minors = {}

    def key(self):
        return {"type": self.rd.type_label, "word": list(self.word), "form_scale": str(self.rd.form_scale)}

    def xvar(self, k):
        return Poly.var(self.variables[k - 1])

    def letters_present(self):
        return sorted(set(self.word))

    def product(self, i, j):
        """Symbolic p_{[i,j]}(x) with Poly entries (identity when j = i - 1)."""
        if j < i:
            return identity(self.rep.dim)
        key = (i, j)
        if key not in self._products:
            prev = self.product(i, j - 1)
            self._products[key] = mat_mul(prev, self.rep.p(self.word[j - 1], self.xvar(j)))
        return self._products[key]

    def sub(self, i, j):
        """The cell of the subword s_i..s_j (variables keep their names via offsets)."""
        return CellSpec(self.rd, self.word[i - 1:j], self.rep)


# -- points ---------------------------------------------------------------------


def bs_point_eval(spec, x):
    """Prefix products p_{[1,k]}(x), k = 0..n."""
    if len(x) != spec.n:
        raise ValueError(f"expected {spec.n} coordinates")
    out = [identity(spec.rep.dim)]
    for a, xk in zip(spec.word, x):
        out.append(mat_mul(out[-1], spec.rep.p(a, xk)))
    return out


def _div(a, b):
    if isinstance(b, Poly):
        if not isinstance(a, Poly):
            a = Poly.const(a)
        return a.exact_div(b)
    if not b:
        raise ZeroDivisionError("point outside the chart image")
    return a / b


def extract_bs_coords(flags, spec):
    """Recover (x_1..x_n) and the final residue b from g_k in B s_k B.

    The residue of each letter is pushed into the next one.
    """
    rep = spec.rep
    b = identity(rep.dim)
    xs = []
    for a, g in zip(spec.word, flags):
        h = mat_mul(b, g)
        num = rep.fundamental_minor(h, a)
        den = rep.fundamental_minor(mat_mul(rep.sbar_inv(a), h), a)
        if isinstance(den, Poly) and not den:
            raise ZeroDivisionError("denominator minor vanishes identically")
        x = _div(num, den)
        xs.append(x)
        b = mat_mul(mat_mul(rep.sbar_inv(a), rep.u(a, -x)), h)
        for r in range(rep.dim):
            for c in range(r):
                if b[r][c]:
                    raise ValueError("flag is not in the expected Bruhat cell")
    return xs, b


# -- interval minors ------------------------------------------------------------


@dataclass
class IntervalMinor:
    lam: Weight
    i: int
    j: int
    poly: Poly
    weight: Weight


def _check_dominant(lam):
    lam = Weight(lam)
    if not lam.is_dominant() or any(Fraction(c).denominator != 1 for c in lam):
        raise ValueError("weight must be dominant integral")
    return lam


def interval_weight(spec, lam, i, j):
    """s_1...s_{i-1}(lam) - s_1...s_j(lam)."""
    w = spec.word
    return weyl_act(w[:i - 1], lam, spec.rd) - weyl_act(w[:j], lam, spec.rd)


def y_interval(spec, lam, i, j):
    lam = _check_dominant(lam)
    if len(lam) != spec.rd.rank:
        raise ValueError("weight has the wrong rank")
    if not (1 <= i and i - 1 <= j <= spec.n):
        raise ValueError(f"bad interval [{i},{j}] for a word of length {spec.n}")
    key = (tuple(lam), i, j)
    if key not in spec._minors:
        poly = Poly.const(1)
        if j >= i:
            g = spec.product(i, j)
            for a, m in enumerate(lam, start=1):
                if m:
                    poly = poly * spec.rep.fundamental_minor(g, a) ** int(m)
        spec._minors[key] = IntervalMinor(lam, i, j, poly, interval_weight(spec, lam, i, j))
    return spec._minors[key]


def y_full(spec, lam):
    return y_interval(spec, lam, 1, spec.n)


def on_open_leaf(spec, x):
    """Nonvanishing of y^{omega_a} for every letter a of the word."""
    vals = dict(zip(spec.variables, x))
    for a in spec.letters_present():
        if not y_full(spec, spec.rd.omega(a)).poly.evaluate(vals):
            return False
    return True


def tau_eval(spec, x):
    """Torus characters t^{omega_k} of [p_1(x_1)...p_n(x_n)]_0."""
    if not on_open_leaf(spec, x):
        raise NotInBigCell("point is not on the open leaf")
    g = bs_point_eval(spec, x)[-1]
    _, d, _ = gauss_ldu(g)
    return torus_characters(d, spec.rep)


def tau_chart(spec, eps):
    """prod_i (alpha_i^vee(eps_i^{-1}))^{s_{i+1}...s_n} as characters t^{omega_k}."""
    rd = spec.rd
    out = [Fraction(1)] * rd.rank
    for i, (a, e) in enumerate(zip(spec.word, eps)):
        for k in range(rd.rank):
            # omega_k on wbar^{-1} alpha_a^vee(c) wbar is c^{<w omega_k, alpha_a^vee>}, w = s_{i+1}...s_n
            mu = weyl_act(spec.word[i + 1:], rd.omega(k + 1), rd)
            p = int(mu[a - 1])
            if p:
                out[k] *= (Fraction(1) / e) ** p if p > 0 else Fraction(e) ** (-p)
    return out


# -- brackets: chart method ------------------------------------------------------


def _eps_names(n):
    return [f"eps{k}" for k in range(1, n + 1)]


def chart_transition(spec):
    """X(eps): Bott-Samelson coordinates of [u_{-a_1}(eps_1), ..., u_{-a_n}(eps_n)]."""
    eps = [Poly.var(e) for e in _eps_names(spec.n)]
    flags = [spec.rep.u(a, e, -1) for a, e in zip(spec.word, eps)]
    xs, _ = extract_bs_coords(flags, spec)
    return xs


def _monomial_exponents(p, names):
    if not p.is_monomial():
        raise ArithmeticError(f"expected a monomial, got {p}")
    (mono, c), = list(p.terms())
    return [mono.get(n, 0) for n in names], c


def _chart_bracket(spec):
    n = spec.n
    rd = spec.rd
    names = _eps_names(n)
    X = chart_transition(spec)
    eul = [[X[i].euler(names[k]) for k in range(n)] for i in range(n)]
    gram = [[pairing(rd.alpha(a), rd.alpha(b), rd) for b in spec.word] for a in spec.word]
    # prefix minors D_j = y^{omega_{a_j}}_{[1,j]} are monomials in eps: read the exponents
    dpolys = [y_interval(spec, rd.omega(a), 1, j).poly for j, a in enumerate(spec.word, start=1)]
    sub_x = dict(zip(spec.variables, X))
    expo = []
    for j in range(n):
        ex, c = _monomial_exponents(dpolys[j].substitute(sub_x), names)
        if c != 1:
            raise ArithmeticError("prefix minor has a non-unit coefficient in the chart")
        expo.append(ex)
    # invert the triangular exponent matrix: eps_k = prod_l D_l^{inv[k][l]}
    from .exactalg.linalg import inverse

    inv = inverse([[Fraction(e) for e in row] for row in expo])
    dnames = [f"_D{j}" for j in range(1, n + 1)]

    def to_d(mono):
        out = {}
        for k, nm in enumerate(names):
            e = mono.get(nm, 0)
            if e:
                for l in range(n):
                    if inv[k][l]:
                        out[dnames[l]] = out.get(dnames[l], 0) + int(e * inv[k][l])
        return out

    entries = {}
    for i, j in itertools.combinations(range(n), 2):
        b = Poly.const(0)
        for k, l in itertools.combinations(range(n), 2):
            g = gram[k][l]
            if g:
                b = b + (eul[i][k] * eul[j][l] - eul[i][l] * eul[j][k]) * g
        if not b:
            continue
        bd = b.map_monomials(to_d)
        lows = {d: -min(0, bd.min_degree_in(d)) for d in dnames}
        bd = bd * Poly.monomial({d: m for d, m in lows.items() if m})
        res = bd.substitute(dict(zip(dnames, dpolys)))
        for d, p in zip(dnames, dpolys):
            for _ in range(lows[d]):
                res = res.exact_div(p)
        if res.has_negative_exponents():
            raise ArithmeticError("chart bracket does not clear to a polynomial")
        entries[(i, j)] = res
    return entries


# -- brackets: pointwise push-forward --------------------------------------------


def _adj_embed(m, s, dim):
    """n x n matrix whose trace pairing with Z gives d/dt det((m + tZ)[S,S])."""
    k = len(s)
    sub = submatrix(m, s, s)
    out = [[Fraction(0)] * dim for _ in range(dim)]
    if k == 1:
        out[s[0]][s[0]] = Fraction(1)
        return out
    for a in range(k):
        for b in range(k):
            minor = [[sub[r][c] for c in range(k) if c != a] for r in range(k) if r != b]
            cof = det(minor)
            out[s[a]][s[b]] = cof if (a + b) % 2 == 0 else -cof
    return out


def _trace_pair(phi, y):
    n = len(phi)
    tot = Fraction(0)
    for a in range(n):
        pa = phi[a]
        for b in range(n):
            if pa[b] and y[b][a]:
                tot += pa[b] * y[b][a]
    return tot


def pointwise_bracket(spec, x):
    """Exact matrix of {x_i, x_j} at a rational point from the push-forward of pi_st^n."""
    rep = spec.rep
    dim = rep.dim
    n = spec.n
    chev = rep.chevalley()
    ps, pinv, A, E = [], [], [], []
    for a, xk in zip(spec.word, x):
        p = rep.p(a, xk)
        ps.append(p)
        pinv.append(rep.p_inv(a, xk))
        s = rep.minor_sets[a]
        sp = mat_mul(rep.sbar_inv(a), p)
        if rep.fundamental_minor(sp, a) != 1:
            raise ArithmeticError("unexpected base denominator")
        an = mat_mul(_adj_embed(p, s, dim), p)
        ad = mat_mul(_adj_embed(sp, s, dim), sp)
        A.append([[u - xk * v for u, v in zip(r1, r2)] for r1, r2 in zip(an, ad)])
        E.append(mat_mul(mat_mul(rep.sbar_inv(a), rep.e[a]), rep.sbar(a)))
    # phi[i][k]: functional on a left-invariant perturbation at slot k giving d x_i
    phi = [[None] * n for _ in range(n)]
    for i in range(n):
        cur = A[i]
        phi[i][i] = cur
        for m in range(i - 1, -1, -1):
            psi = mat_mul(mat_mul(ps[m + 1], cur), pinv[m + 1])
            t = _trace_pair(psi, E[m])
            cur = [[u - t * v for u, v in zip(r1, r2)] for r1, r2 in zip(psi, A[m])] if t else psi
            phi[i][m] = cur
    val = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n):
        vecs = []
        for c, f, e in chev.lam_terms:
            rf = mat_mul(mat_mul(pinv[k], f), ps[k])
            re_ = mat_mul(mat_mul(pinv[k], e), ps[k])
            vecs.append((c, f, e, rf, re_))
        ell = {}
        for i in range(k, n):
            ell[i] = [tuple(_trace_pair(phi[i][k], v) for v in (f, e, rf, re_)) for _, f, e, rf, re_ in vecs]
        for i in range(k, n):
            for j in range(i + 1, n):
                tot = Fraction(0)
                for (c, *_), li, lj in zip(vecs, ell[i], ell[j]):
                    tot += c * (li[0] * lj[1] - li[1] * lj[0] - li[2] * lj[3] + li[3] * lj[2])
                val[i][j] += tot
    for i in range(n):
        for j in range(i):
            val[i][j] = -val[j][i]
    return val


def _weight_filter(spec, i, j):
    target = tuple(spec.weights[i] + spec.weights[j])
    ws = [tuple(w) for w in spec.weights]
    r = spec.rd.rank

    def ok(mono):
        tot = [Fraction(0)] * r
        for e, w in zip(mono, ws):
            if e:
                for t in range(r):
                    tot[t] += e * w[t]
        return tuple(tot) == target

    return ok


def _interp_bracket(spec, seed=0):
    n = spec.n
    pairs = list(itertools.combinations(range(n), 2))
    if not pairs:
        return {}

    def evaluator(pt):
        v = pointwise_bracket(spec, list(pt))
        return [v[i][j] for i, j in pairs]

    supports = [_weight_filter(spec, i, j) for i, j in pairs]
    polys = interpolate_entries(evaluator, spec.variables, len(pairs), degree_bound=2,
                                supports=supports, max_bound=16, seed=seed)
    return {pr: p for pr, p in zip(pairs, polys) if p}


def compute_bracket_table(spec, method="interp"):
    """The bracket table of pi_n in the coordinates x_1..x_n."""
    if method == "chart":
        entries = _chart_bracket(spec)
    elif method == "interp":
        entries = _interp_bracket(spec)
    elif method == "both":
        a = _chart_bracket(spec)
        b = _interp_bracket(spec)
        keys = set(a) | set(b)
        bad = [k for k in keys if a.get(k, Poly.const(0)) != b.get(k, Poly.const(0))]
        if bad:
            raise ArithmeticError(f"chart and interpolation disagree on {len(bad)} entries")
        entries = a
    else:
        raise ValueError(f"unknown method {method!r}")
    meta = dict(spec.key(), method=method)
    return BracketTable(spec.variables, entries, [list(w) for w in spec.weights], meta)


# -- torus extension ------------------------------------------------------------


def torus_names(rank, with_xi0=False):
    return (["xi0"] if with_xi0 else []) + [f"xi{k}" for k in range(1, rank + 1)]


def torus_coefficients(rd, weights, v=None, M=None):
    """c[k][j] with {xi_k, x_j} = c[k][j] xi_k x_j.

    Default pairs lambda_j with -omega_k^#; ``v`` twists by a Weyl word,
    ``M`` is an explicit r x r matrix in coroot coordinates.
    """
    r = rd.rank
    out = []
    for k in range(1, r + 1):
        if M is not None:
            h = [Fraction(M[i][k - 1]) for i in range(r)]
        else:
            h = [-c for c in rd.sharp(rd.omega(k))]
            if v:
                h = list(weyl_act_t(tuple(v), tuple(h), rd))
        out.append([sum(Fraction(lam[i]) * h[i] for i in range(r)) for lam in weights])
    return out


def torus_extension(bt, rd, v=None, M=None, with_xi0=False):
    """0 bowtie pi: the table extended by xi_1..xi_r (and optionally xi_0)."""
    r = rd.rank
    weights = [Weight(bt.weights[x]) for x in bt.variables]
    coef = torus_coefficients(rd, weights, v, M)
    names = torus_names(r, with_xi0)
    entries = {(a, b): bt.get(a, b) for a, b in itertools.combinations(bt.variables, 2)}
    for k in range(1, r + 1):
        for j, xj in enumerate(bt.variables):
            c = coef[k - 1][j]
            if c:
                entries[(f"xi{k}", xj)] = Poly.monomial({f"xi{k}": 1, xj: 1}, c)
    if with_xi0:
        for j, xj in enumerate(bt.variables):
            c = -sum(coef[k][j] for k in range(r))
            if c:
                entries[("xi0", xj)] = Poly.monomial({"xi0": 1, xj: 1}, c)
    zero = [Fraction(0)] * r
    allw = [zero] * len(names) + [list(w) for w in weights]
    meta = dict(bt.meta, torus=True)
    return BracketTable(names + bt.variables, {k: p for k, p in entries.items() if p}, allw, meta)


def torus_monomial(mu, with_xi0=True):
    """t^mu as a Poly; negative powers go through xi_0 = (xi_1...xi_r)^{-1}."""
    mu = [int(c) for c in mu]
    m = max([0] + [-c for c in mu]) if with_xi0 else 0
    exps = {f"xi{k}": c + m for k, c in enumerate(mu, start=1) if c + m}
    if m:
        exps["xi0"] = m
    return Poly.monomial(exps)


def laurent_torus(p, rank):
    """Rewrite xi_0 as xi_1^{-1}...xi_r^{-1} (for comparison with Laurent formulas)."""
    inv = Poly.monomial({f"xi{k}": -1 for k in range(1, rank + 1)})
    return p.substitute({"xi0": inv})


@dataclass
class DressedMinor:
    """t^{mu} y^lam_{[i,j]} on the torus extension."""

    mu: Weight
    minor: IntervalMinor
    label: str = ""

    def poly(self, with_xi0=True):
        return torus_monomial(self.mu, with_xi0) * self.minor.poly


def dressed_interval(spec, lam, i, j):
    """ytilde^lam_{[i,j]} = t^{-s_1...s_{i-1}(lam)} y^lam_{[i,j]}."""
    mi = y_interval(spec, lam, i, j)
    mu = -weyl_act(spec.word[:i - 1], mi.lam, spec.rd)
    return DressedMinor(mu, mi)


# -- doubled words --------------------------------------------------------------


@dataclass
class DoubledSystem:
    u: tuple
    spec: CellSpec
    hamiltonians: list
    torus_hamiltonians: list = field(default_factory=list)


def build_doubled_system(u, rd, rep=None, require_reduced=False):
    """y_k and ytilde_k on the cell of (u^{-1}, u); u may be any sequence of letters."""
    u = check_letters(tuple(u), rd)
    if require_reduced and not is_reduced(u, rd):
        raise ValueError("u must be a reduced word")
    n = len(u)
    spec = CellSpec(rd, tuple(reversed(u)) + u, rep)
    ys, yts = [], []
    for k in range(1, n + 1):
        lam = rd.omega(u[k - 1])
        ys.append(y_interval(spec, lam, n + 1 - k, n + k))
        yts.append(dressed_interval(spec, lam, n - k + 2, n + k - 1))
    return DoubledSystem(u, spec, ys, yts)


# -- log-canonical checks --------------------------------------------------------


def predicted_pair_coefficient(spec, f, g, dressed=False):
    """Closed-form coefficient for nested intervals [i,j] inside [i',j'].

    Undressed: <a - b, a' + b'>; dressed: <a, a'> - <b, b'>, where a = s_{[1,i-1]}lam,
    b = s_{[1,j]}lam and primes refer to the outer interval. Returns None when
    the intervals are not nested.
    """
    rd = spec.rd
    fi = f.minor if dressed else f
    gi = g.minor if dressed else g
    sign = 1
    if not (gi.i <= fi.i and fi.j <= gi.j):
        if fi.i <= gi.i and gi.j <= fi.j:
            fi, gi, sign = gi, fi, -1
        else:
            return None
    w = spec.word
    a = weyl_act(w[:fi.i - 1], fi.lam, rd)
    b = weyl_act(w[:fi.j], fi.lam, rd)
    a2 = weyl_act(w[:gi.i - 1], gi.lam, rd)
    b2 = weyl_act(w[:gi.j], gi.lam, rd)
    if dressed:
        c = pairing(a, a2, rd) - pairing(b, b2, rd)
    else:
        c = pairing(a - b, a2 + b2, rd)
    return sign * c


def check_log_canonical_pair(f, g, table, spec=None, dressed=False):
    fp = f.poly() if dressed else f.poly
    gp = g.poly() if dressed else g.poly
    kappa = log_canonical_coefficient(fp, gp, table)
    out = {"is_log_canonical": kappa is not None, "coefficient": kappa}
    if spec is not None:
        pred = predicted_pair_coefficient(spec, f, g, dressed)
        out["predicted"] = pred
        out["matches"] = pred is None or (kappa is not None and kappa == pred)
    return out


def random_open_leaf_point(spec, rng=None, radius=9):
    rng = rng or random.Random(0)
    while True:
        x = [Fraction(rng.randint(-radius, radius), rng.randint(1, 3)) for _ in range(spec.n)]
        if on_open_leaf(spec, x):
            return x


def jacobian_rank(polys, variables, point):
    from .exactalg.linalg import rank

    vals = dict(zip(variables, point))
    rows = [[p.diff(v).evaluate(vals) for v in variables] for p in polys]
    return rank(rows)
