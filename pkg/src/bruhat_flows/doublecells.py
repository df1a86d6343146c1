"""Double Bruhat cells G^{u,v}: decompositions, the Fomin-Zelevinsky embedding,
FZ minors by two routes, and Kogan-Zelevinsky systems.

Words: ``v`` is read as (v_1, ..., v_a) and the cell word is (v^{-1}, u), i.e.
letters v_a, ..., v_1 followed by u_1, ..., u_b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .cells import CellSpec, DressedMinor, dressed_interval, torus_extension
from .exactalg import log_canonical_coefficient
from .repkit import (
    NotInBigCell,
    bundled_pack,
    gauss_ldu,
    identity,
    mat_eq,
    mat_inv,
    mat_mul,
    mat_prod,
    torus_characters,
    ul_factor,
)
from .rootdata import Weight, check_letters, is_reduced, pairing, weyl_act


class DoubleCellSpec:
    def __init__(self, rd, u, v, rep=None):
        self.rd = rd
        self.u = check_letters(tuple(u), rd)
        self.v = check_letters(tuple(v), rd)
        for name, w in (("u", self.u), ("v", self.v)):
            if not is_reduced(w, rd):
                raise ValueError(f"{name} must be a reduced word")
        rep = rep or bundled_pack(rd)
        if rep.rd != rd:
            rep = rep.with_root_data(rd)
        self.rep = rep
        self.a, self.b = len(self.v), len(self.u)
        self.word = tuple(reversed(self.v)) + self.u
        self.cell = CellSpec(rd, self.word, rep)

    # Weyl representatives
    def ubar(self):
        return self.rep.wbar(self.u)

    def vbarbar(self):
        return self.rep.wbarbar(self.v)

    # interval words (letters of the cell word W = s_1..s_{a+b})
    def v_head(self, i):
        """Word of v_{[1,i]} = s_a s_{a-1} ... s_{a+1-i}."""
        a = self.a
        return tuple(self.word[a - k] for k in range(1, i + 1))

    def v_tail(self, i):
        """Word of v_{[i+1,a]} = s_{a-i} ... s_1."""
        return tuple(reversed(self.word[:self.a - i]))

    def u_tail(self, j):
        """Word of u_{[j,b]} = s_{a+j} ... s_{a+b}."""
        return self.word[self.a + j - 1:]


def _unit_upper(m):
    n = len(m)
    return all(m[i][j] == (1 if i == j else 0) for i in range(n) for j in range(i + 1))


def _unit_lower(m):
    n = len(m)
    return all(m[i][j] == (1 if i == j else 0) for i in range(n) for j in range(i, n))


@dataclass
class GuvDecomposition:
    g: list
    nu: list  # n ubar in C_ubar
    n1: list  # n'
    t1: list  # t'
    mv: list  # m vbarbar in D_vbarbar
    m1: list  # m'
    t: list
    chars: list = field(default_factory=list)  # t^{omega_k}
    chars1: list = field(default_factory=list)


def decompose_guv(g, dspec):
    """g = (n ubar) n' t' = (m vbb) m' t."""
    rep = dspec.rep
    ub, vbb = dspec.ubar(), dspec.vbarbar()
    ub_inv, vbb_inv = mat_inv(ub), mat_inv(vbb)
    try:
        _, t1, up = gauss_ldu(mat_mul(ub_inv, g))
        _, d, _ = gauss_ldu(mat_mul(g, vbb_inv))
    except NotInBigCell as exc:
        raise NotInBigCell(f"not in the double Bruhat cell: {exc}") from exc
    # ubar^{-1} g = L t' U, so n' = t' U t'^{-1}
    n1 = mat_prod(t1, up, mat_inv(t1))
    nu = mat_mul(g, mat_inv(mat_mul(n1, t1)))
    t = mat_prod(vbb_inv, d, vbb)
    t_inv = mat_inv(t)
    _, m1 = ul_factor(mat_prod(vbb_inv, g, t_inv))
    mv = mat_prod(g, t_inv, mat_inv(m1))
    if not (_unit_upper(mat_mul(nu, ub_inv)) and _unit_lower(mat_mul(ub_inv, nu))):
        raise NotInBigCell("n ubar is not in C_ubar")
    if not (_unit_lower(mat_mul(mv, vbb_inv)) and _unit_upper(mat_mul(vbb_inv, mv))):
        raise NotInBigCell("m vbarbar is not in D_vbarbar")
    return GuvDecomposition(g, nu, n1, t1, mv, m1, t,
                            torus_characters(t, rep), torus_characters(t1, rep))


def peel(c, word, rep):
    """x with c = p_1(x_1) ... p_k(x_k) exactly; raises if c is not of that form."""
    xs = []
    cur = c
    for k in range(len(word), 0, -1):
        a = word[k - 1]
        head = rep.wbar(word[:k - 1])
        x = rep.fundamental_minor(mat_mul(mat_inv(head), cur), a)
        xs.append(x)
        cur = mat_mul(cur, rep.p_inv(a, x))
    if not mat_eq(cur, identity(rep.dim)):
        raise NotInBigCell("element is not a product of the expected p-matrices")
    return list(reversed(xs))


def fz_embed(g, dspec):
    """g -> (t^{omega_k} values, Bott-Samelson coordinates of [(m vbb)^{-1}, n ubar])."""
    dec = decompose_guv(g, dspec)
    a = dspec.a
    xs = peel(mat_inv(dec.mv), dspec.word[:a], dspec.rep) + peel(dec.nu, dspec.word[a:], dspec.rep)
    return dec.chars, xs


def fz_embed_inverse(chars, x, dspec):
    """m vbb [(m vbb)^{-1} n ubar]_- t."""
    rep = dspec.rep
    a = dspec.a
    left = identity(rep.dim)
    for k in range(a):
        left = mat_mul(left, rep.p(dspec.word[k], x[k]))
    full = left
    for k in range(a, a + dspec.b):
        full = mat_mul(full, rep.p(dspec.word[k], x[k]))
    try:
        low, _, _ = gauss_ldu(full)
    except NotInBigCell as exc:
        raise NotInBigCell("point is not on the open leaf") from exc
    return mat_prod(mat_inv(left), low, rep.torus(chars))


# -- FZ minors ------------------------------------------------------------------


def fz_minor_bs(dspec, lam, i, j):
    """M^lam_{i,j} = t^{-s_1...s_{a-i}(lam)} y^lam_{[a+1-i, a-1+j]}."""
    if not (0 <= i <= dspec.a and 1 <= j <= dspec.b + 1):
        raise ValueError("index out of range")
    m = dressed_interval(dspec.cell, lam, dspec.a + 1 - i, dspec.a - 1 + j)
    m.label = f"M^{tuple(int(c) for c in m.minor.lam)}_{{{i},{j}}}"
    return m


def delta_lambda(h, lam, rep):
    out = Fraction(1)
    for k, n in enumerate(lam, start=1):
        if n:
            out *= rep.fundamental_minor(h, k) ** int(n)
    return out


def torus_power(chars, mu):
    out = Fraction(1)
    for c, e in zip(chars, mu):
        e = int(e)
        if e:
            out *= c ** e
    return out


def g_hat(g, dspec):
    """([ubar^{-1} g]_-^{-1} ubar^{-1} g vbb^{-1} [g vbb^{-1}]_+^{-1})^{-1}."""
    ub_inv, vbb_inv = mat_inv(dspec.ubar()), mat_inv(dspec.vbarbar())
    low, _, _ = gauss_ldu(mat_mul(ub_inv, g))
    _, _, up = gauss_ldu(mat_mul(g, vbb_inv))
    return mat_inv(mat_prod(mat_inv(low), ub_inv, g, vbb_inv, mat_inv(up)))


def fz_minor_twist(g, dspec, lam, i, j, ghat=None):
    """Delta_{w1 lam, w2 lam}(g') as Delta^lam(wbb_2^{-1} ghat wbb_1), w1 = u_{[j,b]}^{-1}, w2 = v_{[1,i]}."""
    rep = dspec.rep
    lam = Weight(lam)
    if not any(lam):
        return Fraction(1)
    gh = ghat if ghat is not None else g_hat(g, dspec)
    w1 = tuple(reversed(dspec.u_tail(j)))
    w2 = dspec.v_head(i)
    h = mat_prod(mat_inv(rep.wbarbar(w2)), gh, rep.wbarbar(w1))
    return delta_lambda(h, lam, rep)


def fz_minor_lemma(g, dspec, lam, i, j, dec=None):
    """t^{-(v_{[i+1,a]})^{-1} lam} Delta^lam(vbb_{[i+1,a]} (m vbb)^{-1} n ubar ubar_{[j,b]}^{-1})."""
    rep = dspec.rep
    dec = dec or decompose_guv(g, dspec)
    tail = dspec.v_tail(i)
    mu = -weyl_act(tuple(reversed(tail)), Weight(lam), dspec.rd)
    h = mat_prod(rep.wbarbar(tail), mat_inv(dec.mv), dec.nu, mat_inv(rep.wbar(dspec.u_tail(j))))
    return torus_power(dec.chars, mu) * delta_lambda(h, lam, rep)


def eval_dressed(m, chars, x, variables):
    vals = dict(zip(variables, x))
    return torus_power(chars, m.mu) * m.minor.poly.evaluate(vals)


# -- Kogan-Zelevinsky -------------------------------------------------------------


@dataclass
class ChainEntry:
    i: int
    j: int
    lam: Weight
    kind: str  # "v", "u" or "append"
    minor: DressedMinor


def fz_chain(dspec, shuffle=None):
    """FZ minor chain of a shuffle of the two words, then r appended entries.

    ``shuffle`` is a string over {'v','u'} starting with 'v' (default alternating).
    """
    a, b = dspec.a, dspec.b
    if shuffle is None:
        shuffle = "".join(itertools.chain.from_iterable(itertools.zip_longest("v" * a, "u" * b, fillvalue="")))
    if sorted(shuffle) != sorted("v" * a + "u" * b) or (a and not shuffle.startswith("v")):
        raise ValueError("shuffle must interleave all letters and start with a v-letter")
    out = []
    nv = nu = 0
    for kind in shuffle:
        if kind == "v":
            nv += 1
            lam = dspec.rd.omega(dspec.v[nv - 1])
            i, j = nv - 1, nu + 1
        else:
            nu += 1
            lam = dspec.rd.omega(dspec.u[nu - 1])
            i, j = max(nv - 1, 0), nu + 1
        out.append(ChainEntry(i, j, lam, kind, fz_minor_bs(dspec, lam, i, j)))
    for k in range(1, dspec.rd.rank + 1):
        lam = dspec.rd.omega(k)
        out.append(ChainEntry(a, b + 1, lam, "append", fz_minor_bs(dspec, lam, a, b + 1)))
    return out


def kz_coefficient(dspec, e1, e2):
    """<delta, delta'> - <gamma, gamma'> with delta = v_{[1,i]}lam, gamma = u_{[j,b]}^{-1} lam."""
    rd = dspec.rd

    def dg(e):
        d = weyl_act(dspec.v_head(e.i), e.lam, rd)
        g = weyl_act(tuple(reversed(dspec.u_tail(e.j))), e.lam, rd)
        return d, g

    d1, g1 = dg(e1)
    d2, g2 = dg(e2)
    return pairing(d1, d2, rd) - pairing(g1, g2, rd)


@dataclass
class KZSystem:
    dspec: DoubleCellSpec
    hamiltonians: list  # DressedMinor, M_1, M_3, ...
    chain: list

    def polys(self, with_xi0=True):
        return [h.poly(with_xi0) for h in self.hamiltonians]


def kz_system(u, rd, rep=None, shuffle=None):
    dspec = DoubleCellSpec(rd, u, u, rep)
    chain = fz_chain(dspec, shuffle)
    n = len(dspec.u)
    hams = [fz_minor_bs(dspec, rd.omega(dspec.u[k - 1]), k - 1, k) for k in range(1, n + 1)]
    return KZSystem(dspec, hams, chain)


def kz_torus_table(dspec, bt, with_xi0=True):
    return torus_extension(bt, dspec.rd, with_xi0=with_xi0)


def kz_bracket_oracle(dspec, table, chain=None):
    """Compare every {M_k, M_k'} (k <= k') with the weight formula."""
    chain = chain or fz_chain(dspec)
    rows = []
    for k, k2 in itertools.combinations_with_replacement(range(len(chain)), 2):
        e1, e2 = chain[k], chain[k2]
        got = log_canonical_coefficient(e1.minor.poly(), e2.minor.poly(), table)
        want = kz_coefficient(dspec, e1, e2)
        rows.append({"k": k + 1, "k2": k2 + 1, "coefficient": got, "predicted": want, "ok": got == want})
    return {"pairs": rows, "mismatches": [r for r in rows if not r["ok"]]}
