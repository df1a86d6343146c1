"""Fixture suite: exact reproduction of the three worked cells."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import fixtures as fx
from .cells import (
    CellSpec,
    build_doubled_system,
    compute_bracket_table,
    laurent_torus,
    torus_extension,
    y_full,
    y_interval,
)
from .doublecells import DoubleCellSpec, fz_chain, fz_embed, fz_embed_inverse, kz_bracket_oracle, kz_system
from .exactalg import QuasiPoly, parse_poly
from .flows import flow_of, interval_order
from .repkit import mat_eq
from .rootdata import cartan_type


@dataclass
class CheckResult:
    name: str
    ok: bool
    seconds: float
    detail: str = ""


def _table_matches(bt, expected):
    missing = [k for k in expected if bt.get(*k) != expected[k]]
    extra = [(bt.variables[i], bt.variables[j]) for (i, j) in bt.entries
             if (bt.variables[i], bt.variables[j]) not in expected]
    return not missing and not extra, f"{len(missing)} wrong, {len(extra)} unexpected"


def _laurent_coords(curve, rank):
    return {v: QuasiPoly({a: laurent_torus(p, rank) for a, p in q.terms.items()}, q.rate)
            for v, q in curve.coords.items()}


def _flow_matches(curve, table_vars, spec, branch, rank=None):
    want = fx.expected_curve(spec, [v for v in table_vars if not v.startswith("xi")], branch)
    got = _laurent_coords(curve, rank) if rank else curve.coords
    bad = [v for v, q in want.items() if got[v] != q]
    return not bad, f"mismatched coordinates {bad}" if bad else ""


def random_sl3_in_double_cell(rng):
    """Random exact rational SL3 matrix with a13 a31 D12,23 D23,12 != 0."""
    def q():
        return Fraction(rng.randint(-9, 9), rng.randint(1, 4))

    while True:
        g = [[q() for _ in range(3)] for _ in range(3)]
        d = (g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
             - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
             + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]))
        if not d:
            continue
        # rescale the first row to land in SL3
        g[0] = [c / d for c in g[0]]
        if fx.in_a2_double_cell(g):
            return g


def _checks():
    out = []

    def a1(n):
        rd = fx.a1_root_data()
        bt = compute_bracket_table(CellSpec(rd, (1,) * n))
        return _table_matches(bt, fx.a1_pattern(n))

    for n in range(2, 7):
        out.append((f"brackets A1 n={n}", lambda n=n: a1(n)))

    def a2():
        rd = cartan_type("A2")
        bt = compute_bracket_table(CellSpec(rd, fx.A2_WORD))
        ok, msg = _table_matches(bt, fx.a2_table())
        tt = torus_extension(bt, rd)
        want = {**fx.a2_table(), **fx.a2_torus_rows()}
        ok2, msg2 = _table_matches(tt, want)
        return ok and ok2, f"{msg}; torus: {msg2}"

    def g2():
        bt = compute_bracket_table(CellSpec(cartan_type("G2"), fx.G2_WORD))
        return _table_matches(bt, fx.g2_table())

    out.append(("brackets A2 (1,2,1,1,2,1) with torus rows", a2))
    out.append(("brackets G2 (2,1,2,2,1,2)", g2))

    def ys(rd, u, printed):
        ds = build_doubled_system(u, rd)
        bad = [k for k, txt in printed.items() if ds.hamiltonians[k - 1].poly != parse_poly(txt)]
        return not bad, f"mismatched y_k for k in {bad}" if bad else ""

    out.append(("doubled Hamiltonians A1 n=2", lambda: ys(fx.a1_root_data(), (1, 1), fx.A1_Y)))
    out.append(("doubled Hamiltonians G2 u=(2,1,2)", lambda: ys(cartan_type("G2"), (2, 1, 2), fx.G2_Y)))

    def continuants():
        rd = fx.a1_root_data()
        spec = CellSpec(rd, (1,) * 8)
        bad = []
        for i in range(1, 9):
            for j in range(i, 9):
                want = fx.euler_continuant([f"x{k}" for k in range(i, j + 1)])
                if y_interval(spec, rd.omega(1), i, j).poly != want:
                    bad.append((i, j))
        return not bad, f"bad intervals {bad}" if bad else ""

    def open_leaf():
        rd = cartan_type("A2")
        spec = CellSpec(rd, fx.A2_WORD)
        bad = [k for k, txt in fx.A2_OPEN_LEAF.items() if y_full(spec, rd.omega(k)).poly != parse_poly(txt)]
        return not bad, f"mismatched y^omega_k for k in {bad}" if bad else ""

    out.append(("Euler continuants A1 length 8", continuants))
    out.append(("open-leaf minors A2 (1,2,1,1,2,1)", open_leaf))

    def doubled_flows(rd, u, table):
        ds = build_doubled_system(u, rd)
        bt = compute_bracket_table(ds.spec)
        msgs, ok = [], True
        for (name, branch), spec in table.items():
            y = ds.hamiltonians[int(name[-1]) - 1]
            curve = flow_of(y, bt, None, interval_order(bt.variables, y.i, y.j),
                            y0=None if branch == "nonzero" else 0)
            good, msg = _flow_matches(curve, bt.variables, spec, branch)
            ok &= good
            if not good:
                msgs.append(f"{name}/{branch}: {msg}")
        return ok, "; ".join(msgs)

    def kz_flows():
        rd = cartan_type("A2")
        kz = kz_system((1, 2, 1), rd)
        tt = torus_extension(compute_bracket_table(kz.dspec.cell), rd, with_xi0=True)
        msgs, ok = [], True
        for (name, branch), spec in fx.A2_FLOWS.items():
            h = kz.chain[int(name[-1]) - 1].minor.poly()
            curve = flow_of(h, tt, None, None, y0=None if branch == "nonzero" else 0)
            good, msg = _flow_matches(curve, tt.variables, spec, branch, rank=2)
            ok &= good
            if not good:
                msgs.append(f"{name}/{branch}: {msg}")
        return ok, "; ".join(msgs)

    out.append(("flows A1 gamma_1, gamma_2", lambda: doubled_flows(fx.a1_root_data(), (1, 1), fx.A1_FLOWS)))
    out.append(("flows A2 phi_1, phi_3, phi_5", kz_flows))
    out.append(("flows G2 phi_1, phi_2, phi_3", lambda: doubled_flows(cartan_type("G2"), (2, 1, 2), fx.G2_FLOWS)))

    def kz_chain():
        rd = cartan_type("A2")
        ds = DoubleCellSpec(rd, (1, 2, 1), (1, 2, 1))
        chain = fz_chain(ds)
        bad = [k + 1 for k, txt in enumerate(fx.A2_KZ_CHAIN)
               if laurent_torus(chain[k].minor.poly(), 2) != parse_poly(txt)]
        return not bad, f"mismatched M_k for k in {bad}" if bad else ""

    def kz_oracle():
        rd = cartan_type("A2")
        ds = DoubleCellSpec(rd, (1, 2, 1), (1, 2, 1))
        tt = torus_extension(compute_bracket_table(ds.cell), rd, with_xi0=True)
        rep = kz_bracket_oracle(ds, tt)
        return not rep["mismatches"], f"{len(rep['mismatches'])} of {len(rep['pairs'])} pairs off"

    def fz():
        rd = cartan_type("A2")
        ds = DoubleCellSpec(rd, (1, 2, 1), (1, 2, 1))
        rng = random.Random(7)
        for _ in range(5):
            g = random_sl3_in_double_cell(rng)
            chars, x = fz_embed(g, ds)
            if chars + x != fx.a2_fz_expected(g) or not mat_eq(fz_embed_inverse(chars, x, ds), g):
                return False, "embedding differs from the minor-ratio formulas"
        return True, ""

    out.append(("KZ chain M_1..M_6 on SL3", kz_chain))
    out.append(("KZ bracket oracle on SL3", kz_oracle))
    out.append(("FZ embedding formulas on SL3", fz))
    return out


def run_paper_fixtures(progress=None):
    results = []
    for name, fn in _checks():
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = CheckResult(name, bool(ok), time.perf_counter() - t0, detail)
        results.append(res)
        if progress:
            progress(res)
    return results


SUITES = {"paper-fixtures": run_paper_fixtures}

__all__ = ["CheckResult", "SUITES", "random_sl3_in_double_cell", "run_paper_fixtures"]
