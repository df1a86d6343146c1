"""bruhat-flows command line.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from . import cache as cache_mod
from .cells import (
    CellSpec,
    build_doubled_system,
    laurent_torus,
    torus_extension,
    y_interval,
)
from .doublecells import DoubleCellSpec, fz_embed, fz_embed_inverse, kz_bracket_oracle, kz_system
from .exactalg import fmt_q
from .fixtures import A1_FORM_SCALE
from .flows import flow_of, interval_order, localized_flow, numeric_check
from .repkit import NotInBigCell, RepPack, identity, mat_mul, validate_rep_pack
from .rootdata import Weight, cartan_type, leaf_dimension, longest_word

log = logging.getLogger("bruhat_flows")


class DomainError(Exception):
    pass


# -- argument types -----------------------------------------------------------


def _ints(text):
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rationals(text):
    try:
        return [Fraction(s.strip()) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals p/q, got {text!r}")


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}")


def _pair(text):
    v = _ints(text)
    if len(v) != 2:
        raise argparse.ArgumentTypeError("expected i,j")
    return v


def _matrix(text):
    """Row-major rationals, rows separated by ';'."""
    rows = [_rationals(r) for r in text.split(";") if r.strip()]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise argparse.ArgumentTypeError("matrix must be square: rows separated by ';'")
    return rows


def _gens(text):
    """Generator word such as 'e1=2,f2=-1/3,h1=3,s2'."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        kind = tok[0]
        if kind not in "efhs":
            raise argparse.ArgumentTypeError(f"unknown generator {tok!r}")
        if kind == "s":
            out.append((kind, int(tok[1:]), None))
            continue
        if "=" not in tok:
            raise argparse.ArgumentTypeError(f"generator {tok!r} needs a value")
        idx, val = tok[1:].split("=", 1)
        out.append((kind, int(idx), _rational(val)))
    return out


# -- shared setup ---------------------------------------------------------------


def _root_data(args):
    if not args.type:
        raise DomainError("--type is required")
    try:
        scale = args.form_scale
        if scale is None and args.type.upper() == "A1":
            scale = A1_FORM_SCALE
        return cartan_type(args.type, scale)
    except ValueError as exc:
        raise DomainError(str(exc))


def _rep(args, rd):
    if not args.rep_pack:
        return None
    rep = RepPack.from_json(Path(args.rep_pack).read_text())
    rep = rep.with_root_data(rd)
    problems = validate_rep_pack(rep, rd)
    if problems:
        raise DomainError("representation pack failed validation: " + "; ".join(problems[:3]))
    return rep


@contextmanager
def _timed(label, verbose):
    t0 = time.perf_counter()
    info = {}
    yield info
    if verbose:
        extra = f" ({info['note']})" if info.get("note") else ""
        print(f"[timing] {label}: {time.perf_counter() - t0:.3f}s{extra}", file=sys.stderr)


def _table(spec, args):
    root = cache_mod.cache_dir(args.cache_dir)
    tag = "bundled" if not args.rep_pack else "pack:" + Path(args.rep_pack).name
    with _timed("bracket table", args.verbose) as info:
        bt, hit = cache_mod.cached_bracket_table(spec, args.method, root, tag)
        info["note"] = "cache hit" if hit else ("computed, stored" if root else "computed")
    return bt


def _emit(obj, args, text_lines=None, csv_rows=None):
    out = sys.stdout
    if args.format == "json" or (args.format == "text" and text_lines is None):
        out.write(json.dumps(obj, indent=2) + "\n")
    elif args.format == "text":
        out.write("\n".join(text_lines) + "\n")
    else:
        if csv_rows is None:
            raise DomainError("csv output is not available for this command")
        w = csv.writer(out, lineterminator="\n")
        w.writerows(csv_rows)


def _weight_str(w):
    return [fmt_q(c) for c in w]


# -- subcommands ----------------------------------------------------------------


def cmd_rootinfo(args):
    rd = _root_data(args)
    roots = [list(b) for b, _ in rd.positive_roots()]
    obj = dict(rd.to_json(), gram=[[fmt_q(c) for c in row] for row in rd.gram],
               positive_roots=roots, longest_word=list(longest_word(rd)))
    lines = [f"type {rd.type_label}, form scale {fmt_q(rd.form_scale)}",
             "cartan " + str([list(r) for r in rd.cartan]),
             "<alpha_i, alpha_j> " + str(obj["gram"]),
             f"positive roots ({len(roots)}): " + " ".join(str(tuple(b)) for b in roots),
             "longest word " + ",".join(map(str, obj["longest_word"]))]
    _emit(obj, args, lines, [["root"] + [f"a{i}" for i in range(1, rd.rank + 1)]] + [[k + 1] + b for k, b in enumerate(roots)])


def cmd_brackets(args):
    rd = _root_data(args)
    spec = CellSpec(rd, args.word, _rep(args, rd))
    bt = _table(spec, args)
    if args.torus:
        bt = torus_extension(bt, rd, with_xi0=False)
    rows = [[bt.variables[i], bt.variables[j], str(p)] for (i, j), p in sorted(bt.entries.items())]
    lines = [f"{{{a}, {b}}} = {p}" for a, b, p in rows]
    _emit(bt.to_json(), args, lines, [["f", "g", "bracket"]] + rows)


def cmd_minors(args):
    rd = _root_data(args)
    rep = _rep(args, rd)
    if args.u is not None:
        ds = build_doubled_system(args.u, rd, rep)
        rows = [{"k": k, "interval": [y.i, y.j], "lambda": _weight_str(y.lam), "poly": str(y.poly),
                 "dressed": str(yt.poly())}
                for k, (y, yt) in enumerate(zip(ds.hamiltonians, ds.torus_hamiltonians), start=1)]
        lines = [f"y_{r['k']} = {r['poly']}" for r in rows]
        _emit({"word": list(ds.spec.word), "hamiltonians": rows}, args, lines,
              [["k", "i", "j", "poly"]] + [[r["k"], *r["interval"], r["poly"]] for r in rows])
        return
    if args.word is None:
        raise DomainError("give --word (interval minors) or --u (doubled system)")
    spec = CellSpec(rd, args.word, rep)
    lam = _lambda(args, rd)
    if args.interval:
        pairs = [args.interval]
    else:
        pairs = [(i, j) for i in range(1, spec.n + 1) for j in range(i, spec.n + 1)]
    rows = []
    for i, j in pairs:
        m = y_interval(spec, lam, i, j)
        rows.append({"i": i, "j": j, "weight": _weight_str(m.weight), "poly": str(m.poly)})
    lines = [f"y[{r['i']},{r['j']}] = {r['poly']}" for r in rows]
    _emit({"word": list(spec.word), "lambda": _weight_str(lam), "minors": rows}, args, lines,
          [["i", "j", "poly"]] + [[r["i"], r["j"], r["poly"]] for r in rows])


def _lambda(args, rd):
    lam = args.lam
    if lam is None:
        raise DomainError("--lambda is required")
    if len(lam) != rd.rank:
        raise DomainError(f"--lambda needs {rd.rank} coefficients")
    return Weight(lam)


def cmd_flow(args):
    rd = _root_data(args)
    rep = _rep(args, rd)
    if args.kz is not None:
        if args.u is None:
            raise DomainError("--kz needs --u")
        kz = kz_system(args.u, rd, rep)
        if not 1 <= args.kz <= len(kz.chain):
            raise DomainError(f"--kz must be between 1 and {len(kz.chain)}")
        bt = torus_extension(_table(kz.dspec.cell, args), rd, with_xi0=True)
        ham = kz.chain[args.kz - 1].minor.poly()
        preferred = None
        names = [v for v in bt.variables if v != "xi0"]
    elif args.u is not None:
        ds = build_doubled_system(args.u, rd, rep)
        k = args.hamiltonian or 1
        if not 1 <= k <= len(ds.hamiltonians):
            raise DomainError(f"--hamiltonian must be between 1 and {len(ds.hamiltonians)}")
        y = ds.hamiltonians[k - 1]
        bt = _table(ds.spec, args)
        ham, preferred, names = y.poly, interval_order(bt.variables, y.i, y.j), bt.variables
    else:
        if args.word is None or args.interval is None:
            raise DomainError("give --word with --lambda and --interval, or --u")
        spec = CellSpec(rd, args.word, rep)
        lam = _lambda(args, rd)
        y = y_interval(spec, lam, *args.interval)
        bt = _table(spec, args)
        ham, preferred, names = y.poly, interval_order(bt.variables, y.i, y.j), bt.variables

    point = None
    if args.point is not None:
        if len(args.point) != len(names):
            raise DomainError(f"--point needs {len(names)} values ({','.join(names)})")
        point = dict(zip(names, args.point))
    with _timed("closed form", args.verbose):
        curve = flow_of(ham, bt, point, preferred, y0=0 if args.zero_branch else None)
    if args.localize:
        from .exactalg import parse_poly

        localized_flow(curve, parse_poly(args.localize), bt)

    obj = curve.to_json()
    samples = None
    k = args.sample or (200 if args.plot else None)
    if k:
        if point is None:
            raise DomainError("sampling needs --point")
        samples = curve.sample_csv(k, float(args.tmax))
    if args.check:
        if point is None:
            raise DomainError("--check needs --point")
        with _timed("numeric check", args.verbose):
            res = numeric_check(curve, bt, (-float(args.tmax), float(args.tmax)))
        obj["numeric_check"] = res
    if args.plot:
        from .plotting import plot_samples

        plot_samples(samples, args.plot, title=f"flow of {curve.hamiltonian}")
        obj["plot"] = str(args.plot)

    if args.format == "csv":
        if samples is None:
            raise DomainError("csv output needs --point (and optionally --sample)")
        sys.stdout.write(samples)
        return
    if args.format == "json":
        if samples is not None:
            obj["samples"] = list(csv.reader(io.StringIO(samples)))
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
        return
    lines = [f"hamiltonian {obj['hamiltonian']}", f"value y0 = {obj['y0']}",
             "order " + " ".join(f"{s['var']}({s['kappa']})" for s in obj["order"])]
    lines += [f"{v}(c) = {q}" for v, q in curve.coords.items()]
    if "numeric_check" in obj:
        lines.append("numeric check " + json.dumps(obj["numeric_check"]))
    sys.stdout.write("\n".join(lines) + "\n")
    if samples is not None:
        sys.stdout.write("\n" + samples)


def cmd_kz(args):
    rd = _root_data(args)
    if args.u is None:
        raise DomainError("--u is required")
    kz = kz_system(args.u, rd, _rep(args, rd), args.shuffle)
    tt = torus_extension(_table(kz.dspec.cell, args), rd, with_xi0=True)
    rep = kz_bracket_oracle(kz.dspec, tt, kz.chain)
    chain = [{"k": k, "i": e.i, "j": e.j, "lambda": _weight_str(e.lam), "kind": e.kind,
              "minor": str(laurent_torus(e.minor.poly(), rd.rank))}
             for k, e in enumerate(kz.chain, start=1)]
    obj = {
        "u": list(kz.dspec.u),
        "chain": chain,
        "hamiltonians": [c["k"] for c in chain[:len(kz.dspec.u) * 2:2]],
        "oracle": {"pairs": len(rep["pairs"]),
                   "mismatches": [{k: (fmt_q(v) if isinstance(v, Fraction) else v) for k, v in r.items()}
                                  for r in rep["mismatches"]]},
    }
    lines = [f"M_{c['k']} = {c['minor']}" for c in chain]
    lines.append("Hamiltonians: " + ", ".join(f"M_{k}" for k in obj["hamiltonians"]))
    lines.append(f"oracle: {len(rep['pairs'])} pairs, {len(rep['mismatches'])} mismatches")
    _emit(obj, args, lines, [["k", "i", "j", "kind", "minor"]] + [[c["k"], c["i"], c["j"], c["kind"], c["minor"]] for c in chain])
    if rep["mismatches"]:
        raise DomainError("bracket oracle found mismatches")


def _element(args, ds):
    rep = ds.rep
    if args.matrix is not None:
        if not rd_is_type_a(ds.rd):
            raise DomainError("matrix input is only supported in type A; use --gens")
        if len(args.matrix) != rep.dim:
            raise DomainError(f"matrix must be {rep.dim}x{rep.dim}")
        return args.matrix
    if args.gens is not None:
        g = identity(rep.dim)
        for kind, i, c in args.gens:
            if not 1 <= i <= ds.rd.rank:
                raise DomainError(f"generator index {i} out of range")
            m = {"e": lambda: rep.u(i, c), "f": lambda: rep.u(i, c, -1),
                 "h": lambda: rep.coroot(i, c), "s": lambda: rep.sbar(i)}[kind]()
            g = mat_mul(g, m)
        return g
    raise DomainError("give --matrix (type A) or --gens")


def rd_is_type_a(rd):
    return rd.type_label.startswith("A")


def cmd_fz_embed(args):
    rd = _root_data(args)
    if args.u is None or args.v is None:
        raise DomainError("--u and --v are required")
    ds = DoubleCellSpec(rd, args.u, args.v, _rep(args, rd))
    if args.inverse:
        if args.point is None or len(args.point) != rd.rank + len(ds.word):
            raise DomainError(f"--point needs {rd.rank} torus values then {len(ds.word)} coordinates")
        chars, x = args.point[:rd.rank], args.point[rd.rank:]
        g = fz_embed_inverse(chars, x, ds)
        obj = {"matrix": [[fmt_q(c) for c in row] for row in g]}
        _emit(obj, args, [" ".join(fmt_q(c) for c in row) for row in g],
              [[fmt_q(c) for c in row] for row in g])
        return
    g = _element(args, ds)
    chars, x = fz_embed(g, ds)
    obj = {"word": list(ds.word),
           "torus": {f"xi{k}": fmt_q(c) for k, c in enumerate(chars, start=1)},
           "coordinates": {f"x{k}": fmt_q(c) for k, c in enumerate(x, start=1)}}
    lines = [f"{k} = {v}" for k, v in {**obj["torus"], **obj["coordinates"]}.items()]
    _emit(obj, args, lines, [["name", "value"]] + [[k, v] for k, v in {**obj["torus"], **obj["coordinates"]}.items()])


def cmd_leafdim(args):
    rd = _root_data(args)
    if args.word is None:
        raise DomainError("--word is required")
    d = leaf_dimension(args.word, rd)
    obj = {"stabilizer_dim": d["leaf_stabilizer_dim"], "leaf_dim": d["symplectic_leaf_dim"]}
    if args.format == "json":
        sys.stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")
    else:
        _emit(obj, args, [f"stabilizer_dim {obj['stabilizer_dim']}", f"leaf_dim {obj['leaf_dim']}"],
              [["stabilizer_dim", "leaf_dim"], [obj["stabilizer_dim"], obj["leaf_dim"]]])


def cmd_verify(args):
    from .verify import SUITES

    def show(r):
        if args.format == "text":
            status = "PASS" if r.ok else "FAIL"
            tail = f" ({r.detail})" if (r.detail and not r.ok) else ""
            print(f"{status} {r.name}{tail}", flush=True)
            if args.verbose:
                print(f"[timing] {r.name}: {r.seconds:.3f}s", file=sys.stderr)

    results = SUITES[args.suite](show)
    rows = [[r.name, "PASS" if r.ok else "FAIL", f"{r.seconds:.3f}", r.detail] for r in results]
    if args.format == "json":
        sys.stdout.write(json.dumps([{"check": r[0], "status": r[1], "detail": r[3]} for r in rows], indent=2) + "\n")
    elif args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerows([["check", "status", "detail"]] + [[r[0], r[1], r[3]] for r in rows])
    else:
        print(f"{sum(r.ok for r in results)}/{len(results)} checks passed")
    if args.report_dir:
        from .plotting import plot_timings

        d = Path(args.report_dir)
        d.mkdir(parents=True, exist_ok=True)
        with open(d / "verify.csv", "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows([["check", "status", "seconds", "detail"]] + rows)
        plot_timings([(r.name, r.seconds, r.ok) for r in results], d / "verify.png")
    if not all(r.ok for r in results):
        raise DomainError("some fixture checks failed")


# -- parser -----------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", help="Cartan type label, e.g. A2 or G2")
    common.add_argument("--form-scale", type=_rational, default=None,
                        help="scale of the invariant form (default: short roots have <a,a> = 2; A1 uses <a,a> = 1)")
    common.add_argument("--rep-pack", help="JSON representation pack replacing the bundled one")
    common.add_argument("--format", choices=("text", "json", "csv"), default=None, help="default json (text for verify)")
    common.add_argument("--verbose", action="store_true", help="timing lines on stderr")
    common.add_argument("--cache-dir", help=f"bracket-table cache (env {cache_mod.ENV_VAR} takes precedence)")
    common.add_argument("--method", choices=("interp", "chart", "both"), default="interp")

    p = argparse.ArgumentParser(prog="bruhat-flows", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("rootinfo", parents=[common], help="Cartan data, form and positive roots")

    s = sub.add_parser("brackets", parents=[common], help="Poisson brackets of the Bott-Samelson coordinates")
    s.add_argument("--word", type=_ints, required=True)
    s.add_argument("--torus", action="store_true", help="append the torus rows xi_1..xi_r")

    s = sub.add_parser("minors", parents=[common], help="interval minors, or Hamiltonians of a doubled word")
    s.add_argument("--word", type=_ints)
    s.add_argument("--u", type=_ints)
    s.add_argument("--lambda", dest="lam", type=_ints)
    s.add_argument("--interval", type=_pair)

    s = sub.add_parser("flow", parents=[common], help="closed-form Hamiltonian flow")
    s.add_argument("--word", type=_ints)
    s.add_argument("--lambda", dest="lam", type=_ints)
    s.add_argument("--interval", type=_pair)
    s.add_argument("--u", type=_ints, help="doubled word (u^{-1}, u)")
    s.add_argument("--hamiltonian", type=int, help="k for y_k of the doubled word")
    s.add_argument("--kz", type=int, help="k for the FZ chain minor M_k on G^{u,u}")
    s.add_argument("--point", type=_rationals, help="base point (torus values first for --kz)")
    s.add_argument("--zero-branch", action="store_true", help="symbolic flow on the zero level set")
    s.add_argument("--localize", help="also track 1/g for a log-canonical polynomial g")
    s.add_argument("--sample", type=int, help="number of sample intervals on [-tmax, tmax]")
    s.add_argument("--tmax", type=_rational, default=Fraction(2))
    s.add_argument("--plot", help="write a PNG of the sampled curve")
    s.add_argument("--check", action="store_true", help="compare with numerical integration")

    s = sub.add_parser("kz", parents=[common], help="FZ minor chain, KZ Hamiltonians and bracket oracle")
    s.add_argument("--u", type=_ints)
    s.add_argument("--shuffle", help="string over v,u starting with v (default alternating)")

    s = sub.add_parser("fz-embed", parents=[common], help="Fomin-Zelevinsky embedding of a double Bruhat cell")
    s.add_argument("--u", type=_ints)
    s.add_argument("--v", type=_ints)
    s.add_argument("--matrix", type=_matrix, help="row-major rationals, rows split by ';' (type A)")
    s.add_argument("--gens", type=_gens, help="product of generators, e.g. 'e1=2,f2=-1/3,h1=3,s2'")
    s.add_argument("--inverse", action="store_true", help="map --point (torus values, coordinates) back")
    s.add_argument("--point", type=_rationals)

    s = sub.add_parser("leafdim", parents=[common], help="leaf stabilizer and symplectic leaf dimensions")
    s.add_argument("--word", type=_ints)

    s = sub.add_parser("verify", parents=[common], help="run a fixture suite")
    s.add_argument("--suite", choices=("paper-fixtures",), default="paper-fixtures")
    s.add_argument("--report-dir", help="write verify.csv and verify.png here")
    return p


COMMANDS = {
    "rootinfo": cmd_rootinfo,
    "brackets": cmd_brackets,
    "minors": cmd_minors,
    "flow": cmd_flow,
    "kz": cmd_kz,
    "fz-embed": cmd_fz_embed,
    "leafdim": cmd_leafdim,
    "verify": cmd_verify,
}


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = "text" if args.command == "verify" else "json"
    for h in list(log.handlers):
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        COMMANDS[args.command](args)
    except (DomainError, NotInBigCell, ValueError, ArithmeticError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
