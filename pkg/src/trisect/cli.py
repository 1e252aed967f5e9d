"""Command-line entry point.

Exit status: 0 when every check holds, 1 when a check fails, 2 for a bad
invocation (unknown form, malformed input, unsupported q, violated
parameter precondition).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Sequence

from . import census, crossalg, forms, geometry, hypersurface, trace_construct, verify
from .errors import TooLarge, TrisectError
from .gf import GF, ext_pair, parse_elem

SCHEMA = "trisect/1"


class UsageError(Exception):
    pass


# -- shared options -------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--report", choices=("json", "text"), default="json", help="output format")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: TRISECT_THREADS or 1)")
    p.add_argument("--timing", action="store_true", help="include elapsed seconds in the report")


def _add_form(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--form", help="JSON file written by 'construct', or a catalog name")
    g.add_argument("--catalog", help=f"named form: {', '.join(forms.CATALOG_NAMES)}")
    g.add_argument("--text", help="inline form such as 'f123+2*f156'")
    p.add_argument("--q", type=int, help="field order (prime power); implied by a form file")
    p.add_argument("--n", type=int, help="dimension for --text forms")
    p.add_argument("--mu", help="parameter mu: a field code or comma-separated coefficients")


def _field(q: int | None):
    if q is None:
        raise UsageError("--q is required")
    try:
        return GF(q)
    except TrisectError as exc:
        raise UsageError(f"--q {q}: {exc}") from exc


def _load_form(args) -> forms.TriForm:
    if args.form is not None and os.path.exists(args.form):
        try:
            with open(args.form, encoding="utf-8") as fh:
                data = json.load(fh)
            T = forms.TriForm.from_json(data.get("form", data))
        except (OSError, ValueError, KeyError, TypeError, TrisectError) as exc:
            raise UsageError(f"--form {args.form}: {exc}") from exc
        if args.q is not None and args.q != T.field.order:
            raise UsageError(f"--q {args.q} does not match the form file (q={T.field.order})")
        return T
    F = _field(args.q)
    try:
        mu = parse_elem(F, args.mu) if args.mu is not None else None
    except (TrisectError, ValueError) as exc:
        raise UsageError(f"--mu {args.mu}: {exc}") from exc
    if args.text is not None:
        try:
            return forms.parse_form(args.text, F, n=args.n, mu=mu)
        except (TrisectError, ValueError) as exc:
            raise UsageError(f"--text: {exc}") from exc
    name = args.catalog if args.catalog is not None else args.form
    flag = "--catalog" if args.catalog is not None else "--form"
    if name not in forms.CATALOG_NAMES:
        raise UsageError(f"{flag} {name!r}: unknown catalog form (choose from {', '.join(forms.CATALOG_NAMES)})")
    try:
        return forms.catalog(name, F, mu)
    except TrisectError as exc:
        raise UsageError(f"{flag} {name} / --mu: {exc}") from exc


def _form_info(T: forms.TriForm) -> dict:
    return {"n": T.n, "q": T.field.order, "text": forms.format_form(T)}


def _emit(args, payload: dict, text_lines: list[str], t0: float) -> None:
    body = {"schema": SCHEMA, **payload}
    if getattr(args, "timing", False):
        body["elapsed_seconds"] = round(time.perf_counter() - t0, 3)
    if getattr(args, "report", "json") == "json":
        out = json.dumps(body, indent=2, sort_keys=False) + "\n"
    else:
        out = "\n".join(text_lines) + "\n"
        if getattr(args, "timing", False):
            out += f"elapsed: {body['elapsed_seconds']} s\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# -- subcommands ----------------------------------------------------------

def cmd_construct(args, t0) -> int:
    q = args.q
    _field(q)
    pair = ext_pair(q)
    even = pair.base.p == 2
    if args.family == "odd" and even:
        raise UsageError(f"--family odd needs odd --q, got {q}")
    if args.family == "even" and not even:
        raise UsageError(f"--family even needs --q a power of 2, got {q}")
    try:
        mu = parse_elem(pair.base, args.mu).value if args.mu is not None else None
        setup = trace_construct.setup_for(q, mu)
        beta = parse_elem(pair.ext, args.beta) if args.beta is not None else trace_construct.default_beta(pair)
        T = trace_construct.lift(beta, setup)
    except (TrisectError, ValueError) as exc:
        raise UsageError(f"--mu/--beta: {exc}") from exc
    coeffs = trace_construct.trace_coeffs(beta, setup)
    payload = {
        "command": "construct",
        "family": args.family,
        "setup": setup.to_json(),
        "beta": beta.coeffs(),
        "trace_coeffs": [c.value for c in coeffs],
        "form": T.to_json(),
        "text": forms.format_form(T),
    }
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            json.dump({"schema": SCHEMA, "form": T.to_json()}, fh, indent=2)
            fh.write("\n")
    _emit(args, payload, [forms.format_form(T)], t0)
    return 0


def _line_report(T, args) -> tuple[geometry.LineSet, geometry.SpreadReport]:
    L = geometry.singular_lines(T, args.threads)
    rep = geometry.spread_check(L)
    if rep.is_partition:
        rep.is_normal = geometry.is_normal_spread(L)
    return L, rep


def cmd_lines(args, t0) -> int:
    T = _load_form(args)
    L, rep = _line_report(T, args)
    payload = {"command": "lines", "form": _form_info(T), "report": rep.to_json()}
    if args.list:
        payload["lines"] = [[list(r) for r in ln.rows] for ln in L]
    text = [f"{rep.line_count} singular lines; coverage {rep.coverage_min}..{rep.coverage_max}; "
            f"partition={rep.is_partition} normal={rep.is_normal}"]
    _emit(args, payload, text, t0)
    return 0


def cmd_spread_check(args, t0) -> int:
    T = _load_form(args)
    _, rep = _line_report(T, args)
    q = T.field.order
    ok = rep.is_partition and rep.is_normal is True
    payload = {"command": "spread-check", "form": _form_info(T), "report": rep.to_json(),
               "expected_line_count": q**4 + q**2 + 1 if T.n == 6 else None, "passed": ok}
    text = [f"line_count={rep.line_count} is_partition={rep.is_partition} is_normal={rep.is_normal}",
            "PASS" if ok else "FAIL"]
    _emit(args, payload, text, t0)
    return 0 if ok else 1


def cmd_union(args, t0) -> int:
    T = _load_form(args)
    idx = hypersurface.union_indices(T, args.threads)
    payload = {"command": "union", "form": _form_info(T), "union_point_count": int(idx.size),
               "point_count": geometry.point_count(T.n, T.field.order)}
    text = [f"{idx.size} of {payload['point_count']} points lie on singular lines"]
    if args.classify:
        try:
            c = hypersurface.classify_union(T, args.threads)
        except TrisectError as exc:
            raise UsageError(f"--classify: {exc}") from exc
        payload["classification"] = c.to_json()
        text.append(f"kind={c.kind.value} rank={c.rank}")
        text += [f"  {P}" for P in c.basis]
    _emit(args, payload, text, t0)
    return 0


def cmd_ts_search(args, t0) -> int:
    T = _load_form(args)
    if not 0 < args.r <= T.n:
        raise UsageError(f"--r {args.r}: must lie in 1..{T.n}")
    res = geometry.totally_singular_search(T, args.r, args.budget)
    payload = {"command": "ts-search", "form": _form_info(T), "r": args.r, "budget": args.budget,
               "nodes": res.nodes, "partial": res.partial, "count": len(res),
               "subspaces": [S.tolist() for S in res.subspaces]}
    text = [f"{len(res)} totally singular {args.r}-spaces" + (" (partial: budget exhausted)" if res.partial else "")]
    text += [f"  {S.tolist()}" for S in res.subspaces]
    _emit(args, payload, text, t0)
    return 0


def cmd_census(args, t0) -> int:
    if args.table:
        rows = census.table_rows(args.q or 2)
        ok = all(r.get("relative_error", 0) <= args.tolerance for r in rows)
        payload = {"command": "census", "tolerance": args.tolerance, "rows": rows, "passed": ok}
        text = [f"n={r['n']:2d}  N={r['float']:.4g}" + (
            f"  ref={r['reference']}  rel.err={r['relative_error']:.4f}" if "reference" in r else "") for r in rows]
        text.append("PASS" if ok else "FAIL")
        _emit(args, payload, text, t0)
        return 0 if ok else 1
    if args.n is None or args.q is None:
        raise UsageError("census needs --table, or both --n and --q")
    if args.n < 3:
        raise UsageError(f"--n {args.n}: must be at least 3")
    _field(args.q)
    r = census.orbit_ratio(args.n, args.q)
    payload = {"command": "census", "n": args.n, "q": args.q, "gl_order": str(census.gl_order(args.n, args.q)),
               "ratio": r.to_json()}
    _emit(args, payload, [f"N({args.n},{args.q}) = {r.numerator}/{r.denominator} ~ {float(r):.6g}"], t0)
    return 0


def cmd_orbits(args, t0) -> int:
    F = _field(args.q)
    try:
        P = census.orbit_partition(args.n, args.q)
    except TooLarge as exc:
        raise UsageError(f"--n {args.n} --q {args.q}: {exc}") from exc
    payload = {"command": "orbits", **P.to_json()}
    ok = True
    text = [f"{len(P)} orbits of GL({args.n},{args.q})"] + [f"  size {o.size:>8}  rep {o.rep}" for o in P.orbits]
    if args.check:
        chk = census.check_orbits(P, samples_per_orbit=args.samples, seed=args.seed)
        payload["check"] = chk.to_json()
        ok = chk.ok
        if F.degree == 1:
            b = census.burnside_orbit_count(args.n, args.q)
            payload["burnside_orbit_count"] = b
            ok = ok and b == len(P)
        payload["passed"] = ok
        text.append("PASS" if ok else "FAIL")
    _emit(args, payload, text, t0)
    return 0 if ok else 1


def cmd_crossalg(args, t0) -> int:
    rep = crossalg.verify(args.samples, args.seed)
    payload = {"command": "crossalg", **rep.to_json()}
    text = [f"{'PASS' if c.passed else 'FAIL'} {c.name} ({c.cases} cases)" for c in rep.checks]
    _emit(args, payload, text, t0)
    return 0 if rep.all_passed else 1


def cmd_verify_all(args, t0) -> int:
    ctx = verify.Context(q_max=args.q_max, samples=args.samples, seed=args.seed, threads=args.threads)
    only = args.only.split(",") if args.only else None
    if only:
        known = {k for k, _, _ in verify.CLAIMS}
        bad = [k for k in only if k not in known]
        if bad:
            raise UsageError(f"--only: unknown claim(s) {', '.join(bad)}")
    results = verify.verify_all(ctx, only)
    failed = [r.key for r in results if r.passed is False]
    payload = {"command": "verify-all", "claims": [r.to_json(args.timing) for r in results],
               "failed": failed, "passed": not failed}
    text = [f"{r.status}  {r.key:28s} {r.title}" for r in results]
    text.append("all claims hold" if not failed else f"failed: {', '.join(failed)}")
    _emit(args, payload, text, t0)
    return 1 if failed else 0


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trisect", description="Singular lines of alternating trilinear forms over GF(q).")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="trace construction of a spread form on V(6,q)",
                       description="Build Tr(beta*det) on GF(q^2)^3 viewed as V(6,q); odd q uses "
                                   "rho^2 = mu non-square, even q the trace conditions on rho.")
    c.add_argument("--family", choices=("odd", "even"), required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--mu", help="odd q: the non-square rho^2; even q, h even: target Tr(rho^3)")
    c.add_argument("--beta", help="element of GF(q^2) as code or 'a0,a1' (default 1/2 or 1)")
    c.add_argument("--emit", help="write the form JSON here")
    _add_common(c)
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("lines", help="singular lines and their coverage statistics",
                       description="Compute every line <a,b> with T(a,b,x)=0 for all x.")
    _add_form(c)
    c.add_argument("--list", action="store_true", help="include the lines themselves")
    _add_common(c)
    c.set_defaults(func=cmd_lines)

    c = sub.add_parser("spread-check", help="do the singular lines form a normal line-spread?",
                       description="Exit 0 when the singular lines partition the points and every solid "
                                   "spanned by two of them is partitioned too; exit 1 otherwise.")
    _add_form(c)
    _add_common(c)
    c.set_defaults(func=cmd_spread_check)

    c = sub.add_parser("union", help="union of the singular lines (odd n) and its equation",
                       description="Points on singular lines; --classify identifies the whole space, "
                                   "a hyperplane or a quadric by fitting.")
    _add_form(c)
    c.add_argument("--classify", action="store_true")
    _add_common(c)
    c.set_defaults(func=cmd_union)

    c = sub.add_parser("ts-search", help="totally singular subspaces of a given dimension")
    _add_form(c)
    c.add_argument("--r", type=int, required=True, help="subspace dimension")
    c.add_argument("--budget", type=int, default=1_000_000, help="search node budget")
    _add_common(c)
    c.set_defaults(func=cmd_ts_search)

    c = sub.add_parser("census", help="q^C(n,3)/|GL(n,q)| exactly, or the n = 5..11 table",
                       description="Exact orbit-count lower bounds; --table compares n = 5..11, q = 2 "
                                   "with the commonly quoted values.")
    c.add_argument("--table", action="store_true")
    c.add_argument("--n", type=int)
    c.add_argument("--q", type=int)
    c.add_argument("--tolerance", type=float, default=0.02, help="relative tolerance for --table")
    _add_common(c)
    c.set_defaults(func=cmd_census)

    c = sub.add_parser("orbits", help="GL(n,q) orbits on trivectors by breadth-first search")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--check", action="store_true", help="verify sizes, Burnside count and fingerprints")
    c.add_argument("--samples", type=int, default=8, help="fingerprinted members per orbit with --check")
    c.add_argument("--seed", type=int, default=0)
    _add_common(c)
    c.set_defaults(func=cmd_orbits)

    c = sub.add_parser("crossalg", help="exact checks of the 7-dim cross product and 8-dim algebra")
    c.add_argument("--verify", action="store_true", help="run the checks (the default action)")
    c.add_argument("--samples", type=int, default=crossalg.DEFAULT_SAMPLES)
    c.add_argument("--seed", type=int, default=0)
    _add_common(c)
    c.set_defaults(func=cmd_crossalg)

    c = sub.add_parser("verify-all", help="run every headline check and print a pass/fail matrix")
    c.add_argument("--q-max", type=int, default=None, help="skip field sizes above this")
    c.add_argument("--only", help="comma-separated claim keys")
    c.add_argument("--samples", type=int, default=crossalg.DEFAULT_SAMPLES)
    c.add_argument("--seed", type=int, default=0)
    _add_common(c)
    c.set_defaults(func=cmd_verify_all)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        return args.func(args, t0)
    except UsageError as exc:
        print(f"trisect {args.command}: {exc}", file=sys.stderr)
        return 2
    except TooLarge as exc:
        print(f"trisect {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
