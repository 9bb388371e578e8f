"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 unsupported input
(a non-rational spectrum where rational values are needed).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import linalg as la
from .dlpencil import (Ansatz, ExclusionViolation, IrrationalRootsError, block_evaluation,
                       build_dl, exclusion_holds)
from .eigenstructure import IrrationalEigenvaluesPresent, full_eigenstructure, minimal_basis
from .genstruct import KroneckerSpec, UnrealizableSpec
from .mobius import MobiusMap, commuting_diagram_check, mobius_transform
from .polymat import PolyMat, PolyMatFormatError, eval_at, normal_rank, polymat_from_json
from .recovery import (OmegaMap, RecoveryError, quotient_dimensions, recover_eigenvector,
                       recover_minimal_basis, recover_P, recover_root_polys)
from .rootpoly import RootPolyError, maximal_set
from .verify import CHECKS, verify_seed, verify_spec

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3


class InputError(Exception):
    pass


class Unsupported(Exception):
    pass


# ------------------------------------------------------------ parsing

def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None


def parse_rationals(text: str) -> list[Fraction]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise InputError("empty coefficient list")
    return [parse_rational(p) for p in parts]


def parse_max_size(text: str) -> tuple[int, int, int]:
    try:
        m, n, k = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("--max-size expects m,n,k") from None
    if min(m, n) < 1 or k < 2:
        raise argparse.ArgumentTypeError("--max-size needs m,n >= 1 and k >= 2")
    return m, n, k


def load_json(path: str):
    """Parse a JSON file; '-' reads stdin. Errors carry line and column."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        ctx = lines[exc.lineno - 1] if 0 < exc.lineno <= len(lines) else ""
        caret = " " * (exc.colno - 1) + "^"
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n  {ctx}\n  {caret}") from None


def load_polymat(path: str) -> PolyMat:
    try:
        return polymat_from_json(load_json(path))
    except PolyMatFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def ansatz_for(P: PolyMat, omega_text: str) -> Ansatz:
    omega = parse_rationals(omega_text)
    if len(omega) != P.grade:
        raise InputError(f"ansatz has {len(omega)} coefficients; grade {P.grade} needs "
                         f"{P.grade} (v of grade {P.grade - 1})")
    if not any(omega):
        raise InputError("the ansatz vector must be nonzero")
    return Ansatz.from_omega(omega)


def dump(obj, compact: bool) -> str:
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return json.dumps(obj, sort_keys=True, indent=2)


def _vec(xs) -> list[str]:
    return [str(x) for x in xs]


# ----------------------------------------------------------- commands

def cmd_dl(args) -> int:
    P = load_polymat(args.input)
    if P.grade < 1:
        raise InputError("P needs grade >= 1")
    v = ansatz_for(P, args.omega)
    LP = build_dl(P, v)
    out = {
        "pencil": LP.L.to_json(),
        "k": LP.k, "omega": _vec(v.omega), "v": _vec(v.v.coeffs),
        "summary": {
            "size": list(LP.L.shape), "normal_rank_P": normal_rank(P),
            "normal_rank_L": normal_rank(LP.L), "exclusion": exclusion_holds(P, v),
        },
    }
    if args.mu0 is not None:
        try:
            be = block_evaluation(LP, P, parse_rational(args.mu0))
        except IrrationalRootsError as exc:
            raise Unsupported(str(exc)) from None
        except ValueError as exc:
            # mu0 hits a root of v, or v has a root at infinity
            raise InputError(f"--mu0: {exc}") from None
        out["blocks"] = {
            "nodes": [[str(mu), e] for mu, e in be.nodes],
            "c": _vec(be.c),
            "Q": [[_vec(r) for r in q] for q in be.Q],
        }
    print(dump(out, args.json))
    return EXIT_OK


def cmd_eig(args) -> int:
    P = load_polymat(args.input)
    cands = parse_rationals(args.candidates) if args.candidates else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IrrationalEigenvaluesPresent)
        E = full_eigenstructure(P, cands)
    print(dump(E.to_json(), args.json))
    return EXIT_OK


def _spec_list(data, path: str) -> list[KroneckerSpec]:
    items = data if isinstance(data, list) else [data]
    out = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise InputError(f"{path}: entry {i} is not a spec object")
        try:
            out.append(KroneckerSpec.from_json(item))
        except UnrealizableSpec as exc:
            raise InputError(f"{path}: entry {i}: {exc}") from None
    return out


def _human(rep: dict) -> list[str]:
    s = rep["spec"]
    head = (f"seed {rep['seed']}: {s['m']}x{s['n']} grade {s['grade']} rank {s['rank']}  "
            f"{'PASS' if rep['pass'] else 'FAIL'}")
    if rep["hypothesis"] == "violated":
        head += "  (hypothesis-violated, structural checks skipped)"
    lines = [head]
    for c in rep["checks"]:
        if c["status"] == "fail" or "seconds" in c:
            t = f"  {c['seconds']:.4f}s" if "seconds" in c else ""
            msg = f"  {c['detail']}" if c["status"] == "fail" else ""
            lines.append(f"  {c['name']:<20} {c['status']}{t}{msg}")
    return lines


def cmd_verify(args) -> int:
    checks = args.check or None
    jobs = max(1, args.jobs)
    if args.specs:
        specs = [s for p in args.specs for s in _spec_list(load_json(p), p)]
        reports = (verify_spec(s, checks, args.violate, args.mu0, args.timing) for s in specs)
        return _emit(reports, args)
    tasks = [(args.seed + i, args.max_size, checks, args.violate, args.mu0, args.timing)
             for i in range(args.count)]
    if jobs == 1:
        return _emit(map(verify_seed, tasks), args)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map yields in submission order, so output stays in seed order
        return _emit(pool.map(verify_seed, tasks), args)


def _emit(reports, args) -> int:
    ok = True
    total = 0
    for rep in reports:
        total += 1
        ok &= rep["pass"]
        if args.json:
            print(dump(rep, True), flush=True)
        else:
            print("\n".join(_human(rep)), flush=True)
    if not args.json:
        print(f"{total} instance(s), {'all passed' if ok else 'FAILURES'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_recover(args) -> int:
    L = load_polymat(args.input)
    omega = parse_rationals(args.omega)
    k = len(omega)
    if not any(omega):
        raise InputError("the ansatz vector must be nonzero")
    if L.grade > 1 or L.m % k or L.n % k:
        raise InputError(f"expected a pencil of size km x kn with k = {k}, got "
                         f"{L.m}x{L.n} of grade {L.grade}")
    L = L.regrade(1)
    m, n = L.m // k, L.n // k
    P = recover_P(L, omega, m, n)
    v = Ansatz.from_omega(omega)
    LP = build_dl(P, v)
    if LP.L != L:
        raise InputError("the input is not DL(P, v) for the given ansatz")
    om = OmegaMap.of(LP)
    out = {"P": P.to_json(), "what": args.what}
    if args.what == "minbasis":
        if not exclusion_holds(P, v):
            raise InputError("exclusion condition fails: v shares a root with the spectrum of P")
        N = minimal_basis(L)
        B = recover_minimal_basis(N, om, P)
        out["basis"] = B.basis.to_json()
        out["indices"] = list(B.indices)
    else:
        if args.lam is None:
            raise InputError(f"'{args.what}' needs --lambda")
        lam = parse_rational(args.lam)
        if v.v(lam) == 0:
            raise InputError(f"v vanishes at {lam}")
        dp, dl = quotient_dimensions(LP, lam)
        kerP = P.n - la.rank(eval_at(P, lam), P.n)
        out.update({"lambda": str(lam), "dim_ker_P": kerP,
                    "dim_quotient_P": dp, "dim_quotient_L": dl,
                    "eigenvalue": dp > 0})
        if args.what == "eigvec":
            if dp > 0:
                ker = la.nullspace(eval_at(L, lam), L.n)
                hs = [recover_eigenvector(LP, lam, u) for u in ker]
                piv = la.pivot_columns(la.transpose(hs, P.n), len(hs)) if hs else []
                out["vectors"] = [_vec(hs[j]) for j in piv]
        else:
            if dp == 0:
                out["root_polynomials"] = []
            else:
                if not exclusion_holds(P, v):
                    raise InputError("exclusion condition fails")
                NL = minimal_basis(L)
                S = maximal_set(L, lam, NL)
                back = recover_root_polys(S, om, P)
                out["root_polynomials"] = [
                    {"order": rp.order, "vector": rp.vec.to_json()} for rp in back.members
                ]
                out["maximal"] = back.maximal
    print(dump(out, args.json))
    return EXIT_OK


def cmd_mobius(args) -> int:
    P = load_polymat(args.input)
    coeffs = parse_rationals(args.map)
    if len(coeffs) != 4:
        raise InputError("--map expects a,b,c,d")
    try:
        r = MobiusMap(*coeffs)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    g = P.grade if args.grade is None else args.grade
    if P.degree != float("-inf") and g < P.degree:
        raise InputError(f"grade {g} is below the degree {P.degree} of P")
    out = {"map": r.to_json(), "grade": g, "result": mobius_transform(P, g, r).to_json()}
    if args.omega is not None:
        res = commuting_diagram_check(P, ansatz_for(P, args.omega), r)
        out["diagram"] = {"ok": res.ok, "block": list(res.block) if res.block else None}
        print(dump(out, args.json))
        return EXIT_OK if res.ok else EXIT_FAIL
    print(dump(out, args.json))
    return EXIT_OK


# ------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bezoutdl",
                                 description="Exact DL(P, v) pencils and their eigenstructure.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="compact single-line JSON output")

    p = sub.add_parser("dl", help="build DL(P, v) from a PolyMat JSON file")
    p.add_argument("input", help="PolyMat JSON path ('-' for stdin)")
    p.add_argument("--omega", required=True, help="ansatz vector, highest power first: 1,-1")
    p.add_argument("--mu0", help="also report the block evaluation at this rational point")
    common(p)
    p.set_defaults(func=cmd_dl)

    p = sub.add_parser("eig", help="complete eigenstructure of a matrix polynomial")
    p.add_argument("input")
    p.add_argument("--candidates", help="extra eigenvalue candidates, comma separated")
    common(p)
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("verify", help="run the property suite on generated instances")
    p.add_argument("specs", nargs="*", help="KroneckerSpec JSON files (object or list)")
    p.add_argument("--random", action="store_true", help="random specs (the default without files)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--max-size", type=parse_max_size, default=(4, 4, 4), metavar="m,n,k")
    p.add_argument("--check", action="append", choices=CHECKS, metavar="NAME",
                   help=f"run only this check (repeatable): {', '.join(CHECKS)}")
    p.add_argument("--mu0", help="block-evaluation probe point")
    p.add_argument("--violate", action="store_true",
                   help="pick v violating exclusion where possible")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="per-check wall time")
    p.add_argument("--json", action="store_true", help="JSON-lines reports")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("recover", help="recover data of P from a DL pencil")
    p.add_argument("input", help="pencil PolyMat JSON")
    p.add_argument("--omega", required=True)
    p.add_argument("what", choices=("minbasis", "eigvec", "rootpolys"))
    p.add_argument("--lambda", dest="lam")
    common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("mobius", help="apply a Mobius transformation")
    p.add_argument("input")
    p.add_argument("--map", required=True, metavar="a,b,c,d")
    p.add_argument("--grade", type=int)
    p.add_argument("--omega", help="also check the commuting diagram for this ansatz")
    common(p)
    p.set_defaults(func=cmd_mobius)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "mu0", None) is not None and args.command == "verify":
        try:
            parse_rational(args.mu0)
        except InputError as exc:
            ap.exit(EXIT_INPUT, f"bezoutdl: error: {exc}\n")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"bezoutdl: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (Unsupported, IrrationalRootsError) as exc:
        print(f"bezoutdl: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ExclusionViolation, RecoveryError, RootPolyError) as exc:
        print(f"bezoutdl: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
