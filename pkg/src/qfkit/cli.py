"""Command-line front end: ``qfkit <verb> [options] FILE``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import intmat
from .audit import Verdict, audit_regularity
from .errors import QFError, LatticeError
from .jsonio import BadInput, dumps, lattice_from_obj, read_json, read_lattice
from .padic import (INF, characteristic_primes, hasse_invariant, is_anisotropic_lattice,
                    jordan_decompose, prime_factors)
from .reduction import successive_minima
from .represent import genus_represents, global_represents, local_represents
from .watson import drive_to_full_norm, lambda_normalized, WatsonSequence

EXIT_OK, EXIT_MODULE, EXIT_USAGE, EXIT_INPUT = 0, 2, 64, 65


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qfkit", description="Exact tools for positive definite integral lattices.")
    ap.add_argument("--seed", type=int, help="accepted for compatibility; ignored")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("invariants", help="discriminant, scale, norm and local data")
    p.add_argument("lattice")

    p = sub.add_parser("minima", help="successive minima with witnesses")
    p.add_argument("lattice")

    p = sub.add_parser("jordan", help="Jordan splitting at a prime")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("lattice")

    p = sub.add_parser("watson", help="normalized Watson steps")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--drive", action="store_true", help="iterate until the norm image is full")
    p.add_argument("--cap", type=int)
    p.add_argument("lattice")

    p = sub.add_parser("represent", help="representation tests")
    p.add_argument("--ambient", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--primitive", action="store_true")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--local", type=int, metavar="P")
    mode.add_argument("--genus", action="store_true")
    mode.add_argument("--global", dest="glob", action="store_true")
    p.add_argument("--effort", type=int)

    p = sub.add_parser("audit", help="bounded (strict) n-regularity audit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("lattice")

    p = sub.add_parser("charprimes", help="characteristic primes of a quinary space")
    p.add_argument("space", help='JSON {"diagonal": [...]} or a rank-5 lattice')
    return ap


def _prime(p: int) -> int:
    if p < 2 or prime_factors(p) != [p]:
        raise _Usage(f"{p} is not a prime")
    return p


def _invariants(args):
    L = read_lattice(args.lattice)
    diag = intmat.rational_diagonal(L.gram)
    hasse = {INF: hasse_invariant(diag, INF)}
    local = {}
    for p in prime_factors(2 * L.discriminant):
        hasse[str(p)] = hasse_invariant(diag, p)
        local[str(p)] = {"anisotropic": is_anisotropic_lattice(L, p),
                         "jordan": jordan_decompose(L, p).to_json()["components"]}
    return {"rank": L.rank, "discriminant": L.discriminant, "scale": L.scale, "norm": L.norm,
            "normalized": L.is_normalized, "hasse": hasse, "local": local}, EXIT_OK


def _minima(args):
    return successive_minima(read_lattice(args.lattice)), EXIT_OK


def _jordan(args):
    return jordan_decompose(read_lattice(args.lattice), _prime(args.p)), EXIT_OK


def _watson(args):
    L = read_lattice(args.lattice)
    p = _prime(args.p)
    if args.drive:
        res = drive_to_full_norm(L, p, args.cap)
        out = res.sequence.to_json()
        out["result"] = [list(r) for r in res.lattice.gram]
        out["hyperbolic_split"] = res.hyperbolic_split
        return out, EXIT_OK
    _, _, step = lambda_normalized(L, p)
    return WatsonSequence(p, L, [step]), EXIT_OK


def _represent(args):
    L, M = read_lattice(args.ambient), read_lattice(args.target)
    prim = args.primitive
    if args.local is not None:
        v = local_represents(M, L, _prime(args.local), prim)
        ok = v.primitively_represented if prim else v.represented
        return {"verdict": "Represented" if ok else "NotRepresented", "witness": None,
                "per_prime": {str(v.p): v}}, EXIT_OK
    if args.glob:
        kw = {} if args.effort is None else {"effort": args.effort}
        res = global_represents(M, L, prim, **kw)
        return {"verdict": res.status.value, "witness": res.witness, "nodes": res.nodes,
                "per_prime": None}, EXIT_OK
    ok, per = genus_represents(M, L, prim)
    return {"verdict": "Represented" if ok else "NotRepresented", "witness": None,
            "per_prime": per}, EXIT_OK


def _audit(args):
    L = read_lattice(args.lattice)
    rep = audit_regularity(L, args.n, args.bound, args.strict)
    code = {Verdict.VERIFIED: 0, Verdict.COUNTEREXAMPLE: 1, Verdict.INCONCLUSIVE: 2}[rep.verdict]
    return rep, code


def _charprimes(args):
    obj = read_json(args.space)
    if isinstance(obj, dict) and "diagonal" in obj:
        diag = obj["diagonal"]
        if not isinstance(diag, list) or len(diag) != 5:
            raise BadInput('"diagonal" must be a list of five entries')
        try:
            diag = [Fraction(str(x)) for x in diag]
        except (ValueError, ZeroDivisionError) as exc:
            raise BadInput(f"bad diagonal entry: {exc}") from exc
    else:
        diag = intmat.rational_diagonal(lattice_from_obj(obj).gram)
    return characteristic_primes(diag), EXIT_OK


_VERBS = {"invariants": _invariants, "minima": _minima, "jordan": _jordan, "watson": _watson,
          "represent": _represent, "audit": _audit, "charprimes": _charprimes}


def _fail(code: str, detail: str, status: int) -> int:
    print(json.dumps({"error": code, "detail": detail}, sort_keys=True), file=sys.stderr)
    return status


def run(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        result, status = _VERBS[args.verb](args)
    except _Usage as exc:
        return _fail("bad_arguments", str(exc), EXIT_USAGE)
    except (BadInput, LatticeError) as exc:
        return _fail(getattr(exc, "code", "bad_input"), str(exc), EXIT_INPUT)
    except QFError as exc:
        return _fail(exc.code, str(exc), EXIT_MODULE)
    print(dumps(result))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
