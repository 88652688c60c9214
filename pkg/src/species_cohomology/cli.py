"""Command line front end; every command prints (or writes) a JSON report.

Exit codes: 0 success, 1 a verification failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from .deformations import integrate, q_form
from .koszul import KoszulCochain, koszul_basis, koszul_cohomology, koszul_dimension, HEAVY_GRAPH_ARITY
from .oracle import Cochain, cobar_homology, pair_orbits, truncated_cohomology
from .products import cup_koszul, schubert_cocycle
from .species import (
    SpeciesValidationError,
    UnknownSpeciesError,
    _user_registry_dir,
    get_species,
    load_custom_species,
)
from .suites import SUITES, run_suite


class InputError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _threads():
    raw = os.environ.get("SPECIES_COHOMOLOGY_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"SPECIES_COHOMOLOGY_THREADS must be an integer, got {raw!r}")


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _describe_koszul(f):
    sp = f.species
    return {sp.describe(r): v for r, v in sorted(f.coefficients.items())}


def _species(name):
    try:
        return get_species(name)
    except UnknownSpeciesError:
        raise InputError(f"unknown species {name!r}")


def cmd_cohomology(args):
    sp = _species(args.species)
    heavy_cap = HEAVY_GRAPH_ARITY - 1
    if sp.species_id == "Gr" and args.max_degree > heavy_cap and not args.allow_heavy:
        raise InputError(f"Gr is capped at degree {heavy_cap}; pass --allow-heavy for more")
    if sp.max_arity is not None:
        # degree p needs structures of arity p+1 unless the differential is known to vanish
        limit = sp.max_arity - (0 if args.method == "koszul" and sp.cosymmetric else 1)
        if args.max_degree > limit:
            raise InputError(f"{sp.species_id} is only tabulated up to arity {sp.max_arity}")

    def one(p):
        if args.method == "koszul":
            if sp.species_id == "Gr" and p >= HEAVY_GRAPH_ARITY:
                return {"degree": p, "dimension": koszul_dimension(sp, p, allow_heavy=True), "representatives": None}
            dim, reps = koszul_cohomology(sp, p)
            return {"degree": p, "dimension": dim, "representatives": [_describe_koszul(r) for r in reps]}
        N = max(p + 1, args.arity_bound or 0)
        dim, _ = truncated_cohomology(sp, p, N)
        return {"degree": p, "dimension": dim, "arity_bound": N}

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        table = list(pool.map(one, range(args.max_degree + 1)))
    return {"species": sp.species_id, "method": args.method, "table": table, "witnesses": []}, 0


def cmd_verify(args):
    checks = run_suite(args.suite, args.max_arity)
    failed = [c for c in checks if not c["passed"]]
    report = {
        "species": None,
        "method": f"verify:{args.suite}",
        "table": checks,
        "witnesses": [c.get("witness") for c in failed],
        "passed": not failed,
    }
    return report, (1 if failed else 0)


def cmd_cup(args):
    sp = _species(args.species)
    rows = []
    for a in koszul_basis(sp, args.p):
        for b in koszul_basis(sp, args.q):
            prod = cup_koszul(sp, KoszulCochain(sp, args.p, {a: 1}), KoszulCochain(sp, args.q, {b: 1}))
            rows.append({"left": sp.describe(a), "right": sp.describe(b), "product": _describe_koszul(prod)})
    return {"species": sp.species_id, "method": "koszul-cup", "table": rows, "witnesses": []}, 0


def cmd_cobar(args):
    sp = _species(args.species)
    if args.arity < 1:
        raise InputError("arity must be at least 1")
    dims = cobar_homology(sp, args.arity)
    table = [{"degree": k - args.arity, "word_length": k, "dimension": d} for k, d in sorted(dims.items())]
    return {"species": sp.species_id, "method": "cobar", "table": table, "witnesses": []}, 0


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(v) for v in x)
    return x


def _cocycle_from_file(sp, path, N):
    """A 2-cochain from ``{"entries": [{"S": [...], "T": [...], "z": ..., "value": "p/q"}]}``.

    Entries are spread over their orbits; missing orbits are zero.
    """
    doc = json.loads(Path(path).read_text())
    values = {}
    for k, entry in enumerate(doc.get("entries", [])):
        try:
            F = (tuple(entry["S"]), tuple(entry["T"]))
            z = _tuplify(entry["z"])
            n = len(F[0]) + len(F[1])
            table = pair_orbits(sp, n, 2)
            values[(n, table.index[(F, z)])] = Fraction(entry["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"entries[{k}] is not a valid (S, T, z, value) entry: {exc}")

    def fn(F, z):
        n = sum(len(b) for b in F)
        return values.get((n, pair_orbits(sp, n, 2).index[(F, z)]), 0)

    return Cochain(sp, 2, fn, True, Path(path).stem)


def cmd_deform(args):
    sp = _species(args.species)
    N = args.max_arity
    if args.cocycle == "schubert":
        if sp.species_id != "L":
            raise InputError("the schubert cocycle lives on L")
        delta1 = schubert_cocycle(sp)
    elif args.cocycle == "cardinality-product":
        delta1 = Cochain(sp, 2, lambda F, z: len(F[0]) * len(F[1]), True, "|S||T|")
    elif Path(args.cocycle).is_file():
        delta1 = _cocycle_from_file(sp, args.cocycle, N)
    else:
        raise InputError(f"unknown cocycle {args.cocycle!r}; use schubert, cardinality-product or a file")
    from .deformations import NotACocycleError

    try:
        series = integrate(delta1, args.order, N)
    except NotACocycleError as exc:
        return {
            "species": sp.species_id,
            "method": "deform",
            "table": [],
            "witnesses": [exc.witness],
            "error": str(exc),
        }, 1
    table = [{"order": n, "holds": r["ok"]} for n, r in sorted(series.report.items())]
    witnesses = [r["witness"] for r in series.report.values() if not r["ok"]]
    report = {
        "species": sp.species_id,
        "method": "deform",
        "table": table,
        "q_form": q_form(delta1, min(N, 3)),
        "witnesses": witnesses,
    }
    return report, (1 if witnesses else 0)


def cmd_species_add(args):
    path = Path(args.file)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}")
    sid = load_custom_species(doc)
    dest_dir = _user_registry_dir()
    dest_dir.mkdir(parents=True, exist_ok=True)
    dest = dest_dir / f"{sid}.json"
    shutil.copyfile(path, dest)
    return {"species": sid, "method": "species-add", "table": [{"stored": str(dest)}], "witnesses": []}, 0


def build_parser():
    parser = argparse.ArgumentParser(prog="species-cohomology", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", help="cohomology dimensions and representatives")
    p.add_argument("--species", required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--method", choices=("koszul", "oracle"), default="koszul")
    p.add_argument("--arity-bound", type=int, default=None, help="oracle truncation (default degree+1)")
    p.add_argument("--allow-heavy", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--max-arity", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cup", help="cup product structure constants on Koszul bases")
    p.add_argument("--species", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cup)

    p = sub.add_parser("cobar", help="homology of the cobar construction at one arity")
    p.add_argument("--species", required=True)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cobar)

    p = sub.add_parser("deform", help="integrate a 2-cocycle and check the deformation equations")
    p.add_argument("--species", required=True)
    p.add_argument("--cocycle", required=True)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--max-arity", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("species", help="manage custom species")
    ssub = p.add_subparsers(dest="action", required=True)
    a = ssub.add_parser("add", help="validate and store a custom species document")
    a.add_argument("file")
    a.add_argument("--out")
    a.set_defaults(func=cmd_species_add)
    return parser


def _emit(report, out):
    text = json.dumps(_jsonable(report), indent=2, sort_keys=False)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report, code = args.func(args)
    except (InputError, SpeciesValidationError, ValueError) as exc:
        witness = getattr(exc, "witness", None)
        report = {"error": type(exc).__name__, "message": str(exc), "witnesses": [witness] if witness else []}
        _emit(report, None)
        return 2
    report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    _emit(report, getattr(args, "out", None))
    return code


if __name__ == "__main__":
    sys.exit(main())
