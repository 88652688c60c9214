"""Named verification suites used by ``species-cohomology verify``.

Every suite returns a list of check records ``{"check", "passed", "detail"}``;
failed checks carry a ``witness`` entry when one is available.
"""

from __future__ import annotations

from .combinatorics import stirling1_unsigned
from .deformations import check_deformation, integrate, obstruction
from .koszul import (
    KoszulCochain,
    cochain_to_koszul,
    koszul_basis,
    koszul_cohomology,
    koszul_dimension,
    linear_order_generator,
)
from .linalg import NotAComplexError, rank
from .oracle import cobar_homology, cocycle_witness, coxeter_cohomology, in_coboundaries, truncated_cohomology
from .products import (
    cardinality_cocycle,
    cup_koszul,
    cup_value,
    graph_path_cocycle,
    kunneth_matrix,
    schubert_cocycle,
)
from .species import get_species

__all__ = ["SUITES", "run_suite"]


def _record(name, passed, detail=None, witness=None):
    rec = {"check": name, "passed": bool(passed), "detail": detail}
    if witness is not None and not passed:
        rec["witness"] = witness
    return rec


ORACLE_DEGREES = {"E": 4, "L": 4, "P": 3, "C": 3, "Gr": 3, "S^1": 3, "S^2": 3, "S^3": 3, "marked": 3}


def koszul_vs_oracle(max_arity=None):
    out = []
    for sid, top in ORACLE_DEGREES.items():
        if max_arity is not None:
            top = min(top, max_arity - 1)
        for q in range(top + 1):
            k = koszul_cohomology(sid, q)[0]
            o = truncated_cohomology(sid, q, q + 1)[0]
            out.append(_record(f"{sid} H^{q}", k == o, {"koszul": k, "oracle": o}))
    return out


def coxeter(max_arity=None):
    out = []
    for j in range(1, (max_arity or 6) + 1):
        res = coxeter_cohomology(j)
        dims = res["dims"]
        concentrated = all(d == (1 if p == j - 2 else 0) for p, d in dims.items())
        sign_ok = j == 1 or res["character"] == -1
        out.append(
            _record(
                f"Sigma({j})",
                concentrated and sign_ok and not res["top_is_coboundary"],
                {"dims": {str(p): d for p, d in dims.items()}, "character": res["character"]},
            )
        )
    return out


def cobar(max_arity=None):
    out = []
    for n in range(1, (max_arity or 4) + 1):
        for sid in ("E", "L"):
            try:
                dims = cobar_homology(sid, n)
            except NotAComplexError as exc:
                out.append(_record(f"Omega({sid})[{n}] d^2 = 0", False, str(exc)))
                continue
            if sid == "E":
                expected = {k: (1 if k == n else 0) for k in range(1, n + 1)}
            else:
                expected = {k: stirling1_unsigned(n, k) for k in range(1, n + 1)}
            out.append(
                _record(
                    f"Omega({sid})[{n}]",
                    dims == expected,
                    {"by_degree": {str(k - n): d for k, d in dims.items()}, "expected": {str(k - n): d for k, d in expected.items()}},
                )
            )
    return out


def cup_relations(max_arity=None):
    f = linear_order_generator
    out = []
    checks = [
        ("f2 cup f2 = 2 f4", cup_koszul("L", f(2), f(2)) == 2 * f(4)),
        ("f2 cup f4 = 3 f6", cup_koszul("L", f(2), f(4)) == 3 * f(6)),
        ("f1 cup f2 = f3", cup_koszul("L", f(1), f(2)) == f(3)),
        ("f1 cup f3 = 0", cup_koszul("L", f(1), f(3)).is_zero()),
    ]
    e1 = KoszulCochain("E", 1, {(): 1})
    checks.append(("E: f1 cup f1 = 0", cup_koszul("E", e1, e1).is_zero()))
    out.extend(_record(name, ok) for name, ok in checks)
    top = max_arity or 5
    for sid in ("E", "L", "P", "C"):
        witness = _commutativity_failure(get_species(sid), top)
        out.append(_record(f"{sid} graded commutativity p+q<={top}", witness is None, witness=witness))
    return out


def _commutativity_failure(sp, top):
    for p in range(top + 1):
        for q in range(top + 1 - p):
            for a in _basis(sp, p):
                for b in _basis(sp, q):
                    sign = -1 if p * q % 2 else 1
                    if cup_koszul(sp, a, b) != cup_koszul(sp, b, a) * sign:
                        return {"f": repr(a), "g": repr(b)}
    return None


def _basis(sp, p):
    return [KoszulCochain(sp, p, {b: 1}) for b in koszul_basis(sp, p)]


def deformation(max_arity=None):
    N = max_arity or 4
    out = []
    kappa = cardinality_cocycle("P")
    w = cocycle_witness(kappa, N)
    out.append(_record("kappa is a cocycle on P", w is None, witness=w))
    out.append(_record("kappa is not a coboundary on P", not in_coboundaries(kappa, N)))
    sch = schubert_cocycle("L")
    series = integrate(sch, 4, N)
    for n, rep in series.report.items():
        out.append(_record(f"(delta_{n}) for exp(schubert)", rep["ok"], witness=rep["witness"]))
    w = cocycle_witness(obstruction(sch), N)
    out.append(_record("first obstruction is a 3-cocycle", w is None, witness=w))
    truncated = type(series)(series.species, N, series.coefficients[:2])
    ok, w = check_deformation(truncated, 2)
    out.append(_record("(delta_2) fails without Delta_2", not ok, {"witness": w}))
    return out


def kunneth(max_arity=None):
    out = []
    for n in range((max_arity or 5) + 1):
        lhs = koszul_dimension("L*E", n)
        rhs = sum(koszul_dimension("L", p) * koszul_dimension("E", n - p) for p in range(n + 1))
        M = kunneth_matrix("L", "E", n)
        out.append(_record(f"K^{n}(L*E)", lhs == rhs and rank(M) == M.cols == M.rows, {"dim": lhs, "product": rhs}))
    return out


def graph_path(max_arity=None):
    N = max_arity or 6
    out = []
    p4 = graph_path_cocycle()
    w = cocycle_witness(p4, N)
    out.append(_record(f"delta p4 = 0 up to arity {N}", w is None, witness=w))
    f = cochain_to_koszul(p4)
    path = ((1, 2), (2, 3), (3, 4))
    out.append(_record("Koszul image of p4 on the 4-path", f(path) != 0, {"value": f(path)}))
    two = path + ((5, 6), (6, 7), (7, 8))
    v = cup_value("Gr", f, f, two)
    out.append(_record("p4 cup p4 on two disjoint 4-paths", v != 0, {"value": v}))
    return out


SUITES = {
    "koszul-vs-oracle": koszul_vs_oracle,
    "coxeter": coxeter,
    "cobar": cobar,
    "cup-relations": cup_relations,
    "deformation": deformation,
    "kunneth": kunneth,
    "graph-path": graph_path,
}


def run_suite(name, max_arity=None):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](max_arity)
