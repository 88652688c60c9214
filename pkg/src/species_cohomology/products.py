"""Cup products, the external (Kunneth) product and some distinguished cocycles.

Sign convention: for a decomposition ``(S, T)`` of ``[p+q]`` the shuffle
carrying ``S`` onto ``[1, p]`` and ``T`` onto ``[p+1, p+q]`` (both monotonically)
has sign ``(-1)**schubert(T, S)``, the number of pairs ``t < s``.  Both the
Koszul cup product and the external product use this sign.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .combinatorics import complement, schubert, standardize
from .koszul import KoszulCochain, koszul_basis
from .linalg import SparseMatrix, rank
from .oracle import Cochain
from .species import CauchyProduct, get_species

__all__ = [
    "cup_value",
    "cup_koszul",
    "cup_cochain",
    "kunneth_product",
    "kunneth_matrix",
    "unit_koszul",
    "unit_cochain",
    "cardinality_cocycle",
    "schubert_cocycle",
    "graph_path_cocycle",
    "count_path_maps",
]


def _sch_sign(S, T):
    return -1 if schubert(T, S) % 2 else 1


def cup_value(species, f, g, z):
    """``(f cup g)(z)`` for one structure ``z`` on ``[p+q]``, summing over all ``(S, T)``.

    ``f`` and ``g`` only need to be callables on structures of arity ``p`` and
    ``q``; useful when ``p + q`` is too large for an orbit table.
    """
    sp = get_species(species)
    p, q = f.degree, g.degree
    n = p + q
    total = Fraction(0)
    for S in combinations(range(1, n + 1), p):
        T = complement(S, n)
        x = sp.restrict_right(n, z, S)
        if x is None:
            continue
        fx = f(x)
        if not fx:
            continue
        y = sp.restrict_left(n, z, T)
        if y is None:
            continue
        total += _sch_sign(S, T) * fx * g(y)
    return total


def cup_koszul(species, f, g):
    """``f cup g`` in ``K^(p+q)``, evaluated on representatives."""
    sp = get_species(species)
    if f.species is not sp or g.species is not sp:
        raise ValueError("both factors must live on the given species")
    return KoszulCochain.from_function(sp, f.degree + g.degree, lambda z: cup_value(sp, f, g, z))


def cup_cochain(alpha, beta):
    """``(alpha cup beta)(F)(z) = alpha(F_1..F_p)(z \\\\ S) * beta(F_p+1..)(z // T)``.

    ``S`` is the union of the first ``p`` blocks and ``T`` of the rest; the
    blocks and restrictions are standardized.
    """
    if alpha.species is not beta.species:
        raise ValueError("cochains on different species")
    sp = alpha.species
    p, q = alpha.degree, beta.degree

    def fn(F, z):
        n = sum(len(b) for b in F)
        S = tuple(sorted(x for b in F[:p] for x in b))
        T = complement(S, n)
        x = sp.restrict_right(n, z, S)
        if x is None:
            return 0
        lamS = standardize(S)
        a = alpha.value(tuple(tuple(lamS[v] for v in b) for b in F[:p]), x)
        if not a:
            return 0
        y = sp.restrict_left(n, z, T)
        if y is None:
            return 0
        lamT = standardize(T)
        return a * beta.value(tuple(tuple(lamT[v] for v in b) for b in F[p:]), y)

    return Cochain(
        sp, p + q, fn, alpha.normalized and beta.normalized, f"({alpha.name} cup {beta.name})"
    )


def kunneth_product(f, g, product=None):
    """``f x g`` on ``X*Y``: ``(x, y)`` on ``(S, T)`` maps to ``(-1)**sch(T,S) f(x) g(y)``."""
    sp = product or CauchyProduct(f.species, g.species)
    sp = get_species(sp) if isinstance(sp, str) else sp
    if not isinstance(sp, CauchyProduct):
        raise ValueError("the target must be a Cauchy product species")
    p, q = f.degree, g.degree

    def value(z):
        word, x, y = z
        S, T = CauchyProduct.split(word)
        if len(S) != p or len(T) != q:
            return 0
        return _sch_sign(S, T) * f(x) * g(y)

    return KoszulCochain.from_function(sp, p + q, value)


def kunneth_matrix(X, Y, n, product=None):
    """Matrix of ``sum_(p+q=n) K^p(X) (x) K^q(Y) -> K^n(X*Y)`` in the orbit bases."""
    X, Y = get_species(X), get_species(Y)
    XY = get_species(product) if product is not None else get_species(f"{X.species_id}*{Y.species_id}")
    target = koszul_basis(XY, n)
    columns = []
    for p in range(n + 1):
        for a in koszul_basis(X, p):
            for b in koszul_basis(Y, n - p):
                f = KoszulCochain(X, p, {a: 1})
                g = KoszulCochain(Y, n - p, {b: 1})
                columns.append(kunneth_product(f, g, XY).vector())
    M = SparseMatrix(len(target), len(columns))
    for c, vec in enumerate(columns):
        for r, v in enumerate(vec):
            if v:
                M.add(r, c, v)
    return M


def kunneth_is_isomorphism(X, Y, n):
    M = kunneth_matrix(X, Y, n)
    return M.rows == M.cols and rank(M) == M.cols


def unit_koszul(species):
    """The degree-0 class taking the value 1 on every structure on the empty set."""
    return KoszulCochain.from_function(species, 0, lambda z: 1)


def unit_cochain(species):
    return Cochain(species, 0, lambda F, z: 1, True, "1")


def cardinality_cocycle(species):
    """``kappa(I)(z) = |I|``; a cocycle on species whose restrictions never vanish."""
    return Cochain(species, 1, lambda F, z: len(F[0]), True, "kappa")


def schubert_cocycle(species="L"):
    """On linear orders: the number of pairs ``(s, t)`` in ``S x T`` with ``s`` before ``t``.

    Its Koszul image is the generator ``f_2``.
    """
    sp = get_species(species)

    def fn(F, z):
        S, T = F
        pos = {x: i for i, x in enumerate(z)}
        return sum(1 for s in S for t in T if pos[s] < pos[t])

    return Cochain(sp, 2, fn, True, "schubert")


def count_path_maps(blocks, edges):
    """Walks ``v_1 - v_2 - ... - v_k`` in the graph with ``v_i`` in ``blocks[i]``.

    The blocks are disjoint, so every such walk is an injective path map.
    """
    adj = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    counts = {v: 1 for v in blocks[0]}
    for block in blocks[1:]:
        nxt = {}
        for v in block:
            c = sum(counts.get(u, 0) for u in adj.get(v, ()))
            if c:
                nxt[v] = c
        counts = nxt
        if not counts:
            return 0
    return sum(counts.values())


def graph_path_cocycle(length=4):
    """``p^k(F_1..F_k)(g)``: maps of the path on ``k`` vertices into ``g`` sending vertex ``i`` into ``F_i``."""
    return Cochain("Gr", length, lambda F, g: count_path_maps(F, g), True, f"path{length}")
