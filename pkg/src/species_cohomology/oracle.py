"""Brute-force reference complexes.

* The normalized cochain complex of a species with coefficients in ``E``,
  truncated to arities ``<= N``.  A ``q``-cochain assigns a scalar
  ``alpha(F)(z)`` to every decomposition ``F`` of ``[n]`` into ``q`` blocks and
  every structure ``z`` on ``[n]``, invariantly under relabelling.
* The cobar construction of a set coalgebra, one arity at a time.
* The Coxeter complex of compositions of ``[j]``.

Truncating at arity ``N`` gives a quotient complex (coboundaries never raise
arity), and its cohomology agrees with the full one in degrees ``< N``.
"""

from __future__ import annotations

from fractions import Fraction

from .combinatorics import (
    adjacent_transposition,
    complement,
    enumerate_compositions,
    enumerate_decompositions,
    interval_decompositions,
    standardize,
)
from .linalg import Echelon, SparseMatrix, cohomology_at, cohomology_dimension, in_image, solve
from .species import compute_orbits, get_species

__all__ = [
    "Cochain",
    "PairOrbits",
    "pair_orbits",
    "coface",
    "codegeneracy",
    "coboundary",
    "coboundary_matrix",
    "cocycle_witness",
    "is_cocycle",
    "truncated_cohomology",
    "in_coboundaries",
    "constant_cochain",
    "cobar_basis",
    "cobar_differential",
    "cobar_complex",
    "cobar_homology",
    "coxeter_level",
    "coxeter_face",
    "coxeter_coboundary",
    "coxeter_cohomology",
]


def _std_blocks(blocks, T):
    lam = standardize(T)
    return tuple(tuple(lam[x] for x in b) for b in blocks)


class Cochain:
    """A cochain given by a function ``value(F, z)``.

    ``F`` is a decomposition of ``[n]`` into ``degree`` blocks and ``z`` a
    structure on ``[n]``.  The function must be relabelling invariant.  A
    normalized cochain reads as zero on decompositions with an empty block.
    """

    def __init__(self, species, degree, fn, normalized=True, name=None):
        self.species = get_species(species)
        self.degree = degree
        self.fn = fn
        self.normalized = normalized
        self.name = name or "cochain"

    @property
    def species_id(self):
        return self.species.species_id

    def value(self, F, z):
        if len(F) != self.degree:
            raise ValueError(f"{self.name} has degree {self.degree}, got {len(F)} blocks")
        if self.normalized and any(not b for b in F):
            return Fraction(0)
        return Fraction(self.fn(F, z))

    __call__ = value

    def tabulate(self, N):
        """Values on the pair-orbit representatives of arities ``<= N`` (a coordinate vector)."""
        cols = _Columns(self.species, self.degree, N, self.normalized)
        return [self.value(F, z) for F, z in cols.reps]

    @classmethod
    def from_vector(cls, species, degree, N, vec, normalized=True, name=None):
        sp = get_species(species)
        cols = _Columns(sp, degree, N, normalized)
        if len(vec) != len(cols.reps):
            raise ValueError("vector length does not match the number of pair orbits")
        vec = [Fraction(v) for v in vec]

        def fn(F, z):
            n = sum(len(b) for b in F)
            if n > N:
                raise ValueError(f"cochain only known up to arity {N}")
            return vec[cols.column(n, F, z)]

        return cls(sp, degree, fn, normalized, name)

    def __add__(self, other):
        return Cochain(
            self.species,
            self.degree,
            lambda F, z: self.value(F, z) + other.value(F, z),
            self.normalized and other.normalized,
            f"({self.name} + {other.name})",
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return Cochain(self.species, self.degree, lambda F, z: c * self.value(F, z), self.normalized, self.name)

    def __repr__(self):
        return f"Cochain({self.name}, {self.species_id}, q={self.degree})"


def constant_cochain(species, degree, c=1, normalized=False):
    """The cochain with every component equal to ``c`` (``c = 1, degree 0`` is the unit)."""
    c = Fraction(c)
    return Cochain(species, degree, lambda F, z: c, normalized, f"const({c})")


def zero_cochain(species, degree):
    return Cochain(species, degree, lambda F, z: 0, True, "0")


# --------------------------------------------------------------------------
# coface and codegeneracy maps


def _coface_target(sp, i, F, z):
    """``(G, w)`` with ``(d^i alpha)(F)(z) = alpha(G)(w)``, or None when the restriction is zero."""
    n = sum(len(b) for b in F)
    last = len(F) - 1
    if i == 0:
        T = complement(F[0], n)
        w = sp.restrict_left(n, z, T)
        return None if w is None else (_std_blocks(F[1:], T), w)
    if i == last + 1:
        T = complement(F[last], n)
        w = sp.restrict_right(n, z, T)
        return None if w is None else (_std_blocks(F[:last], T), w)
    merged = tuple(sorted(F[i - 1] + F[i]))
    return F[: i - 1] + (merged,) + F[i + 1 :], z


def coface(i, alpha):
    """``d^i alpha`` of degree ``q+1``, for ``0 <= i <= q+1``."""
    q = alpha.degree
    if not 0 <= i <= q + 1:
        raise IndexError(f"coface index {i} outside 0..{q + 1}")
    sp = alpha.species

    def fn(F, z):
        t = _coface_target(sp, i, F, z)
        return 0 if t is None else alpha.value(*t)

    return Cochain(sp, q + 1, fn, alpha.normalized, f"d{i}({alpha.name})")


def codegeneracy(j, alpha):
    """``s^j alpha`` of degree ``q-1``: insert an empty block after the first ``j`` blocks."""
    q = alpha.degree
    if not 0 <= j <= q - 1:
        raise IndexError(f"codegeneracy index {j} outside 0..{q - 1}")

    def fn(F, z):
        return alpha.value(F[:j] + ((),) + F[j:], z)

    return Cochain(alpha.species, q - 1, fn, False, f"s{j}({alpha.name})")


def coboundary(alpha):
    """``delta alpha = sum_i (-1)**i d^i alpha``."""
    q = alpha.degree
    sp = alpha.species

    def fn(F, z):
        total = Fraction(0)
        for i in range(q + 2):
            t = _coface_target(sp, i, F, z)
            if t is not None:
                v = alpha.value(*t)
                total += -v if i % 2 else v
        return total

    return Cochain(sp, q + 1, fn, alpha.normalized, f"delta({alpha.name})")


def cocycle_witness(alpha, N, arities=None):
    """First ``(F, z, value)`` with ``(delta alpha)(F)(z) != 0`` at arity ``<= N``, else None.

    Only interval decompositions are visited: every pair ``(F, z)`` is a
    relabelling of one with ``F`` made of consecutive intervals, so this is
    exhaustive for invariant cochains.
    """
    d = coboundary(alpha)
    sp = alpha.species
    for n in arities if arities is not None else range(N + 1):
        structs = sp.structures(n)
        for F in interval_decompositions(n, alpha.degree + 1, normalized=alpha.normalized):
            for z in structs:
                v = d.value(F, z)
                if v:
                    return F, z, v
    return None


def is_cocycle(alpha, N):
    return cocycle_witness(alpha, N) is None


# --------------------------------------------------------------------------
# pair orbits and coboundary matrices


class PairOrbits:
    """Orbits of ``S_n`` on pairs ``(F, z)`` with ``F`` of length ``q``."""

    def __init__(self, species, n, q, normalized=True):
        sp = get_species(species)
        decs = enumerate_compositions(n, q) if normalized else enumerate_decompositions(n, q)
        elements = [(F, z) for F in decs for z in sp.structures(n)]
        gens = [adjacent_transposition(n, i) for i in range(1, n)]

        def act(g, pair):
            F, z = pair
            return tuple(tuple(sorted(g[x - 1] for x in b)) for b in F), sp.relabel(g, z)

        self.reps, self.sizes, _, index = compute_orbits(elements, act, gens)
        self.index = {pair: k for pair, (k, _) in index.items()}


_PAIR_CACHE = {}


def pair_orbits(species, n, q, normalized=True):
    sp = get_species(species)
    key = (id(sp), n, q, normalized)
    if key not in _PAIR_CACHE:
        _PAIR_CACHE[key] = (sp, PairOrbits(sp, n, q, normalized))
    return _PAIR_CACHE[key][1]


class _Columns:
    """Coordinates of degree-``q`` cochains at arities ``<= N``: one per pair orbit."""

    def __init__(self, sp, q, N, normalized=True):
        self.tables = {}
        self.offsets = {}
        self.reps = []
        for n in range(N + 1):
            if normalized and n < q:
                continue
            t = pair_orbits(sp, n, q, normalized)
            self.tables[n] = t
            self.offsets[n] = len(self.reps)
            self.reps.extend(t.reps)

    def column(self, n, F, z):
        return self.offsets[n] + self.tables[n].index[(F, z)]


def coboundary_matrix(species, q, N, normalized=True):
    """Matrix of ``delta: C^q -> C^(q+1)`` on arities ``<= N`` in pair-orbit coordinates."""
    sp = get_species(species)
    cols = _Columns(sp, q, N, normalized)
    rows = _Columns(sp, q + 1, N, normalized)
    M = SparseMatrix(len(rows.reps), len(cols.reps))
    for r, (F, z) in enumerate(rows.reps):
        for i in range(q + 2):
            t = _coface_target(sp, i, F, z)
            if t is None:
                continue
            G, w = t
            if normalized and any(not b for b in G):
                continue
            M.add(r, cols.column(sum(len(b) for b in G), G, w), -1 if i % 2 else 1)
    return M


def truncated_cohomology(species, q, N=None):
    """``(dim, representative cochains)`` of ``H^q`` of the normalized complex cut at arity ``N``."""
    sp = get_species(species)
    if N is None:
        N = q + 1
    if N < q + 1:
        raise ValueError(f"arity bound N={N} must be at least q+1={q + 1}")
    d_out = coboundary_matrix(sp, q, N)
    if q == 0:
        d_in = SparseMatrix(d_out.cols, 0)
    else:
        d_in = coboundary_matrix(sp, q - 1, N)
    dim, reps = cohomology_at(d_in, d_out)
    return dim, [Cochain.from_vector(sp, q, N, v, name=f"H{q}rep") for v in reps]


def in_coboundaries(beta, N, want_primitive=False):
    """Whether ``beta`` is ``delta`` of some normalized cochain on arities ``<= N``.

    With ``want_primitive`` returns ``(flag, gamma)`` where ``gamma`` solves
    ``delta gamma = beta`` (or None).
    """
    q = beta.degree
    M = coboundary_matrix(beta.species, q - 1, N)
    v = beta.tabulate(N)
    if not want_primitive:
        return in_image(M, v)
    x = solve(M, v)
    if x is None:
        return False, None
    return True, Cochain.from_vector(beta.species, q - 1, N, x, name="primitive")


# --------------------------------------------------------------------------
# cobar construction of a set coalgebra


def cobar_basis(coalgebra, n, k):
    """Words ``((F_1, c_1), ..., (F_k, c_k))``: a composition of ``[n]`` and a structure per block."""
    sp = get_species(coalgebra)
    out = []
    for F in enumerate_compositions(n, k):
        choices = [()]
        for b in F:
            choices = [c + (x,) for c in choices for x in sp.structures(len(b))]
        for c in choices:
            out.append(tuple(zip(F, c)))
    return out


def _split_terms(sp, block, c):
    """Nonzero pieces of the reduced coproduct of ``c`` on ``block``: ``((A, c_A), (B, c_B))``."""
    m = len(block)
    out = []
    for mask in range(1, (1 << m) - 1):
        A_pos = tuple(i + 1 for i in range(m) if mask >> i & 1)
        B_pos = complement(A_pos, m)
        cA = sp.restrict_right(m, c, A_pos)
        cB = sp.restrict_left(m, c, B_pos)
        if cA is None or cB is None:
            continue
        A = tuple(block[i - 1] for i in A_pos)
        B = tuple(block[i - 1] for i in B_pos)
        out.append(((A, cA), (B, cB)))
    return out


def cobar_differential(coalgebra, n, k):
    """Matrix of ``d`` from words of length ``k`` to length ``k+1`` at arity ``n``.

    Splitting the ``i``-th letter (1-based) carries the sign ``(-1)**(i-1)``.
    """
    sp = get_species(coalgebra)
    src = cobar_basis(sp, n, k)
    tgt = cobar_basis(sp, n, k + 1)
    where = {w: r for r, w in enumerate(tgt)}
    M = SparseMatrix(len(tgt), len(src))
    for c, word in enumerate(src):
        for i, (block, struct) in enumerate(word):
            s = -1 if i % 2 else 1
            for left, right in _split_terms(sp, block, struct):
                M.add(where[word[:i] + (left, right) + word[i + 1 :]], c, s)
    return M


def cobar_complex(coalgebra, n):
    """``{k: (basis, matrix to length k+1)}`` for word lengths ``1..n``.

    A word of length ``k`` sits in cohomological degree ``k - n``.
    """
    return {k: (cobar_basis(coalgebra, n, k), cobar_differential(coalgebra, n, k)) for k in range(1, n + 1)}


def cobar_homology(coalgebra, n):
    """``{word length k: dim}`` of the cobar construction at arity ``n >= 1``."""
    if n < 1:
        raise ValueError("the cobar construction has nothing in arity 0")
    mats = {k: cobar_differential(coalgebra, n, k) for k in range(0, n + 1)}
    dims = {}
    for k in range(1, n + 1):
        dims[k] = cohomology_dimension(mats[k - 1], mats[k])
    return dims


# --------------------------------------------------------------------------
# Coxeter complex


def coxeter_level(j, p):
    """``Sigma_p(j)``: compositions of ``[j]`` into ``p + 2`` blocks."""
    return enumerate_compositions(j, p + 2)


def coxeter_face(i, F):
    """``d_i`` merges blocks ``i`` and ``i+1`` (0-based)."""
    if not 0 <= i < len(F) - 1:
        raise IndexError(f"face index {i} out of range for {len(F)} blocks")
    return F[:i] + (tuple(sorted(F[i] + F[i + 1])),) + F[i + 2 :]


def coxeter_coboundary(j, p):
    """Matrix of ``delta: functions on Sigma_(p-1) -> functions on Sigma_p``."""
    src = coxeter_level(j, p - 1)
    tgt = coxeter_level(j, p)
    where = {F: c for c, F in enumerate(src)}
    M = SparseMatrix(len(tgt), len(src))
    for r, F in enumerate(tgt):
        for i in range(p + 1):
            M.add(r, where[coxeter_face(i, F)], -1 if i % 2 else 1)
    return M


def coxeter_cohomology(j):
    """Graded dimensions (``p = -1 .. j-2``) and the character of a transposition on the top class.

    The top class is represented by the indicator of the identity
    composition ``({1}, ..., {j})``; the character ``c`` solves
    ``tau.xi = c xi + delta(psi)`` for ``tau = (1 2)``.
    """
    if j < 1:
        raise ValueError("j must be positive")
    top = j - 2
    mats = {p: coxeter_coboundary(j, p) for p in range(-1, top + 2)}
    dims = {}
    for p in range(-1, top + 1):
        dims[p] = cohomology_dimension(mats[p], mats[p + 1])
    result = {"dims": dims, "top_degree": top, "character": None, "top_is_coboundary": None}
    level = coxeter_level(j, top)
    where = {F: r for r, F in enumerate(level)}
    xi = [Fraction(0)] * len(level)
    xi[where[tuple((x,) for x in range(1, j + 1))]] = Fraction(1)
    d_top = mats[top]
    result["top_is_coboundary"] = in_image(d_top, xi)
    if j >= 2:
        tau = adjacent_transposition(j, 1)
        # (tau.phi)(F) = phi(tau^{-1} F); tau is an involution
        moved = [xi[where[tuple(tuple(sorted(tau[x - 1] for x in b)) for b in F)]] for F in level]
        aug = SparseMatrix(d_top.rows, d_top.cols + 1, dict(d_top.entries))
        for r, v in enumerate(xi):
            if v:
                aug.add(r, d_top.cols, v)
        x = solve(aug, moved)
        result["character"] = None if x is None else x[-1]
    else:
        result["character"] = Fraction(1)
    return result


def echelon_of_columns(M):
    ech = Echelon()
    for col in M.col_dicts():
        if col:
            ech.add(col)
    return ech
