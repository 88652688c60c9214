"""The small complex of sign-equivariant functionals ``K^p(X) = Hom_{S_p}(X[p], sgn)``.

A functional is determined by its values on orbit representatives and must
vanish on orbits containing a structure fixed by an odd permutation, so
``K^p`` has one basis vector per odd-free orbit of ``X[p]``.

The differential is

    df(z) = sum_i (-1)**(i-1) * ( f(z \\\\ ([n] - i)) - f(z // ([n] - i)) )

with both restrictions standardized.  It vanishes identically on cosymmetric
species.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .combinatorics import all_permutations, complement, sign
from .linalg import SparseMatrix, cohomology_at, rank
from .species import get_species, graph_orbit_summary, orbit_table

__all__ = [
    "KoszulCochain",
    "koszul_basis",
    "koszul_dimension",
    "evaluate",
    "koszul_differential",
    "differential_matrix",
    "koszul_cohomology",
    "cochain_to_koszul",
    "koszul_to_cochain",
    "linear_order_generator",
]

# from this arity on, graph dimensions come from the vectorized orbit counter
HEAVY_GRAPH_ARITY = 7


class KoszulCochain:
    """Sign-equivariant functional on ``X[p]`` stored on orbit representatives."""

    def __init__(self, species, degree, coefficients=None):
        self.species = get_species(species)
        self.degree = degree
        table = orbit_table(self.species, degree)
        coeffs = {}
        for rep, v in (coefficients or {}).items():
            v = Fraction(v)
            if not v:
                continue
            k, s = table.locate(rep)
            if table.odd[k]:
                raise ValueError(f"{rep!r} has an odd stabilizer; the coefficient must be 0")
            rep0 = table.reps[k]
            coeffs[rep0] = coeffs.get(rep0, 0) + s * v
        self.coefficients = {r: v for r, v in coeffs.items() if v}

    @property
    def species_id(self):
        return self.species.species_id

    @classmethod
    def from_vector(cls, species, degree, vec):
        basis = koszul_basis(species, degree)
        if len(vec) != len(basis):
            raise ValueError("vector length does not match the dimension")
        return cls(species, degree, {b: v for b, v in zip(basis, vec) if v})

    @classmethod
    def from_function(cls, species, degree, fn, check=False):
        """Read the values of ``fn`` on representatives; ``check`` verifies equivariance everywhere."""
        sp = get_species(species)
        f = cls(sp, degree, {b: fn(b) for b in koszul_basis(sp, degree)})
        if check:
            for z in sp.structures(degree):
                if Fraction(fn(z)) != f(z):
                    raise ValueError(f"function is not sign-equivariant at {z!r}")
        return f

    def vector(self):
        return [self.coefficients.get(b, Fraction(0)) for b in koszul_basis(self.species, self.degree)]

    def __call__(self, z):
        table = orbit_table(self.species, self.degree)
        k, s = table.locate(z)
        if table.odd[k]:
            return Fraction(0)
        return s * self.coefficients.get(table.reps[k], Fraction(0))

    def _check(self, other):
        if not isinstance(other, KoszulCochain):
            return NotImplemented
        if other.species is not self.species or other.degree != self.degree:
            raise ValueError("cochains live in different spaces")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coefficients)
        for r, v in other.coefficients.items():
            out[r] = out.get(r, 0) + v
        return KoszulCochain(self.species, self.degree, out)

    def __neg__(self):
        return KoszulCochain(self.species, self.degree, {r: -v for r, v in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        return KoszulCochain(self.species, self.degree, {r: c * v for r, v in self.coefficients.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, KoszulCochain):
            return NotImplemented
        return (
            other.species is self.species
            and other.degree == self.degree
            and other.coefficients == self.coefficients
        )

    def is_zero(self):
        return not self.coefficients

    def __repr__(self):
        terms = ", ".join(f"{self.species.describe(r)}: {v}" for r, v in self.coefficients.items())
        return f"KoszulCochain({self.species_id}, p={self.degree}, {{{terms}}})"


def koszul_basis(species, p):
    """Representatives of the odd-free orbits of ``X[p]``, in orbit-table order."""
    table = orbit_table(get_species(species), p)
    return [table.reps[k] for k in table.odd_free()]


def koszul_dimension(species, p, allow_heavy=False):
    """``dim K^p(X)``: the number of orbits of ``X[p]`` without odd stabilizers."""
    sp = get_species(species)
    if sp.species_id == "Gr" and p >= HEAVY_GRAPH_ARITY:
        if not allow_heavy:
            raise ValueError(f"graphs at arity {p} are heavy; pass allow_heavy=True")
        return graph_orbit_summary(p)[1]
    return len(koszul_basis(sp, p))


def evaluate(f, z):
    """Value of ``f`` on ``z``; raises on an arity mismatch."""
    if not f.species.contains(f.degree, z):
        raise ValueError(f"{z!r} is not a structure of {f.species_id} on [{f.degree}]")
    return f(z)


def differential_matrix(species, p, exploit_cosymmetry=True):
    """Matrix of ``d: K^p -> K^(p+1)`` in the orbit bases (rows index degree ``p+1``).

    For cosymmetric species the two restrictions agree and the matrix is zero;
    with ``exploit_cosymmetry=False`` it is computed term by term anyway.
    """
    sp = get_species(species)
    source = orbit_table(sp, p)
    columns = {source.reps[k]: j for j, k in enumerate(source.odd_free())}
    if sp.cosymmetric and exploit_cosymmetry:
        rows = koszul_dimension(sp, p + 1)
        return SparseMatrix(rows, len(columns))
    targets = koszul_basis(sp, p + 1)
    n = p + 1
    M = SparseMatrix(len(targets), len(columns))
    for r, z in enumerate(targets):
        for i in range(1, n + 1):
            S = complement((i,), n)
            base = 1 if i % 2 else -1
            for restricted, c in ((sp.restrict_right(n, z, S), base), (sp.restrict_left(n, z, S), -base)):
                if restricted is None:
                    continue
                k, s = source.locate(restricted)
                if source.odd[k]:
                    continue
                M.add(r, columns[source.reps[k]], c * s)
    return M


def koszul_differential(species, f):
    sp = get_species(species)
    M = differential_matrix(sp, f.degree, exploit_cosymmetry=False)
    return KoszulCochain.from_vector(sp, f.degree + 1, M.apply(f.vector()))


def koszul_cohomology(species, p, exploit_cosymmetry=True):
    """``(dim H^p, representative cocycles)`` of the Koszul complex."""
    sp = get_species(species)
    if sp.cosymmetric and exploit_cosymmetry:
        # zero differential: every basis functional is its own class
        basis = koszul_basis(sp, p)
        return len(basis), [KoszulCochain(sp, p, {b: 1}) for b in basis]
    d_out = differential_matrix(sp, p, exploit_cosymmetry)
    if p == 0:
        d_in = SparseMatrix(d_out.cols, 0)
    else:
        d_in = differential_matrix(sp, p - 1, exploit_cosymmetry)
    dim, reps = cohomology_at(d_in, d_out)
    return dim, [KoszulCochain.from_vector(sp, p, v) for v in reps]


def differential_rank(species, p):
    return rank(differential_matrix(species, p, exploit_cosymmetry=False))


def cochain_to_koszul(alpha):
    """Antisymmetrize a degree-``p`` cochain along the singleton compositions of ``[p]``.

    ``f(z) = sum_sigma sign(sigma) * alpha({sigma(1)}, ..., {sigma(p)})(z)``.
    """
    p = alpha.degree
    perms = [(s, sign(s), tuple((x,) for x in s)) for s in all_permutations(p)]

    def f(z):
        return sum((sg * alpha.value(F, z) for _, sg, F in perms), Fraction(0))

    return KoszulCochain.from_function(alpha.species, p, f)


def koszul_to_cochain(f):
    """The cochain supported at arity ``p`` with ``alpha(sigma)(z) = sign(sigma) f(z) / p!``.

    This is a section of :func:`cochain_to_koszul` but in general not a cocycle.
    """
    from .oracle import Cochain

    p = f.degree
    scale = Fraction(1, factorial(p))

    def value(F, z):
        if sum(len(b) for b in F) != p or any(len(b) != 1 for b in F):
            return Fraction(0)
        return sign(tuple(b[0] for b in F)) * scale * f(z)

    return Cochain(f.species, p, value, name=f"lift({f.species_id}, p={p})")


def linear_order_generator(p, species="L"):
    """The generator ``f_p`` of ``K^p(L)``: a linear order maps to its sign."""
    sp = get_species(species)
    return KoszulCochain(sp, p, {tuple(range(1, p + 1)): 1})
