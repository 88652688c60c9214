"""Weak deformations of the coproduct: rescale ``z \\\\ S (x) z // T`` by a power series.

A deformation is ``Delta_t(S, T)(z) = sum_i Delta_i(S, T)(z) t**i`` with
``Delta_0 = 1``.  Coassociativity order by order is the family of equations
``sum_(i+j=n) Delta_i * Delta_j = 0`` for the star product below.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .combinatorics import complement, enumerate_decompositions, interval_decompositions, standardize
from .oracle import Cochain, cocycle_witness, constant_cochain

__all__ = [
    "DeformationSeries",
    "NotACocycleError",
    "star_10",
    "star_01",
    "star",
    "bracket",
    "star_products",
    "obstruction",
    "integrate",
    "check_deformation",
    "is_counital",
    "q_form",
]


class NotACocycleError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _std(blocks, U):
    lam = standardize(U)
    return tuple(tuple(lam[x] for x in b) for b in blocks)


def _both_normalized(a, b):
    return a.normalized and b.normalized


def star_10(alpha, beta):
    """``(alpha *_(1,0) beta)(R,S,T)(z) = alpha(R, S+T)(z) * beta(S,T)(z // R^c)``."""
    sp = alpha.species

    def fn(F, z):
        R, S, T = F
        n = len(R) + len(S) + len(T)
        a = alpha.value((R, tuple(sorted(S + T))), z)
        if not a:
            return 0
        U = complement(R, n)
        w = sp.restrict_left(n, z, U)
        if w is None:
            return 0
        return a * beta.value(_std((S, T), U), w)

    return Cochain(sp, 3, fn, _both_normalized(alpha, beta), f"({alpha.name} *10 {beta.name})")


def star_01(alpha, beta):
    """``(alpha *_(0,1) beta)(R,S,T)(z) = alpha(R+S, T)(z) * beta(R,S)(z \\\\ T^c)``."""
    sp = alpha.species

    def fn(F, z):
        R, S, T = F
        n = len(R) + len(S) + len(T)
        a = alpha.value((tuple(sorted(R + S)), T), z)
        if not a:
            return 0
        U = complement(T, n)
        w = sp.restrict_right(n, z, U)
        if w is None:
            return 0
        return a * beta.value(_std((R, S), U), w)

    return Cochain(sp, 3, fn, _both_normalized(alpha, beta), f"({alpha.name} *01 {beta.name})")


def star(alpha, beta):
    return star_10(alpha, beta) - star_01(alpha, beta)


def bracket(alpha, beta):
    return star(alpha, beta) - star(beta, alpha)


def star_products(alpha, beta):
    """``(alpha *10 beta, alpha *01 beta, alpha * beta, {alpha, beta})``."""
    return star_10(alpha, beta), star_01(alpha, beta), star(alpha, beta), bracket(alpha, beta)


def obstruction(delta1):
    """The first obstruction ``Delta_1 * Delta_1``; a 3-cocycle when ``Delta_1`` is a 2-cocycle."""
    return star(delta1, delta1)


@dataclass
class DeformationSeries:
    """Truncated series ``Delta_0 = 1, Delta_1, ..., Delta_m`` of 2-cochains on arities ``<= N``."""

    species: object
    arity_bound: int
    coefficients: list
    report: dict = field(default_factory=dict)

    @property
    def order(self):
        return len(self.coefficients) - 1

    def __getitem__(self, i):
        return self.coefficients[i]

    def evaluate(self, S, T, z, t):
        """``Delta_t(S, T)(z)`` as a polynomial in ``t`` (exact for rational ``t``)."""
        return sum((c.value((S, T), z) * Fraction(t) ** i for i, c in enumerate(self.coefficients)), Fraction(0))


def check_deformation(series, n, exhaustive=False):
    """Equation of order ``n``; returns ``(True, None)`` or ``(False, witness)``.

    Decompositions ``(R, S, T)`` may have empty blocks.  By default one
    interval decomposition per orbit is visited, which is complete for
    relabelling invariant coefficients; ``exhaustive`` visits all of them.
    """
    m = series.order
    terms = [
        star(series[i], series[n - i]) for i in range(n + 1) if i <= m and n - i <= m
    ]
    sp = series.species
    for k in range(series.arity_bound + 1):
        decs = enumerate_decompositions(k, 3) if exhaustive else interval_decompositions(k, 3, normalized=False)
        for F in decs:
            for z in sp.structures(k):
                total = sum((t.value(F, z) for t in terms), Fraction(0))
                if total:
                    return False, {"n": n, "R": F[0], "S": F[1], "T": F[2], "z": z, "value": total}
    return True, None


def integrate(delta1, order, N, verify=True):
    """Exponential deformation ``Delta_i = Delta_1**i / i!`` of a normalized 2-cocycle.

    Raises :class:`NotACocycleError` (with a witness ``(R, S, T, z)``) when
    ``delta1`` is not a cocycle on arities ``<= N``.
    """
    if delta1.degree != 2:
        raise ValueError("a deformation is driven by a 2-cochain")
    if not delta1.normalized:
        raise ValueError("Delta_1 must be normalized")
    bad = cocycle_witness(delta1, N)
    if bad is not None:
        F, z, v = bad
        raise NotACocycleError(
            f"{delta1.name} is not a cocycle: delta = {v} at {F}, {z!r}",
            witness={"R": F[0], "S": F[1], "T": F[2], "z": z, "value": v},
        )
    sp = delta1.species
    coefficients = [constant_cochain(sp, 2, 1)]
    for i in range(1, order + 1):
        coefficients.append(_power(delta1, i))
    series = DeformationSeries(sp, N, coefficients)
    if verify:
        for n in range(order + 1):
            ok, witness = check_deformation(series, n)
            series.report[n] = {"ok": ok, "witness": witness}
            if not ok:
                break
    return series


def _power(delta1, i):
    scale = Fraction(1, factorial(i))
    return Cochain(
        delta1.species, 2, lambda F, z: scale * delta1.value(F, z) ** i, True, f"{delta1.name}^{i}/{i}!"
    )


def is_counital(series):
    """``(True, None)`` iff ``Delta_i(empty, I) = Delta_i(I, empty) = 0`` for ``i >= 1``."""
    sp = series.species
    for i, c in enumerate(series.coefficients[1:], start=1):
        for k in range(series.arity_bound + 1):
            full = tuple(range(1, k + 1))
            for z in sp.structures(k):
                for F in (((), full), (full, ())):
                    v = c.fn(F, z)
                    if v:
                        return False, {"i": i, "S": F[0], "T": F[1], "z": z, "value": Fraction(v)}
    return True, None


def q_form(delta1, N, describe=None):
    """Lines ``S|T z : q^k`` showing ``Delta_t = q**Delta_1`` with ``q = e^t``, on interval pairs."""
    sp = delta1.species
    describe = describe or sp.describe
    lines = []
    for k in range(1, N + 1):
        for F in interval_decompositions(k, 2, normalized=True):
            for z in sp.structures(k):
                v = delta1.value(F, z)
                S, T = F
                power = "1" if v == 0 else ("q" if v == 1 else f"q^{v}")
                lines.append(f"{''.join(map(str, S))}|{''.join(map(str, T))} {describe(z)} : {power}")
    return lines
