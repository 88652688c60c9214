"""Exact rational linear algebra on sparse matrices.

Vectors handed to and returned from the public functions are dense lists of
:class:`fractions.Fraction`; internally rows are ``{column: value}`` dicts with
no stored zeros.  Elimination always pivots on the first nonzero column of the
row being inserted, in row-major order, so bases are deterministic.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd

__all__ = [
    "SparseMatrix",
    "Echelon",
    "NotAComplexError",
    "rank",
    "kernel_basis",
    "image_basis",
    "cohomology_at",
    "cohomology_dimension",
    "in_image",
    "solve",
]


class NotAComplexError(ValueError):
    """Raised when two maps handed to :func:`cohomology_at` do not compose to zero."""


class SparseMatrix:
    """A ``rows x cols`` rational matrix storing only nonzero entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
            v = Fraction(v)
            if v:
                self.entries[r, c] = v

    @classmethod
    def from_dense(cls, data, cols=None):
        data = [list(row) for row in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        entries = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(len(data), cols, entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    def add(self, r, c, v):
        """Accumulate ``v`` into entry ``(r, c)``."""
        v = self.entries.get((r, c), 0) + Fraction(v)
        if v:
            self.entries[r, c] = v
        else:
            self.entries.pop((r, c), None)

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def col_dicts(self):
        cols = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        right = other.row_dicts()
        out = {}
        for (r, k), v in self.entries.items():
            for c, w in right[k].items():
                out[r, c] = out.get((r, c), 0) + v * w
        return SparseMatrix(self.rows, other.cols, out)

    def apply(self, vec):
        """Matrix times a dense vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [Fraction(0)] * self.rows
        for (r, c), v in self.entries.items():
            if vec[c]:
                out[r] += v * vec[c]
        return out

    def is_zero(self):
        return not self.entries

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __eq__(self, other):
        return isinstance(other, SparseMatrix) and self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return f"SparseMatrix({self.rows}, {self.cols}, nnz={len(self.entries)})"


def _as_dict(vec):
    if isinstance(vec, dict):
        return {k: Fraction(v) for k, v in vec.items() if v}
    return {i: Fraction(v) for i, v in enumerate(vec) if v}


def _as_dense(vec, n):
    out = [Fraction(0)] * n
    for k, v in vec.items():
        out[k] = v
    return out


def _integral(vec):
    """Scale a dict of rationals to a primitive dict of ints (same span)."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            den = den * v.denominator // gcd(den, v.denominator)
    out = {}
    for k, v in vec.items():
        if v:
            out[k] = int(v * den) if den != 1 or isinstance(v, Fraction) else int(v)
    return _primitive(out)


def _primitive(vec):
    g = 0
    for v in vec.values():
        g = gcd(g, v)
        if g == 1:
            return vec
    if g > 1:
        return {k: v // g for k, v in vec.items()}
    return vec


class Echelon:
    """Incremental row-echelon basis over the rationals.

    Rows are kept fraction free: ``pivots`` maps a pivot column to a primitive
    integer row whose smallest column is that pivot, with a positive pivot
    entry.  Reduction cross-multiplies, so no rational arithmetic happens
    until :meth:`rref` is asked for.
    """

    def __init__(self):
        self.pivots = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, vec):
        """A nonzero multiple of the remainder of ``vec`` after elimination (a dict of ints)."""
        vec = _integral(vec)
        pivots = self.pivots
        heap = [c for c in vec if c in pivots]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = vec.get(c)
            if not a:
                continue
            row = pivots[c]
            p = row[c]
            g = gcd(a, p)
            mv, mr = p // g, a // g
            if mv != 1:
                vec = {k: mv * v for k, v in vec.items()}
            for k, v in row.items():
                new = vec.get(k, 0) - mr * v
                if new:
                    if k not in vec and k in pivots:
                        heapq.heappush(heap, k)
                    vec[k] = new
                else:
                    vec.pop(k, None)
            if mv != 1:
                vec = _primitive(vec)
        return vec

    def add(self, vec):
        """Insert ``vec``; return True iff it was independent of the stored rows."""
        rem = self.reduce(vec if isinstance(vec, dict) else _as_dict(vec))
        if not rem:
            return False
        c = min(rem)
        if rem[c] < 0:
            rem = {k: -v for k, v in rem.items()}
        self.pivots[c] = _primitive(rem)
        return True

    def contains(self, vec):
        return not self.reduce(_as_dict(vec))

    def rref(self):
        """Fully reduced rational rows, as a list of ``(pivot, row)`` in increasing pivot order."""
        order = sorted(self.pivots)
        rows = {}
        for c in order:
            p = self.pivots[c][c]
            rows[c] = {k: Fraction(v, p) for k, v in self.pivots[c].items()}
        for c in reversed(order):
            row = rows[c]
            for d in order:
                if d <= c:
                    continue
                a = row.get(d)
                if a:
                    for k, v in rows[d].items():
                        new = row.get(k, 0) - a * v
                        if new:
                            row[k] = new
                        else:
                            row.pop(k, None)
        return [(c, rows[c]) for c in order]


def _echelon_of_rows(M):
    ech = Echelon()
    for row in M.row_dicts():
        if row:
            ech.add(row)
    return ech


def rank(M):
    """Exact rank over the rationals."""
    return len(_echelon_of_rows(M))


def kernel_basis(M):
    """A basis of ``{x : M x = 0}`` as dense vectors, one per free column."""
    reduced = _echelon_of_rows(M).rref()
    pivot_cols = {c for c, _ in reduced}
    basis = []
    for f in range(M.cols):
        if f in pivot_cols:
            continue
        x = {f: Fraction(1)}
        for c, row in reduced:
            v = row.get(f)
            if v:
                x[c] = -v
        basis.append(_as_dense(x, M.cols))
    return basis


def image_basis(M):
    """A basis of the column space: the columns of ``M`` at its pivot columns."""
    reduced = _echelon_of_rows(M).rref()
    cols = M.col_dicts()
    return [_as_dense(cols[c], M.rows) for c, _ in reduced]


def cohomology_at(d_in, d_out):
    """Cohomology ``ker(d_out) / im(d_in)`` of ``V --d_in--> W --d_out--> U``.

    Returns ``(dimension, representatives)`` where the representatives are
    kernel vectors of ``d_out`` that complete a basis of ``im(d_in)``.
    Raises :class:`NotAComplexError` if ``d_out @ d_in`` is nonzero.
    """
    if d_in.rows != d_out.cols:
        raise ValueError(f"incompatible shapes {d_in.shape} and {d_out.shape}")
    if not (d_out @ d_in).is_zero():
        raise NotAComplexError("d_out o d_in is not zero")
    ech = Echelon()
    for col in d_in.col_dicts():
        if col:
            ech.add(col)
    reps = []
    for v in kernel_basis(d_out):
        if ech.add(_as_dict(v)):
            reps.append(v)
    dim = d_out.cols - rank(d_out) - rank(d_in)
    assert dim == len(reps)
    return dim, reps


def cohomology_dimension(d_in, d_out):
    """Just ``dim ker(d_out) - rank(d_in)``, after checking ``d_out @ d_in == 0``."""
    if d_in.rows != d_out.cols:
        raise ValueError(f"incompatible shapes {d_in.shape} and {d_out.shape}")
    if not (d_out @ d_in).is_zero():
        raise NotAComplexError("d_out o d_in is not zero")
    return d_out.cols - rank(d_out) - rank(d_in)


def in_image(M, v):
    """True iff ``v`` lies in the column span of ``M``."""
    if len(v) != M.rows:
        raise ValueError("vector length does not match row count")
    ech = Echelon()
    for col in M.col_dicts():
        if col:
            ech.add(col)
    return ech.contains(v)


def solve(M, v):
    """Some ``x`` with ``M x = v``, or None when ``v`` is not in the image."""
    if len(v) != M.rows:
        raise ValueError("vector length does not match row count")
    rows = M.row_dicts()
    last = M.cols
    ech = Echelon()
    for r, row in enumerate(rows):
        aug = dict(row)
        if v[r]:
            aug[last] = Fraction(v[r])
        if aug:
            ech.add(aug)
    x = [Fraction(0)] * M.cols
    for c, row in ech.rref():
        if c == last:
            return None
        x[c] = row.get(last, Fraction(0))
    return x
