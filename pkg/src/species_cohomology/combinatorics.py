"""Finite-set combinatorics: subsets, decompositions, permutations, shuffles.

Conventions used throughout the package:

* The ground set of arity ``n`` is ``{1, ..., n}``.
* A subset is an ascending tuple of ints.
* A decomposition of length ``q`` is a tuple of ``q`` pairwise disjoint
  ascending tuples whose union is ``{1, ..., n}``; a composition is a
  decomposition without empty blocks.
* A permutation of degree ``n`` is the tuple ``(s(1), ..., s(n))`` of images.
  Composition is ``compose(s, t)(i) = s(t(i))``.
* A *word* on a subset ``S`` is a tuple listing the elements of ``S`` in some
  order; it is how a permutation of ``S`` (a bijection ``[|S|] -> S``) is
  written down.
"""

from __future__ import annotations

from itertools import combinations, permutations, product
from math import comb, factorial

__all__ = [
    "complement",
    "enumerate_decompositions",
    "enumerate_compositions",
    "interval_decompositions",
    "weak_integer_compositions",
    "all_permutations",
    "compose",
    "inverse",
    "identity",
    "sign",
    "word_sign",
    "adjacent_transposition",
    "schubert",
    "standardize",
    "standardize_word",
    "monotone_pair_bijection",
    "enumerate_shuffles",
    "shuffle_sign",
    "stirling2",
    "stirling1_unsigned",
    "bell",
    "ordered_bell",
    "subsets",
]


def complement(S, n):
    """Complement of ``S`` in ``{1, ..., n}``."""
    inside = set(S)
    return tuple(i for i in range(1, n + 1) if i not in inside)


def subsets(n):
    """All subsets of ``[n]``, ordered by size and then lexicographically."""
    out = []
    for k in range(n + 1):
        out.extend(combinations(range(1, n + 1), k))
    return out


def _blocks_from_word(word, q):
    blocks = [[] for _ in range(q)]
    for element, b in enumerate(word, start=1):
        blocks[b].append(element)
    return tuple(tuple(b) for b in blocks)


def enumerate_decompositions(n, q):
    """All ``q**n`` decompositions of ``[n]`` into ``q`` ordered blocks.

    Ordered lexicographically by the block-index word
    ``(block of 1, block of 2, ...)``.
    """
    if q == 0:
        return [()] if n == 0 else []
    return [_blocks_from_word(w, q) for w in product(range(q), repeat=n)]


def enumerate_compositions(n, q):
    """Compositions of ``[n]`` into exactly ``q`` nonempty blocks.

    Same ordering as :func:`enumerate_decompositions`; empty when ``q > n``.
    """
    if q > n:
        return []
    if q == 0:
        return [()] if n == 0 else []
    out = []
    for w in product(range(q), repeat=n):
        if len(set(w)) == q:
            out.append(_blocks_from_word(w, q))
    return out


def weak_integer_compositions(n, k, allow_zero=True):
    """Tuples of ``k`` naturals summing to ``n`` (positive ones unless ``allow_zero``)."""
    if k == 0:
        return [()] if n == 0 else []
    lo = 0 if allow_zero else 1
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            if remaining >= lo:
                out.append(prefix + (remaining,))
            return
        for first in range(lo, remaining - lo * (slots - 1) + 1):
            rec(prefix + (first,), remaining - first, slots - 1)

    rec((), n, k)
    return out


def interval_decompositions(n, q, normalized=True):
    """One decomposition per ``S_n``-orbit: blocks are consecutive intervals.

    Every decomposition of ``[n]`` is carried by some permutation onto exactly
    one of these, so evaluating an equivariant cochain on these times all
    structures covers every orbit of pairs.
    """
    out = []
    for sizes in weak_integer_compositions(n, q, allow_zero=not normalized):
        blocks, start = [], 1
        for s in sizes:
            blocks.append(tuple(range(start, start + s)))
            start += s
        out.append(tuple(blocks))
    return out


def all_permutations(n):
    return list(permutations(range(1, n + 1)))


def identity(n):
    return tuple(range(1, n + 1))


def compose(s, t):
    """``(s o t)(i) = s(t(i))``."""
    return tuple(s[t[i] - 1] for i in range(len(t)))


def inverse(s):
    out = [0] * len(s)
    for i, image in enumerate(s, start=1):
        out[image - 1] = i
    return tuple(out)


def adjacent_transposition(n, i):
    """The transposition ``(i, i+1)`` of degree ``n`` (1-based ``i``)."""
    s = list(range(1, n + 1))
    s[i - 1], s[i] = s[i], s[i - 1]
    return tuple(s)


def sign(s):
    """Sign of a permutation, via its cycle decomposition."""
    n = len(s)
    seen = [False] * n
    parity = 0
    for i in range(n):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = s[j] - 1
            length += 1
        parity += length - 1
    return -1 if parity % 2 else 1


def word_sign(word):
    """Sign of a word of distinct integers, i.e. of its standardization."""
    inversions = 0
    for a in range(len(word)):
        for b in range(a + 1, len(word)):
            if word[a] > word[b]:
                inversions += 1
    return -1 if inversions % 2 else 1


def schubert(S, T):
    """Number of pairs ``(s, t)`` in ``S x T`` with ``s < t``."""
    if set(S) & set(T):
        raise ValueError(f"schubert needs disjoint sets, got {S} and {T}")
    count = 0
    for s in S:
        for t in T:
            if s < t:
                count += 1
    return count


def standardize(S):
    """The order-preserving bijection from ``S`` onto ``{1, ..., |S|}``, as a dict."""
    return {x: i for i, x in enumerate(sorted(S), start=1)}


def standardize_word(word):
    """Apply ``standardize(set(word))`` letterwise: a word on S becomes a permutation."""
    lam = standardize(word)
    return tuple(lam[x] for x in word)


def monotone_pair_bijection(S, T):
    """The permutation ``u`` sending S monotonically onto ``[1, p]`` and T onto ``[p+1, p+q]``.

    ``(S, T)`` must be a decomposition of ``[p+q]``. The sign of ``u`` is
    ``(-1)**schubert(T, S)``.
    """
    if set(S) & set(T):
        raise ValueError(f"overlapping blocks {S} and {T}")
    n = len(S) + len(T)
    if set(S) | set(T) != set(range(1, n + 1)):
        raise ValueError(f"({S}, {T}) is not a decomposition of [{n}]")
    u = [0] * n
    for i, s in enumerate(sorted(S), start=1):
        u[s - 1] = i
    for i, t in enumerate(sorted(T), start=len(S) + 1):
        u[t - 1] = i
    return tuple(u)


def shuffle_sign(S, T):
    """Sign relating a concatenated (p,q)-shuffle to its two halves.

    ``sign(w1 + w2) == sign(w1) * sign(w2) * shuffle_sign(S, T)`` for words
    ``w1`` on ``S`` and ``w2`` on ``T``; cross inversions are pairs ``s > t``.
    """
    return -1 if schubert(T, S) % 2 else 1


def enumerate_shuffles(p, q):
    """All ``(p, q)``-shuffles of ``[p+q]`` as ``((S, T), w1, w2)``.

    ``w1`` is a word on ``S`` and ``w2`` a word on ``T``; there are ``(p+q)!``.
    """
    n = p + q
    out = []
    for S in combinations(range(1, n + 1), p):
        T = complement(S, n)
        for w1 in permutations(S):
            for w2 in permutations(T):
                out.append(((S, T), w1, w2))
    return out


def stirling2(n, k):
    """Stirling numbers of the second kind by the standard recurrence."""
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, min(i, k) + 1):
            table[i][j] = j * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][k]


def stirling1_unsigned(n, k):
    """Unsigned Stirling numbers of the first kind: ``c(n,k) = (n-1) c(n-1,k) + c(n-1,k-1)``."""
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, min(i, k) + 1):
            table[i][j] = (i - 1) * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][k]


def bell(n):
    return sum(stirling2(n, k) for k in range(n + 1))


def ordered_bell(n):
    return sum(factorial(k) * stirling2(n, k) for k in range(n + 1))


def binomial(n, k):
    return comb(n, k)
