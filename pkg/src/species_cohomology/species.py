"""Species with left/right restrictions (E-bicomodules) and their orbit tables.

A species here is a finite set species on the standard sets ``[n]`` together
with an ``S_n`` relabelling action and two restriction maps.  ``restrict_left``
is ``z // S`` (the left E-coaction, written lambda) and ``restrict_right`` is
``z \\\\ S`` (the right coaction, rho).  Restrictions return a structure on the
standardized set ``[|S|]`` or ``None`` when the restriction is the zero vector
(as for the singleton species, whose restriction to a proper subset vanishes).

Built-in species: ``E`` (exponential), ``1`` (unit), ``S^k`` (k-fold singletons),
``L`` (linear orders), ``P`` (set partitions), ``C`` (set compositions) and
``Gr`` (simple graphs).  ``X*Y`` builds the Cauchy product on the fly.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations, product
from pathlib import Path

from .combinatorics import (
    adjacent_transposition,
    all_permutations,
    complement,
    compose,
    enumerate_compositions,
    identity,
    standardize,
    subsets,
)

__all__ = [
    "Species",
    "ExponentialSpecies",
    "UnitSpecies",
    "SingletonPower",
    "LinearOrders",
    "SetPartitions",
    "SetCompositions",
    "Graphs",
    "CauchyProduct",
    "MarkedSubsets",
    "CustomSpecies",
    "SpeciesValidationError",
    "UnknownSpeciesError",
    "OrbitTable",
    "structures",
    "relabel",
    "restrict",
    "orbit_table",
    "graph_orbit_summary",
    "get_species",
    "register",
    "registered_ids",
    "load_custom_species",
    "export_document",
    "verify_bicomodule_axioms",
    "bundled_document_path",
]


class UnknownSpeciesError(KeyError):
    pass


class SpeciesValidationError(ValueError):
    """A species document or definition violates a bicomodule axiom.

    ``path`` names the offending field of the document (when there is one)
    and ``witness`` holds the data exhibiting the violation.
    """

    def __init__(self, message, path=None, witness=None):
        super().__init__(message if path is None else f"{path}: {message}")
        self.path = path
        self.witness = witness or {}


def _std_subset(S, sub):
    """Positions of ``sub`` inside the ascending tuple ``S`` (1-based)."""
    lam = standardize(S)
    return tuple(lam[x] for x in sub)


class Species:
    """Base class; subclasses implement ``_enumerate``, ``relabel`` and the restrictions."""

    species_id = "?"
    cosymmetric = True
    max_arity = None

    def __init__(self):
        self._structures = {}
        self._sets = {}

    def structures(self, n):
        if self.max_arity is not None and n > self.max_arity:
            raise ValueError(f"species {self.species_id} is only defined up to arity {self.max_arity}")
        if n not in self._structures:
            items = list(self._enumerate(n))
            # publish the set first so concurrent readers never see half an entry
            self._sets[n] = frozenset(items)
            self._structures[n] = items
        return self._structures[n]

    def contains(self, n, z):
        self.structures(n)
        return z in self._sets[n]

    def _enumerate(self, n):
        raise NotImplementedError

    def relabel(self, sigma, z):
        raise NotImplementedError

    def restrict_left(self, n, z, S):
        raise NotImplementedError

    def restrict_right(self, n, z, S):
        return self.restrict_left(n, z, S)

    def describe(self, z):
        return str(z)

    def __repr__(self):
        return f"<species {self.species_id}>"


class ExponentialSpecies(Species):
    species_id = "E"

    def _enumerate(self, n):
        return [()]

    def relabel(self, sigma, z):
        return ()

    def restrict_left(self, n, z, S):
        return ()

    def describe(self, z):
        return "e"


class UnitSpecies(Species):
    """One structure on the empty set and nothing else."""

    species_id = "1"

    def _enumerate(self, n):
        return [()] if n == 0 else []

    def relabel(self, sigma, z):
        return z

    def restrict_left(self, n, z, S):
        return z

    def describe(self, z):
        return "1"


def _word_string(word):
    if all(x < 10 for x in word):
        return "".join(map(str, word)) or "()"
    return "-".join(map(str, word))


class LinearOrders(Species):
    """Orders are words listing ``[n]``; restriction keeps the induced order."""

    species_id = "L"

    def _enumerate(self, n):
        return all_permutations(n)

    def relabel(self, sigma, z):
        return tuple(sigma[x - 1] for x in z)

    def restrict_left(self, n, z, S):
        lam = standardize(S)
        return tuple(lam[x] for x in z if x in lam)

    def describe(self, z):
        return _word_string(z)


class SingletonPower(Species):
    """``S^k``: linear orders, but only on sets of size ``k``.

    Restricting to a proper subset lands in an empty component and is zero.
    """

    def __init__(self, k):
        super().__init__()
        self.k = k
        self.species_id = f"S^{k}"

    def _enumerate(self, n):
        return all_permutations(n) if n == self.k else []

    def relabel(self, sigma, z):
        return tuple(sigma[x - 1] for x in z)

    def restrict_left(self, n, z, S):
        return z if len(S) == n else None

    def describe(self, z):
        return _word_string(z)


def _set_partitions(n):
    # restricted growth strings
    out = []

    def rec(word, m):
        if len(word) == n:
            blocks = [[] for _ in range(m)]
            for i, b in enumerate(word, start=1):
                blocks[b].append(i)
            out.append(tuple(sorted(tuple(b) for b in blocks)))
            return
        for b in range(m + 1):
            rec(word + [b], max(m, b + 1))

    rec([], 0)
    return out


class SetPartitions(Species):
    """Partitions as sorted tuples of ascending blocks; restriction intersects blocks."""

    species_id = "P"

    def _enumerate(self, n):
        return _set_partitions(n)

    def relabel(self, sigma, z):
        return tuple(sorted(tuple(sorted(sigma[x - 1] for x in b)) for b in z))

    def restrict_left(self, n, z, S):
        lam = standardize(S)
        blocks = (tuple(lam[x] for x in b if x in lam) for b in z)
        return tuple(sorted(b for b in blocks if b))

    def describe(self, z):
        return "|".join(_word_string(b) for b in z) or "()"


class SetCompositions(Species):
    """Ordered set partitions; restriction intersects and drops empty blocks."""

    species_id = "C"

    def _enumerate(self, n):
        out = []
        for q in range(n + 1):
            out.extend(enumerate_compositions(n, q))
        return out

    def relabel(self, sigma, z):
        return tuple(tuple(sorted(sigma[x - 1] for x in b)) for b in z)

    def restrict_left(self, n, z, S):
        lam = standardize(S)
        blocks = (tuple(lam[x] for x in b if x in lam) for b in z)
        return tuple(b for b in blocks if b)

    def describe(self, z):
        return "|".join(_word_string(b) for b in z) or "()"


def _pairs(n):
    # colex order: (1,2), (1,3), (2,3), (1,4), ...
    return [(i, j) for j in range(2, n + 1) for i in range(1, j)]


class Graphs(Species):
    """Simple graphs as sorted edge tuples; restriction takes induced subgraphs."""

    species_id = "Gr"

    def _enumerate(self, n):
        pairs = _pairs(n)
        out = []
        for mask in range(1 << len(pairs)):
            out.append(tuple(sorted(pairs[k] for k in range(len(pairs)) if mask >> k & 1)))
        return out

    def relabel(self, sigma, z):
        out = []
        for i, j in z:
            a, b = sigma[i - 1], sigma[j - 1]
            out.append((a, b) if a < b else (b, a))
        out.sort()
        return tuple(out)

    def restrict_left(self, n, z, S):
        lam = standardize(S)
        return tuple((lam[i], lam[j]) for i, j in z if i in lam and j in lam)

    def describe(self, z):
        return "{" + ",".join(f"{i}{j}" if j < 10 else f"{i}-{j}" for i, j in z) + "}"


class CauchyProduct(Species):
    """Structures ``(word, x, y)``: ``word[i-1]`` is 0 if ``i`` goes to the left part.

    ``x`` and ``y`` are standardized structures of the two factors.  Left and
    right restrictions act componentwise.
    """

    def __init__(self, left, right):
        super().__init__()
        self.left, self.right = left, right
        self.species_id = f"{left.species_id}*{right.species_id}"
        self.cosymmetric = left.cosymmetric and right.cosymmetric
        if left.max_arity is not None or right.max_arity is not None:
            bounds = [b for b in (left.max_arity, right.max_arity) if b is not None]
            self.max_arity = min(bounds)

    def _enumerate(self, n):
        out = []
        for word in product((0, 1), repeat=n):
            p = word.count(0)
            for x in self.left.structures(p):
                for y in self.right.structures(n - p):
                    out.append((word, x, y))
        return out

    @staticmethod
    def split(word):
        S = tuple(i for i, b in enumerate(word, start=1) if b == 0)
        T = tuple(i for i, b in enumerate(word, start=1) if b == 1)
        return S, T

    @staticmethod
    def _induced(sigma, A):
        image = sorted(sigma[a - 1] for a in A)
        lam = standardize(image)
        return tuple(lam[sigma[a - 1]] for a in A)

    def relabel(self, sigma, z):
        word, x, y = z
        new = [0] * len(word)
        for i, b in enumerate(word):
            new[sigma[i] - 1] = b
        S, T = self.split(word)
        return (
            tuple(new),
            self.left.relabel(self._induced(sigma, S), x),
            self.right.relabel(self._induced(sigma, T), y),
        )

    def _restrict(self, n, z, U, side):
        word, x, y = z
        S, T = self.split(word)
        inside = set(U)
        SU = tuple(s for s in S if s in inside)
        TU = tuple(t for t in T if t in inside)
        if side == "left":
            x2 = self.left.restrict_left(len(S), x, _std_subset(S, SU))
            y2 = self.right.restrict_left(len(T), y, _std_subset(T, TU))
        else:
            x2 = self.left.restrict_right(len(S), x, _std_subset(S, SU))
            y2 = self.right.restrict_right(len(T), y, _std_subset(T, TU))
        if x2 is None or y2 is None:
            return None
        return (tuple(word[u - 1] for u in U), x2, y2)

    def restrict_left(self, n, z, S):
        return self._restrict(n, z, S, "left")

    def restrict_right(self, n, z, S):
        return self._restrict(n, z, S, "right")

    def describe(self, z):
        word, x, y = z
        S, T = self.split(word)
        return f"[{_word_string(S)}|{_word_string(T)}]({self.left.describe(x)},{self.right.describe(y)})"


class MarkedSubsets(Species):
    """A non-cosymmetric bicomodule: structures are subsets ``A`` of ``[n]``.

    ``A // S = A & S`` while ``A \\\\ S`` is ``A`` when ``A`` is inside ``S`` and
    all of ``S`` otherwise.  Each is a presheaf on inclusions and the two
    satisfy the bicomodule compatibility, but they differ, so the Koszul
    differential does not vanish.  The bundled ``marked`` document is exported
    from this class.
    """

    species_id = "marked"
    cosymmetric = False

    def _enumerate(self, n):
        return subsets(n)

    def relabel(self, sigma, z):
        return tuple(sorted(sigma[x - 1] for x in z))

    def restrict_left(self, n, z, S):
        lam = standardize(S)
        return tuple(lam[x] for x in z if x in lam)

    def restrict_right(self, n, z, S):
        lam = standardize(S)
        if all(x in lam for x in z):
            return tuple(lam[x] for x in z)
        return tuple(range(1, len(S) + 1))

    def describe(self, z):
        return "{" + ",".join(map(str, z)) + "}"


class CustomSpecies(Species):
    """A species read from a document of generating tables.

    Document fields: ``name``, ``max_arity``, ``cosymmetric``,
    ``structures[n]`` (labels), ``transposition_action[n][i]`` (image index of
    every structure under the transposition ``(i+1, i+2)``), and
    ``delete_left[n][i]`` / ``delete_right[n][i]`` (index in ``structures[n-1]``
    of the restriction to ``[n]`` minus ``i+1``, standardized, or ``null`` for
    zero).  Restrictions to arbitrary subsets are composed from deletions.
    """

    def __init__(self, document):
        super().__init__()
        _validate_document_shape(document)
        self.document = document
        self.species_id = document["name"]
        self.max_arity = document["max_arity"]
        self.cosymmetric = bool(document.get("cosymmetric", False))
        self.labels = [[_label(x) for x in row] for row in document["structures"]]
        self.index = [{lab: k for k, lab in enumerate(row)} for row in self.labels]
        self.swaps = document["transposition_action"]
        self.del_left = document["delete_left"]
        self.del_right = document["delete_right"]
        self._actions = {}
        _validate_custom_axioms(self)

    def _enumerate(self, n):
        return list(self.labels[n])

    def _action(self, n):
        # full S_n action on indices, built from the generators breadth first
        if n not in self._actions:
            size = len(self.labels[n])
            table = {identity(n): list(range(size))}
            queue = deque([identity(n)])
            while queue:
                sigma = queue.popleft()
                for i in range(1, n):
                    tau = compose(sigma, adjacent_transposition(n, i))
                    if tau not in table:
                        base, gen = table[sigma], self.swaps[n][i - 1]
                        table[tau] = [base[gen[k]] for k in range(size)]
                        queue.append(tau)
            self._actions[n] = table
        return self._actions[n]

    def relabel(self, sigma, z):
        n = len(sigma)
        return self.labels[n][self._action(n)[tuple(sigma)][self.index[n][z]]]

    def _restrict(self, n, z, S, tables):
        k = self.index[n][z]
        m = n
        for x in reversed(complement(S, n)):
            k = tables[m][x - 1][k]
            if k is None:
                return None
            m -= 1
        return self.labels[m][k]

    def restrict_left(self, n, z, S):
        return self._restrict(n, z, S, self.del_left)

    def restrict_right(self, n, z, S):
        return self._restrict(n, z, S, self.del_right)


def _label(x):
    return x if isinstance(x, str) else json.dumps(x, sort_keys=True)


def _validate_document_shape(doc):
    if not isinstance(doc, dict):
        raise SpeciesValidationError("document must be a mapping")
    for key in ("name", "max_arity", "structures", "transposition_action", "delete_left", "delete_right"):
        if key not in doc:
            raise SpeciesValidationError("missing field", path=key)
    name = doc["name"]
    if not isinstance(name, str) or not name or re.search(r"[*\s]", name):
        raise SpeciesValidationError("name must be a nonempty string without '*' or spaces", path="name")
    N = doc["max_arity"]
    if not isinstance(N, int) or N < 0:
        raise SpeciesValidationError("must be a natural number", path="max_arity")
    structs = doc["structures"]
    if not isinstance(structs, list) or len(structs) != N + 1:
        raise SpeciesValidationError(f"needs one list per arity 0..{N}", path="structures")
    sizes = []
    for n, row in enumerate(structs):
        if not isinstance(row, list):
            raise SpeciesValidationError("must be a list", path=f"structures[{n}]")
        labels = [_label(x) for x in row]
        if len(set(labels)) != len(labels):
            raise SpeciesValidationError("duplicate structure labels", path=f"structures[{n}]")
        sizes.append(len(row))
    swaps = doc["transposition_action"]
    if not isinstance(swaps, list) or len(swaps) != N + 1:
        raise SpeciesValidationError(f"needs one list per arity 0..{N}", path="transposition_action")
    for n in range(N + 1):
        if len(swaps[n]) != max(n - 1, 0):
            raise SpeciesValidationError(f"needs {max(n - 1, 0)} tables", path=f"transposition_action[{n}]")
        for i, table in enumerate(swaps[n]):
            path = f"transposition_action[{n}][{i}]"
            if not isinstance(table, list) or sorted(table) != list(range(sizes[n])):
                raise SpeciesValidationError("must be a permutation of the structure indices", path=path)
    for key in ("delete_left", "delete_right"):
        tables = doc[key]
        if not isinstance(tables, list) or len(tables) != N + 1:
            raise SpeciesValidationError(f"needs one list per arity 0..{N}", path=key)
        for n in range(N + 1):
            if len(tables[n]) != n:
                raise SpeciesValidationError(f"needs {n} tables", path=f"{key}[{n}]")
            for i, table in enumerate(tables[n]):
                path = f"{key}[{n}][{i}]"
                if not isinstance(table, list) or len(table) != sizes[n]:
                    raise SpeciesValidationError(f"needs {sizes[n]} entries", path=path)
                for k, v in enumerate(table):
                    if v is not None and not (isinstance(v, int) and 0 <= v < sizes[n - 1]):
                        raise SpeciesValidationError(
                            f"must be null or an index into structures[{n - 1}]", path=f"{path}[{k}]"
                        )


def _apply(table, k):
    return None if k is None else table[k]


def _validate_custom_axioms(sp):
    N = sp.max_arity
    for n in range(N + 1):
        size = len(sp.labels[n])
        gens = sp.swaps[n]
        # Coxeter relations make the generator tables an S_n action
        for i, g in enumerate(gens):
            for k in range(size):
                if g[g[k]] != k:
                    raise SpeciesValidationError(
                        "transposition does not square to the identity",
                        path=f"transposition_action[{n}][{i}]",
                        witness={"sigma": adjacent_transposition(n, i + 1), "z": sp.labels[n][k]},
                    )
            for j, h in enumerate(gens):
                if j <= i:
                    continue
                order = 3 if j == i + 1 else 2
                for k in range(size):
                    x = k
                    for _ in range(order):
                        x = h[g[x]]
                    if x != k:
                        raise SpeciesValidationError(
                            f"generators {i + 1} and {j + 1} violate the braid relations",
                            path=f"transposition_action[{n}]",
                            witness={"z": sp.labels[n][k]},
                        )
        if n == 0:
            continue
        for key, tables in (("delete_left", sp.del_left), ("delete_right", sp.del_right)):
            # equivariance of single deletions
            for i, g in enumerate(gens, start=1):
                sigma = adjacent_transposition(n, i)
                for x in range(1, n + 1):
                    sx = sigma[x - 1]
                    if x in (i, i + 1):
                        tau = None
                    else:
                        tau = sp.swaps[n - 1][(i if x > i + 1 else i - 1) - 1]
                    for k in range(size):
                        lhs = tables[n][sx - 1][g[k]]
                        rhs = tables[n][x - 1][k]
                        if tau is not None:
                            rhs = _apply(tau, rhs)
                        if lhs != rhs:
                            raise SpeciesValidationError(
                                "deletion is not equivariant",
                                path=f"{key}[{n}][{x - 1}]",
                                witness={"sigma": sigma, "z": sp.labels[n][k], "S": complement((x,), n)},
                            )
            # coassociativity: deleting in either order agrees
            for x in range(1, n + 1):
                for y in range(x + 1, n + 1):
                    for k in range(size):
                        a = _apply(tables[n - 1][x - 1], tables[n][y - 1][k]) if n >= 2 else None
                        b = _apply(tables[n - 1][y - 2], tables[n][x - 1][k]) if n >= 2 else None
                        if a != b:
                            raise SpeciesValidationError(
                                "restrictions are not coassociative",
                                path=f"{key}[{n}]",
                                witness={"z": sp.labels[n][k], "S": complement((x, y), n)},
                            )
        # left and right deletions of distinct points commute
        for x in range(1, n + 1):
            for y in range(1, n + 1):
                if x == y:
                    continue
                y_after = y - 1 if y > x else y
                x_after = x - 1 if x > y else x
                for k in range(size):
                    a = _apply(sp.del_right[n - 1][y_after - 1], sp.del_left[n][x - 1][k])
                    b = _apply(sp.del_left[n - 1][x_after - 1], sp.del_right[n][y - 1][k])
                    if a != b:
                        raise SpeciesValidationError(
                            "left and right restrictions are not compatible",
                            path=f"delete_left[{n}][{x - 1}]",
                            witness={
                                "z": sp.labels[n][k],
                                "S": complement((x,), n),
                                "T": complement((y,), n),
                            },
                        )
        if sp.cosymmetric and sp.del_left[n] != sp.del_right[n]:
            raise SpeciesValidationError(
                "declared cosymmetric but left and right deletions differ", path=f"delete_right[{n}]"
            )


def export_document(species, max_arity, name=None):
    """Generating tables of ``species`` up to ``max_arity`` as a custom-species document."""
    doc = {
        "name": name or species.species_id,
        "max_arity": max_arity,
        "cosymmetric": bool(species.cosymmetric),
        "structures": [],
        "transposition_action": [],
        "delete_left": [],
        "delete_right": [],
    }
    labels = []
    for n in range(max_arity + 1):
        structs = species.structures(n)
        index = {z: k for k, z in enumerate(structs)}
        labels.append([species.describe(z) if not isinstance(species, CustomSpecies) else z for z in structs])
        if len(set(labels[-1])) != len(structs):
            labels[-1] = [json.dumps(_jsonable(z)) for z in structs]
        doc["structures"].append(labels[-1])
        doc["transposition_action"].append(
            [[index[species.relabel(adjacent_transposition(n, i), z)] for z in structs] for i in range(1, n)]
        )
        for key, fn in (("delete_left", species.restrict_left), ("delete_right", species.restrict_right)):
            tables = []
            if n > 0:
                prev = {z: k for k, z in enumerate(species.structures(n - 1))}
                for x in range(1, n + 1):
                    S = complement((x,), n)
                    row = []
                    for z in structs:
                        w = fn(n, z, S)
                        row.append(None if w is None else prev[w])
                    tables.append(row)
            doc[key].append(tables)
    return doc


def _jsonable(z):
    if isinstance(z, tuple):
        return [_jsonable(x) for x in z]
    return z


# --------------------------------------------------------------------------
# Orbit tables


@dataclass
class OrbitTable:
    """Orbits of the relabelling action on ``X[n]``.

    ``index[z] = (orbit, parity)`` where some permutation of that parity
    carries the orbit representative to ``z``; the parity is meaningful only
    for orbits without an odd stabilizer element.
    """

    arity: int
    reps: list
    sizes: list
    odd: list
    index: dict = field(repr=False)

    @property
    def orbits(self):
        return list(zip(self.reps, self.sizes, self.odd))

    def locate(self, z):
        """``(orbit number, sign)`` of the permutation carrying the representative to ``z``."""
        k, parity = self.index[z]
        return k, (-1 if parity else 1)

    def odd_free(self):
        return [k for k, bad in enumerate(self.odd) if not bad]


def compute_orbits(elements, act, gens):
    """Orbits of a group generated by involutions ``gens`` acting via ``act(g, x)``.

    Returns ``(reps, sizes, odd, index)`` as in :class:`OrbitTable`.  An orbit
    has an odd stabilizer element exactly when its Schreier graph is not
    bipartite, which the breadth-first two-colouring detects.
    """
    index = {}
    reps, sizes, odd = [], [], []
    for x in elements:
        if x in index:
            continue
        parity = {x: 0}
        queue = [x]
        bad = False
        for w in queue:
            pw = parity[w]
            for g in gens:
                u = act(g, w)
                pu = parity.get(u)
                if pu is None:
                    parity[u] = 1 - pw
                    queue.append(u)
                elif pu == pw:
                    bad = True
        rep = min(parity)
        shift = parity[rep]
        k = len(reps)
        for w, p in parity.items():
            index[w] = (k, p ^ shift)
        reps.append(rep)
        sizes.append(len(parity))
        odd.append(bad)
    return reps, sizes, odd, index


_ORBIT_CACHE = {}


def orbit_table(species, n):
    """Orbits of ``S_n`` on ``X[n]`` with exact odd-stabilizer flags (cached)."""
    key = (id(species), n)
    if key not in _ORBIT_CACHE:
        gens = [adjacent_transposition(n, i) for i in range(1, n)]
        reps, sizes, odd, index = compute_orbits(species.structures(n), species.relabel, gens)
        _ORBIT_CACHE[key] = (species, OrbitTable(n, reps, sizes, odd, index))
    return _ORBIT_CACHE[key][1]


def graph_orbit_summary(n):
    """``(orbits, orbits without odd automorphisms)`` for graphs on ``[n]``.

    Vectorized over all ``2**(n(n-1)/2)`` edge masks: orbit labels come from
    min-label propagation along the adjacent transpositions, and odd
    stabilizers from the same propagation on the parity double cover.
    Intended for ``n = 7`` where the generic table is too slow.
    """
    import numpy as np

    pairs = _pairs(n)
    m = len(pairs)
    N = 1 << m
    where = {p: k for k, p in enumerate(pairs)}
    g = np.arange(N, dtype=np.int64)
    images = []
    for i in range(1, n):
        sigma = adjacent_transposition(n, i)
        img = np.zeros(N, dtype=np.int64)
        for k, (a, b) in enumerate(pairs):
            a2, b2 = sigma[a - 1], sigma[b - 1]
            img |= ((g >> k) & 1) << where[(min(a2, b2), max(a2, b2))]
        images.append(img)
    del g

    def propagate(size, neighbours):
        lab = np.arange(size, dtype=np.int64)
        while True:
            new = lab.copy()
            for nb in neighbours:
                np.minimum(new, lab[nb], out=new)
            new = new[new]
            if np.array_equal(new, lab):
                return lab
            lab = new

    base = propagate(N, images)
    cover = propagate(2 * N, [np.concatenate([img + N, img]) for img in images])
    odd = cover[:N] == cover[N:]
    orbits = np.unique(base)
    bad = np.unique(base[odd])
    return int(len(orbits)), int(len(orbits) - len(bad))


# --------------------------------------------------------------------------
# Registry and public helpers

_REGISTRY = {}


def register(species):
    """Add a species to the (append-only) registry and return its id."""
    sid = species.species_id
    if sid in _REGISTRY:
        if _REGISTRY[sid] is species:
            return sid
        raise ValueError(f"species id {sid!r} is already registered")
    _REGISTRY[sid] = species
    return sid


def registered_ids():
    return list(_REGISTRY)


def _builtin_singleton(k):
    sid = f"S^{k}"
    if sid not in _REGISTRY:
        register(UnitSpecies() if k == 0 else SingletonPower(k))
        if k == 0:
            _REGISTRY[sid] = _REGISTRY["1"]
    return _REGISTRY[sid]


def get_species(name):
    """Look up a species id; ``S^k`` / ``Sk`` and products ``X*Y`` are built on demand."""
    if not isinstance(name, str):
        return name
    name = name.strip()
    if name in _REGISTRY:
        return _REGISTRY[name]
    if "*" in name:
        factors = [get_species(part) for part in name.split("*")]
        sp = factors[0]
        for f in factors[1:]:
            sp = CauchyProduct(sp, f)
        # make products with the same name share caches
        if sp.species_id in _REGISTRY:
            return _REGISTRY[sp.species_id]
        register(sp)
        if sp.species_id != name:
            _REGISTRY[name] = sp
        return sp
    m = re.fullmatch(r"S\^?(\d+)", name)
    if m:
        return _builtin_singleton(int(m.group(1)))
    if name == "S":
        return _builtin_singleton(1)
    path = Path(name)
    if path.suffix == ".json" and path.exists():
        return get_species(load_custom_species(path))
    for candidate in (bundled_document_path(name), _user_registry_dir() / f"{name}.json"):
        if candidate.is_file():
            return _REGISTRY[load_custom_species(json.loads(candidate.read_text()))]
    raise UnknownSpeciesError(name)


def _user_registry_dir():
    """Where ``species add`` stores documents; overridable by SPECIES_COHOMOLOGY_HOME."""
    import os

    root = os.environ.get("SPECIES_COHOMOLOGY_HOME")
    return Path(root) if root else Path.home() / ".species_cohomology" / "species"


def structures(species, n):
    """Complete, duplicate-free list of structures of ``species`` on ``[n]``."""
    return get_species(species).structures(n)


def relabel(species, sigma, z):
    """``sigma . z`` with an arity check."""
    sp = get_species(species)
    sigma = tuple(sigma)
    if not sp.contains(len(sigma), z):
        raise ValueError(f"{z!r} is not a structure of {sp.species_id} on [{len(sigma)}]")
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"{sigma} is not a permutation")
    return sp.relabel(sigma, z)


def restrict(species, side, z, S, n):
    """Restriction of ``z`` (on ``[n]``) to ``S``, standardized; ``None`` means zero."""
    sp = get_species(species)
    S = tuple(sorted(S))
    if not set(S) <= set(range(1, n + 1)):
        raise ValueError(f"{S} is not a subset of [{n}]")
    if not sp.contains(n, z):
        raise ValueError(f"{z!r} is not a structure of {sp.species_id} on [{n}]")
    if side == "left":
        return sp.restrict_left(n, z, S)
    if side == "right":
        return sp.restrict_right(n, z, S)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def bundled_document_path(name="marked"):
    if not re.fullmatch(r"[A-Za-z0-9_.^-]+", name):
        return Path("/nonexistent")
    return resources.files("species_cohomology") / "data" / f"{name}.json"


def load_custom_species(document, register_it=True):
    """Validate a custom-species document (mapping, JSON text or path) and register it."""
    if isinstance(document, (str, Path)) and not str(document).lstrip().startswith("{"):
        document = json.loads(Path(document).read_text())
    elif isinstance(document, str):
        document = json.loads(document)
    sp = CustomSpecies(document)
    if register_it:
        if sp.species_id in _REGISTRY:
            old = _REGISTRY[sp.species_id]
            if isinstance(old, CustomSpecies) and old.document == document:
                return sp.species_id
        register(sp)
    return sp.species_id


def verify_bicomodule_axioms(species, max_n, exhaustive=False):
    """Check the bicomodule axioms on every arity up to ``max_n``.

    Returns None when everything holds, otherwise a dict naming the failed
    axiom and a witness.  Coassociativity is always checked along every chain
    ``A < B`` with ``|B - A| = 1``, which makes each restriction an iterated
    single deletion.  Given that, it is enough to test equivariance,
    cosymmetry and left/right compatibility on single deletions.  Set
    ``exhaustive`` to test them on all subsets instead: compatibility then
    runs over all pairs ``S, T`` with ``S | T = [n]``, and functoriality over
    all of ``S_n`` (for ``n <= 5``).
    """
    sp = get_species(species)
    for n in range(max_n + 1):
        structs = sp.structures(n)
        gens = [adjacent_transposition(n, i) for i in range(1, n)]
        full = tuple(range(1, n + 1))
        all_S = subsets(n)
        test_S = all_S if exhaustive else [full] + [complement((x,), n) for x in full]
        for z in structs:
            if sp.relabel(identity(n), z) != z:
                return {"axiom": "relabel(id) = id", "z": z}
            for side, fn in (("left", sp.restrict_left), ("right", sp.restrict_right)):
                if fn(n, z, full) != z:
                    return {"axiom": "counit", "side": side, "z": z}
            if sp.cosymmetric:
                for S in test_S:
                    if sp.restrict_left(n, z, S) != sp.restrict_right(n, z, S):
                        return {"axiom": "cosymmetric", "z": z, "S": S}
        # functoriality: relabel(sigma o s_i) = relabel(sigma) o relabel(s_i)
        sigmas = all_permutations(n) if (exhaustive and n <= 5) or n <= 3 else gens
        for sigma in sigmas:
            for g in gens:
                sg = compose(sigma, g)
                for z in structs:
                    if sp.relabel(sg, z) != sp.relabel(sigma, sp.relabel(g, z)):
                        return {"axiom": "functoriality", "sigma": sigma, "tau": g, "z": z}
        for side, fn in (("left", sp.restrict_left), ("right", sp.restrict_right)):
            for z in structs:
                for B in all_S:
                    zb = fn(n, z, B)
                    for A in combinations(B, len(B) - 1) if B else ():
                        direct = fn(n, z, A)
                        via = None if zb is None else fn(len(B), zb, _std_subset(B, A))
                        if direct != via:
                            return {"axiom": "coassociativity", "side": side, "z": z, "S": A, "B": B}
                for g in gens:
                    gz = sp.relabel(g, z)
                    for S in test_S:
                        gS = tuple(sorted(g[s - 1] for s in S))
                        lhs = fn(n, gz, gS)
                        rhs = fn(n, z, S)
                        if rhs is not None:
                            rhs = sp.relabel(CauchyProduct._induced(g, S), rhs)
                        if lhs != rhs:
                            return {"axiom": "equivariance", "side": side, "sigma": g, "z": z, "S": S}
        if exhaustive:
            pairs = []
            for S in all_S:
                Sc = complement(S, n)
                for extra in subsets(len(S)):
                    # T is the complement of S plus part of S, so that S | T = [n]
                    pairs.append((S, tuple(sorted(Sc + tuple(S[e - 1] for e in extra)))))
        else:
            pairs = [(complement((x,), n), complement((y,), n)) for x in full for y in full if x != y]
        for z in structs:
            for S, T in pairs:
                B = tuple(sorted(set(S) & set(T)))
                zl = sp.restrict_left(n, z, S)
                lhs = None if zl is None else sp.restrict_right(len(S), zl, _std_subset(S, B))
                zr = sp.restrict_right(n, z, T)
                rhs = None if zr is None else sp.restrict_left(len(T), zr, _std_subset(T, B))
                if lhs != rhs:
                    return {"axiom": "compatibility", "z": z, "S": S, "T": T}
    return None


for _sp in (
    ExponentialSpecies(),
    UnitSpecies(),
    LinearOrders(),
    SetPartitions(),
    SetCompositions(),
    Graphs(),
):
    register(_sp)
_REGISTRY["S^0"] = _REGISTRY["1"]

BUILTIN_IDS = ("E", "1", "L", "P", "C", "Gr")
