from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from species_cohomology.combinatorics import all_permutations, compose, inverse, sign
from species_cohomology.koszul import (
    KoszulCochain,
    cochain_to_koszul,
    differential_matrix,
    evaluate,
    koszul_basis,
    koszul_cohomology,
    koszul_differential,
    koszul_dimension,
    koszul_to_cochain,
    linear_order_generator,
)
from species_cohomology.oracle import coboundary
from species_cohomology.species import get_species, orbit_table

ALL = ["E", "1", "L", "P", "C", "Gr", "S^1", "S^2", "S^3", "marked", "L*E", "S*L", "S*E", "marked*L"]
COSYMMETRIC = ["E", "1", "L", "P", "C", "Gr", "S^1", "S^2", "S^3", "L*E", "S*L", "S*E"]


def test_dimensions():
    assert [koszul_dimension("E", p) for p in range(6)] == [1, 1, 0, 0, 0, 0]
    assert [koszul_dimension("L", p) for p in range(7)] == [1] * 7
    assert [koszul_dimension("Gr", p) for p in range(7)] == [1, 1, 0, 0, 1, 6, 28]
    assert [koszul_dimension("marked", p) for p in range(5)] == [1, 2, 1, 0, 0]
    with pytest.raises(ValueError):
        koszul_dimension("Gr", 7)


def test_heavy_graph_dimension():
    assert koszul_dimension("Gr", 7, allow_heavy=True) == 252


def test_generator_on_linear_orders():
    f = linear_order_generator(4)
    for s in all_permutations(4):
        assert evaluate(f, s) == sign(s)


def test_odd_stabilizer_orbit_evaluates_to_zero():
    Gr = get_species("Gr")
    table = orbit_table(Gr, 4)
    f = KoszulCochain.from_vector(Gr, 4, [1])
    assert f(((1, 2),)) == 0  # swapping 1 and 2 fixes the graph
    assert f(()) == 0
    with pytest.raises(ValueError):
        KoszulCochain(Gr, 4, {((1, 2),): 1})
    assert sum(1 for odd in table.odd if not odd) == 1


def test_evaluate_rejects_wrong_arity():
    with pytest.raises(ValueError):
        evaluate(linear_order_generator(3), (1, 2))


def test_relabelled_graphs_transport_with_sign():
    Gr = get_species("Gr")
    basis = koszul_basis(Gr, 5)
    f = KoszulCochain.from_vector(Gr, 5, list(range(1, len(basis) + 1)))
    for rep in basis:
        for s in all_permutations(5)[::7]:
            assert f(Gr.relabel(s, rep)) == sign(s) * f(rep)


@given(st.sampled_from(["L", "P", "C", "marked", "L*E"]), st.integers(0, 4), st.data())
def test_equivariance(sid, p, data):
    sp = get_species(sid)
    basis = koszul_basis(sp, p)
    vec = data.draw(st.lists(st.integers(-3, 3), min_size=len(basis), max_size=len(basis)))
    f = KoszulCochain.from_vector(sp, p, vec)
    structs = sp.structures(p)
    if not structs:
        return
    z = data.draw(st.sampled_from(structs))
    s = data.draw(st.permutations(range(1, p + 1))) if p else ()
    assert f(sp.relabel(tuple(s), z)) == sign(tuple(s)) * f(z)


def test_from_function_check_rejects_non_equivariant():
    with pytest.raises(ValueError):
        KoszulCochain.from_function("L", 2, lambda z: 1, check=True)
    f = KoszulCochain.from_function("L", 2, sign, check=True)
    assert f == linear_order_generator(2)


def test_arithmetic():
    f = linear_order_generator(3)
    assert (f + f) == 2 * f
    assert (f - f).is_zero()
    assert f.vector() == [1]
    with pytest.raises(ValueError):
        f + linear_order_generator(2)


@pytest.mark.parametrize("sid", ALL)
def test_differential_squares_to_zero(sid):
    top = 4 if sid in ("Gr", "marked*L") else 5
    for p in range(top):
        d1 = differential_matrix(sid, p, exploit_cosymmetry=False)
        d2 = differential_matrix(sid, p + 1, exploit_cosymmetry=False)
        assert (d2 @ d1).is_zero()


@pytest.mark.parametrize("sid", COSYMMETRIC)
def test_cosymmetric_differential_vanishes_term_by_term(sid):
    top = 5 if sid == "Gr" else 6
    for p in range(top):
        assert differential_matrix(sid, p, exploit_cosymmetry=False).is_zero()
    for p in range(top + 1):
        assert koszul_cohomology(sid, p)[0] == koszul_dimension(sid, p)


def test_marked_subsets_differential():
    M = differential_matrix("marked", 1)
    assert (M.rows, M.cols) == (1, 2)
    assert sorted(M.to_dense()[0]) == [-1, 1]
    assert [koszul_cohomology("marked", p)[0] for p in range(5)] == [1, 1, 0, 0, 0]
    assert [koszul_cohomology("marked", p, exploit_cosymmetry=False)[0] for p in range(5)] == [1, 1, 0, 0, 0]


def test_differential_in_degree_zero():
    # df(z) = f(z \\ empty) - f(z // empty) on arity 1
    sp = get_species("marked")
    f = KoszulCochain.from_vector(sp, 0, [1])
    assert koszul_differential(sp, f).is_zero()
    # on K^1 of marked subsets the two functionals map to opposite multiples
    a, b = (KoszulCochain.from_vector(sp, 1, v) for v in ([1, 0], [0, 1]))
    assert koszul_differential(sp, a) == -koszul_differential(sp, b)
    assert not koszul_differential(sp, a).is_zero()
    L = get_species("L")
    assert koszul_differential(L, KoszulCochain(L, 0, {(): 5})).is_zero()


@pytest.mark.parametrize("n", range(6))
def test_sphere_species(n):
    assert [koszul_cohomology(f"S^{n}", q)[0] for q in range(7)] == [int(q == n) for q in range(7)]


@pytest.mark.parametrize("base", ["E", "L"])
def test_suspension(base):
    for p in range(1, 6):
        assert koszul_cohomology(f"S*{base}", p)[0] == koszul_cohomology(base, p - 1)[0]
    assert koszul_cohomology(f"S*{base}", 0)[0] == 0


def test_known_cohomology():
    assert [koszul_cohomology("P", q)[0] for q in range(6)] == [1, 1, 0, 0, 0, 0]
    assert [koszul_cohomology("C", q)[0] for q in range(6)] == [1] * 6
    assert [koszul_cohomology("E", q)[0] for q in range(5)] == [1, 1, 0, 0, 0]


@pytest.mark.parametrize("sid", ["L", "P", "C", "Gr", "marked", "L*E"])
def test_round_trip_through_cochains(sid):
    sp = get_species(sid)
    for p in range(5):
        basis = koszul_basis(sp, p)
        f = KoszulCochain.from_vector(sp, p, [Fraction(k + 1, 3) for k in range(len(basis))])
        assert cochain_to_koszul(koszul_to_cochain(f)) == f
        zero = KoszulCochain(sp, p)
        assert cochain_to_koszul(koszul_to_cochain(zero)).is_zero()


def test_lift_of_f2_values():
    alpha = koszul_to_cochain(linear_order_generator(2))
    assert alpha.value(((1,), (2,)), (1, 2)) == Fraction(1, 2)
    assert alpha.value(((2,), (1,)), (1, 2)) == Fraction(-1, 2)
    assert alpha.value(((2,), (1,)), (2, 1)) == Fraction(1, 2)
    assert alpha.value(((1,), (2, 3)), (1, 2, 3)) == 0


def test_cardinality_one_cochain_round_trip():
    from species_cohomology.products import cardinality_cocycle

    assert cochain_to_koszul(cardinality_cocycle("L")) == linear_order_generator(1)


@pytest.mark.parametrize("sid", ["marked", "marked*L", "L", "P"])
def test_projection_intertwines_differentials_up_to_sign(sid):
    sp = get_species(sid)
    for p in range(3):
        for b in koszul_basis(sp, p):
            f = KoszulCochain(sp, p, {b: 1})
            lhs = cochain_to_koszul(coboundary(koszul_to_cochain(f)))
            assert lhs == -koszul_differential(sp, f)
