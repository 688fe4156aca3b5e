"""Exact Lie-algebra analysis on the three generator families.

The bracket tables frozen here were recomputed independently from the base
fields; the three cells of the 12-dim table that standard transcriptions get
wrong are asserted in their corrected form (see the CLI golden corpus for
the arbitration machinery).
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from spraylie import liealg as la
from spraylie.fields import bracket_base, combine_fields
from spraylie.linalg import det, unit_vector
from tests.conftest import base_field

H = Fraction(1, 2)


@pytest.fixture(scope="module")
def shell_sc(shell_generators):
    return la.structure_constants_from_fields(
        list(shell_generators.values()), list(shell_generators.keys())
    )


@pytest.fixture(scope="module")
def blocks_sc(blocks_generators):
    return la.structure_constants_from_fields(
        list(blocks_generators.values()), list(blocks_generators.keys())
    )


@pytest.fixture(scope="module")
def flat_spray_sc(flat_spray_generators):
    return la.structure_constants_from_fields(
        list(flat_spray_generators.values()), list(flat_spray_generators.keys())
    )


@pytest.fixture(scope="module")
def flat_isometry_sc(flat_isometry_generators):
    return la.structure_constants_from_fields(
        list(flat_isometry_generators.values()), list(flat_isometry_generators.keys())
    )


def _cell(sc, a: str, b: str) -> dict[str, Fraction]:
    i, j = sc.labels.index(a), sc.labels.index(b)
    return {sc.labels[k]: sc.c[i][j][k] for k in range(sc.dim) if sc.c[i][j][k]}


# ---------------------------------------------------------------------------
# structure constants against the frozen tables
# ---------------------------------------------------------------------------

SHELL_TABLE = {
    ("e1", "e3"): {"e2": H},
    ("e1", "e4"): {"e1": Fraction(-1)},
    ("e1", "e5"): {"e4": H},
    ("e1", "e6"): {"e3": -H},
    ("e2", "e3"): {"e1": Fraction(-2)},
    ("e2", "e4"): {"e2": Fraction(-1)},
    ("e2", "e5"): {"e3": Fraction(-1)},
    ("e2", "e6"): {"e4": Fraction(-1)},
    ("e3", "e5"): {"e6": Fraction(1)},
    ("e3", "e6"): {"e5": Fraction(-1)},
    ("e4", "e5"): {"e5": Fraction(-1)},
    ("e4", "e6"): {"e6": Fraction(-1)},
}

BLOCKS_TABLE = {
    ("e1", "e2"): {"e1": Fraction(-1)},
    ("e1", "e3"): {"e2": H},
    ("e2", "e3"): {"e3": Fraction(-1)},
    ("e4", "e5"): {"e4": Fraction(-1)},
    ("e4", "e6"): {"e5": H},
    ("e5", "e6"): {"e6": Fraction(-1)},
}

FLAT_SPRAY_TABLE = {
    ("e1", "e2"): {"e2": -H},
    ("e1", "e3"): {"e3": -H},
    ("e1", "e4"): {"e4": -H},
    ("e1", "e5"): {"e5": H},
    ("e1", "e9"): {"e9": H},
    ("e2", "e5"): {"e1": -H, "e6": H},
    ("e2", "e6"): {"e2": -H},
    ("e2", "e7"): {"e3": -H},
    ("e2", "e8"): {"e4": -H},  # corrected cell
    ("e2", "e9"): {"e10": H},
    ("e3", "e5"): {"e7": H},
    ("e3", "e9"): {"e12": H},
    ("e4", "e5"): {"e8": H},
    ("e4", "e9"): {"e1": -H, "e11": H},
    ("e4", "e10"): {"e2": -H},
    ("e4", "e11"): {"e4": -H},
    ("e4", "e12"): {"e3": -H},
    ("e5", "e6"): {"e5": H},
    ("e5", "e10"): {"e9": H},
    ("e6", "e7"): {"e7": -H},
    ("e6", "e8"): {"e8": -H},
    ("e6", "e10"): {"e10": H},
    ("e7", "e10"): {"e12": H},
    ("e8", "e9"): {"e5": -H},
    ("e8", "e10"): {"e6": -H, "e11": H},
    ("e8", "e11"): {"e8": -H},
    ("e8", "e12"): {"e7": -H},
    ("e9", "e11"): {"e9": H},
    ("e10", "e11"): {"e10": H},
    ("e11", "e12"): {"e12": -H},
}

FLAT_ISOMETRY_TABLE = {
    ("g1", "g2"): {"g4": H},
    ("g1", "g3"): {"g5": H},
    ("g1", "g4"): {"g2": -H},
    ("g1", "g5"): {"g3": -H},
    ("g2", "g3"): {"g6": -H},
    ("g3", "g5"): {"g1": H},
    ("g3", "g6"): {"g2": -H},
    ("g4", "g5"): {"g6": -H},
    ("g5", "g6"): {"g4": -H},
}


def _assert_table(sc, table):
    m = sc.dim
    for i in range(m):
        for j in range(i + 1, m):
            key = (sc.labels[i], sc.labels[j])
            assert _cell(sc, *key) == table.get(key, {}), key


def test_shell_table(shell_sc):
    _assert_table(shell_sc, SHELL_TABLE)


def test_blocks_table(blocks_sc):
    _assert_table(blocks_sc, BLOCKS_TABLE)


def test_flat_spray_table(flat_spray_sc):
    _assert_table(flat_spray_sc, FLAT_SPRAY_TABLE)


def test_flat_isometry_table(flat_isometry_sc):
    _assert_table(flat_isometry_sc, FLAT_ISOMETRY_TABLE)


def test_bracket_table_matches_field_brackets(flat_spray_generators, flat_spray_sc):
    # re-bracketing the generators reproduces each table row exactly
    fields = list(flat_spray_generators.values())
    for i in range(12):
        for j in range(i + 1, 12):
            direct = bracket_base(fields[i], fields[j])
            via_table = combine_fields(fields, list(flat_spray_sc.c[i][j]))
            assert (direct - via_table).is_zero()


def test_abelian_pair_gives_zero_table():
    sc = la.structure_constants_from_fields(
        [base_field("1", "0"), base_field("0", "1")]
    )
    assert all(not any(row) for plane in sc.c for row in plane)


def test_non_closure_is_reported():
    with pytest.raises(la.NonClosureError) as err:
        la.structure_constants_from_fields(
            [base_field("1", "0"), base_field("x1^2", "0")], ["a", "b"]
        )
    assert err.value.pair == ("a", "b")


def test_dependent_generators_rejected():
    with pytest.raises(la.DependentGeneratorsError):
        la.structure_constants_from_fields(
            [base_field("1", "0"), base_field("2", "0")]
        )


# ---------------------------------------------------------------------------
# invariants and classical maps
# ---------------------------------------------------------------------------


def test_jacobi_everywhere(shell_sc, blocks_sc, flat_spray_sc, flat_isometry_sc):
    for sc in (shell_sc, blocks_sc, flat_spray_sc, flat_isometry_sc):
        ok, witness = la.jacobi_check(sc)
        assert ok, witness


def test_jacobi_detects_fault(shell_sc):
    c = [[list(row) for row in plane] for plane in shell_sc.c]
    c[0][1][0] += 1
    c[1][0][0] -= 1
    broken = la.StructureConstants(
        shell_sc.labels, tuple(tuple(tuple(r) for r in p) for p in c)
    )
    ok, witness = la.jacobi_check(broken)
    assert not ok and witness is not None


def test_killing_form_symmetric_ad_invariant(flat_spray_sc):
    sc = flat_spray_sc
    kappa = la.killing_form(sc)
    m = sc.dim
    for i in range(m):
        for j in range(m):
            assert kappa[i][j] == kappa[j][i]
    # kappa([x,y],z) + kappa(y,[x,z]) = 0 on basis triples
    for x in range(m):
        for y in range(m):
            for z in range(m):
                xy = sc.c[x][y]
                xz = sc.c[x][z]
                left = sum(xy[k] * kappa[k][z] for k in range(m))
                right = sum(xz[k] * kappa[y][k] for k in range(m))
                assert left + right == 0


def test_killing_determinants(shell_sc, blocks_sc, flat_spray_sc, flat_isometry_sc):
    assert la.killing_det(shell_sc) == -1024
    assert la.killing_det(blocks_sc) == 4
    assert la.killing_det(flat_spray_sc) == 0
    assert la.killing_det(flat_isometry_sc) == 0


def test_semisimplicity_verdicts(shell_sc, blocks_sc, flat_spray_sc, flat_isometry_sc):
    assert la.is_semisimple(shell_sc)
    assert la.is_semisimple(blocks_sc)
    assert not la.is_semisimple(flat_spray_sc)
    assert not la.is_semisimple(flat_isometry_sc)
    assert la.is_simple(shell_sc)
    assert not la.is_simple(blocks_sc)
    assert not la.is_simple(flat_isometry_sc)


def test_abelian_killing_form_is_zero():
    sc = la.structure_constants_from_fields(
        [base_field("1", "0"), base_field("0", "1")]
    )
    assert la.killing_form(sc) == [[0, 0], [0, 0]]
    assert not la.is_semisimple(sc)


def test_derived_and_center(shell_sc, blocks_sc, flat_spray_sc, flat_isometry_sc):
    assert la.derived_subalgebra(shell_sc).dim == 6
    assert la.derived_subalgebra(blocks_sc).dim == 6
    assert la.derived_subalgebra(flat_spray_sc).dim == 11
    assert la.derived_subalgebra(flat_isometry_sc).dim == 6
    for sc in (shell_sc, blocks_sc, flat_spray_sc, flat_isometry_sc):
        assert la.center(sc).is_zero()


def test_abelian_center_is_everything():
    sc = la.structure_constants_from_fields(
        [base_field("1", "0"), base_field("0", "1")]
    )
    assert la.center(sc).dim == 2
    assert la.derived_subalgebra(sc).is_zero()
    assert la.radical(sc).dim == 2


def test_radicals(shell_sc, blocks_sc, flat_spray_sc, flat_isometry_sc):
    assert la.radical(shell_sc).is_zero()
    assert la.radical(blocks_sc).is_zero()
    rad_s = la.radical(flat_spray_sc)
    mixed = [Fraction(1) if i in (0, 5, 10) else Fraction(0) for i in range(12)]
    expected_s = la.Subspace.from_vectors(
        [mixed, unit_vector(12, 2), unit_vector(12, 6), unit_vector(12, 11)], 12
    )
    assert rad_s == expected_s
    rad_g = la.radical(flat_isometry_sc)
    expected_g = la.Subspace.from_vectors(
        [unit_vector(6, 1), unit_vector(6, 3), unit_vector(6, 5)], 6
    )
    assert rad_g == expected_g


def test_radical_is_solvable_and_ideal(flat_spray_sc):
    sc = flat_spray_sc
    rad = la.radical(sc)
    series = rad
    steps = 0
    while not series.is_zero():
        vectors = [
            sc.bracket_coords(u, v)
            for a, u in enumerate(series.basis)
            for v in series.basis[a + 1 :]
        ]
        series = la.Subspace.from_vectors(vectors, sc.dim)
        steps += 1
        assert steps <= sc.dim
    for v in rad.basis:
        for i in range(sc.dim):
            assert rad.contains(sc.bracket_coords(unit_vector(sc.dim, i), v))


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------


def test_abelian_ideal_checks(flat_spray_sc, flat_isometry_sc):
    decay_e = la.Subspace.from_vectors(
        [unit_vector(12, 2), unit_vector(12, 6), unit_vector(12, 11)], 12
    )
    assert la.abelian_ideal_check(flat_spray_sc, decay_e)
    decay_g = la.Subspace.from_vectors(
        [unit_vector(6, 1), unit_vector(6, 3), unit_vector(6, 5)], 6
    )
    assert la.abelian_ideal_check(flat_isometry_sc, decay_g)


def test_single_generator_span_is_not_an_ideal(shell_sc):
    one = la.Subspace.from_vectors([unit_vector(6, 0)], 6)
    assert not la.abelian_ideal_check(shell_sc, one)


def test_coordinate_ideal_search(shell_sc, blocks_sc, flat_spray_sc):
    assert la.find_abelian_ideals_coordinate(shell_sc) == []
    assert la.find_abelian_ideals_coordinate(blocks_sc) == []
    found = la.find_abelian_ideals_coordinate(flat_spray_sc)
    decay_e = la.Subspace.from_vectors(
        [unit_vector(12, 2), unit_vector(12, 6), unit_vector(12, 11)], 12
    )
    assert found == [decay_e]


def test_coordinate_ideal_search_abelian_algebra():
    sc = la.structure_constants_from_fields(
        [base_field("1", "0"), base_field("0", "1")]
    )
    assert len(la.find_abelian_ideals_coordinate(sc)) == 3


def test_blocks_coordinate_ideals_non_abelian(blocks_sc):
    # the two simple blocks are coordinate ideals but not abelian ones
    ideals = la._coordinate_ideals(blocks_sc)
    assert (0, 1, 2) in ideals and (3, 4, 5) in ideals


# ---------------------------------------------------------------------------
# derivations
# ---------------------------------------------------------------------------


def test_flat_spray_derivations_all_inner(flat_spray_sc):
    space = la.derivations(flat_spray_sc)
    assert space.dimension == 12
    assert space.inner_dimension == 12
    assert space.outer_dimension == 0


def test_flat_isometry_has_one_outer_derivation(flat_isometry_sc):
    space = la.derivations(flat_isometry_sc)
    assert space.dimension == 7
    assert space.inner_dimension == 6
    assert space.outer_dimension == 1
    diag = [[Fraction(0)] * 6 for _ in range(6)]
    diag[1][1] = diag[3][3] = diag[5][5] = Fraction(1)
    assert la.is_derivation(flat_isometry_sc, diag)
    assert not la.in_inner_span(flat_isometry_sc, diag)


def test_every_ad_is_a_derivation(shell_sc):
    for i in range(shell_sc.dim):
        ad = shell_sc.ad_matrix(i)
        assert la.is_derivation(shell_sc, ad)
        assert la.in_inner_span(shell_sc, ad)


def test_derivation_basis_satisfies_leibniz(flat_isometry_sc):
    for matrix in la.derivations(flat_isometry_sc).basis:
        assert la.is_derivation(flat_isometry_sc, [list(r) for r in matrix])


# ---------------------------------------------------------------------------
# Levi decomposition and classification
# ---------------------------------------------------------------------------


def _check_levi(sc, result):
    m = sc.dim
    assert result.radical.dim + result.levi.dim == m
    assert result.radical.sum(result.levi).dim == m
    for u in result.levi.basis:
        for v in result.levi.basis:
            assert result.levi.contains(sc.bracket_coords(u, v))
    if result.levi.dim:
        sub = la.subalgebra_constants(sc, result.levi)
        assert det(la.killing_form(sub)) != 0


def test_levi_flat_spray(flat_spray_sc):
    result = la.levi_decomposition(flat_spray_sc)
    assert result.radical.dim == 4 and result.levi.dim == 8
    _check_levi(flat_spray_sc, result)


def test_levi_flat_isometry(flat_isometry_sc):
    result = la.levi_decomposition(flat_isometry_sc)
    assert result.radical.dim == 3 and result.levi.dim == 3
    _check_levi(flat_isometry_sc, result)


def test_levi_semisimple_and_abelian_edges(blocks_sc):
    result = la.levi_decomposition(blocks_sc)
    assert result.radical.is_zero() and result.levi.dim == 6
    abelian = la.structure_constants_from_fields(
        [base_field("1", "0"), base_field("0", "1")]
    )
    result = la.levi_decomposition(abelian)
    assert result.radical.dim == 2 and result.levi.is_zero()


def test_displayed_complement_passes_verification(flat_spray_sc):
    # the published complement differs from ours only by choice, so it is
    # validated by the same invariants rather than by equality
    sc = flat_spray_sc
    combos = [
        {0: 1, 10: -1},
        {1: 1},
        {3: 1},
        {4: 1},
        {5: 1, 10: -1},
        {7: 1},
        {8: 1},
        {9: 1},
    ]
    vectors = []
    for combo in combos:
        v = [Fraction(0)] * 12
        for i, q in combo.items():
            v[i] = Fraction(q)
        vectors.append(v)
    levi = la.Subspace.from_vectors(vectors, 12)
    _check_levi(sc, la.LeviResult(la.radical(sc), levi))


def test_classify_blocks_sl2(blocks_sc):
    for indices in ((0, 1, 2), (3, 4, 5)):
        sub = la.subalgebra_constants(
            blocks_sc,
            la.Subspace.from_vectors([unit_vector(6, i) for i in indices], 6),
        )
        assert la.classify_3dim_simple(sub) == "sl2-type"


def test_classify_flat_isometry_levi_so3(flat_isometry_sc):
    sub = la.subalgebra_constants(
        flat_isometry_sc,
        la.Subspace.from_vectors([unit_vector(6, i) for i in (0, 2, 4)], 6),
    )
    assert la.classify_3dim_simple(sub) == "so3-type"
    kappa = la.killing_form(sub)
    assert kappa == [
        [-H, 0, 0],
        [0, -H, 0],
        [0, 0, -H],
    ]


def test_classify_abelian_not_simple():
    sc = la.structure_constants_from_fields(
        [base_field("1", "0", "0"), base_field("0", "1", "0"), base_field("0", "0", "1")]
    )
    assert la.classify_3dim_simple(sc) == "not-simple"


def test_classify_requires_dimension_three(shell_sc):
    with pytest.raises(la.LieAlgebraError):
        la.classify_3dim_simple(shell_sc)
