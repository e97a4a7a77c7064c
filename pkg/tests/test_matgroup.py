"""Finite matrix groups: closures, quotients, invariants, caching."""

import json
import os

import pytest

from k3m20.numberfield import gaussian_field, rational_field
from k3m20.matgroup import (
    ClosureCapExceeded,
    CosetQuotient,
    MatGroup,
    MatGroupError,
    ProjectiveGroup,
    cache_entries,
    closure_order,
    doubly_transitive_on_hyperplanes,
    fixed_polynomials,
    generators_digest,
    hyperplane_pair_orbit_count,
    invariant_polynomials,
    is_perfect,
    is_scalar_matrix,
    load_group_spec,
    mat_from_rows,
    mat_key,
    monomial_permutation,
    mulclose,
    order_spectrum,
    parse_matrix,
    projective_order,
    quotient_elementary_abelian_2,
    scalar_of,
)
from k3m20.polyring import parse_poly, sigma_format

Q = rational_field()
GA = gaussian_field()


def s3_group():
    s = mat_from_rows(Q, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    c = mat_from_rows(Q, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    return MatGroup(Q, [s, c])


def q8_group(cache_dir=None):
    i_mat = parse_matrix(GA, [["i", "0"], ["0", "-i"]])
    j_mat = parse_matrix(GA, [["0", "1"], ["-1", "0"]])
    return MatGroup(GA, [i_mat, j_mat], cache_dir=cache_dir)


def test_s3_closure_and_structure():
    g = s3_group()
    assert closure_order(g) == 6
    assert not g.is_abelian()
    assert len(g.center()) == 1
    assert g.derived_subgroup().order == 3
    assert order_spectrum(g) == {1: 1, 2: 3, 3: 2}
    assert g.determinants() == {Q(1): 3, Q(-1): 3}
    assert g.special_subgroup_order() == 3


def test_q8_structure():
    g = q8_group()
    assert g.order == 8
    assert len(g.center()) == 2
    assert len(g.scalar_subgroup()) == 2
    pg = ProjectiveGroup(g)
    assert pg.order == 4
    assert projective_order(g) == 4
    # Q8 mod its center is elementary abelian of exponent 2
    assert quotient_elementary_abelian_2(g, g.scalar_subgroup())
    assert not is_perfect(pg)


def test_element_orders_and_membership():
    g = s3_group()
    for m in g.elements:
        k = g.element_order(m)
        assert k in (1, 2, 3)
        p = g.identity()
        for _ in range(k):
            p = g.mul(p, m)
        assert p == g.identity()
    assert g.identity() in g
    assert mat_from_rows(Q, [[2, 0, 0], [0, 1, 0], [0, 0, 1]]) not in g


def test_scalar_helpers():
    m = parse_matrix(GA, [["i", "0"], ["0", "i"]])
    assert is_scalar_matrix(m)
    assert scalar_of(m) == GA.named["i"]
    n = parse_matrix(GA, [["i", "0"], ["0", "-i"]])
    assert not is_scalar_matrix(n)
    assert scalar_of(n) is None


def test_monomial_permutation():
    r = parse_matrix(Q, [["0", "-1"], ["1", "0"]])
    assert monomial_permutation(r) == (1, 0)
    assert monomial_permutation(parse_matrix(Q, [["1", "1"], ["0", "1"]])) is None


def test_closure_cap():
    s = mat_from_rows(Q, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    c = mat_from_rows(Q, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    with pytest.raises(ClosureCapExceeded):
        mulclose(Q, [s, c], cap=4)


def test_derived_series_of_s4():
    mats = [
        mat_from_rows(Q, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        mat_from_rows(Q, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]]),
    ]
    s4 = MatGroup(Q, mats)
    assert s4.order == 24
    a4 = s4.derived_subgroup()
    assert a4.order == 12
    v4 = a4.derived_subgroup()
    assert v4.order == 4
    assert v4.derived_subgroup().order == 1
    # permutation action on coordinate hyperplanes is 2-transitive for S4
    assert doubly_transitive_on_hyperplanes(s4)
    assert hyperplane_pair_orbit_count(Q, mats) == 1
    # but not for the V4 subgroup of double transpositions
    dbl = [
        mat_from_rows(Q, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
        mat_from_rows(Q, [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]),
    ]
    assert hyperplane_pair_orbit_count(Q, dbl) > 1


def test_non_monomial_hyperplane_error():
    shear = parse_matrix(Q, [["1", "1"], ["0", "1"]])
    with pytest.raises(MatGroupError):
        hyperplane_pair_orbit_count(Q, [shear])


def test_projective_conjugacy_and_centralizers():
    g = q8_group()
    pg = ProjectiveGroup(g)
    ccs = pg.conjugacy_classes()
    assert sorted(len(c) for c in ccs) == [1, 1, 1, 1]
    assert sum(len(c) for c in ccs) == pg.order
    for x in pg.elements:
        assert pg.centralizer_order(x) == 4

    s4 = MatGroup(Q, [
        mat_from_rows(Q, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        mat_from_rows(Q, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]]),
    ])
    ps4 = ProjectiveGroup(s4)
    sizes = sorted(len(c) for c in ps4.conjugacy_classes())
    assert sizes == [1, 3, 6, 6, 8]
    # class equation checks centralizer orders implicitly
    for c in ps4.conjugacy_classes():
        x = next(iter(c))
        assert ps4.centralizer_order(x) * len(c) == 24


def test_normal_closure_and_coset_quotient():
    s4 = MatGroup(Q, [
        mat_from_rows(Q, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        mat_from_rows(Q, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]]),
    ])
    ps4 = ProjectiveGroup(s4)
    dbl = mat_from_rows(Q, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    v4 = ps4.normal_closure([ps4.canon(dbl)])
    assert len(v4) == 4
    assert ps4.is_normal_subset(v4)
    quot = CosetQuotient.build(ps4, v4)
    assert quot.order == 6
    assert not quot.is_perfect
    assert quot.order_histogram == {1: 1, 2: 3, 3: 2}
    single = ps4.canon(mat_from_rows(
        Q, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
    with pytest.raises(MatGroupError):
        CosetQuotient.build(ps4, frozenset([ps4.ident, single]))


def test_invariant_polynomials_small():
    s = mat_from_rows(Q, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    c = mat_from_rows(Q, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    inv2 = invariant_polynomials(Q, [s, c], ("x", "y", "z"), 2)
    assert sorted(sigma_format(p) for p in inv2) == ["Sigma(x*y)", "Sigma(x^2)"]
    inv1 = invariant_polynomials(Q, [s, c], ("x", "y", "z"), 1)
    assert len(inv1) == 1
    # alternating sign representation has no linear invariant
    neg = mat_from_rows(Q, [[-1]])
    assert invariant_polynomials(Q, [neg], ("x",), 1) == []
    assert len(invariant_polynomials(Q, [neg], ("x",), 2)) == 1
    # invariance double-check by substitution
    for p in inv2:
        assert p.apply_linear(s) == p and p.apply_linear(c) == p


def test_fixed_polynomials_wrapper_names_variables():
    g = s3_group()
    polys = fixed_polynomials(g, 2)
    assert all(p.vars == ("x1", "x2", "x3") for p in polys)
    assert len(polys) == 2


def test_cache_roundtrip_and_corruption(tmp_path):
    td = str(tmp_path)
    g1 = q8_group(cache_dir=td)
    assert g1.order == 8
    entries = cache_entries(td)
    assert len(entries) == 1 and entries[0][1] == 8
    # second build hits the cache and agrees
    g2 = q8_group(cache_dir=td)
    assert sorted(map(mat_key, g2.elements)) == sorted(map(mat_key, g1.elements))
    # corrupt entries are recomputed, not trusted
    path = os.path.join(td, entries[0][0])
    with open(path, "w") as fh:
        fh.write("{nonsense")
    g3 = q8_group(cache_dir=td)
    assert g3.order == 8


def test_digest_distinguishes_generators_and_field():
    i_mat = parse_matrix(GA, [["i", "0"], ["0", "-i"]])
    j_mat = parse_matrix(GA, [["0", "1"], ["-1", "0"]])
    d1 = generators_digest(GA, [i_mat, j_mat])
    d2 = generators_digest(GA, [i_mat])
    assert d1 != d2
    one = parse_matrix(Q, [["1"]])
    assert generators_digest(Q, [one]) != generators_digest(GA, [parse_matrix(GA, [["1"]])])


def test_load_group_spec_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"field": "i"}))
    with pytest.raises(MatGroupError):
        load_group_spec(str(bad))
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"field": "i", "generators": []}))
    with pytest.raises(MatGroupError):
        load_group_spec(str(empty))
