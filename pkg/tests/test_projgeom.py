"""Conic canonicalization, orbits, disjointness, and clique search."""

import json
import random

import pytest

from k3m20 import catalog
from k3m20.linalg import det, identity
from k3m20.numberfield import field_by_name
from k3m20.polyring import parse_poly
from k3m20.projgeom import (
    ConicError,
    IntersectionGraph,
    PlaneConic,
    conic_apply,
    conic_from_strings,
    conic_in_surface,
    conic_strings,
    conics_disjoint,
    conics_to_json,
    intersection_graph,
    max_disjoint_set,
    orbit,
)

Q = field_by_name("rationals")
QI = field_by_name("i")
P3 = ("x", "y", "z", "t")
P5 = ("x1", "x2", "x3", "x4", "x5", "x6")


def poly(text, field=Q, variables=P3):
    return parse_poly(text, field, variables)


def conic(linear_texts, quad_text, field=Q, variables=P3):
    return PlaneConic.make([poly(t, field, variables) for t in linear_texts],
                           poly(quad_text, field, variables))


class TestCanonicalForm:
    def test_scaling_and_mixing_do_not_change_the_conic(self):
        a = conic(["x"], "y^2 + z^2 + t^2")
        b = conic(["3*x"], "2*y^2 + 2*z^2 + 2*t^2 + x*y")
        assert a == b
        assert hash(a) == hash(b)

    def test_canonical_quadric_is_monic_and_reduced(self):
        c = conic(["x - y"], "x^2 + z^2 + t^2")
        # pivot x eliminated, leading grevlex coefficient 1
        assert c.quadric == poly("y^2 + z^2 + t^2")
        assert c.pivots == (0,)

    def test_plane_rank_is_checked(self):
        with pytest.raises(ConicError, match="projective plane"):
            conic(["x", "y"], "z^2 + t^2 + x^2")
        # dependent forms with the right span are fine
        assert PlaneConic.make([poly("x"), poly("2*x")],
                               poly("y^2 + z^2 + t^2")) \
            == conic(["x"], "y^2 + z^2 + t^2")

    def test_degenerate_quadrics_are_rejected(self):
        with pytest.raises(ConicError, match="singular"):
            conic(["x"], "y^2 - z^2")  # line pair in the plane x = 0
        with pytest.raises(ConicError, match="vanishes"):
            conic(["x"], "x^2 + x*y")
        with pytest.raises(ConicError, match="linear"):
            conic(["x^2"], "y^2 + z^2 + t^2")
        with pytest.raises(ConicError, match="quadratic"):
            PlaneConic.make([poly("x")], poly("y^3"))

    def test_p5_conic(self):
        c = conic(["x1", "x2", "x3"], "x4^2 + x5*x6", variables=P5)
        assert len(c.linear_forms) == 3
        assert c.pivots == (0, 1, 2)


class TestApply:
    def test_identity_and_permutation(self):
        c = conic(["x"], "y^2 + z^2 + t^2")
        assert conic_apply(identity(Q, 4), c) == c
        # swap x and y: the plane x = 0 moves to y = 0
        swap = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
        assert conic_apply(swap, c) == conic(["y"], "x^2 + z^2 + t^2")

    def test_action_axiom_on_random_pairs(self):
        rng = random.Random(7)
        c = conic(["x + y"], "y^2 + z^2 + 2*t^2")

        def random_invertible():
            while True:
                m = tuple(tuple(Q(rng.randint(-3, 3)) for _ in range(4))
                          for _ in range(4))
                if not det(m, Q).is_zero():
                    return m

        for _ in range(10):
            g, h = random_invertible(), random_invertible()
            gh = tuple(tuple(sum((g[i][k] * h[k][j] for k in range(4)), Q.zero)
                             for j in range(4)) for i in range(4))
            assert conic_apply(g, conic_apply(h, c)) == conic_apply(gh, c)

    def test_singular_matrix_rejected(self):
        c = conic(["x"], "y^2 + z^2 + t^2")
        zero_row = ((Q.zero,) * 4,) * 4
        with pytest.raises(ZeroDivisionError):
            conic_apply(zero_row, c)


class TestContainment:
    def test_membership_in_the_generated_ideal(self):
        c = conic(["x + y"], "y^2 + z*t")
        ell = poly("x + y")
        q = poly("y^2 + z*t")
        inside = [ell * poly("x - 3*z") + q * poly("2*x + t")]
        assert conic_in_surface(c, inside)
        assert not conic_in_surface(c, [inside[0] + poly("z^3")])

    def test_ring_mismatch(self):
        c = conic(["x"], "y^2 + z^2 + t^2")
        with pytest.raises(ConicError, match="different ring"):
            conic_in_surface(c, [parse_poly("x1^2", Q, P5)])


class TestOrbit:
    def coordinate_swaps(self):
        mats = []
        for i, j in ((0, 1), (1, 2), (2, 3)):
            rows = [[Q.one if a == b else Q.zero for b in range(4)]
                    for a in range(4)]
            rows[i][i] = rows[j][j] = Q.zero
            rows[i][j] = rows[j][i] = Q.one
            mats.append(tuple(tuple(r) for r in rows))
        return mats

    def test_symmetric_quadric_orbit_is_the_four_planes(self):
        c = conic(["x"], "y^2 + z^2 + t^2")
        orb = orbit(c, self.coordinate_swaps())
        assert len(orb) == 4
        assert orb[0] == c  # base point first, deterministic order
        planes = {o.linear_forms[0] for o in orb}
        assert planes == {poly(v) for v in P3}

    def test_cap(self):
        c = conic(["x"], "y^2 + z^2 + t^2")
        with pytest.raises(ConicError, match="orbit-cap-exceeded"):
            orbit(c, self.coordinate_swaps(), cap=2)


def quartet():
    """Four pairwise-disjoint conics on the coordinate planes."""
    return [
        conic(["x"], "y^2 + z^2 + t^2"),
        conic(["y"], "x^2 + z^2 + 2*t^2"),
        conic(["z"], "x^2 + 2*y^2 + 3*t^2"),
        conic(["t"], "x^2 + y^2 + 4*z^2"),
    ]


class TestDisjoint:
    def test_contract_cases(self):
        a = conic(["x"], "y^2 + z^2 + t^2")
        b = conic(["x"], "y^2 + 2*z^2 + t^2")
        assert not conics_disjoint(a, a)      # equal conics
        assert not conics_disjoint(a, b)      # same plane, distinct conics
        with pytest.raises(ConicError, match="different rings"):
            conics_disjoint(a, conic(["x1", "x2", "x3"], "x4^2 + x5*x6",
                                     variables=P5))

    def test_line_case_both_ways(self):
        a, b, c, d = quartet()
        for u, v in ((a, b), (a, c), (a, d), (b, c), (b, d), (c, d)):
            assert conics_disjoint(u, v)
            assert conics_disjoint(v, u)
        # x = y plane: shares z^2 + t^2 roots with the first conic on x = y = 0
        e = conic(["x - y"], "x^2 + z^2 + t^2")
        assert not conics_disjoint(a, e)
        assert not conics_disjoint(e, a)

    def test_empty_and_point_cases_in_p5(self):
        def c5(lin, quad):
            return conic(lin, quad, variables=P5)

        base = c5(["x1", "x2", "x3"], "x4^2 + x5*x6")
        far = c5(["x4", "x5", "x6 - x1"], "x1^2 + x2^2 + x3*x1 + x3^2")
        assert conics_disjoint(base, far)  # spans meet only in 0

        # spans meet in the single point (0:0:0:0:0:1)
        off_point = c5(["x4", "x5", "x2 - x3"], "x1^2 + x2^2 + x6^2")
        assert conics_disjoint(base, off_point)  # point fails both quadrics
        thru_point = c5(["x4", "x5", "x2 - x3"], "x1^2 + x3*x6")
        assert not conics_disjoint(base, thru_point)  # x4^2 + x5*x6 and
        # x1^2 + x3*x6 both vanish there

    def test_invariance_under_a_coordinate_change(self):
        a, b, _, _ = quartet()
        g = ((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 2), (1, 0, 0, 1))
        g = tuple(tuple(Q(x) for x in row) for row in g)
        assert conics_disjoint(conic_apply(g, a), conic_apply(g, b)) \
            == conics_disjoint(a, b)


class TestCliques:
    def test_graph_validation(self):
        verts = quartet()[:2]
        with pytest.raises(ConicError, match="diagonal"):
            IntersectionGraph(verts, ((True, True), (True, False)))
        with pytest.raises(ConicError, match="symmetric"):
            IntersectionGraph(verts, ((False, True), (False, False)))
        with pytest.raises(ConicError, match="shape"):
            IntersectionGraph(verts, ((False,),))

    def test_max_disjoint_quartet_plus_blocker(self):
        conics = quartet() + [conic(["x - y"], "x^2 + z^2 + t^2")]
        graph = intersection_graph(conics)
        assert graph.adjacency[0][1] and not graph.adjacency[0][4]
        size, witness = max_disjoint_set(conics, graph)
        assert size == 4
        assert witness == quartet()
        # recomputing the graph inside gives the same answer
        assert max_disjoint_set(conics) == (size, witness)

    def test_empty_and_cap(self):
        assert max_disjoint_set([]) == (0, [])
        with pytest.raises(ConicError, match="512"):
            max_disjoint_set([None] * 513)

    def test_dot_export(self):
        conics = quartet()[:3]
        dot = intersection_graph(conics).to_dot("g")
        assert dot.startswith("graph g {")
        assert "n0 -- n1;" in dot and "n1 -- n2;" in dot
        assert dot.count("--") == 3


class TestSerialization:
    def test_roundtrip(self):
        c = conic(["x + 2*y"], "y^2 + 3*z^2 + t^2 + z*t")
        back = conic_from_strings(Q, P3, conic_strings(c))
        assert back == c

    def test_json_list(self):
        conics = quartet()[:2]
        data = json.loads(conics_to_json(conics))
        assert len(data) == 2
        assert conic_from_strings(Q, P3, data[0]) == conics[0]

    def test_bad_input(self):
        with pytest.raises(ConicError, match="degree"):
            conic_from_strings(Q, P3, ["x", "y^3"])
        with pytest.raises(ConicError, match="exactly one quadratic"):
            conic_from_strings(Q, P3, ["x", "y"])


class TestNikulinSixteen:
    """The 16-element orbit of pairwise-disjoint conics, small enough for
    a unit test; the larger orbits live in the scenario suite."""

    def test_sixteen_pairwise_disjoint(self):
        tower = field_by_name("tower8")
        base = PlaneConic.make(*catalog.conic_forms("bh_base"))
        _, gens = catalog.group_generators("A", tower)
        orb = orbit(base, gens)
        assert len(orb) == 16
        assert conic_in_surface(base, catalog.polynomials("bh_quadrics", tower))
        graph = intersection_graph(orb)
        assert graph.edge_count() == 120
        size, witness = max_disjoint_set(orb, graph)
        assert size == 16
        assert witness == sorted(orb, key=orb.index)
