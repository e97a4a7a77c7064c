"""Randomized property engines shared by the property and acceptance tests.

Each engine runs a requested number of independent instances against a
caller-supplied random generator and raises AssertionError on the first
violation.  The return value is the number of instances actually run, so
callers can assert the contracted minimum was met.
"""

import itertools
import math
from fractions import Fraction

from k3m20.lattice import vectors_of_norm
from k3m20.linalg import det, identity, mat_mul, mat_vec
from k3m20.matgroup import MatGroup
from k3m20.numberfield import adjoin_sqrt, field_by_name, is_square
from k3m20.polyring import (
    MPoly,
    groebner,
    normal_form,
    parse_poly,
    ring_map,
    s_polynomial,
)
from k3m20.projgeom import ConicError, PlaneConic, conics_disjoint

FIELD_NAMES = ("rationals", "i", "sqrt5", "i-sqrt5", "zeta8", "i-sqrt10",
               "tower8")


def random_field_element(rng, field):
    coords = []
    for _ in range(field.degree):
        num = rng.randint(-4, 4)
        den = rng.randint(1, 3)
        coords.append(field(num) / field(den))
    val = field.zero
    power = field.one
    for c in coords:
        val = val + power * c
        power = power * field.gen
    return val


def run_field_axiom_instances(rng, count=200):
    fields = [field_by_name(n) for n in FIELD_NAMES]
    for k in range(count):
        fld = fields[k % len(fields)]
        a = random_field_element(rng, fld)
        b = random_field_element(rng, fld)
        c = random_field_element(rng, fld)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == fld.zero
        assert (a - b) + b == a
        assert fld.one * a == a
        assert fld.zero * a == fld.zero
        if not a.is_zero():
            assert a * a.inverse() == fld.one
            assert (b / a) * a == b
            assert a ** 3 == a * a * a
    return count


def _random_poly(rng, field, variables, max_degree=3, terms=4):
    out = MPoly(field, variables, {})
    nv = len(variables)
    for _ in range(terms):
        total = rng.randint(0, max_degree)
        mono = [0] * nv
        for _ in range(total):
            mono[rng.randrange(nv)] += 1
        coeff = field(rng.randint(-3, 3))
        out = out + MPoly(field, variables, {tuple(mono): coeff})
    return out


def _random_invertible(rng, field, n):
    while True:
        m = tuple(tuple(field(rng.randint(-2, 2)) for _ in range(n))
                  for _ in range(n))
        if not det(m, field).is_zero():
            return m


def run_action_axiom_instances(rng, count=200):
    fields = [field_by_name(n) for n in ("rationals", "i", "sqrt5")]
    for k in range(count):
        fld = fields[k % len(fields)]
        nv = 2 + (k % 2)
        variables = tuple("xyz"[:nv])
        p = _random_poly(rng, fld, variables)
        q = _random_poly(rng, fld, variables)
        m1 = _random_invertible(rng, fld, nv)
        m2 = _random_invertible(rng, fld, nv)
        assert p.apply_linear(identity(fld, nv)) == p
        assert (p.apply_linear(m1).apply_linear(m2)
                == p.apply_linear(mat_mul(m1, m2, fld)))
        assert ((p + q).apply_linear(m1)
                == p.apply_linear(m1) + q.apply_linear(m1))
        assert ((p * q).apply_linear(m1)
                == p.apply_linear(m1) * q.apply_linear(m1))
    return count


def _signed_permutations(field, n):
    mats = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            mats.append(tuple(
                tuple(field(signs[i]) if perm[i] == j else field.zero
                      for j in range(n))
                for i in range(n)))
    return mats


def run_orbit_divides_instances(rng, count=200):
    fld = field_by_name("rationals")
    pool = _signed_permutations(fld, 3)
    for _ in range(count):
        gens = rng.sample(pool, 2)
        group = MatGroup(fld, gens, cap=200)
        v = tuple(fld(rng.randint(-2, 2)) for _ in range(3))
        seen = {v}
        frontier = [v]
        while frontier:
            nxt = []
            for x in frontier:
                for g in group.generators:
                    y = mat_vec(g, x, fld)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        assert group.order % len(seen) == 0
        # the generator walk and the full element sweep agree
        assert seen == {mat_vec(g, v, fld) for g in group.elements}
    return count


def run_groebner_selfcheck_instances(rng, count=200):
    fields = [field_by_name(n) for n in ("rationals", "rationals", "i")]
    for k in range(count):
        fld = fields[k % len(fields)]
        nv = 2 + (k % 2)
        variables = tuple("xyz"[:nv])
        max_degree = 3 if nv == 2 else 2
        polys = []
        while len(polys) < 2:
            p = _random_poly(rng, fld, variables, max_degree=max_degree,
                             terms=3)
            if not p.is_zero():
                polys.append(p)
        basis = groebner(polys)
        for f, g in itertools.combinations(basis, 2):
            assert normal_form(s_polynomial(f, g), basis).is_zero()
        for p in polys:
            assert normal_form(p, basis).is_zero()
    return count


def _int_det3(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _inverse_diagonal(gram):
    n = len(gram)
    d = _int_det3(gram)
    out = []
    for i in range(n):
        minor = [[gram[r][c] for c in range(n) if c != i]
                 for r in range(n) if r != i]
        out.append(Fraction(_int_det3(minor) if n > 1 else 1, d))
    return out


def _random_pd_gram(rng, rank):
    while True:
        b = [[rng.randint(-2, 2) for _ in range(rank)] for _ in range(rank)]
        if _int_det3(b) == 0:
            continue
        gram = tuple(
            tuple(sum(b[i][k] * b[j][k] for k in range(rank))
                  for j in range(rank))
            for i in range(rank))
        # keep the dual short so the oracle's search box stays small
        if max(_inverse_diagonal(gram)) <= 6:
            return gram


def run_short_vector_oracle_instances(rng, count=200):
    for k in range(count):
        rank = 1 + k % 3
        gram = _random_pd_gram(rng, rank)
        m = rng.randint(1, 8)
        got = set(vectors_of_norm(gram, m))
        inv_diag = _inverse_diagonal(gram)
        # x_i^2 <= m * (G^-1)_ii for any x with x G x^T = m
        bounds = [math.isqrt(math.ceil(m * q)) + 1 for q in inv_diag]
        expected = set()
        for x in itertools.product(*[range(-b, b + 1) for b in bounds]):
            if all(c == 0 for c in x):
                continue
            norm = sum(x[i] * gram[i][j] * x[j]
                       for i in range(rank) for j in range(rank))
            if norm == m:
                expected.add(tuple(x))
        assert got == expected
    return count


def _restrict_to_line(conic, v, w):
    """Binary form of the conic's quadric along s*v + t*w."""
    fld = conic.field
    st = ("s", "t")
    images = []
    for i in range(len(conic.vars)):
        images.append(
            MPoly(fld, st, {(1, 0): v[i]}) + MPoly(fld, st, {(0, 1): w[i]}))
    form = ring_map(conic.quadric, images)
    return (form.terms.get((2, 0), fld.zero),
            form.terms.get((1, 1), fld.zero),
            form.terms.get((0, 2), fld.zero))


def _binary_roots(fld, a, b, c):
    """Projective roots of a*s^2 + b*s*t + c*t^2, with the field they
    live in and the embedding of the coefficient field."""
    if a.is_zero():
        roots = [(fld.one, fld.zero)]
        if not b.is_zero():
            roots.append((-c / b, fld.one))
        return fld, (lambda e: e), roots
    disc = b * b - fld(4) * a * c
    r = is_square(disc)
    if r is not None:
        half = (fld(2) * a).inverse()
        return fld, (lambda e: e), [((-b + r) * half, fld.one),
                                    ((-b - r) * half, fld.one)]
    ext = adjoin_sqrt(fld, disc)
    e = ext.embed
    half = (e(fld(2) * a)).inverse()
    return ext.field, e, [((-e(b) + ext.sqrt) * half, ext.field.one),
                          ((-e(b) - ext.sqrt) * half, ext.field.one)]


def _oracle_disjoint(c1, c2, v, w):
    a1, b1, c1c = _restrict_to_line(c1, v, w)
    a2, b2, c2c = _restrict_to_line(c2, v, w)
    # a smooth conic never contains the line, so the restriction is nonzero
    assert not (a1.is_zero() and b1.is_zero() and c1c.is_zero())
    assert not (a2.is_zero() and b2.is_zero() and c2c.is_zero())
    _, embed, roots = _binary_roots(c1.field, a1, b1, c1c)
    ea2, eb2, ec2 = embed(a2), embed(b2), embed(c2c)
    for s, t in roots:
        if (ea2 * s * s + eb2 * s * t + ec2 * t * t).is_zero():
            return False
    return True


def _plane_form(fld, variables, v, w, u):
    """Linear form vanishing on span(v, w, u), via a cross-like kernel."""
    rows = (v, w, u)
    coeffs = []
    for j in range(4):
        minor = tuple(tuple(rows[r][c] for c in range(4) if c != j)
                      for r in range(3))
        sign = fld.one if j % 2 == 0 else -fld.one
        coeffs.append(sign * det(minor, fld))
    terms = {}
    for j, c in enumerate(coeffs):
        if not c.is_zero():
            mono = tuple(1 if k == j else 0 for k in range(4))
            terms[mono] = c
    if not terms:
        return None
    return MPoly(fld, variables, terms)


def _random_quadric(rng, fld, variables, through=None):
    q = _random_poly(rng, fld, variables, max_degree=2, terms=5)
    q = MPoly(fld, variables,
              {m: c for m, c in q.terms.items() if sum(m) == 2})
    if q.is_zero():
        return None
    if through is not None:
        val = _value_at(q, through, fld)
        if not val.is_zero():
            j = next(k for k, c in enumerate(through) if not c.is_zero())
            mono = tuple(2 if k == j else 0 for k in range(4))
            adjust = val / (through[j] * through[j])
            terms = dict(q.terms)
            terms[mono] = terms.get(mono, fld.zero) - adjust
            q = MPoly(fld, variables, {m: c for m, c in terms.items()
                                       if not c.is_zero()})
            if q.is_zero():
                return None
    return q


def _value_at(p, point, fld):
    st = ("u",)
    images = [MPoly(fld, st, {(0,): c}) for c in point]
    return ring_map(p, images).terms.get((0,), fld.zero)


def run_disjointness_oracle_instances(rng, count=200):
    fld = field_by_name("rationals")
    variables = ("x", "y", "z", "t")
    done = 0
    while done < count:
        v = tuple(fld(rng.randint(-2, 2)) for _ in range(4))
        w = tuple(fld(rng.randint(-2, 2)) for _ in range(4))
        u1 = tuple(fld(rng.randint(-2, 2)) for _ in range(4))
        u2 = tuple(fld(rng.randint(-2, 2)) for _ in range(4))
        l1 = _plane_form(fld, variables, v, w, u1)
        l2 = _plane_form(fld, variables, v, w, u2)
        if l1 is None or l2 is None or l1.monic() == l2.monic():
            continue
        force = done % 2 == 1
        point = None
        if force:
            s = fld(rng.randint(-2, 2))
            t = fld(rng.randint(-2, 2))
            point = tuple(s * v[i] + t * w[i] for i in range(4))
            if all(c.is_zero() for c in point):
                continue
        q1 = _random_quadric(rng, fld, variables, through=point)
        q2 = _random_quadric(rng, fld, variables, through=point)
        if q1 is None or q2 is None:
            continue
        try:
            conic1 = PlaneConic.make([l1], q1)
            conic2 = PlaneConic.make([l2], q2)
        except ConicError:
            continue
        claimed = conics_disjoint(conic1, conic2)
        assert claimed == _oracle_disjoint(conic1, conic2, v, w)
        if force:
            # a constructed common point must be detected
            assert claimed is False
        done += 1
    return done
