"""Integral lattices: exact short-vector enumeration, isometry groups,
orthogonal complements, binary form reduction, and the rank-3 invariant
lattice classification.

Gram matrices are tuples of tuples of Python ints; all enumeration bounds
come from exact rational quadratic completion, never from floats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Optional

from gmpy2 import isqrt, mpq


class LatticeError(ValueError):
    pass


def _to_gram(gram) -> tuple:
    g = tuple(tuple(int(x) for x in row) for row in gram)
    n = len(g)
    if any(len(row) != n for row in g):
        raise LatticeError("Gram matrix must be square")
    for i in range(n):
        for j in range(n):
            if g[i][j] != g[j][i]:
                raise LatticeError("Gram matrix must be symmetric")
    return g


def det_int(gram) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    g = [list(row) for row in _to_gram(gram)]
    n = len(g)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if g[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if g[r][k] != 0), None)
            if swap is None:
                return 0
            g[k], g[swap] = g[swap], g[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                g[i][j] = (g[i][j] * g[k][k] - g[i][k] * g[k][j]) // prev
        prev = g[k][k]
    return sign * g[n - 1][n - 1]


def is_positive_definite(gram) -> bool:
    g = _to_gram(gram)
    n = len(g)
    for k in range(1, n + 1):
        minor = [row[:k] for row in g[:k]]
        if det_int(minor) <= 0:
            return False
    return True


def norm_of(gram, v) -> int:
    g = _to_gram(gram)
    return inner(g, v, v)


def inner(gram, v, w) -> int:
    return sum(v[i] * gram[i][j] * w[j]
               for i in range(len(v)) for j in range(len(w)))


# ---------------------------------------------------------------------------
# short vectors by exact quadratic completion (Fincke-Pohst style)

def _completion(gram):
    """Rational data d_i, u_ij with x.G.x = sum_i d_i (x_i + sum_j>i u_ij x_j)^2."""
    n = len(gram)
    a = [[mpq(x) for x in row] for row in gram]
    d = [mpq(0)] * n
    u = [[mpq(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise LatticeError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / d[i]
        for k in range(i + 1, n):
            for l in range(i + 1, n):
                a[k][l] -= a[i][k] * a[i][l] / d[i]
    return d, u


def _int_range_for(budget: mpq, center: mpq):
    """All integers x with (x + center)^2 <= budget, exact endpoints."""
    if budget < 0:
        return range(0)
    # floor(sqrt(budget)) on rationals, then exact fix-up
    r = isqrt(int(budget))
    while (r + 1) * (r + 1) <= budget:
        r += 1
    while r * r > budget:
        r -= 1
    # |x + center| <= sqrt(budget); conservative integer window, exact filter
    lo_est = int(-center) - int(r) - 2
    hi_est = int(-center) + int(r) + 2
    lo = lo_est
    while (lo + center) * (lo + center) > budget:
        lo += 1
        if lo > hi_est:
            return range(0)
    hi = hi_est
    while (hi + center) * (hi + center) > budget:
        hi -= 1
    return range(lo, hi + 1)


def vectors_of_norm(gram, m: int) -> list[tuple]:
    """All lattice vectors v with v.G.v == m, sorted lexicographically."""
    g = _to_gram(gram)
    if m < 0:
        raise LatticeError("norm must be nonnegative")
    if m == 0:
        return []
    if not is_positive_definite(g):
        raise LatticeError("Gram matrix is not positive definite")
    n = len(g)
    d, u = _completion(g)
    out = []
    x = [0] * n

    def walk(i: int, budget: mpq):
        if i < 0:
            if budget == 0:
                out.append(tuple(x))
            return
        center = sum(u[i][j] * x[j] for j in range(i + 1, n))
        for xi in _int_range_for(budget / d[i], center):
            x[i] = xi
            spent = d[i] * (xi + center) * (xi + center)
            walk(i - 1, budget - spent)
        x[i] = 0

    walk(n - 1, mpq(m))
    return sorted(out)


def brute_force_vectors_of_norm(gram, m: int) -> list[tuple]:
    """Independent oracle: box search with a rational eigenvalue lower bound.

    lambda_min >= det(G) / R^(n-1) where R is the largest absolute row sum,
    so every coordinate of a norm-m vector is bounded by sqrt(m / lambda_min).
    """
    g = _to_gram(gram)
    n = len(g)
    dg = det_int(g)
    if dg <= 0 or not is_positive_definite(g):
        raise LatticeError("Gram matrix is not positive definite")
    big_r = max(sum(abs(x) for x in row) for row in g)
    lam_lower = mpq(dg, big_r ** (n - 1)) if n > 1 else mpq(dg)
    bound_sq = mpq(m) / lam_lower
    b = int(isqrt(int(bound_sq))) + 1
    out = []
    for v in itertools.product(range(-b, b + 1), repeat=n):
        if inner(g, v, v) == m:
            out.append(v)
    return sorted(out)


# ---------------------------------------------------------------------------
# isometries

MAX_ISOMETRY_RANK = 4


def isometry_group(gram) -> "IsometryGroup":
    """All M with M^T G M = G, by backtracking over norm-matched images.

    Column j of M must be a lattice vector of norm G[j][j] with the right
    inner products against earlier columns; the short-vector lists are
    complete, so the search is exhaustive.
    """
    g = _to_gram(gram)
    n = len(g)
    if n > MAX_ISOMETRY_RANK:
        raise LatticeError(f"isometry search limited to rank <= {MAX_ISOMETRY_RANK}")
    if not is_positive_definite(g):
        raise LatticeError("Gram matrix is not positive definite")
    candidates = [vectors_of_norm(g, g[j][j]) for j in range(n)]
    elements = []
    chosen: list[tuple] = []

    def walk(j: int):
        if j == n:
            mat = tuple(tuple(chosen[c][r] for c in range(n)) for r in range(n))
            elements.append(mat)
            return
        for v in candidates[j]:
            ok = True
            for a in range(j):
                if inner(g, chosen[a], v) != g[a][j]:
                    ok = False
                    break
            if ok:
                chosen.append(v)
                walk(j + 1)
                chosen.pop()

    walk(0)
    return IsometryGroup(gram=g, elements=sorted(elements))


@dataclass(frozen=True)
class IsometryGroup:
    gram: tuple
    elements: tuple

    def __init__(self, gram, elements):
        object.__setattr__(self, "gram", _to_gram(gram))
        object.__setattr__(self, "elements", tuple(elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def generators_check(self, mats) -> bool:
        """True when the given matrices generate the whole group."""
        return set(int_matrix_closure(mats)) == set(self.elements)

    def apply(self, mat, v) -> tuple:
        return tuple(sum(mat[r][c] * v[c] for c in range(len(v)))
                     for r in range(len(v)))


def int_matrix_closure(mats, cap: int = 100000) -> list[tuple]:
    """Multiplicative closure of integer matrices (must be finite)."""
    gens = [tuple(tuple(int(x) for x in row) for row in m) for m in mats]
    if not gens:
        return []
    n = len(gens[0])
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n))
                                for j in range(n)) for i in range(n))
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    if len(seen) > cap:
                        raise LatticeError("matrix closure exceeded cap")
        frontier = nxt
    return sorted(seen)


def primitive_norm_orbits(gram, m: int):
    """Orbits of the isometry group on primitive vectors of norm m.

    Returns (count, orbits) with each orbit a sorted tuple of vectors and
    the orbit list sorted by first representative.
    """
    g = _to_gram(gram)
    group = isometry_group(g)
    prim = [v for v in vectors_of_norm(g, m) if _is_primitive(v)]
    remaining = set(prim)
    orbits = []
    for v in prim:
        if v not in remaining:
            continue
        orbit = {group.apply(mat, v) for mat in group.elements}
        if not orbit <= set(prim):
            raise LatticeError("isometry image left the primitive vector set")
        remaining -= orbit
        orbits.append(tuple(sorted(orbit)))
    orbits.sort()
    return len(orbits), orbits


def _is_primitive(v) -> bool:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g == 1


# ---------------------------------------------------------------------------
# orthogonal complements and index arithmetic

def orthogonal_complement(gram, v):
    """Gram matrix (and basis) of the saturated orthogonal complement of v.

    Returns (comp_gram, basis_rows): basis vectors, in lattice coordinates,
    of { w : <w, v> = 0 }, computed by a unimodular column reduction so the
    result is automatically saturated.
    """
    g = _to_gram(gram)
    n = len(g)
    v = tuple(int(x) for x in v)
    if len(v) != n or all(x == 0 for x in v):
        raise LatticeError("v must be a nonzero lattice vector")
    row = [sum(g[i][j] * v[j] for j in range(n)) for i in range(n)]
    content = 0
    for x in row:
        content = gcd(content, abs(x))
    row = [x // content for x in row]
    # column-reduce row to (1, 0, ..., 0) by unimodular U; kernel = cols 1..n-1
    u = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
    d = list(row)
    for idx in range(1, n):
        a, b = d[0], d[idx]
        if b == 0:
            continue
        gg, s, t = _ext_gcd(a, b)
        a_, b_ = a // gg, b // gg
        for r in range(n):
            c0, ci = u[r][0], u[r][idx]
            u[r][0] = s * c0 + t * ci
            u[r][idx] = -b_ * c0 + a_ * ci
        d[0], d[idx] = gg, 0
    if d[0] not in (1, -1):
        raise LatticeError("content reduction failed")
    basis = [tuple(u[r][c] for r in range(n)) for c in range(1, n)]
    comp = tuple(tuple(inner(g, bi, bj) for bj in basis) for bi in basis)
    return comp, tuple(basis)


def _ext_gcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def index_squared(gram, basis_rows) -> mpq:
    """det(B G B^T) / det(G) for a full-rank sublattice basis B (rows)."""
    g = _to_gram(gram)
    n = len(g)
    b = tuple(tuple(int(x) for x in row) for row in basis_rows)
    if len(b) != n:
        raise LatticeError("basis must have full rank (square matrix)")
    sub = tuple(tuple(inner(g, bi, bj) for bj in b) for bi in b)
    ds = det_int(sub)
    if ds == 0:
        raise LatticeError("basis is rank-deficient")
    return mpq(ds, det_int(g))


# ---------------------------------------------------------------------------
# binary quadratic forms: (a, b, c) stands for the Gram matrix [[2a,b],[b,2c]]

def reduce_binary_form(a: int, b: int, c: int):
    """Gauss reduction with an explicit verified change-of-basis witness.

    Returns ((a, b, c), U) with -a <= b <= a <= c, tie-break b >= 0 when
    |b| == a or a == c, and U unimodular with U^T M U = M_reduced for
    M = [[2a, b], [b, 2c]].
    """
    if a <= 0 or c <= 0 or 4 * a * c - b * b <= 0:
        raise LatticeError("form must be positive definite")
    m0 = ((2 * a, b), (b, 2 * c))
    u = [[1, 0], [0, 1]]

    def apply_cols(t00, t01, t10, t11):
        for r in range(2):
            c0, c1 = u[r][0], u[r][1]
            u[r][0] = c0 * t00 + c1 * t10
            u[r][1] = c0 * t01 + c1 * t11

    while True:
        # translate: x -> x, y -> y - t x brings b into (-a, a]
        if not (-a < b <= a):
            t = -((a - b) // (2 * a))  # ceil((b - a) / 2a)
            while b - 2 * a * t > a:
                t += 1
            while b - 2 * a * t <= -a:
                t -= 1
            c = a * t * t - b * t + c
            b = b - 2 * a * t
            apply_cols(1, -t, 0, 1)
        if a > c:
            a, b, c = c, -b, a
            apply_cols(0, -1, 1, 0)
            continue
        break
    if b < 0 and (-b == a or a == c):
        b = -b
        apply_cols(1, 0, 0, -1)
    uu = tuple(tuple(row) for row in u)
    reduced = ((2 * a, b), (b, 2 * c))
    check = tuple(tuple(sum(uu[k][i] * m0[k][l] * uu[l][j]
                            for k in range(2) for l in range(2))
                        for j in range(2)) for i in range(2))
    if check != reduced:
        raise LatticeError("internal: change-of-basis witness failed")
    if abs(uu[0][0] * uu[1][1] - uu[0][1] * uu[1][0]) != 1:
        raise LatticeError("internal: witness not unimodular")
    return (a, b, c), uu


def binary_forms_equivalent(f1, f2) -> bool:
    return reduce_binary_form(*f1)[0] == reduce_binary_form(*f2)[0]


def gram_to_abc(gram) -> tuple[int, int, int]:
    """Convert a rank-2 Gram matrix [[4a,2b],[2b,4c]] to the (a,b,c) triple."""
    g = _to_gram(gram)
    if len(g) != 2:
        raise LatticeError("expected a rank-2 Gram matrix")
    if g[0][0] % 4 or g[1][1] % 4 or g[0][1] % 2:
        raise LatticeError("Gram matrix does not have the [[4a,2b],[2b,4c]] parity")
    return g[0][0] // 4, g[0][1] // 2, g[1][1] // 4


def abc_to_gram(a: int, b: int, c: int) -> tuple:
    return ((4 * a, 2 * b), (2 * b, 4 * c))


def twist(gram, k: int) -> tuple:
    g = _to_gram(gram)
    return tuple(tuple(k * x for x in row) for row in g)


# ---------------------------------------------------------------------------
# decomposability

def is_decomposable_rank3(gram):
    """Search for an orthogonal rank-1 summand.

    A splitting L = Zv + v_perp forces v primitive with
    v.v * det(v_perp) == det(L), and v.v divides det(L); the divisor list
    makes the search finite and exhaustive.
    """
    g = _to_gram(gram)
    if len(g) != 3:
        raise LatticeError("expected a rank-3 Gram matrix")
    dg = det_int(g)
    if dg <= 0:
        raise LatticeError("Gram matrix is not positive definite")
    for m in sorted(_divisors(dg)):
        for v in vectors_of_norm(g, m):
            if not _is_primitive(v):
                continue
            comp, basis = orthogonal_complement(g, v)
            if m * det_int(comp) == dg:
                return True, v
    return False, None


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i * i != n:
                out.append(n // i)
        i += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# the rank-3 invariant lattice classification

@dataclass(frozen=True)
class ClassifiedCase:
    n: int                 # invariant vector norm is 4n
    ns_gram: tuple         # rank-1 invariant part, [[4n]]
    t_gram: tuple          # reduced rank-2 complement [[4a,2b],[2b,4c]]
    abc: tuple             # the (a, b, c) triple of t_gram
    orbit_rep: tuple       # invariant vector realizing the case

    def check_product(self, target: int) -> bool:
        a, b, c = self.abc
        return self.n * (4 * a * c - b * b) == target


@dataclass(frozen=True)
class CaseClassification:
    cases: tuple
    rejected: dict
    b_odd_solution_count: int
    target: int


def classify_invariant_cases(gram) -> CaseClassification:
    """Classify rank-1 + rank-2 orthogonal splittings with glue index 2.

    For an order-2 isometry the fixed rank-1 part (norm 4n) and its rank-2
    complement T satisfy [L : fixed + T] = 2, i.e. 4n * det(T) = 4 det(L),
    equivalently n (4ac - b^2) = det(L)/4.  The classification enumerates
    isometry orbits of primitive vectors of each admissible norm, computes
    complements, and keeps exactly the orbits with squared index 4.  Norms
    whose orbits all fail are reported with the embedding obstruction that
    rules them out.
    """
    g = _to_gram(gram)
    if len(g) != 3:
        raise LatticeError("expected a rank-3 Gram matrix")
    dg = det_int(g)
    if dg <= 0 or dg % 4:
        raise LatticeError("determinant must be a positive multiple of 4")
    target = dg // 4

    # no solutions with b odd: 4ac = d + b^2 is impossible mod 4
    b_odd = 0
    for n in _divisors(target):
        d = target // n
        a = 1
        while 3 * a * a <= d:  # reduced forms have d = 4ac - b^2 >= 3a^2
            for b in range(-a, a + 1):
                if b % 2 == 0:
                    continue
                num = d + b * b
                if num % (4 * a) == 0:
                    c = num // (4 * a)
                    if c >= a:
                        b_odd += 1
            a += 1

    cases = []
    rejected = {}
    for n in sorted(_divisors(target)):
        d = target // n
        if d % 4:
            continue  # b even forces 4 | d
        count, orbits = primitive_norm_orbits(g, 4 * n)
        found_here = []
        for orbit in orbits:
            rep = orbit[0]
            comp, basis = orthogonal_complement(g, rep)
            full_basis = (rep,) + basis
            idx2 = index_squared(g, full_basis)
            if idx2 != 4:
                continue
            abc_raw = gram_to_abc(comp)
            abc_red, _witness = reduce_binary_form(*abc_raw)
            case = ClassifiedCase(
                n=n,
                ns_gram=((4 * n,),),
                t_gram=abc_to_gram(*abc_red),
                abc=abc_red,
                orbit_rep=rep,
            )
            if not case.check_product(target):
                raise LatticeError("internal: case fails the determinant identity")
            if abc_red not in _enumerate_reduced_forms(d):
                raise LatticeError("internal: case not among reduced candidate forms")
            found_here.append(case)
        if found_here:
            cases.extend(found_here)
        else:
            # certify: no candidate form embeds as an orthogonal-ish pair
            evidence = []
            for abc in _enumerate_reduced_forms(d):
                a, b, c = abc
                pairs = [
                    (v1, v2)
                    for v1 in vectors_of_norm(g, 4 * a)
                    for v2 in vectors_of_norm(g, 4 * c)
                    if inner(g, v1, v2) == 2 * b
                ]
                evidence.append({"abc": abc, "embedding_pairs": len(pairs)})
            rejected[n] = evidence
    return CaseClassification(
        cases=tuple(sorted(cases, key=lambda c: c.n)),
        rejected=rejected,
        b_odd_solution_count=b_odd,
        target=target,
    )


def _enumerate_reduced_forms(d: int) -> list[tuple]:
    """All reduced (a, b, c) with b even and 4ac - b^2 = d."""
    out = []
    a = 1
    while 3 * a * a <= d:  # reduced forms have d = 4ac - b^2 >= 3a^2
        for b in range(-a, a + 1):
            if b % 2:
                continue
            num = d + b * b
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a:
                    triple = (a, b, c)
                    red, _ = reduce_binary_form(*triple)
                    if red not in out:
                        out.append(red)
        a += 1
    return sorted(out)
