"""Smooth conics on planes in projective space.

A conic here is the intersection of a projective plane (cut out by linear
forms) with one quadric, stored in a canonical form so that set-theoretic
equality of conics is plain ``==`` on the objects.  On top of that sit
group orbits, an exact pairwise-disjointness test, intersection graphs,
and an exact maximum-clique search for largest pairwise-disjoint subsets.

All arithmetic is exact over a number field; "disjoint" always means the
complex points of the two curves are disjoint, so tangency counts as
meeting.
"""

from __future__ import annotations

import json
from collections import deque
from typing import Iterable, Sequence

from .linalg import det, kernel_basis, mat_inv, rref
from .numberfield import Field, FieldElement
from .polyring import MPoly, PolyError, normal_form, parse_poly


class ConicError(ValueError):
    pass


# -- canonical form ----------------------------------------------------------


class PlaneConic:
    """Canonical conic: RREF plane equations plus one reduced monic quadric.

    The plane always has projective dimension 2, so in n+1 ambient
    coordinates there are n-2 linear forms.  The quadric is reduced modulo
    the plane (pivot variables substituted away), scaled so its grevlex
    leading coefficient is 1, and must be nondegenerate on the plane: the
    curve is a smooth conic, never a line pair.
    """

    __slots__ = ("field", "vars", "linear_forms", "quadric", "pivots",
                 "_images", "_sym")

    def __init__(self, field: Field, variables: tuple,
                 linear_forms: tuple, quadric: MPoly, pivots: tuple):
        self.field = field
        self.vars = variables
        self.linear_forms = linear_forms
        self.quadric = quadric
        self.pivots = pivots
        self._images = None
        self._sym = None

    @classmethod
    def make(cls, linear_forms: Sequence[MPoly], quadric: MPoly) -> "PlaneConic":
        if not linear_forms:
            raise ConicError("need at least one linear form")
        field = quadric.field
        variables = quadric.vars
        n = len(variables)
        for form in linear_forms:
            if form.field != field or form.vars != variables:
                raise ConicError("defining forms live in different rings")
            if form.is_zero() or form.total_degree() != 1 or not form.is_homogeneous():
                raise ConicError("plane equations must be nonzero linear forms")
        if quadric.total_degree() != 2 or not quadric.is_homogeneous():
            raise ConicError("quadric must be a nonzero quadratic form")

        rows = tuple(tuple(form.terms.get(_unit_exp(n, j), field.zero)
                           for j in range(n))
                     for form in linear_forms)
        red, pivots = rref(rows, field)
        if len(red) != n - 3:
            raise ConicError("plane equations must cut a projective plane "
                             f"(need rank {n - 3}, got {len(red)})")
        canon_forms = tuple(_row_to_form(field, variables, row) for row in red)

        images = _plane_images(field, variables, red, pivots)
        reduced = quadric.substitute(images)
        if reduced.is_zero():
            raise ConicError("quadric vanishes identically on the plane")
        reduced = reduced.monic()

        conic = cls(field, variables, canon_forms, reduced, tuple(pivots))
        free = [j for j in range(n) if j not in pivots]
        if det(_restricted_matrix(reduced, free, field), field).is_zero():
            raise ConicError("conic is singular: quadric degenerates on the plane")
        return conic

    # equality is equality of the canonical data
    def __eq__(self, other) -> bool:
        return (isinstance(other, PlaneConic) and self.field == other.field
                and self.vars == other.vars
                and self.linear_forms == other.linear_forms
                and self.quadric == other.quadric)

    def __hash__(self):
        return hash((self.vars, self.linear_forms, self.quadric))

    def __repr__(self):
        forms = ", ".join(str(f) for f in self.linear_forms)
        return f"PlaneConic([{forms}], {self.quadric})"

    def plane_images(self) -> tuple:
        """Substitution images realizing reduction modulo the plane."""
        if self._images is None:
            n = len(self.vars)
            rows = tuple(tuple(form.terms.get(_unit_exp(n, j), self.field.zero)
                               for j in range(n))
                         for form in self.linear_forms)
            self._images = _plane_images(self.field, self.vars, rows, self.pivots)
        return self._images

    def sym_matrix(self) -> tuple:
        """Symmetric matrix of the reduced quadric in ambient coordinates."""
        if self._sym is None:
            n = len(self.vars)
            field = self.field
            half = field(1) / field(2)
            rows = [[field.zero] * n for _ in range(n)]
            for mono, c in self.quadric.terms.items():
                pos = [j for j, e in enumerate(mono) if e]
                if len(pos) == 1:
                    rows[pos[0]][pos[0]] = c
                else:
                    i, j = pos
                    rows[i][j] = rows[j][i] = c * half
            self._sym = tuple(tuple(r) for r in rows)
        return self._sym


def _unit_exp(n: int, j: int) -> tuple:
    e = [0] * n
    e[j] = 1
    return tuple(e)


def _row_to_form(field: Field, variables: tuple, row: tuple) -> MPoly:
    n = len(variables)
    return MPoly(field, variables,
                 {_unit_exp(n, j): c for j, c in enumerate(row)
                  if not c.is_zero()})


def _plane_images(field: Field, variables: tuple, red_rows, pivots) -> tuple:
    # pivot variable -> minus the free part of its RREF row
    n = len(variables)
    images = [MPoly.variable(field, variables, v) for v in variables]
    for r, p in enumerate(pivots):
        terms = {_unit_exp(n, j): -red_rows[r][j] for j in range(n)
                 if j != p and not red_rows[r][j].is_zero()}
        images[p] = MPoly(field, variables, terms)
    return tuple(images)


def _restricted_matrix(quad: MPoly, free: list, field: Field) -> tuple:
    half = field(1) / field(2)
    k = len(free)
    where = {j: i for i, j in enumerate(free)}
    rows = [[field.zero] * k for _ in range(k)]
    for mono, c in quad.terms.items():
        pos = [j for j, e in enumerate(mono) if e]
        if any(j not in where for j in pos):
            raise ConicError("quadric is not reduced modulo the plane")
        if len(pos) == 1:
            i = where[pos[0]]
            rows[i][i] = c
        else:
            i, j = where[pos[0]], where[pos[1]]
            rows[i][j] = rows[j][i] = c * half
    return tuple(tuple(r) for r in rows)


# -- group action ------------------------------------------------------------


def conic_apply(g, conic: PlaneConic) -> PlaneConic:
    """Image of the conic under the coordinate change g (pullback by g^-1)."""
    field = conic.field
    mat = tuple(tuple(x if isinstance(x, FieldElement) else field(x)
                      for x in row) for row in g)
    return _pullback(mat_inv(mat, field), conic)


def _pullback(ginv, conic: PlaneConic) -> PlaneConic:
    forms = [f.apply_linear(ginv) for f in conic.linear_forms]
    return PlaneConic.make(forms, conic.quadric.apply_linear(ginv))


def orbit(conic: PlaneConic, group, cap: int = 100000) -> list:
    """Orbit under the group, as a list in deterministic search order.

    ``group`` may be a matrix group object (its generators are used) or a
    plain iterable of matrices over the conic's field.
    """
    gens = list(getattr(group, "generators", group))
    field = conic.field
    ginvs = [mat_inv(tuple(tuple(x if isinstance(x, FieldElement) else field(x)
                                 for x in row) for row in g), field)
             for g in gens]
    seen = {conic}
    order = [conic]
    queue = deque([conic])
    while queue:
        cur = queue.popleft()
        for ginv in ginvs:
            img = _pullback(ginv, cur)
            if img not in seen:
                if len(seen) >= cap:
                    raise ConicError("orbit-cap-exceeded")
                seen.add(img)
                order.append(img)
                queue.append(img)
    return order


# -- containment -------------------------------------------------------------


def conic_in_surface(conic: PlaneConic, surface_gens: Sequence[MPoly]) -> bool:
    """True when every surface generator lies in the conic's ideal."""
    images = conic.plane_images()
    for gen in surface_gens:
        if gen.field != conic.field or gen.vars != conic.vars:
            raise ConicError("surface lives in a different ring than the conic")
        if not normal_form(gen.substitute(images), [conic.quadric]).is_zero():
            return False
    return True


# -- exact disjointness ------------------------------------------------------


def conics_disjoint(c1: PlaneConic, c2: PlaneConic) -> bool:
    """Exact test that the two conics share no complex point.

    Equal conics give False by contract.  Otherwise intersect the two
    plane spans: empty meet means disjoint; a single point is checked
    against both quadrics; a common line reduces to two binary quadratics
    whose resultant (a 4x4 Sylvester determinant) decides; a common plane
    means the conics meet, as two distinct conics in one plane always do.
    """
    if c1.field != c2.field or c1.vars != c2.vars:
        raise ConicError("conics live in different rings")
    if c1 == c2:
        return False
    if c1.linear_forms == c2.linear_forms:
        return False
    field = c1.field
    n = len(c1.vars)
    rows = _form_rows(c1) + _form_rows(c2)
    red, pivots = rref(rows, field)
    rank = len(red)
    if rank == n:
        return True
    if rank == n - 1:
        (point,) = kernel_basis(red, field, n)
        on1 = _quad_value(c1.sym_matrix(), point, point, field).is_zero()
        on2 = _quad_value(c2.sym_matrix(), point, point, field).is_zero()
        return not (on1 and on2)
    if rank == n - 2:
        v, w = kernel_basis(red, field, n)
        b1 = _line_restriction(c1.sym_matrix(), v, w, field)
        b2 = _line_restriction(c2.sym_matrix(), v, w, field)
        if all(x.is_zero() for x in b1) or all(x.is_zero() for x in b2):
            # a whole line inside one conic meets the other over C
            return False
        return not _sylvester_det(b1, b2, field).is_zero()
    # rank n-3: same plane, distinct conics always meet
    return False


def _form_rows(conic: PlaneConic) -> tuple:
    n = len(conic.vars)
    return tuple(tuple(form.terms.get(_unit_exp(n, j), conic.field.zero)
                       for j in range(n))
                 for form in conic.linear_forms)


def _quad_value(sym, v, w, field: Field) -> FieldElement:
    total = field.zero
    for i, vi in enumerate(v):
        if vi.is_zero():
            continue
        row = sym[i]
        acc = field.zero
        for j, wj in enumerate(w):
            if not wj.is_zero() and not row[j].is_zero():
                acc = acc + row[j] * wj
        total = total + vi * acc
    return total


def _line_restriction(sym, v, w, field: Field) -> tuple:
    """Coefficients (a, b, c) of q(s*v + t*w) = a s^2 + b s t + c t^2."""
    a = _quad_value(sym, v, v, field)
    b = _quad_value(sym, v, w, field)
    c = _quad_value(sym, w, w, field)
    return a, b + b, c


def _sylvester_det(b1, b2, field: Field) -> FieldElement:
    a, b, c = b1
    d, e, f = b2
    z = field.zero
    return det(((a, b, c, z),
                (z, a, b, c),
                (d, e, f, z),
                (z, d, e, f)), field)


# -- intersection graph and maximum disjoint sets ----------------------------


class IntersectionGraph:
    """Vertices are conics; an edge joins each pair of disjoint conics."""

    __slots__ = ("vertices", "adjacency")

    def __init__(self, vertices: list, adjacency: tuple):
        nv = len(vertices)
        if len(adjacency) != nv or any(len(r) != nv for r in adjacency):
            raise ConicError("adjacency matrix shape mismatch")
        for i in range(nv):
            if adjacency[i][i]:
                raise ConicError("adjacency diagonal must be false")
            for j in range(i):
                if adjacency[i][j] != adjacency[j][i]:
                    raise ConicError("adjacency must be symmetric")
        self.vertices = list(vertices)
        self.adjacency = adjacency

    def degree(self, i: int) -> int:
        return sum(1 for x in self.adjacency[i] if x)

    def edge_count(self) -> int:
        return sum(self.degree(i) for i in range(len(self.vertices))) // 2

    def to_dot(self, name: str = "conics") -> str:
        lines = [f"graph {name} {{"]
        lines.append("  // an edge joins two disjoint conics")
        for i in range(len(self.vertices)):
            lines.append(f"  n{i};")
        for i in range(len(self.vertices)):
            for j in range(i + 1, len(self.vertices)):
                if self.adjacency[i][j]:
                    lines.append(f"  n{i} -- n{j};")
        lines.append("}")
        return "\n".join(lines)


def intersection_graph(conics: Sequence[PlaneConic]) -> IntersectionGraph:
    nv = len(conics)
    rows = [[False] * nv for _ in range(nv)]
    for i in range(nv):
        for j in range(i + 1, nv):
            if conics_disjoint(conics[i], conics[j]):
                rows[i][j] = rows[j][i] = True
    return IntersectionGraph(list(conics), tuple(tuple(r) for r in rows))


def max_disjoint_set(conics: Sequence[PlaneConic],
                     graph: IntersectionGraph | None = None) -> tuple:
    """Exact maximum set of pairwise-disjoint conics: (size, witness list).

    Branch-and-bound maximum clique in the disjointness graph with a
    greedy-coloring bound; vertices are explored in descending-degree
    order, so the witness is deterministic.  Accepts at most 512 conics.
    """
    if len(conics) > 512:
        raise ConicError("max_disjoint_set accepts at most 512 conics")
    if not conics:
        return 0, []
    if graph is None:
        graph = intersection_graph(conics)
    nv = len(conics)
    by_degree = sorted(range(nv), key=lambda i: (-graph.degree(i), i))
    # adjacency bitmasks indexed by rank in the degree order
    adj = []
    for r in range(nv):
        vi = by_degree[r]
        mask = 0
        for s in range(nv):
            if graph.adjacency[vi][by_degree[s]]:
                mask |= 1 << s
        adj.append(mask)

    best_size = 0
    best: list = []

    def color_sort(mask: int):
        classes: list[int] = []
        order: list[int] = []
        colors: list[int] = []
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            for k, cls in enumerate(classes):
                if not (cls & adj[v]):
                    classes[k] = cls | (1 << v)
                    break
            else:
                classes.append(1 << v)
        for k, cls in enumerate(classes, start=1):
            c = cls
            while c:
                low = c & -c
                order.append(low.bit_length() - 1)
                colors.append(k)
                c ^= low
        return order, colors

    def expand(current: list, mask: int):
        nonlocal best_size, best
        order, colors = color_sort(mask)
        for idx in range(len(order) - 1, -1, -1):
            if len(current) + colors[idx] <= best_size:
                return
            v = order[idx]
            current.append(v)
            nxt = mask & adj[v]
            if nxt:
                expand(current, nxt)
            elif len(current) > best_size:
                best_size = len(current)
                best = list(current)
            current.pop()
            mask &= ~(1 << v)

    expand([], (1 << nv) - 1)
    witness_idx = sorted(by_degree[r] for r in best)
    return best_size, [conics[i] for i in witness_idx]


# -- serialization -----------------------------------------------------------


def conic_strings(conic: PlaneConic) -> list:
    """Canonical defining forms as strings, linear forms first."""
    return [str(f) for f in conic.linear_forms] + [str(conic.quadric)]


def conic_from_strings(field: Field, variables: Sequence[str],
                       texts: Iterable[str]) -> PlaneConic:
    linear = []
    quadrics = []
    for text in texts:
        p = parse_poly(text, field, variables)
        if p.total_degree() == 1:
            linear.append(p)
        elif p.total_degree() == 2:
            quadrics.append(p)
        else:
            raise ConicError(f"unexpected degree in conic data: {text!r}")
    if len(quadrics) != 1:
        raise ConicError("conic data needs exactly one quadratic form")
    return PlaneConic.make(linear, quadrics[0])


def conics_to_json(conics: Sequence[PlaneConic]) -> str:
    return json.dumps([conic_strings(c) for c in conics], indent=1)
