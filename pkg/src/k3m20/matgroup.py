"""Finite matrix groups over exact number fields.

Elements are tuples of tuples of field elements.  The closure routine is a
plain breadth-first product search with an element cap and an optional disk
cache keyed by a digest of the generators, so the expensive closures are
computed once per machine.  On top of that: centers, derived subgroups,
scalar subgroups, projective quotients with conjugacy data, and invariant
polynomial spaces.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from . import linalg
from .numberfield import Field, FieldElement
from .polyring import MPoly

DEFAULT_CLOSURE_CAP = 1000000
CACHE_ENV_VAR = "K3M20_CACHE_DIR"


class MatGroupError(ValueError):
    pass


class ClosureCapExceeded(MatGroupError):
    """The breadth-first closure grew past its element cap."""


# ---------------------------------------------------------------------------
# matrix helpers

def mat_from_rows(field: Field, rows) -> tuple:
    out = []
    for row in rows:
        out.append(tuple(x if isinstance(x, FieldElement) else field(x)
                         for x in row))
    mat = tuple(out)
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise MatGroupError("matrix must be square")
    return mat


def parse_matrix(field: Field, rows: Sequence[Sequence[str]]) -> tuple:
    """Rows of expression strings, e.g. [["1/2*i", "0"], ["0", "-i"]]."""
    from .polyring import parse_poly
    out = []
    for row in rows:
        vals = []
        for s in row:
            p = parse_poly(str(s), field, ())
            vals.append(p.terms.get((), field.zero))
        out.append(tuple(vals))
    return mat_from_rows(field, out)


def is_scalar_matrix(m) -> bool:
    n = len(m)
    d = m[0][0]
    for i in range(n):
        for j in range(n):
            if i == j:
                if m[i][j] != d:
                    return False
            elif not m[i][j].is_zero():
                return False
    return True


def scalar_of(m) -> Optional[FieldElement]:
    return m[0][0] if is_scalar_matrix(m) else None


def mat_key(m) -> tuple:
    return tuple(x.sort_key() for row in m for x in row)


def monomial_permutation(m) -> Optional[tuple]:
    """For a monomial matrix, the permutation i -> row of the nonzero entry
    in column i; None when the matrix is not monomial."""
    n = len(m)
    perm = []
    for col in range(n):
        hits = [r for r in range(n) if not m[r][col].is_zero()]
        if len(hits) != 1:
            return None
        perm.append(hits[0])
    return tuple(perm) if len(set(perm)) == n else None


# ---------------------------------------------------------------------------
# closure with optional disk cache

def _serialize_matrix(m) -> list:
    return [[str(x) for x in row] for row in m]


def generators_digest(field: Field, gens) -> str:
    payload = {
        "minpoly": [str(c) for c in field.minpoly],
        "generators": sorted(json.dumps(_serialize_matrix(g)) for g in gens),
    }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def resolve_cache_dir(cache_dir: Optional[str]) -> Optional[str]:
    if cache_dir is not None:
        return cache_dir
    return os.environ.get(CACHE_ENV_VAR)


def mulclose(field: Field, gens, cap: int = DEFAULT_CLOSURE_CAP,
             cache_dir: Optional[str] = None) -> tuple:
    """All products of the generators, as a sorted tuple of matrices."""
    gens = [mat_from_rows(field, g) for g in gens]
    if not gens:
        raise MatGroupError("need at least one generator")
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise MatGroupError("generators must share one size")

    cache_dir = resolve_cache_dir(cache_dir)
    digest = generators_digest(field, gens) if cache_dir else None
    if cache_dir:
        cached = _cache_load(cache_dir, digest, field, n)
        if cached is not None:
            return cached

    ident = linalg.identity(field, n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = linalg.mat_mul(a, b, field)
                if c not in seen:
                    if len(seen) >= cap:
                        raise ClosureCapExceeded(
                            f"closure exceeded the cap of {cap} elements")
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    elements = tuple(sorted(seen, key=mat_key))
    if cache_dir:
        _cache_store(cache_dir, digest, elements)
    return elements


def _cache_path(cache_dir: str, digest: str) -> str:
    return os.path.join(cache_dir, f"closure-{digest}.json")


def _cache_load(cache_dir: str, digest: str, field: Field, n: int):
    path = _cache_path(cache_dir, digest)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
        elements = tuple(parse_matrix(field, rows) for rows in data["elements"])
    except (json.JSONDecodeError, KeyError, OSError, ValueError):
        return None
    if len(elements) != data.get("order") or any(len(m) != n for m in elements):
        return None
    return elements


def _cache_store(cache_dir: str, digest: str, elements) -> None:
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(cache_dir, digest)
    tmp = path + ".tmp"
    data = {"order": len(elements),
            "elements": [_serialize_matrix(m) for m in elements]}
    with open(tmp, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


def cache_entries(cache_dir: Optional[str]) -> list[tuple[str, int]]:
    """(filename, order) pairs for the cached closures in a directory."""
    cache_dir = resolve_cache_dir(cache_dir)
    if not cache_dir or not os.path.isdir(cache_dir):
        return []
    out = []
    for name in sorted(os.listdir(cache_dir)):
        if name.startswith("closure-") and name.endswith(".json"):
            try:
                with open(os.path.join(cache_dir, name)) as fh:
                    out.append((name, json.load(fh).get("order", -1)))
            except (json.JSONDecodeError, OSError):
                out.append((name, -1))
    return out


# ---------------------------------------------------------------------------
# groups

class MatGroup:
    """A finite matrix group given by generators, closed on construction."""

    def __init__(self, field: Field, generators,
                 cap: int = DEFAULT_CLOSURE_CAP,
                 cache_dir: Optional[str] = None):
        self.field = field
        self.generators = tuple(mat_from_rows(field, g) for g in generators)
        self.elements = mulclose(field, self.generators, cap=cap,
                                 cache_dir=cache_dir)
        self.n = len(self.generators[0])
        self._elem_set = frozenset(self.elements)
        self._cap = cap

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m) -> bool:
        return m in self._elem_set

    def identity(self) -> tuple:
        return linalg.identity(self.field, self.n)

    @property
    def ident(self) -> tuple:
        return self.identity()

    def mul(self, a, b) -> tuple:
        return linalg.mat_mul(a, b, self.field)

    def inv(self, a) -> tuple:
        return linalg.mat_inv(a, self.field)

    def conj(self, g, x) -> tuple:
        return self.mul(self.mul(g, x), self.inv(g))

    def element_order(self, m) -> int:
        ident = self.identity()
        p = m
        k = 1
        while p != ident:
            p = self.mul(p, m)
            k += 1
            if k > len(self.elements):
                raise MatGroupError("element order exceeds group order")
        return k

    def order_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for m in self.elements:
            o = self.element_order(m)
            hist[o] = hist.get(o, 0) + 1
        return hist

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(self.mul(a, b) == self.mul(b, a)
                   for a in gs for b in gs)

    def center(self) -> tuple:
        """Elements commuting with every generator (hence with the group)."""
        out = [m for m in self.elements
               if all(self.mul(m, g) == self.mul(g, m)
                      for g in self.generators)]
        return tuple(sorted(out, key=mat_key))

    def scalar_subgroup(self) -> tuple:
        return tuple(m for m in self.elements if is_scalar_matrix(m))

    def determinants(self) -> dict:
        dets: dict = {}
        for m in self.elements:
            d = linalg.det(m, self.field)
            dets[d] = dets.get(d, 0) + 1
        return dets

    def special_subgroup_order(self) -> int:
        one = self.field.one
        return sum(1 for m in self.elements
                   if linalg.det(m, self.field) == one)

    def derived_subgroup(self) -> "MatGroup":
        """Commutator subgroup via the normal closure of generator
        commutators."""
        gens = list(self.generators)
        pending = []
        for a in gens:
            for b in gens:
                c = self.mul(self.mul(a, b),
                             self.inv(self.mul(b, a)))
                if c != self.identity():
                    pending.append(c)
        if not pending:
            return MatGroup(self.field, [self.identity()], cap=self._cap)
        # grow a small generating set; every kept element enlarges the
        # subgroup, so the number of re-closures stays logarithmic
        kept: list = []
        sub = None
        while pending:
            c = pending.pop()
            if sub is not None and c in sub:
                continue
            kept.append(c)
            sub = MatGroup(self.field, kept, cap=self._cap)
            pending.extend(self.conj(g, c) for g in gens)
        while True:
            extra = [y for g in gens for x in kept
                     if (y := self.conj(g, x)) not in sub]
            if not extra:
                return sub
            for y in extra:
                if y not in sub:
                    kept.append(y)
                    sub = MatGroup(self.field, kept, cap=self._cap)

    def normalizes(self, m) -> bool:
        """True when conjugation by m maps the group into itself."""
        m = mat_from_rows(self.field, m)
        mi = self.inv(m)
        return all(
            linalg.mat_mul(linalg.mat_mul(m, g, self.field), mi, self.field)
            in self._elem_set
            for g in self.generators)

    def subgroup_closure(self, elements) -> frozenset:
        sub = mulclose(self.field, list(elements), cap=self._cap)
        if not set(sub) <= self._elem_set:
            raise MatGroupError("closure left the ambient group")
        return frozenset(sub)

    def is_normal_subset(self, subset: frozenset) -> bool:
        return all(self.conj(g, x) in subset
                   for g in self.generators for x in subset)


# ---------------------------------------------------------------------------
# projective quotients

class ProjectiveGroup:
    """Quotient of a matrix group by its scalar subgroup.

    Elements are canonical matrices: the scalar multiple with the smallest
    entry-wise sort key.  All arithmetic canonicalizes after each product,
    so subgroup and conjugacy computations can treat matrices as opaque
    hashable values.
    """

    def __init__(self, group: MatGroup):
        self.group = group
        self.scalars = group.scalar_subgroup()
        if not self.scalars:
            raise MatGroupError("scalar subgroup is empty")
        self._scalar_values = tuple(m[0][0] for m in self.scalars)
        self.elements = tuple(sorted({self.canon(m) for m in group.elements},
                                     key=mat_key))
        self._elem_set = frozenset(self.elements)
        self.ident = self.canon(group.identity())

    @property
    def order(self) -> int:
        return len(self.elements)

    def canon(self, m) -> tuple:
        best = None
        best_key = None
        for s in self._scalar_values:
            cand = tuple(tuple(s * x for x in row) for row in m)
            k = mat_key(cand)
            if best_key is None or k < best_key:
                best, best_key = cand, k
        return best

    def mul(self, a, b) -> tuple:
        return self.canon(self.group.mul(a, b))

    def inv(self, a) -> tuple:
        return self.canon(self.group.inv(a))

    def conj(self, g, x) -> tuple:
        return self.canon(self.group.conj(g, x))

    def generator_images(self) -> tuple:
        return tuple(self.canon(g) for g in self.group.generators)

    def element_order(self, m) -> int:
        p = self.canon(m)
        k = 1
        while p != self.ident:
            p = self.mul(p, m)
            k += 1
            if k > self.order:
                raise MatGroupError("element order exceeds group order")
        return k

    def order_histogram(self, elements=None) -> dict[int, int]:
        hist: dict[int, int] = {}
        for m in (self.elements if elements is None else elements):
            o = self.element_order(m)
            hist[o] = hist.get(o, 0) + 1
        return hist

    def derived_subgroup(self) -> frozenset:
        # the derived subgroup is the normal closure of the generator
        # commutators, so the ambient generating set is all we need
        gens = self.generator_images()
        comm = []
        for a in gens:
            for b in gens:
                c = self.mul(self.mul(a, b), self.inv(self.mul(b, a)))
                if c != self.ident:
                    comm.append(c)
        return self.normal_closure(comm)

    def _close_from(self, gens) -> set:
        seen = {self.ident}
        frontier = [self.ident]
        while frontier:
            nxt = []
            for a in frontier:
                for b in gens:
                    c = self.mul(a, b)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
                        if len(seen) > self.order:
                            raise MatGroupError("subgroup closure overflow")
            frontier = nxt
        return seen

    def subgroup_closure(self, elements) -> frozenset:
        # keep the working generating set small: each kept element at least
        # doubles the subgroup, so re-closure happens O(log |H|) times even
        # when the caller hands us a whole subgroup as `elements`
        gens: list = []
        sub = {self.ident}
        for e in elements:
            e = self.canon(e)
            if e not in sub:
                gens.append(e)
                sub = self._close_from(gens)
        return frozenset(sub)

    def normal_closure(self, elements) -> frozenset:
        ambient = self.generator_images()
        gens: list = []
        sub = {self.ident}
        queue = [self.canon(e) for e in elements]
        while queue:
            e = queue.pop()
            if e in sub:
                continue
            gens.append(e)
            sub = self._close_from(gens)
            queue.extend(self.conj(g, e) for g in ambient)
        # conjugates of later generators can reopen earlier ones
        while True:
            extra = [y for g in ambient for x in gens
                     if (y := self.conj(g, x)) not in sub]
            if not extra:
                return frozenset(sub)
            for e in extra:
                if e not in sub:
                    gens.append(e)
                    sub = self._close_from(gens)

    def generating_set(self, subset) -> list:
        """Small generating list for a subgroup given as a set of elements."""
        gens: list = []
        sub = {self.ident}
        for e in sorted(subset, key=mat_key):
            e = self.canon(e)
            if e not in sub:
                gens.append(e)
                sub = self._close_from(gens)
            if len(sub) == len(subset):
                break
        if len(sub) != len(subset):
            raise MatGroupError("input set is not a subgroup")
        return gens

    def derived_of_subgroup(self, subset) -> frozenset:
        """Derived subgroup of a subgroup (not of the ambient group)."""
        gens = self.generating_set(subset)
        comm = []
        for a in gens:
            for b in gens:
                c = self.mul(self.mul(a, b), self.inv(self.mul(b, a)))
                if c != self.ident:
                    comm.append(c)
        kept: list = []
        sub = {self.ident}
        queue = comm
        while queue:
            e = queue.pop()
            if e in sub:
                continue
            kept.append(e)
            sub = self._close_from(kept)
            queue.extend(self.conj(g, e) for g in gens)
        return frozenset(sub)

    def is_normal_subset(self, subset: frozenset) -> bool:
        return all(self.conj(g, x) in subset
                   for g in self.generator_images() for x in subset)

    def conjugacy_classes(self) -> list[frozenset]:
        gens = self.generator_images()
        ginv = [self.inv(g) for g in gens]
        remaining = set(self.elements)
        classes = []
        while remaining:
            x = min(remaining, key=mat_key)
            orbit = {x}
            frontier = [x]
            while frontier:
                nxt = []
                for y in frontier:
                    for g, gi in zip(gens, ginv):
                        z = self.canon(self.group.mul(self.group.mul(g, y), gi))
                        if z not in orbit:
                            orbit.add(z)
                            nxt.append(z)
                frontier = nxt
            classes.append(frozenset(orbit))
            remaining -= orbit
        return classes

    def conjugation_orbit_sizes(self, subset) -> list[int]:
        """Sizes of the conjugation orbits of the whole group on a subset."""
        gens = self.generator_images()
        remaining = {self.canon(x) for x in subset}
        sizes = []
        while remaining:
            x = min(remaining, key=mat_key)
            orbit = {x}
            frontier = [x]
            while frontier:
                nxt = []
                for y in frontier:
                    for g in gens:
                        z = self.conj(g, y)
                        if z not in orbit:
                            orbit.add(z)
                            nxt.append(z)
                frontier = nxt
            if not orbit <= remaining:
                raise MatGroupError("subset is not conjugation-stable")
            sizes.append(len(orbit))
            remaining -= orbit
        return sorted(sizes)

    def centralizer_order(self, x) -> int:
        """|centralizer| = group order / conjugacy class size."""
        gens = self.generator_images()
        x = self.canon(x)
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g in gens:
                    z = self.conj(g, y)
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        if self.order % len(orbit):
            raise MatGroupError("class size does not divide the group order")
        return self.order // len(orbit)


@dataclass(frozen=True)
class CosetQuotient:
    """Finite quotient of a group by a normal subset, as an index table.

    ``build`` accepts anything exposing ``elements``, ``mul``, ``inv``,
    ``ident`` and ``is_normal_subset`` (both MatGroup and ProjectiveGroup
    qualify).  All structure queries afterwards run on the integer
    multiplication table, so they cost nothing extra.
    """

    order: int
    is_perfect: bool
    order_histogram: dict
    table: tuple
    identity_index: int

    @staticmethod
    def build(pg, normal: frozenset) -> "CosetQuotient":
        if pg.ident not in normal:
            raise MatGroupError("normal subset must contain the identity")
        if not pg.is_normal_subset(normal):
            raise MatGroupError("subset is not normal")
        # one pass assigns every group element to its coset index
        index: dict = {}
        reps = []
        for m in sorted(pg.elements, key=mat_key):
            if mat_key(m) in index:
                continue
            idx = len(reps)
            reps.append(m)
            for v in normal:
                index[mat_key(pg.mul(m, v))] = idx
        order = len(reps)
        if len(index) != order * len(normal):
            raise MatGroupError("cosets do not partition the group")
        table = tuple(tuple(index[mat_key(pg.mul(a, b))] for b in reps)
                      for a in reps)
        e = index[mat_key(pg.ident)]

        quot = CosetQuotient(order=order, is_perfect=False,
                             order_histogram={}, table=table,
                             identity_index=e)
        hist: dict[int, int] = {}
        for i in range(order):
            k = quot.element_order(i)
            hist[k] = hist.get(k, 0) + 1
        comm = {table[table[i][j]][quot.inverse_index(table[j][i])]
                for i in range(order) for j in range(order)}
        perfect = len(quot.closure(comm)) == order
        return CosetQuotient(order=order, is_perfect=perfect,
                             order_histogram=hist, table=table,
                             identity_index=e)

    def inverse_index(self, i: int) -> int:
        return self.table[i].index(self.identity_index)

    def element_order(self, i: int) -> int:
        k, p = 1, i
        while p != self.identity_index:
            p = self.table[p][i]
            k += 1
            if k > self.order:
                raise MatGroupError("coset order overflow")
        return k

    def closure(self, seed) -> frozenset:
        out = {self.identity_index} | set(seed)
        frontier = list(out)
        while frontier:
            nxt = []
            for a in frontier:
                row = self.table[a]
                for b in seed:
                    c = row[b]
                    if c not in out:
                        out.add(c)
                        nxt.append(c)
            frontier = nxt
        return frozenset(out)

    def pair_generated_orders(self) -> frozenset:
        """Orders of all subgroups generated by at most two elements."""
        singles = [self.closure([i]) for i in range(self.order)]
        found = {len(s) for s in singles}
        for i in range(self.order):
            for j in range(i + 1, self.order):
                if j in singles[i] or i in singles[j]:
                    continue  # collapses to a cyclic subgroup, already counted
                found.add(len(self.closure([i, j])))
        return frozenset(found)


# ---------------------------------------------------------------------------
# actions on coordinate hyperplanes and invariant polynomials

def hyperplane_pair_orbit_count(field: Field, mats) -> int:
    """Orbit count of ordered pairs of distinct coordinate hyperplanes
    under monomial generators; 1 means the action is doubly transitive."""
    perms = []
    for m in mats:
        m = mat_from_rows(field, m)
        p = monomial_permutation(m)
        if p is None:
            raise MatGroupError("generator is not monomial")
        perms.append(p)
    n = len(perms[0])
    pairs = {(i, j) for i in range(n) for j in range(n) if i != j}
    count = 0
    while pairs:
        start = min(pairs)
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for (i, j) in frontier:
                for p in perms:
                    q = (p[i], p[j])
                    if q not in orbit:
                        orbit.add(q)
                        nxt.append(q)
            frontier = nxt
        pairs -= orbit
        count += 1
    return count


def invariant_polynomials(field: Field, mats, variables, degree: int):
    """Basis of the degree-d forms fixed by every listed matrix.

    Solves the joint kernel of (action - identity) on the monomial basis,
    exactly.
    """
    mats = [mat_from_rows(field, m) for m in mats]
    nv = len(variables)
    monomials = sorted(_monomials_of_degree(nv, degree))
    index = {m: k for k, m in enumerate(monomials)}
    cols = len(monomials)
    constraint_rows = []
    for mat in mats:
        # block[m] = coefficients of (phi(m) - m); the fixed condition on a
        # coefficient vector v is v^T block = 0, so transpose each block
        block = []
        for mono in monomials:
            basis_poly = MPoly(field, variables, {mono: field.one})
            image = basis_poly.apply_linear(mat)
            row = [field.zero] * cols
            for m2, c in image.terms.items():
                row[index[m2]] = c
            row[index[mono]] = row[index[mono]] - field.one
            block.append(row)
        for j in range(cols):
            constraint_rows.append(tuple(block[m][j] for m in range(cols)))
    kern = linalg.kernel_basis(tuple(constraint_rows), field, cols)
    out = []
    for v in kern:
        terms = {monomials[k]: v[k] for k in range(cols)}
        out.append(MPoly(field, variables, terms))
    return out


def _monomials_of_degree(nv: int, degree: int):
    if nv == 1:
        yield (degree,)
        return
    for first in range(degree + 1):
        for rest in _monomials_of_degree(nv - 1, degree - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# group files

def load_group_spec(path: str):
    """Read {"field": name, "generators": [[...rows of strings...]]}."""
    from .numberfield import field_by_name
    with open(path) as fh:
        data = json.load(fh)
    try:
        field = field_by_name(data["field"])
        gens = [parse_matrix(field, g) for g in data["generators"]]
    except (KeyError, TypeError) as exc:
        raise MatGroupError(f"malformed group file: {exc}") from exc
    if not gens:
        raise MatGroupError("group file lists no generators")
    return field, gens


# ---------------------------------------------------------------------------
# functional front door
#
# Thin wrappers over the classes above, for callers (CLI, report suites)
# that want one-shot answers rather than group objects.

def closure_order(group: MatGroup) -> int:
    return group.order


def center(group: MatGroup) -> tuple:
    return group.center()


def derived_subgroup(group: MatGroup) -> MatGroup:
    return group.derived_subgroup()


def projective_order(group: MatGroup) -> int:
    return ProjectiveGroup(group).order


def is_perfect(pg: ProjectiveGroup) -> bool:
    return len(pg.derived_subgroup()) == pg.order


def normalizes(group: MatGroup, m) -> bool:
    return group.normalizes(m)


def doubly_transitive_on_hyperplanes(group: MatGroup) -> bool:
    """True when ordered pairs of coordinate hyperplanes form one orbit."""
    return hyperplane_pair_orbit_count(group.field, group.generators) == 1


def order_spectrum(group: MatGroup) -> dict[int, int]:
    return group.order_histogram()


def fixed_polynomials(group: MatGroup, degree: int, variables=None):
    if variables is None:
        n = len(group.generators[0])
        variables = tuple(f"x{i + 1}" for i in range(n))
    return invariant_polynomials(group.field, group.generators,
                                 variables, degree)


def quotient_elementary_abelian_2(group: MatGroup, scalars) -> bool:
    """Does group / <scalars> have every nonidentity element of order 2?

    Exponent 2 forces commutativity, so this certifies an elementary
    abelian 2-group without a separate abelian check.
    """
    pg = ProjectiveGroup(group)
    expected = {x for x in scalars if not is_scalar_matrix(x)}
    if expected:
        raise MatGroupError("quotient kernel must consist of scalar matrices")
    hist = pg.order_histogram()
    return set(hist) <= {1, 2}
