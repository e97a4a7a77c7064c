"""Multivariate polynomials over exact number fields.

Monomials are exponent tuples ordered by graded reverse lexicographic
comparison.  On top of the arithmetic sit a small expression parser, the
division algorithm, Buchberger's algorithm with both classical pair
criteria, Jacobian minors, and chart-by-chart projective smoothness
certificates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .numberfield import Field, FieldElement


class PolyError(ValueError):
    pass


class WorkLimitExceeded(PolyError):
    """Raised when a basis computation exceeds its reduction-step budget."""


def grevlex_key(exps: tuple) -> tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


def monomial_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def monomial_sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


class MPoly:
    """Immutable polynomial: field, variable names, {exponent tuple: coeff}."""

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: Field, variables: Sequence[str], terms: dict):
        self.field = field
        self.vars = tuple(variables)
        clean = {}
        for exps, c in terms.items():
            if len(exps) != len(self.vars):
                raise PolyError("exponent tuple length mismatch")
            if not c.is_zero():
                clean[tuple(int(e) for e in exps)] = c
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(field: Field, variables: Sequence[str]) -> "MPoly":
        return MPoly(field, variables, {})

    @staticmethod
    def constant(field: Field, variables: Sequence[str], value) -> "MPoly":
        v = field(value) if not isinstance(value, FieldElement) else value
        return MPoly(field, variables, {(0,) * len(variables): v})

    @staticmethod
    def variable(field: Field, variables: Sequence[str], name: str) -> "MPoly":
        idx = list(variables).index(name)
        e = [0] * len(variables)
        e[idx] = 1
        return MPoly(field, variables, {tuple(e): field.one})

    # -- basic structure -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MPoly) and self.field == other.field
                and self.vars == other.vars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items(),
                                             key=lambda kv: kv[0]))))

    def leading(self) -> tuple:
        """(monomial, coefficient) of the grevlex-largest term."""
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        m = max(self.terms, key=grevlex_key)
        return m, self.terms[m]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def monic(self) -> "MPoly":
        if self.is_zero():
            return self
        _, c = self.leading()
        return self * c.inverse()

    # -- arithmetic ----------------------------------------------------------

    def _compat(self, other: "MPoly"):
        if self.field != other.field or self.vars != other.vars:
            raise PolyError("polynomials live in different rings")

    def __add__(self, other: "MPoly") -> "MPoly":
        self._compat(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            out[m] = c if s is None else s + c
        return MPoly(self.field, self.vars, out)

    def __sub__(self, other: "MPoly") -> "MPoly":
        self._compat(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            out[m] = -c if s is None else s - c
        return MPoly(self.field, self.vars, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.field, self.vars,
                     {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return MPoly(self.field, self.vars,
                         {m: c * other for m, c in self.terms.items()})
        self._compat(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                prod = c1 * c2
                s = out.get(m)
                out[m] = prod if s is None else s + prod
        return MPoly(self.field, self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise PolyError("negative polynomial powers are not defined")
        result = MPoly.constant(self.field, self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def term_poly(self, m: tuple, c) -> "MPoly":
        return MPoly(self.field, self.vars, {m: c})

    # -- calculus and substitution -------------------------------------------

    def derivative(self, var: int | str) -> "MPoly":
        idx = var if isinstance(var, int) else self.vars.index(var)
        out = {}
        for m, c in self.terms.items():
            e = m[idx]
            if e == 0:
                continue
            m2 = list(m)
            m2[idx] = e - 1
            out[tuple(m2)] = c * self.field(e)
        return MPoly(self.field, self.vars, out)

    def evaluate(self, point: Sequence[FieldElement]) -> FieldElement:
        if len(point) != len(self.vars):
            raise PolyError("point has wrong dimension")
        total = self.field.zero
        pows: list[dict] = [dict() for _ in self.vars]
        for m, c in self.terms.items():
            val = c
            for i, e in enumerate(m):
                if e == 0:
                    continue
                pe = pows[i].get(e)
                if pe is None:
                    pe = point[i] ** e
                    pows[i][e] = pe
                val = val * pe
            total = total + val
        return total

    def substitute(self, images: Sequence["MPoly"]) -> "MPoly":
        """Replace var_i by images[i]; images share this ring."""
        if len(images) != len(self.vars):
            raise PolyError("need one image per variable")
        out = MPoly.zero(self.field, self.vars)
        pows: list[dict] = [dict() for _ in self.vars]
        for m, c in self.terms.items():
            part = MPoly.constant(self.field, self.vars, c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                pe = pows[i].get(e)
                if pe is None:
                    pe = images[i] ** e
                    pows[i][e] = pe
                part = part * pe
            out = out + part
        return out

    def apply_linear(self, mat) -> "MPoly":
        """Substitute var_i -> sum_j mat[i][j] * var_j.

        Composing obeys p.apply_linear(m1).apply_linear(m2)
        == p.apply_linear(mat_mul(m1, m2)).
        """
        n = len(self.vars)
        if len(mat) != n or any(len(row) != n for row in mat):
            raise PolyError("matrix shape must match the variable count")
        images = []
        for i in range(n):
            img = MPoly.zero(self.field, self.vars)
            for j in range(n):
                c = mat[i][j]
                c = c if isinstance(c, FieldElement) else self.field(c)
                if not c.is_zero():
                    e = [0] * n
                    e[j] = 1
                    img = img + MPoly(self.field, self.vars, {tuple(e): c})
            images.append(img)
        return self.substitute(images)

    def dehomogenize(self, var: int | str) -> "MPoly":
        """Set the given variable to 1 (the result keeps all variable slots)."""
        idx = var if isinstance(var, int) else self.vars.index(var)
        out = {}
        for m, c in self.terms.items():
            m2 = list(m)
            m2[idx] = 0
            key = tuple(m2)
            s = out.get(key)
            out[key] = c if s is None else s + c
        return MPoly(self.field, self.vars, out)

    # -- display -------------------------------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]),
                      reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"

        def guard(cs: str) -> str:
            # compound coefficients need parentheses to survive re-parsing
            return f"({cs})" if ("+" in cs or "-" in cs[1:]) else cs

        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}")
                for v, e in zip(self.vars, m) if e)
            cs = str(c)
            if mono:
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{guard(cs)}*{mono}")
            else:
                parts.append(guard(cs))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


# ---------------------------------------------------------------------------
# parsing

class _Parser:
    def __init__(self, text: str, field: Field, variables: Sequence[str]):
        self.toks = self._lex(text)
        self.pos = 0
        self.field = field
        self.vars = tuple(variables)

    @staticmethod
    def _lex(text: str) -> list:
        toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                toks.append(("num", int(text[i:j])))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                toks.append(("name", text[i:j]))
                i = j
            elif text.startswith("**", i):
                toks.append(("op", "^"))
                i += 2
            elif ch in "+-*/^()":
                toks.append(("op", ch))
                i += 1
            else:
                raise PolyError(f"unexpected character {ch!r}")
        return toks

    def _peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def _next(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def parse(self) -> MPoly:
        p = self._expr()
        if self.pos != len(self.toks):
            raise PolyError("trailing input after expression")
        return p

    def _expr(self) -> MPoly:
        kind, val = self._peek()
        neg = False
        if (kind, val) == ("op", "-"):
            self._next()
            neg = True
        elif (kind, val) == ("op", "+"):
            self._next()
        p = self._term()
        if neg:
            p = -p
        while True:
            kind, val = self._peek()
            if (kind, val) == ("op", "+"):
                self._next()
                p = p + self._term()
            elif (kind, val) == ("op", "-"):
                self._next()
                p = p - self._term()
            else:
                return p

    def _term(self) -> MPoly:
        p = self._factor()
        while True:
            kind, val = self._peek()
            if (kind, val) == ("op", "*"):
                self._next()
                p = p * self._factor()
            elif (kind, val) == ("op", "/"):
                self._next()
                q = self._factor()
                if set(q.terms) - {(0,) * len(self.vars)}:
                    raise PolyError("can only divide by a constant")
                if q.is_zero():
                    raise PolyError("division by zero")
                c = q.terms[(0,) * len(self.vars)]
                p = p * c.inverse()
            else:
                return p

    def _factor(self) -> MPoly:
        kind, val = self._peek()
        if (kind, val) == ("op", "-"):
            self._next()
            return -self._factor()
        p = self._atom()
        kind, val = self._peek()
        if (kind, val) == ("op", "^"):
            self._next()
            k2, v2 = self._next()
            if k2 != "num":
                raise PolyError("exponent must be a literal integer")
            p = p ** v2
        return p

    def _atom(self) -> MPoly:
        kind, val = self._next()
        if kind == "num":
            return MPoly.constant(self.field, self.vars, val)
        if kind == "name":
            if val in self.vars:
                return MPoly.variable(self.field, self.vars, val)
            if val == "Sigma" and self._peek() == ("op", "("):
                self._next()
                inner = self._expr()
                closing = self._next()
                if closing != ("op", ")"):
                    raise PolyError("expected closing parenthesis")
                return sigma_symmetrize(inner)
            if val in self.field.named:
                return MPoly.constant(self.field, self.vars,
                                      self.field.named[val])
            if val == self.field.gen_name:
                return MPoly.constant(self.field, self.vars, self.field.gen)
            raise PolyError(f"unknown name {val!r}")
        if (kind, val) == ("op", "("):
            p = self._expr()
            kind, val = self._next()
            if (kind, val) != ("op", ")"):
                raise PolyError("expected closing parenthesis")
            return p
        raise PolyError(f"unexpected token {val!r}")


def parse_poly(text: str, field: Field, variables: Sequence[str]) -> MPoly:
    return _Parser(text, field, variables).parse()


def sigma_symmetrize(p: MPoly) -> MPoly:
    """Orbit sum of a single term under all permutations of the variables.

    Each distinct permuted monomial contributes once, so Sigma(x*y*z*t) in
    four variables is just x*y*z*t while Sigma(x^4) has four terms.
    """
    if len(p.terms) != 1:
        raise PolyError("symmetrization input must be a single term")
    (mono, coeff), = p.terms.items()
    orbit = {tuple(mono[i] for i in perm)
             for perm in itertools.permutations(range(len(p.vars)))}
    return MPoly(p.field, p.vars, {m: coeff for m in orbit})


def substitute_linear(p: MPoly, mat) -> MPoly:
    """Pull back p along the linear change of variables given by mat."""
    return p.apply_linear(mat)


def sigma_format(p: MPoly) -> str:
    """Render p with Sigma(...) orbit sums where coefficients allow it.

    Terms are grouped by the multiset of their exponents; a group whose
    coefficients all agree prints as one Sigma term.  The output re-parses
    to p.  Falls back to the plain rendering when no grouping applies.
    """
    if p.is_zero():
        return str(p)
    groups: dict[tuple, list] = {}
    for mono, coeff in p.terms.items():
        groups.setdefault(tuple(sorted(mono, reverse=True)), []).append(
            (mono, coeff))
    pieces = []
    one = p.field(1)
    for shape in sorted(groups, key=grevlex_key, reverse=True):
        bucket = groups[shape]
        rep = MPoly(p.field, p.vars, {shape: one})
        full_orbit = sigma_symmetrize(rep)
        coeffs = {c for _, c in bucket}
        if len(coeffs) == 1 and len(bucket) == len(full_orbit.terms):
            coeff = bucket[0][1]
            if len(bucket) == 1:
                pieces.append(str(MPoly(p.field, p.vars, dict(bucket))))
                continue
            body = str(rep)
            if coeff == one:
                pieces.append(f"Sigma({body})")
            elif coeff == -one:
                pieces.append(f"-Sigma({body})")
            else:
                cs = str(coeff)
                cs = f"({cs})" if ("+" in cs or "-" in cs[1:]) else cs
                pieces.append(f"{cs}*Sigma({body})")
        else:
            for mono, coeff in sorted(bucket,
                                      key=lambda t: grevlex_key(t[0]),
                                      reverse=True):
                pieces.append(str(MPoly(p.field, p.vars, {mono: coeff})))
    out = pieces[0]
    for piece in pieces[1:]:
        out += " - " + piece[1:] if piece.startswith("-") else " + " + piece
    return out


# ---------------------------------------------------------------------------
# division and Groebner bases

DEFAULT_WORK_LIMIT = 200000


class _WorkMeter:
    __slots__ = ("budget", "used")

    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def tick(self, amount: int = 1):
        self.used += amount
        if self.used > self.budget:
            raise WorkLimitExceeded(
                f"reduction work exceeded the budget of {self.budget}")


def normal_form(p: MPoly, divisors: Sequence[MPoly],
                meter: Optional[_WorkMeter] = None) -> MPoly:
    """Remainder of p on division by the list; no term of the result is
    divisible by any divisor's leading monomial."""
    divs = [(d, d.leading()) for d in divisors if not d.is_zero()]
    rem_terms = {}
    cur = p
    while not cur.is_zero():
        if meter is not None:
            meter.tick()
        m, c = cur.leading()
        hit = None
        for d, (lm, lc) in divs:
            if monomial_divides(lm, m):
                hit = (d, lm, lc)
                break
        if hit is None:
            rem_terms[m] = c
            cur = cur - cur.term_poly(m, c)
        else:
            d, lm, lc = hit
            factor = cur.term_poly(monomial_sub(m, lm), c * lc.inverse())
            cur = cur - factor * d
    return MPoly(p.field, p.vars, rem_terms)


def s_polynomial(f: MPoly, g: MPoly) -> MPoly:
    mf, cf = f.leading()
    mg, cg = g.leading()
    l = monomial_lcm(mf, mg)
    tf = f.term_poly(monomial_sub(l, mf), cf.inverse())
    tg = g.term_poly(monomial_sub(l, mg), cg.inverse())
    return tf * f - tg * g


def groebner_basis(gens: Iterable[MPoly],
                   work_limit: int = DEFAULT_WORK_LIMIT) -> list[MPoly]:
    """Reduced grevlex basis via Buchberger.

    Pair handling uses normal selection (smallest lcm first), the coprime
    criterion, and the chain criterion.  Raises WorkLimitExceeded when the
    reduction-step budget runs out rather than looping forever.
    """
    basis = [g.monic() for g in gens if not g.is_zero()]
    if not basis:
        return []
    meter = _WorkMeter(work_limit)
    lead = [g.leading()[0] for g in basis]
    pairs = {(i, j) for i in range(len(basis)) for j in range(i)}
    done = set()

    def lcm_of(pair):
        i, j = pair
        return monomial_lcm(lead[i], lead[j])

    while pairs:
        pair = min(pairs, key=lambda pr: (grevlex_key(lcm_of(pr)), pr))
        pairs.remove(pair)
        i, j = pair
        li, lj = lead[i], lead[j]
        l = monomial_lcm(li, lj)
        if l == monomial_mul(li, lj):   # coprime leading monomials
            done.add(pair)
            continue
        chain = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if monomial_divides(lead[k], l):
                p1 = (max(i, k), min(i, k))
                p2 = (max(j, k), min(j, k))
                if p1 not in pairs and p2 not in pairs:
                    chain = True
                    break
        if chain:
            done.add(pair)
            continue
        r = normal_form(s_polynomial(basis[i], basis[j]), basis, meter)
        done.add(pair)
        if not r.is_zero():
            r = r.monic()
            basis.append(r)
            lead.append(r.leading()[0])
            new = len(basis) - 1
            pairs |= {(new, t) for t in range(new)}

    # interreduce to the unique reduced basis
    changed = True
    while changed:
        changed = False
        for idx in range(len(basis)):
            others = basis[:idx] + basis[idx + 1:]
            r = normal_form(basis[idx], others, meter)
            if r.is_zero():
                basis.pop(idx)
                changed = True
                break
            r = r.monic()
            if r != basis[idx]:
                basis[idx] = r
                changed = True
                break
    basis.sort(key=lambda g: grevlex_key(g.leading()[0]))
    return basis


def ideal_contains_one(gens: Iterable[MPoly],
                       work_limit: int = DEFAULT_WORK_LIMIT) -> bool:
    gb = groebner_basis(gens, work_limit)
    return len(gb) == 1 and gb[0].total_degree() == 0


def ideal_reduce(p: MPoly, basis: Sequence[MPoly]) -> MPoly:
    """Normal form of p modulo the list; canonical when basis is Groebner."""
    return normal_form(p, basis)


def ring_map(p: MPoly, images: Sequence[MPoly]) -> MPoly:
    """Ring homomorphism sending var_i of p to images[i].

    The images all live in one target ring over the same field; unlike
    MPoly.substitute the target may have different variables.
    """
    if len(images) != len(p.vars):
        raise PolyError("need one image per source variable")
    target = images[0]
    if any(im.field != p.field or im.vars != target.vars for im in images):
        raise PolyError("images must share one ring over the source field")
    out = MPoly.zero(p.field, target.vars)
    for mono, c in p.terms.items():
        part = MPoly.constant(p.field, target.vars, c)
        for im, e in zip(images, mono):
            if e:
                part = part * im ** e
        out = out + part
    return out


def staircase_count(basis: Sequence[MPoly], cap: int = 100000) -> int:
    """Number of monomials outside the leading-term ideal of a Groebner basis.

    Finite exactly when the ideal is zero-dimensional; that count bounds
    the number of solutions with multiplicity, so finding that many
    distinct solutions certifies the solution set is complete.
    """
    lms = [p.leading()[0] for p in basis if not p.is_zero()]
    if not lms:
        raise PolyError("empty basis has an infinite staircase")
    nv = len(lms[0])
    bounds = []
    for i in range(nv):
        pures = [m[i] for m in lms if all(e == 0 for j, e in enumerate(m)
                                          if j != i)]
        if not pures:
            raise PolyError("staircase is infinite: no pure power of "
                            f"variable {i} among leading terms")
        bounds.append(min(pures))
    total = 1
    for b in bounds:
        total *= max(b, 1)
    if total > cap:
        raise PolyError("staircase enumeration exceeds cap")
    count = 0
    mono = [0] * nv
    def walk(i):
        nonlocal count
        if i == nv:
            count += 1
            return
        for e in range(bounds[i]):
            mono[i] = e
            if any(monomial_divides(m, tuple(mono[:i + 1]) + (0,) * (nv - i - 1))
                   for m in lms):
                continue
            walk(i + 1)
        mono[i] = 0
    walk(0)
    return count


# name kept short for callers that think of the operation, not the algorithm
groebner = groebner_basis


# ---------------------------------------------------------------------------
# Jacobians and smoothness

def jacobian(polys: Sequence[MPoly]) -> list[list[MPoly]]:
    if not polys:
        raise PolyError("need at least one polynomial")
    nv = len(polys[0].vars)
    return [[p.derivative(j) for j in range(nv)] for p in polys]


def poly_det(mat: Sequence[Sequence[MPoly]]) -> MPoly:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    field, variables = mat[0][0].field, mat[0][0].vars
    total = MPoly.zero(field, variables)
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * poly_det(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def jacobian_minors(polys: Sequence[MPoly], size: int) -> list[MPoly]:
    jac = jacobian(polys)
    rows = range(len(jac))
    cols = range(len(jac[0]))
    out = []
    for rs in itertools.combinations(rows, size):
        for cs in itertools.combinations(cols, size):
            sub = [[jac[r][c] for c in cs] for r in rs]
            m = poly_det(sub)
            if not m.is_zero():
                out.append(m)
    return out


@dataclass(frozen=True)
class ChartReport:
    chart: int
    trivial: bool
    basis_size: int


def is_smooth_projective(polys: Sequence[MPoly], codim: int,
                         work_limit: int = DEFAULT_WORK_LIMIT):
    """Certify that a projective complete intersection has no singular points.

    For each affine chart x_j = 1 the ideal generated by the dehomogenized
    equations together with all codim-size Jacobian minors must be the unit
    ideal.  Returns (smooth, [ChartReport...]).
    """
    if not polys:
        raise PolyError("need at least one polynomial")
    for p in polys:
        if not p.is_homogeneous():
            raise PolyError("projective smoothness needs homogeneous input")
    minors = jacobian_minors(polys, codim)
    nv = len(polys[0].vars)
    reports = []
    smooth = True
    for j in range(nv):
        chart_gens = [q.dehomogenize(j) for q in list(polys) + minors]
        chart_gens = [q for q in chart_gens if not q.is_zero()]
        gb = groebner_basis(chart_gens, work_limit)
        trivial = len(gb) == 1 and gb[0].total_degree() == 0
        reports.append(ChartReport(chart=j, trivial=trivial,
                                   basis_size=len(gb)))
        smooth = smooth and trivial
    return smooth, reports
