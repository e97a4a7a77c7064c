"""Exact arithmetic in small algebraic number fields.

A field is represented as Q[x]/(m(x)) with m monic irreducible; elements are
coordinate vectors over the power basis 1, x, ..., x^(deg-1) with exact
rational (gmpy2.mpq) coordinates.  Fields are built from Q by repeatedly
adjoining square roots, which keeps a verified tower structure around: every
extension knows its base field, the element whose square root was adjoined,
and the embedding of the base into the extension.  The tower is what makes
exact square-root testing possible without general factorization machinery.

Named elements ("i", "sqrt5", "phi", "sqrtphi", "zeta8", ...) are stored per
field so that matrices and polynomials can be written in a readable form and
re-parsed in any field that defines the same names.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from gmpy2 import isqrt, mpq, mpz

Rat = mpq

MAX_DEGREE_DEFAULT = 16


class NumberFieldError(ValueError):
    pass


class AlreadySquareError(NumberFieldError):
    """Raised by adjoin_sqrt when the radicand is already a square.

    The exact witness square root is attached, so callers that only wanted
    the root can recover it from the exception.
    """

    def __init__(self, witness: "FieldElement"):
        super().__init__("element is already a square in the field")
        self.witness = witness


class DegreeOverflowError(NumberFieldError):
    pass


def to_mpq(value) -> Rat:
    """Coerce int / str / Fraction / mpq to an exact rational."""
    if isinstance(value, (mpq, mpz)):
        return mpq(value)
    if isinstance(value, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, str):
        return mpq(value)
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None:
        return mpq(int(num), int(den))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


# ---------------------------------------------------------------------------
# dense univariate polynomial helpers over mpq, used for minpoly bookkeeping

def _poly_trim(p: list[Rat]) -> list[Rat]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: list[Rat], b: list[Rat]) -> list[Rat]:
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj == 0:
                continue
            out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_divmod(a: list[Rat], b: list[Rat]) -> tuple[list[Rat], list[Rat]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [mpq(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and _poly_trim(list(a)):
        a = _poly_trim(a)
        if len(a) < len(b):
            break
        c = a[-1] * inv_lead
        k = len(a) - len(b)
        q[k] = c
        for j, bj in enumerate(b):
            a[k + j] -= c * bj
        a.pop()
    return _poly_trim(q), _poly_trim(a)


def _poly_ext_gcd(a: list[Rat], b: list[Rat]):
    """Extended Euclid over Q[x]: returns (g, u, v) with u*a + v*b = g."""
    r0, r1 = list(a), list(b)
    u0, u1 = [mpq(1)], []
    v0, v1 = [], [mpq(1)]
    while _poly_trim(list(r1)):
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _poly_trim([x - y for x, y in _zip_pad(u0, _poly_mul(q, u1))])
        v0, v1 = v1, _poly_trim([x - y for x, y in _zip_pad(v0, _poly_mul(q, v1))])
    return r0, u0, v0


def _zip_pad(a: list[Rat], b: list[Rat]):
    n = max(len(a), len(b))
    for i in range(n):
        x = a[i] if i < len(a) else mpq(0)
        y = b[i] if i < len(b) else mpq(0)
        yield x, y


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TowerStep:
    """Record of one quadratic extension: field = base(sqrt(radicand))."""

    base: "Field"
    radicand: "FieldElement"          # element of base whose root was adjoined
    sqrt_elem: "FieldElement"         # the adjoined root, in the new field
    base_gen_image: "FieldElement"    # image of the base primitive element
    decomp_inv: tuple                 # matrix sending power-basis coords to
                                      # (u, v) pairs with elem = u + v*sqrt


class Field:
    """Q[x]/(m(x)) with exact rational coordinates over the power basis."""

    _MUL_CACHE_CAP = 1 << 17

    def __init__(self, minpoly: tuple, gen_name: str = "a",
                 tower: Optional[TowerStep] = None, _trusted: bool = False):
        mp = tuple(to_mpq(c) for c in minpoly)
        if len(mp) < 2 or mp[-1] != 1:
            raise NumberFieldError("minimal polynomial must be monic of degree >= 1")
        self.minpoly = mp
        self.degree = len(mp) - 1
        self.gen_name = gen_name
        self.tower = tower
        self.named: dict[str, FieldElement] = {}
        if not _trusted and self.degree > 1:
            _verify_irreducible(mp)
        # reduction rows: coords of x^(degree+k) for k = 0..degree-2
        d = self.degree
        rows = []
        prev = [-c for c in mp[:-1]]
        rows.append(tuple(prev))
        for _ in range(d - 2):
            shifted = [mpq(0)] + prev
            top = shifted.pop()
            prev = [shifted[i] + top * rows[0][i] for i in range(d)]
            rows.append(tuple(prev))
        self._red_rows = tuple(rows)
        self.zero = FieldElement(self, (mpq(0),) * d)
        self.one = FieldElement(self, (mpq(1),) + (mpq(0),) * (d - 1))
        if d > 1:
            self.gen = FieldElement(self, (mpq(0), mpq(1)) + (mpq(0),) * (d - 2))
        else:
            self.gen = self.one
        self._mul_cache: dict = {}

    # -- construction helpers ------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        """Embed a rational (or coordinate sequence) into the field."""
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            if value.field.minpoly == self.minpoly:
                return FieldElement(self, value.coords)
            raise NumberFieldError("cannot coerce element between different fields")
        if isinstance(value, (list, tuple)):
            if len(value) != self.degree:
                raise NumberFieldError("coordinate length mismatch")
            return FieldElement(self, tuple(to_mpq(c) for c in value))
        c = to_mpq(value)
        return FieldElement(self, (c,) + (mpq(0),) * (self.degree - 1))

    def element(self, coords) -> "FieldElement":
        return FieldElement(self, tuple(to_mpq(c) for c in coords))

    def add_named(self, name: str, elem: "FieldElement") -> None:
        self.named[name] = elem

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        terms = " + ".join(f"{c}*x^{i}" for i, c in enumerate(self.minpoly) if c != 0)
        return f"Field(deg {self.degree}, {self.gen_name}: {terms})"

    def describe(self) -> dict:
        return {
            "degree": self.degree,
            "minpoly": [str(c) for c in self.minpoly],
            "generator": self.gen_name,
            "named": {k: [str(c) for c in v.coords] for k, v in sorted(self.named.items())},
        }


class FieldElement:
    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field: Field, coords: tuple):
        self.field = field
        self.coords = coords
        self._hash = None

    # -- basic predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Rat:
        if not self.is_rational():
            raise NumberFieldError(f"{self} is not rational")
        return self.coords[0]

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field.minpoly != self.field.minpoly:
                raise NumberFieldError("field mismatch in arithmetic")
            return other
        return self.field(to_mpq(other))

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, tuple(b - a for a, b in zip(self.coords, o.coords)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        o = self._coerce(other)
        f = self.field
        d = f.degree
        a, b = self.coords, o.coords
        if d == 1:
            return FieldElement(f, (a[0] * b[0],))
        cache = f._mul_cache
        ck = (a, b)
        hit = cache.get(ck)
        if hit is not None:
            return FieldElement(f, hit)
        prod = [mpq(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj == 0:
                    continue
                prod[i + j] += ai * bj
        red = f._red_rows
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c != 0:
                row = red[k - d]
                for j in range(d):
                    rj = row[j]
                    if rj != 0:
                        prod[j] += c * rj
        coords = tuple(prod[:d])
        if len(cache) < Field._MUL_CACHE_CAP:
            cache[ck] = coords
        return FieldElement(f, coords)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """Exact inverse via extended Euclid against the minimal polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        d = self.field.degree
        if d == 1:
            return FieldElement(self.field, (1 / self.coords[0],))
        a = _poly_trim(list(self.coords))
        m = list(self.field.minpoly)
        g, u, _ = _poly_ext_gcd(a, m)
        if len(g) != 1:
            raise NumberFieldError("element not invertible; minpoly is reducible")
        scale = 1 / g[0]
        _, rem = _poly_divmod([c * scale for c in u], m)
        coords = tuple(rem[i] if i < len(rem) else mpq(0) for i in range(d))
        return FieldElement(self.field, coords)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field.minpoly == other.field.minpoly and self.coords == other.coords
        try:
            o = self._coerce(other)
        except (TypeError, NumberFieldError):
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.coords)
            self._hash = h
        return h

    def sort_key(self):
        return self.coords

    # -- display -------------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        name = self.field.gen_name
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                sym = name if i == 1 else f"{name}^{i}"
                if c == 1:
                    parts.append(sym)
                elif c == -1:
                    parts.append(f"-{sym}")
                else:
                    parts.append(f"{c}*{sym}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"<{self} in {self.field.gen_name}-field deg {self.field.degree}>"


# ---------------------------------------------------------------------------
# irreducibility checking for directly constructed minimal polynomials

def _rational_roots(mp: tuple) -> list[Rat]:
    # candidates p/q with p | numerator of constant, q | lead (monic: q = 1),
    # after clearing denominators
    den_lcm = 1
    for c in mp:
        den_lcm = den_lcm * int(c.denominator) // _gcd(den_lcm, int(c.denominator))
    ints = [int(c * den_lcm) for c in mp]
    a0, an = ints[0], ints[-1]
    if a0 == 0:
        return [mpq(0)]
    roots = []
    for p in _divisors(abs(a0)):
        for q in _divisors(abs(an)):
            for sign in (1, -1):
                cand = mpq(sign * p, q)
                val = mpq(0)
                for c in reversed(mp):
                    val = val * cand + c
                if val == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def _verify_irreducible(mp: tuple) -> None:
    """Rational-root plus factor-degree certification.

    Degree 2 and 3 polynomials are irreducible iff they have no rational
    root.  For higher degree we intersect the possible rational factor
    degrees derived from factorization degrees modulo several primes; if the
    intersection leaves only trivial factors the polynomial is certified.
    Multiquadratic minimal polynomials cannot be certified this way (they
    split modulo every prime) and must be built through verified towers.
    """
    deg = len(mp) - 1
    if deg == 1:
        return
    if _rational_roots(mp):
        raise NumberFieldError("minimal polynomial has a rational root")
    if deg <= 3:
        return
    possible = set(range(0, deg + 1))
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        degrees = _simple_factor_degrees(mp, p)
        if degrees is None:
            continue
        sums = {0}
        for d in degrees:
            sums |= {s + d for s in sums}
        possible &= sums
        if possible <= {0, deg}:
            return
    raise NumberFieldError(
        "cannot certify irreducibility by rational-root/factor-degree checks; "
        "construct the field through adjoin_sqrt towers instead")


def _simple_factor_degrees(mp: tuple, p: int) -> Optional[list[int]]:
    """Clean reimplementation of mod-p distinct-degree factor degrees."""
    den_lcm = 1
    for c in mp:
        den_lcm = den_lcm * int(c.denominator) // _gcd(den_lcm, int(c.denominator))
    if den_lcm % p == 0:
        return None
    f = [int(c * den_lcm) % p for c in mp]
    if f[-1] % p == 0:
        return None
    lead_inv = pow(f[-1], -1, p)
    f = [c * lead_inv % p for c in f]

    def trim(a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % p
        return trim(out)

    def pdivmod(a, b):
        a = list(a)
        q = [0] * max(0, len(a) - len(b) + 1)
        binv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            if a[-1]:
                c = a[-1] * binv % p
                q[len(a) - len(b)] = c
                for j, bj in enumerate(b):
                    a[len(a) - len(b) + j] = (a[len(a) - len(b) + j] - c * bj) % p
            a.pop()
            trim(a)
        return trim(q), trim(a)

    def pgcd(a, b):
        a, b = list(a), list(b)
        while b:
            _, r = pdivmod(a, b)
            a, b = b, r
        if a:
            c = pow(a[-1], -1, p)
            a = [x * c % p for x in a]
        return a

    deriv = trim([(i * f[i]) % p for i in range(1, len(f))])
    if not deriv or len(pgcd(f, deriv)) != 1:
        return None

    # distinct-degree factorization; only the factor degrees are kept
    degrees = []
    g = list(f)
    xq = [0, 1]  # x^(p^k) mod g, currently k = 0
    k = 0
    while len(g) - 1 >= 1:
        k += 1
        if 2 * k > len(g) - 1:
            degrees.append(len(g) - 1)
            break
        e = p
        base, acc = list(xq), [1]
        while e:
            if e & 1:
                _, acc = pdivmod(pmul(acc, base), g)
            _, base = pdivmod(pmul(base, base), g)
            e >>= 1
        xq = acc
        diff = list(xq) + [0] * max(0, 2 - len(xq))
        diff[1] = (diff[1] - 1) % p
        diff = trim(diff)
        h = pgcd(g, diff) if diff else list(g)
        if len(h) > 1:
            degrees.extend([k] * ((len(h) - 1) // k))
            g, _ = pdivmod(g, h)
            if len(g) - 1 >= 1:
                _, xq = pdivmod(xq, g)
    return degrees


# ---------------------------------------------------------------------------
# square testing and square-root adjunction

def is_square(elem: FieldElement) -> Optional[FieldElement]:
    """Exact square root, or None.

    Works by recursion down the quadratic tower: for a = u + v*s in F(s),
    s^2 = w, a square root (x + y*s) forces the relative norm u^2 - w*v^2
    to be a square t^2 in F, and then x^2 = (u +/- t)/2.  At the bottom the
    question is whether a rational is a perfect square.  The returned root
    is sign-normalized so its first nonzero coordinate is positive.
    """
    root = _sqrt_in_field(elem)
    if root is None:
        return None
    for c in root.coords:
        if c != 0:
            if c < 0:
                root = -root
            break
    assert root * root == elem
    return root


def _sqrt_in_field(elem: FieldElement) -> Optional[FieldElement]:
    field = elem.field
    if elem.is_zero():
        return field.zero
    if field.degree == 1:
        return _sqrt_rational(field, elem.coords[0])
    step = field.tower
    if step is None:
        raise NumberFieldError(
            "square testing requires a tower-built field (adjoin_sqrt chain)")
    u, v = _decompose(elem, step)
    base = step.base
    w = step.radicand
    s = step.sqrt_elem
    embed = lambda e: _embed_through(step, e)
    if v.is_zero():
        r = _sqrt_in_field(u)
        if r is not None:
            return embed(r)
        quot = u * w.inverse()
        r = _sqrt_in_field(quot)
        if r is not None:
            return embed(r) * s
        return None
    n = u * u - w * v * v
    t = _sqrt_in_field(n)
    if t is None:
        return None
    half = base(mpq(1, 2))
    for tt in (t, -t):
        xx = (u + tt) * half
        x = _sqrt_in_field(xx)
        if x is not None and not x.is_zero():
            y = v * (x + x).inverse()
            cand = embed(x) + embed(y) * s
            if cand * cand == elem:
                return cand
    return None


def _sqrt_rational(field: Field, c: Rat) -> Optional[FieldElement]:
    if c < 0:
        return None
    num, den = mpz(c.numerator), mpz(c.denominator)
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return field(mpq(rn, rd))
    return None


def _decompose(elem: FieldElement, step: TowerStep) -> tuple:
    """Write elem = u + v*sqrt with u, v in the base field of the step."""
    d = elem.field.degree
    db = step.base.degree
    coords = _mat_vec(step.decomp_inv, elem.coords)
    u = FieldElement(step.base, tuple(coords[:db]))
    v = FieldElement(step.base, tuple(coords[db:]))
    return u, v


def _embed_through(step: TowerStep, e: FieldElement) -> FieldElement:
    """Ring-hom image of a base-field element under the tower embedding."""
    img = step.base_gen_image
    out = img.field.zero
    for c in reversed(e.coords):
        out = out * img + img.field(c)
    return out


def _mat_vec(mat: tuple, vec: tuple) -> list:
    return [sum((row[j] * vec[j] for j in range(len(vec))), mpq(0)) for row in mat]


def _mat_inv_q(mat: list[list[Rat]]) -> Optional[list[list[Rat]]]:
    n = len(mat)
    aug = [list(row) + [mpq(1) if i == j else mpq(0) for j in range(n)]
           for i, row in enumerate(mat)]
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, n):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[n:] for row in aug]


@dataclass
class Extension:
    field: Field
    embed: Callable[[FieldElement], FieldElement]
    sqrt: FieldElement


def adjoin_sqrt(base: Field, radicand, name: Optional[str] = None,
                max_degree: int = MAX_DEGREE_DEFAULT) -> Extension:
    """Adjoin an exact square root of a base-field element.

    Returns the new field, the embedding hom, and the adjoined root.  The
    new primitive element is found by searching small integer combinations
    sqrt + k*gen; its power independence is what certifies the minimal
    polynomial, so no separate irreducibility argument is needed.
    """
    a = base(radicand) if not isinstance(radicand, FieldElement) else radicand
    if a.field != base:
        raise NumberFieldError("radicand must live in the base field")
    if a.is_zero():
        raise NumberFieldError("cannot adjoin sqrt(0)")
    w = is_square(a)
    if w is not None:
        raise AlreadySquareError(w)
    d = base.degree
    new_deg = 2 * d
    if new_deg > max_degree:
        raise DegreeOverflowError(
            f"extension degree {new_deg} exceeds the configured bound {max_degree}")

    # K = base[y]/(y^2 - a), elements are pairs (p, q) = p + q*y
    def pair_mul(p1, q1, p2, q2):
        return p1 * p2 + q1 * q2 * a, p1 * q2 + q1 * p2

    for k in (0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5):
        if d == 1 and k != 0:
            theta_p, theta_q = base(k), base.one
        elif d == 1:
            theta_p, theta_q = base.zero, base.one
        else:
            theta_p, theta_q = base.gen * k, base.one
        powers = []
        cur = (base.one, base.zero)
        for _ in range(new_deg + 1):
            powers.append(cur)
            cur = pair_mul(cur[0], cur[1], theta_p, theta_q)
        rows = [list(p.coords) + list(q.coords) for p, q in powers]
        basis = [rows[i] for i in range(new_deg)]
        inv = _mat_inv_q([[basis[j][i] for j in range(new_deg)] for i in range(new_deg)])
        if inv is None:
            continue
        # minpoly: theta^new_deg = sum c_j theta^j
        target = rows[new_deg]
        cvec = _mat_vec(tuple(tuple(r) for r in inv), tuple(target))
        minpoly = tuple([-c for c in cvec] + [mpq(1)])
        new_field = Field(minpoly, gen_name=_auto_gen_name(base, name, k),
                          _trusted=True)
        # coordinates of an arbitrary pair (p, q) over the theta power basis
        inv_t = tuple(tuple(r) for r in inv)

        def pair_coords(p, q):
            return tuple(_mat_vec(inv_t, tuple(list(p.coords) + list(q.coords))))

        sqrt_elem = FieldElement(new_field, pair_coords(base.zero, base.one))
        gen_img = FieldElement(new_field, pair_coords(base.gen, base.zero))
        # decomposition matrix: columns are embed(basis_i) and embed(basis_i)*s
        cols = []
        for i in range(d):
            p = FieldElement(base, tuple(mpq(1) if j == i else mpq(0) for j in range(d)))
            cols.append(pair_coords(p, base.zero))
        for i in range(d):
            p = FieldElement(base, tuple(mpq(1) if j == i else mpq(0) for j in range(d)))
            cols.append(pair_coords(base.zero, p))
        dec = [[cols[j][i] for j in range(new_deg)] for i in range(new_deg)]
        dec_inv = _mat_inv_q(dec)
        assert dec_inv is not None
        step = TowerStep(base=base, radicand=a, sqrt_elem=sqrt_elem,
                         base_gen_image=gen_img,
                         decomp_inv=tuple(tuple(r) for r in dec_inv))
        new_field.tower = step

        def embed(e: FieldElement, _step=step, _nf=new_field) -> FieldElement:
            if e.field.minpoly != _step.base.minpoly:
                raise NumberFieldError("embedding applied to wrong field")
            return _embed_through(_step, e)

        # carry over named elements, then register the new root
        for nm, el in base.named.items():
            new_field.add_named(nm, embed(el))
        if name:
            new_field.add_named(name, sqrt_elem)
        assert sqrt_elem * sqrt_elem == embed(a)
        return Extension(field=new_field, embed=embed, sqrt=sqrt_elem)
    raise NumberFieldError("primitive element search failed; widen the k range")


def _auto_gen_name(base: Field, name: Optional[str], k: int) -> str:
    if base.degree == 1 and name:
        return name
    return "a"


# ---------------------------------------------------------------------------
# the concrete fields used by the verification suites

@functools.cache
def rational_field() -> Field:
    f = Field((mpq(0), mpq(1)), gen_name="x")
    # degree-1 field: the "generator" is 1; nothing to name
    return f


@functools.cache
def gaussian_field() -> Field:
    ext = adjoin_sqrt(rational_field(), -1, name="i")
    return ext.field


@functools.cache
def sqrt5_field() -> Field:
    ext = adjoin_sqrt(rational_field(), 5, name="sqrt5")
    f = ext.field
    f.add_named("phi", (f.named["sqrt5"] + 1) / 2)
    return f


@functools.cache
def golden_tower_field() -> Field:
    """Q(sqrt(phi)), degree 4 over Q, containing sqrt5 and phi."""
    base = sqrt5_field()
    ext = adjoin_sqrt(base, base.named["phi"], name="sqrtphi")
    return ext.field


@functools.cache
def gauss_sqrt5_field() -> Field:
    base = sqrt5_field()
    ext = adjoin_sqrt(base, -1, name="i")
    return ext.field


@functools.cache
def big_tower_field() -> Field:
    """Q(i, sqrt5, sqrt(phi)), degree 8; home of the small conic orbit."""
    base = golden_tower_field()
    ext = adjoin_sqrt(base, -1, name="i")
    return ext.field


@functools.cache
def zeta8_field() -> Field:
    """Q(zeta8) built as Q(i, sqrt2); zeta8 = (1+i)*sqrt2/2."""
    base = gaussian_field()
    ext = adjoin_sqrt(base, 2, name="sqrt2")
    f = ext.field
    z = (f.one + f.named["i"]) * f.named["sqrt2"] / 2
    f.add_named("zeta8", z)
    return f


@functools.cache
def gauss_sqrt10_field() -> Field:
    base = gaussian_field()
    ext = adjoin_sqrt(base, 10, name="sqrt10")
    return ext.field


_FIELD_BUILDERS = {
    "rationals": rational_field,
    "i": gaussian_field,
    "sqrt5": sqrt5_field,
    "golden": golden_tower_field,
    "i-sqrt5": gauss_sqrt5_field,
    "tower8": big_tower_field,
    "zeta8": zeta8_field,
    "i-sqrt10": gauss_sqrt10_field,
}


def field_by_name(spec: str) -> Field:
    try:
        return _FIELD_BUILDERS[spec]()
    except KeyError:
        raise NumberFieldError(
            f"unknown field spec {spec!r}; known: {sorted(_FIELD_BUILDERS)}") from None


def known_field_names() -> list[str]:
    return sorted(_FIELD_BUILDERS)
