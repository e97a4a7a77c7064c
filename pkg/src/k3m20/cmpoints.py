"""Imaginary quadratic points on the upper half plane, exactly.

A point is stored as (p + q*sqrt(d)) / r with integers p, q > 0, r > 0 and
d < 0 squarefree, gcd(p, q, r) = 1.  Everything downstream (modular
reduction, equivalence testing, product-surface invariants) works on this
normal form, so two equal points always compare equal structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from gmpy2 import mpq


class CMPointError(ValueError):
    pass


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = f^2 * s with s squarefree; returns (f, s).  n must be positive."""
    f, s = 1, 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            f *= p ** (e // 2)
            if e % 2:
                s *= p
        p += 1 if p == 2 else 2
    s *= m
    return f, s


@dataclass(frozen=True)
class Surd:
    p: int
    q: int
    r: int
    d: int

    @staticmethod
    def make(p: int, q: int, r: int, d: int) -> "Surd":
        if d >= 0:
            raise CMPointError("d must be negative (upper half plane points)")
        if r == 0 or q == 0:
            raise CMPointError("q and r must be nonzero")
        f, s = _squarefree_split(-d)
        d = -s
        q = q * f
        if r < 0:
            p, q, r = -p, -q, -r
        if q < 0:
            raise CMPointError("point must lie in the upper half plane")
        g = gcd(gcd(abs(p), q), r)
        return Surd(p // g, q // g, r // g, d)

    @staticmethod
    def integer_multiple_of_sqrt(k: int, d: int) -> "Surd":
        """The point k*sqrt(d) for d < 0, e.g. i*sqrt(10) = sqrt(-10)."""
        return Surd.make(0, k, 1, d)

    def real(self) -> mpq:
        return mpq(self.p, self.r)

    def imag_sq(self) -> mpq:
        return mpq(self.q * self.q * (-self.d), self.r * self.r)

    def norm_sq(self) -> mpq:
        return mpq(self.p * self.p + self.q * self.q * (-self.d),
                   self.r * self.r)

    def minimal_quadratic(self) -> tuple[int, int, int]:
        """Primitive (A, B, C), A > 0, with A*t^2 + B*t + C = 0."""
        a = self.r * self.r
        b = -2 * self.p * self.r
        c = self.p * self.p - self.q * self.q * self.d
        g = gcd(gcd(a, abs(b)), c)
        return a // g, b // g, c // g

    def form_disc(self) -> int:
        a, b, c = self.minimal_quadratic()
        return b * b - 4 * a * c

    def __str__(self) -> str:
        num = []
        if self.p:
            num.append(str(self.p))
        root = f"sqrt({self.d})" if self.q == 1 else f"{self.q}*sqrt({self.d})"
        num.append(("+ " + root) if num else root)
        s = " ".join(num)
        return f"({s})/{self.r}" if self.r != 1 else s


def from_quadratic(a: int, b: int, c: int) -> Surd:
    """Root of a x^2 + b x + c with positive imaginary part (a > 0)."""
    if a <= 0:
        raise CMPointError("leading coefficient must be positive")
    disc = b * b - 4 * a * c
    if disc >= 0:
        raise CMPointError("discriminant must be negative")
    f, s = _squarefree_split(-disc)
    return Surd.make(-b, f, 2 * a, -s)


def mobius(t: Surd, mat) -> Surd:
    """(a t + b) / (c t + d) for an SL2(Z) matrix [[a, b], [c, d]]."""
    (a, b), (c, d) = mat
    if a * d - b * c != 1:
        raise CMPointError("matrix must have determinant 1")
    # numerator (a p + b r) + a q sqrt(D), denominator (c p + d r) + c q sqrt(D),
    # both over r; multiply by the conjugate of the denominator
    np_, nq = a * t.p + b * t.r, a * t.q
    dp, dq = c * t.p + d * t.r, c * t.q
    den = dp * dp - dq * dq * t.d
    new_p = np_ * dp - nq * dq * t.d
    new_q = nq * dp - np_ * dq
    return Surd.make(new_p, new_q, den, t.d)


def translate(t: Surd, n: int) -> Surd:
    return mobius(t, ((1, n), (0, 1)))


def invert_neg(t: Surd) -> Surd:
    return mobius(t, ((0, -1), (1, 0)))


def scale(t: Surd, k: int) -> Surd:
    if k <= 0:
        raise CMPointError("scale factor must be positive")
    return Surd.make(k * t.p, k * t.q, t.r, t.d)


def is_reduced(t: Surd) -> bool:
    """Membership test for the fundamental domain used by sl2z_reduce."""
    re = t.real()
    n2 = t.norm_sq()
    if n2 > 1:
        return mpq(-1, 2) <= re < mpq(1, 2)
    if n2 == 1:
        return 0 <= re <= mpq(1, 2)
    return False


def sl2z_reduce_with_witness(t: Surd) -> tuple[Surd, tuple]:
    """Fundamental domain representative plus a witness matrix.

    Convention: Re in [-1/2, 1/2) and |t| > 1, except on the unit circle
    where Re in [0, 1/2] is chosen.  Representatives are unique per
    SL2(Z) orbit.  The witness m satisfies mobius(t, m) == reduced.
    """
    m = ((1, 0), (0, 1))
    cur = t
    for _ in range(10000):
        re = cur.real()
        # shift the real part into [-1/2, 1/2)
        shift = -_floor_q(re + mpq(1, 2))
        if shift:
            cur = translate(cur, shift)
            m = _mat_mul(((1, shift), (0, 1)), m)
        if cur.norm_sq() < 1:
            cur = invert_neg(cur)
            m = _mat_mul(((0, -1), (1, 0)), m)
            continue
        break
    else:
        raise CMPointError("reduction did not terminate")
    # boundary tie-break: on the unit circle keep the representative with
    # nonnegative real part (inversion flips the sign there, and may land on
    # Re = 1/2, which the circle arc admits)
    if cur.norm_sq() == 1 and cur.real() < 0:
        cur = invert_neg(cur)
        m = _mat_mul(((0, -1), (1, 0)), m)
    if not is_reduced(cur):
        raise CMPointError("reduction postcondition violated")
    return cur, m


def sl2z_reduce(t: Surd) -> Surd:
    """Canonical fundamental domain representative of the SL2(Z) orbit."""
    reduced, _ = sl2z_reduce_with_witness(t)
    return reduced


def _mat_mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2))
                       for j in range(2)) for i in range(2))


def _floor_q(x: mpq) -> int:
    return int(x.numerator) // int(x.denominator)


def sl2z_equivalent(t1: Surd, t2: Surd) -> bool:
    return sl2z_reduce(t1) == sl2z_reduce(t2)


def shioda_mitani(a: int, b: int, c: int) -> tuple[Surd, Surd]:
    """Period pair of the product surface attached to the form [a, b, c].

    t1 is the root of a x^2 + b x + c, t2 the root of x^2 - b x + a c,
    both with positive imaginary part; the two elliptic curves E_t1 x E_t2
    realize the rank-2 form as their transcendental form.
    """
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise CMPointError("form must be positive definite")
    return from_quadratic(a, b, c), from_quadratic(1, -b, a * c)
