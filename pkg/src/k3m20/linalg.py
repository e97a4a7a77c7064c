"""Exact linear algebra over a number field.

Matrices are tuples of tuples of FieldElement; nothing here mutates its
input.  All algorithms are plain fraction-free-enough Gaussian elimination;
sizes stay tiny (dimension at most 8) so clarity wins over cleverness.
"""

from __future__ import annotations

from .numberfield import Field, FieldElement


def identity(field: Field, n: int) -> tuple:
    return tuple(tuple(field.one if i == j else field.zero for j in range(n))
                 for i in range(n))


def mat_mul(a: tuple, b: tuple, field: Field) -> tuple:
    n, k2 = len(a), len(b[0])
    rows = []
    for i in range(n):
        arow = a[i]
        nz = [(k, arow[k]) for k in range(len(arow)) if not arow[k].is_zero()]
        out = []
        for j in range(k2):
            acc = field.zero
            for k, aik in nz:
                bkj = b[k][j]
                if not bkj.is_zero():
                    acc = acc + aik * bkj
            out.append(acc)
        rows.append(tuple(out))
    return tuple(rows)


def mat_vec(a: tuple, v: tuple, field: Field) -> tuple:
    out = []
    for row in a:
        acc = field.zero
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def transpose(a: tuple) -> tuple:
    return tuple(zip(*a))


def scalar_mul(c: FieldElement, a: tuple) -> tuple:
    return tuple(tuple(c * x for x in row) for row in a)


def mat_sub(a: tuple, b: tuple) -> tuple:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def det(a: tuple, field: Field) -> FieldElement:
    n = len(a)
    m = [list(row) for row in a]
    result = field.one
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not m[r][col].is_zero():
                piv = r
                break
        if piv is None:
            return field.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        pivot = m[col][col]
        result = result * pivot
        inv = pivot.inverse()
        for r in range(col + 1, n):
            if not m[r][col].is_zero():
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return result


def mat_inv(a: tuple, field: Field) -> tuple:
    n = len(a)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not aug[r][col].is_zero():
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def rref(rows: tuple, field: Field) -> tuple[tuple, tuple]:
    """Reduced row echelon form; returns (rows, pivot column indices).

    Zero rows are dropped, so the output is a canonical basis of the row
    space: equal row spaces give equal outputs.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not m[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][col].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def kernel_basis(rows: tuple, field: Field, ncols: int) -> list[tuple]:
    """Basis of the right kernel, canonical for a fixed input row space."""
    if not rows:
        return [tuple(field.one if i == j else field.zero for j in range(ncols))
                for i in range(ncols)]
    red, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(tuple(vec))
    return basis


def solve(a: tuple, b: tuple, field: Field):
    """One solution of A x = b, or None if inconsistent."""
    n = len(a)
    ncols = len(a[0])
    aug = tuple(tuple(list(row) + [bv]) for row, bv in zip(a, b))
    red, pivots = rref(aug, field)
    for row in red:
        if all(x.is_zero() for x in row[:-1]) and not row[-1].is_zero():
            return None
    x = [field.zero] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
        x[pc] = red[r][-1]
    return tuple(x)
