"""Exact linear algebra over Q on top of sympy's DomainMatrix.

Matrices travel through the engine as tuples of rows of ``Fraction`` so they
stay hashable and serializable; every rank, echelon form and product is
computed by sympy over ``QQ``. Shapes are always passed explicitly because a
matrix with no rows carries no column count.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def _qq(x):
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _fraction(entry) -> Fraction:
    return Fraction(int(entry.p), int(entry.q))


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    """Normalize any nested sequence of numbers to a Matrix of Fractions."""
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def zeros(nrows: int, ncols: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(ncols)) for _ in range(nrows))


def identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def is_zero(rows: Matrix) -> bool:
    return all(x == 0 for row in rows for x in row)


def to_domain(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    """Build a DomainMatrix over QQ with shape (len(rows), ncols)."""
    return DomainMatrix([[_qq(x) for x in row] for row in rows], (len(rows), ncols), QQ)


def from_domain(dm: DomainMatrix) -> Matrix:
    nrows, ncols = dm.shape
    if nrows == 0 or ncols == 0:
        return zeros(nrows, ncols)
    return tuple(
        tuple(_fraction(e) for e in row) for row in dm.to_Matrix().tolist()
    )


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    if not rows or ncols == 0:
        return as_matrix(rows), ()
    reduced, pivots = to_domain(rows, ncols).rref()
    return from_domain(reduced), tuple(int(p) for p in pivots)


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    _, pivots = to_domain(rows, ncols).rref()
    return len(pivots)


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -reduced[r][free]
        basis.append(tuple(vec))
    return basis


def matmul(a: Matrix, b: Matrix, ncols: int) -> Matrix:
    """Product of an m x k and a k x n matrix; ``ncols`` is n."""
    inner = len(b)
    if not a or ncols == 0 or inner == 0:
        return zeros(len(a), ncols)
    prod = to_domain(a, inner) * to_domain(b, ncols)
    return from_domain(prod)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a: Matrix, factor) -> Matrix:
    factor = Fraction(factor)
    return tuple(tuple(factor * x for x in row) for row in a)


def transpose(a: Matrix, ncols: int) -> Matrix:
    return tuple(tuple(row[j] for row in a) for j in range(ncols))


def hstack(blocks: Sequence[Matrix], nrows: int) -> Matrix:
    return tuple(
        tuple(x for block in blocks for x in block[i]) for i in range(nrows)
    )


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    return tuple(row for block in blocks for row in block)


def columns(a: Matrix, ncols: int) -> list[Vector]:
    return [tuple(row[j] for row in a) for j in range(ncols)]


def from_columns(cols: Sequence[Sequence], nrows: int) -> Matrix:
    return tuple(tuple(Fraction(col[i]) for col in cols) for i in range(nrows))


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    if n == 0:
        return ()
    return from_domain(to_domain(a, n).inv())


def solve(a: Matrix, b: Sequence, ncols: int) -> Vector:
    """One solution x of a . x = b; raises ValueError if none exists."""
    nrows = len(a)
    augmented = hstack([a, tuple((Fraction(v),) for v in b)], nrows)
    reduced, pivots = rref(augmented, ncols + 1)
    if ncols in pivots:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = reduced[r][ncols]
    return tuple(x)


def image_rank_modulo(cycles: Sequence[Sequence], boundaries: Sequence[Sequence], dim: int) -> int:
    """dim of span(cycles) + span(boundaries) modulo span(boundaries).

    Both arguments are lists of column vectors in a space of dimension ``dim``.
    """
    both = list(cycles) + list(boundaries)
    if not both:
        return 0
    total = rank(from_columns(both, dim), len(both))
    base = rank(from_columns(boundaries, dim), len(boundaries)) if boundaries else 0
    return total - base
