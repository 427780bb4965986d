"""Exact rational scalars and small dense linear algebra over them.

Everything downstream (form analysis, rewriting, presentation checks) runs on
these: no floats, no rounding, anywhere.  ``Scalar`` is an arbitrary-precision
rational kept in lowest terms with positive denominator; ``Matrix`` is a small
immutable dense matrix of scalars with plain Gauss-Jordan elimination on top.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction

ZERO = Scalar(0)
ONE = Scalar(1)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class SingularMatrixError(ValueError):
    """Inverse requested for a matrix that has none."""


def rat(num, den: int = 1) -> Scalar:
    """Coerce to Scalar.  ``rat(3, 2)`` or ``rat(existing_scalar)``."""
    if den == 1 and isinstance(num, Fraction):
        return num
    return Scalar(num, den)


def parse_rational(text: str) -> Scalar:
    """Parse a rational literal: optional sign, integer, optional ``/`` and a
    positive integer denominator.  Anything else is rejected."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in s and s.split("/")[1].lstrip("0") == "":
        raise ValueError(f"zero denominator in rational literal: {text!r}")
    return Scalar(s)


def format_rational(q: Scalar) -> str:
    """Canonical rational literal (inverse of parse_rational)."""
    return str(q)


class Matrix:
    """Immutable dense matrix of scalars, row-major, 0-based indexing."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable) -> None:
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        ents = tuple(rat(e) for e in entries)
        if len(ents) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(ents)}")
        object.__setattr__(self, "entries", ents)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        flat = []
        for r in rows:
            if len(r) != nc:
                raise ValueError("ragged rows")
            flat.extend(r)
        return cls(nr, nc, flat)

    def entry(self, i: int, j: int) -> Scalar:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Scalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def scale(self, c) -> "Matrix":
        c = rat(c)
        return Matrix(self.rows, self.cols, [c * e for e in self.entries])

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(
                    sum(
                        (ri[k] * other.entry(k, j) for k in range(self.cols)),
                        start=ZERO,
                    )
                )
        return Matrix(self.rows, other.cols, out)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.rows)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, {self.to_rows()!r})"

    def __str__(self) -> str:
        return format_matrix(self)


def format_matrix(m: Matrix) -> str:
    """Render as nested lists of rational literals, e.g. ``[[1, 0], [0, -1/2]]``."""
    rows = []
    for i in range(m.rows):
        rows.append("[" + ", ".join(format_rational(e) for e in m.row(i)) + "]")
    return "[" + ", ".join(rows) + "]"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a * b


def mat_vec(a: Matrix, v: Sequence) -> tuple:
    if a.cols != len(v):
        raise ValueError("shape mismatch")
    vv = [rat(x) for x in v]
    return tuple(
        sum((a.entry(i, k) * vv[k] for k in range(a.cols)), start=ZERO)
        for i in range(a.rows)
    )


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...], int]:
    """Reduced row echelon form.

    Returns ``(R, pivots, rank)`` where ``pivots`` lists pivot column indices
    in increasing order.  Standard Gauss-Jordan: for each column, the first
    row below the current one with a nonzero entry is swapped up, scaled to a
    unit pivot, and eliminated from every other row.
    """
    rows = [list(m.row(i)) for i in range(m.rows)]
    nr, nc = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        pr = None
        for i in range(r, nr):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [x / pv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    flat = [x for row in rows for x in row]
    return Matrix(nr, nc, flat), tuple(pivots), len(pivots)


def kernel_basis(a: Matrix) -> tuple[tuple, ...]:
    """Canonical basis of the nullspace of ``a``.

    One vector per free column, in increasing column order; the vector has a
    1 in its free column, the forced values in the pivot columns, and 0 in
    every other free column.
    """
    red, pivots, _ = rref(a)
    pivset = set(pivots)
    free = [c for c in range(a.cols) if c not in pivset]
    basis = []
    for fc in free:
        v = [ZERO] * a.cols
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -red.entry(i, fc)
        basis.append(tuple(v))
    return tuple(basis)


def solve_affine(a: Matrix, b: Sequence) -> tuple[tuple | None, tuple[tuple, ...]]:
    """Solve ``a @ x = b`` exactly.

    Returns ``(particular, kernel)``.  ``particular`` is the canonical
    solution with all free variables set to 0, or None when the system is
    inconsistent (the kernel of ``a`` is returned either way).
    """
    bb = [rat(x) for x in b]
    if len(bb) != a.rows:
        raise ValueError("rhs length mismatch")
    aug = Matrix(
        a.rows, a.cols + 1, [x for i in range(a.rows) for x in (*a.row(i), bb[i])]
    )
    red, pivots, _ = rref(aug)
    kern = kernel_basis(a)
    if a.cols in pivots:
        return None, kern
    x = [ZERO] * a.cols
    for i, pc in enumerate(pivots):
        x[pc] = red.entry(i, a.cols)
    return tuple(x), kern


def mat_inv(m: Matrix) -> Matrix:
    """Exact inverse; raises SingularMatrixError when rank < n."""
    if m.rows != m.cols:
        raise SingularMatrixError("not square")
    n = m.rows
    aug = Matrix(
        n,
        2 * n,
        [
            x
            for i in range(n)
            for x in (*m.row(i), *(ONE if j == i else ZERO for j in range(n)))
        ],
    )
    red, pivots, rank = rref(aug)
    if rank < n or any(p >= n for p in pivots[:n]) or list(pivots[:n]) != list(range(n)):
        raise SingularMatrixError("singular matrix")
    out = [red.entry(i, n + j) for i in range(n) for j in range(n)]
    return Matrix(n, n, out)


def is_invertible(m: Matrix) -> bool:
    if m.rows != m.cols:
        return False
    _, _, rank = rref(m)
    return rank == m.rows
