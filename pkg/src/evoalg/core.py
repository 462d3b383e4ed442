"""Structure matrices, evolution-algebra products, and the Rota-Baxter residual.

An n-dimensional evolution algebra is determined by its matrix of structural
constants A = (a_ij): in the natural basis e_1..e_n the product is

    e_i * e_i = sum_k a_ik e_k        (row i of A)
    e_i * e_j = 0                     (i != j)

extended bilinearly, so (x*y)_k = sum_i x_i y_i a_ik.

A linear map P(e_i) = sum_j r_ij e_j (rows of R) is a Rota-Baxter operator
of weight lam when P(x)P(y) = P(x P(y) + P(x) y + lam x y) for all x, y.
`rb_residual` evaluates LHS - RHS of that identity on all basis pairs.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass


class EvoalgError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(EvoalgError):
    pass


class MatrixFormatError(EvoalgError):
    """Raised when a matrix file or complex literal cannot be parsed."""


REAL = "real"
COMPLEX = "complex"


def _check_finite(z: complex, what: str) -> None:
    if not (cmath.isfinite(z)):
        raise ValueError(f"non-finite {what}: {z!r}")


@dataclass(frozen=True)
class StructureMatrix:
    """n x n matrix of structural constants, fixed to a field mode."""

    entries: tuple[tuple[complex, ...], ...]
    field: str = COMPLEX

    def __post_init__(self):
        n = len(self.entries)
        if n < 1:
            raise ValueError("dimension must be >= 1")
        rows = []
        for row in self.entries:
            if len(row) != n:
                raise ValueError("structure matrix must be square")
            rows.append(tuple(complex(z) for z in row))
        object.__setattr__(self, "entries", tuple(rows))
        if self.field not in (REAL, COMPLEX):
            raise ValueError(f"unknown field mode {self.field!r}")
        for row in self.entries:
            for z in row:
                _check_finite(z, "matrix entry")
                if self.field == REAL and z.imag != 0.0:
                    raise ValueError("real-mode matrix has a nonzero imaginary part")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def row(self, i: int) -> tuple[complex, ...]:
        return self.entries[i]

    def maxabs(self) -> float:
        return max(abs(z) for row in self.entries for z in row)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.maxabs() <= tol

    @staticmethod
    def zero(n: int, field: str = COMPLEX) -> "StructureMatrix":
        return StructureMatrix(tuple(tuple(0.0 for _ in range(n)) for _ in range(n)), field)

    @staticmethod
    def from_rows(rows, field: str = COMPLEX) -> "StructureMatrix":
        return StructureMatrix(tuple(tuple(row) for row in rows), field)


@dataclass(frozen=True)
class AlgebraElement:
    """Coordinates of an algebra element in the natural basis."""

    coords: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(z) for z in self.coords))
        for z in self.coords:
            _check_finite(z, "coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)

    @staticmethod
    def basis(i: int, n: int) -> "AlgebraElement":
        return AlgebraElement(tuple(1.0 if k == i else 0.0 for k in range(n)))

    @staticmethod
    def zero(n: int) -> "AlgebraElement":
        return AlgebraElement((0.0,) * n)

    def maxabs(self) -> float:
        return max(abs(z) for z in self.coords) if self.coords else 0.0


@dataclass(frozen=True)
class RotaBaxterOperator:
    """Linear operator P(e_i) = sum_j r_ij e_j with weight 0 or 1."""

    entries: tuple[tuple[complex, ...], ...]
    weight: int

    def __post_init__(self):
        n = len(self.entries)
        rows = []
        for row in self.entries:
            if len(row) != n:
                raise ValueError("operator matrix must be square")
            rows.append(tuple(complex(z) for z in row))
        object.__setattr__(self, "entries", tuple(rows))
        for row in self.entries:
            for z in row:
                _check_finite(z, "operator entry")
        if self.weight not in (0, 1):
            raise ValueError("weight must be 0 or 1")

    @property
    def dim(self) -> int:
        return len(self.entries)

    @staticmethod
    def from_rows(rows, weight: int) -> "RotaBaxterOperator":
        return RotaBaxterOperator(tuple(tuple(row) for row in rows), weight)


def multiply(A: StructureMatrix, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Evolution-algebra product of x and y under structure matrix A.

    Summation runs over i ascending so the result is bit-identical under
    swapping x and y.
    """
    n = A.dim
    if x.dim != n or y.dim != n:
        raise DimensionMismatchError(
            f"element dims {x.dim},{y.dim} do not match algebra dim {n}"
        )
    out = [0j] * n
    for i in range(n):
        c = x.coords[i] * y.coords[i]
        if c == 0:
            continue
        row = A.entries[i]
        for k in range(n):
            out[k] += c * row[k]
    return AlgebraElement(tuple(out))


def apply_operator(R: RotaBaxterOperator | tuple, v: AlgebraElement) -> AlgebraElement:
    """Apply the linear map with row-wise matrix R to the element v."""
    rows = R.entries if isinstance(R, RotaBaxterOperator) else R
    n = len(rows)
    if v.dim != n:
        raise DimensionMismatchError(f"element dim {v.dim} does not match operator dim {n}")
    out = [0j] * n
    for m in range(n):
        c = v.coords[m]
        if c == 0:
            continue
        for k in range(n):
            out[k] += c * rows[m][k]
    return AlgebraElement(tuple(out))


def rb_residual_general(A: StructureMatrix, rows, weight: complex):
    """Residual of the weight-`weight` Rota-Baxter identity for the map with
    row matrix `rows`, evaluated on all basis pairs.

    Returns an n x n grid of coordinate tuples; entry (i,j) is
    P(e_i)P(e_j) - P(e_i P(e_j) + P(e_i) e_j + weight e_i e_j).  Pairs are
    evaluated for i <= j and mirrored, which keeps the grid symmetric and
    bit-reproducible.
    """
    n = A.dim
    rows = tuple(tuple(complex(z) for z in r) for r in rows)
    if len(rows) != n:
        raise DimensionMismatchError(f"operator dim {len(rows)} does not match algebra dim {n}")
    pe = [AlgebraElement(rows[i]) for i in range(n)]
    basis = [AlgebraElement.basis(i, n) for i in range(n)]
    grid: list[list[tuple[complex, ...]]] = [[None] * n for _ in range(n)]  # type: ignore
    for i in range(n):
        for j in range(i, n):
            lhs = multiply(A, pe[i], pe[j])
            t1 = multiply(A, basis[i], pe[j])
            t2 = multiply(A, pe[i], basis[j])
            t3 = multiply(A, basis[i], basis[j])
            arg = AlgebraElement(
                tuple(a + b + weight * c for a, b, c in zip(t1.coords, t2.coords, t3.coords))
            )
            rhs = apply_operator(rows, arg)
            res = tuple(l - r for l, r in zip(lhs.coords, rhs.coords))
            grid[i][j] = res
            grid[j][i] = res
    return tuple(tuple(row) for row in grid)


def rb_residual(A: StructureMatrix, R: RotaBaxterOperator):
    """Rota-Baxter residual grid for a weight-0/1 operator; see rb_residual_general."""
    if R.dim != A.dim:
        raise DimensionMismatchError(f"operator dim {R.dim} does not match algebra dim {A.dim}")
    return rb_residual_general(A, R.entries, R.weight)


def rb_residual_norm(A: StructureMatrix, R: RotaBaxterOperator) -> float:
    """Max-norm over all (i, j, k) of the Rota-Baxter residual.

    Zero exactly when R satisfies the identity; max (not Frobenius) so a
    single violated equation cannot be averaged away.
    """
    grid = rb_residual(A, R)
    return max(abs(z) for row in grid for vec in row for z in vec)


def rb_residual_norm_general(A: StructureMatrix, rows, weight: complex) -> float:
    grid = rb_residual_general(A, rows, weight)
    return max(abs(z) for row in grid for vec in row for z in vec)


# --- matrix file format -----------------------------------------------------
#
# Plain text: first line n, then n rows of n complex numbers written re+imi,
# e.g. "0+1i", "-0.5+0i", "1.5e-3-2i".  Locale-independent, "." decimal
# separator.

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^({_NUM})([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i$")


def parse_complex(token: str) -> complex:
    m = _COMPLEX_RE.match(token)
    if not m:
        raise MatrixFormatError(f"bad complex literal {token!r} (expected re+imi form)")
    return complex(float(m.group(1)), float(m.group(2)))


def format_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def format_matrix(A: StructureMatrix) -> str:
    lines = [str(A.dim)]
    for row in A.entries:
        lines.append(" ".join(format_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, field: str = COMPLEX) -> StructureMatrix:
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise MatrixFormatError(f"first line must be the dimension, got {lines[0]!r}") from None
    if n < 1:
        raise MatrixFormatError(f"dimension must be positive, got {n}")
    if len(lines) != n + 1:
        raise MatrixFormatError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != n:
            raise MatrixFormatError(f"expected {n} entries per row, got {len(toks)} in {ln!r}")
        rows.append(tuple(parse_complex(t) for t in toks))
    try:
        return StructureMatrix(tuple(rows), field)
    except ValueError as e:
        raise MatrixFormatError(str(e)) from None


def read_matrix_file(path, field: str = COMPLEX) -> StructureMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return parse_matrix(fh.read(), field)


def write_matrix_file(path, A: StructureMatrix) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_matrix(A))
