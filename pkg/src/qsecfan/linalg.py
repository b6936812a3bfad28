"""Exact vectors, matrices and Gale transforms over Scalar.

Everything is immutable and deterministic: Gaussian elimination always
picks the first nonzero pivot, reduced echelon form orders free
variables increasingly, so repeated calls give identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatchError, InvalidCalibrationError
from .scalar import S0, S1, Scalar, common_field

Vec = tuple[Scalar, ...]


def vec(entries: Iterable) -> Vec:
    return tuple(Scalar.coerce(x) for x in entries)


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    if len(u) != len(v):
        raise DimensionMismatchError(f"dot of lengths {len(u)} and {len(v)}")
    acc = S0
    for x, y in zip(u, v):
        acc = acc + x * y
    return acc


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(x - y for x, y in zip(u, v))


def vscale(c, u: Sequence[Scalar]) -> Vec:
    c = Scalar.coerce(c)
    return tuple(c * x for x in u)


def is_zero_vec(u: Sequence[Scalar]) -> bool:
    return all(x.is_zero() for x in u)


def normalize_direction(u: Sequence[Scalar]) -> Vec:
    """Scale by a positive factor so the first nonzero entry is +1 or -1."""
    for x in u:
        if not x.is_zero():
            return vscale(abs(x).inv(), u)
    return tuple(u)


class Matrix:
    """A rectangular grid of Scalars sharing one quadratic field."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rs = tuple(vec(r) for r in rows)
        if rs and any(len(r) != len(rs[0]) for r in rs):
            raise DimensionMismatchError("ragged rows")
        object.__setattr__(self, "rows", rs)

    def __setattr__(self, *_):
        raise AttributeError("Matrix is immutable")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[S1 if i == j else S0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: Optional[int] = None) -> "Matrix":
        cols = [vec(c) for c in cols]
        if not cols:
            return cls([[] for _ in range(nrows or 0)])
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))])

    def column(self, j: int) -> Vec:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vec]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix.from_columns(self.rows, nrows=self.ncols)

    def matvec(self, x: Sequence[Scalar]) -> Vec:
        return tuple(dot(r, x) for r in self.rows)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatchError("matrix product shape mismatch")
        cols = [self.matvec(other.column(j)) for j in range(other.ncols)]
        return Matrix.from_columns(cols, nrows=self.nrows)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({[list(map(repr, r)) for r in self.rows]})"


def rref(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form with leftmost-pivot selection.

    Returns (R, pivot_columns).
    """
    rows = [list(r) for r in M.rows]
    nr, nc = len(rows), M.ncols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        pr = next((i for i in range(r, nr) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(nr):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return Matrix(rows), tuple(pivots)


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def det(M: Matrix) -> Scalar:
    if M.nrows != M.ncols:
        raise DimensionMismatchError("determinant of non-square matrix")
    rows = [list(r) for r in M.rows]
    n = M.nrows
    acc = S1
    for c in range(n):
        pr = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
        if pr is None:
            return S0
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            acc = -acc
        acc = acc * rows[c][c]
        inv = rows[c][c].inv()
        for i in range(c + 1, n):
            if not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return acc


def kernel_basis(M: Matrix) -> list[Vec]:
    """Basis of {x : Mx = 0}, one vector per free column, in increasing order."""
    R, pivots = rref(M)
    nc = M.ncols
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        x = [S0] * nc
        x[f] = S1
        for r, p in enumerate(pivots):
            x[p] = -R.rows[r][f]
        basis.append(tuple(x))
    return basis


def solve(M: Matrix, rhs: Sequence[Scalar]) -> Optional[tuple[Vec, list[Vec]]]:
    """One solution of Mx = rhs plus a kernel basis, or None if infeasible."""
    if len(rhs) != M.nrows:
        raise DimensionMismatchError("rhs length mismatch")
    aug = Matrix([list(r) + [b] for r, b in zip(M.rows, vec(rhs))])
    R, pivots = rref(aug)
    nc = M.ncols
    if nc in pivots:  # pivot in the augmented column: inconsistent
        return None
    x = [S0] * nc
    for r, p in enumerate(pivots):
        x[p] = R.rows[r][nc]
    return tuple(x), kernel_basis(M)


def solve_unique(M: Matrix, rhs: Sequence[Scalar]) -> Optional[Vec]:
    res = solve(M, rhs)
    if res is None or res[1]:
        return None
    return res[0]


def split_radical(M: Matrix) -> tuple[Matrix, Matrix, Optional[int]]:
    """Write M = A + B*sqrt(m) with rational A, B."""
    m = None
    for r in M.rows:
        for x in r:
            m = common_field(m, x.m)
    A = Matrix([[Scalar(x.a) for x in r] for r in M.rows])
    B = Matrix([[Scalar(x.b) for x in r] for r in M.rows])
    return A, B, m


def integer_kernel_rank(M: Matrix) -> int:
    """Rank of the lattice {x in Z^ncols : Mx = 0}.

    Over Q(sqrt(m)) the condition splits into two rational systems, so the
    integer kernel is the rational kernel of the stacked matrix [A; B].
    """
    A, B, m = split_radical(M)
    if m is None:
        stacked = A
    else:
        stacked = Matrix(list(A.rows) + list(B.rows))
    return M.ncols - rank(stacked)


@dataclass(frozen=True)
class Calibration:
    """The epimorphism h as a d x n column matrix plus virtual indices (1-based)."""

    d: int
    n: int
    columns: tuple[Vec, ...]
    virtual: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        cols = tuple(vec(c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "virtual", frozenset(self.virtual))
        if len(cols) != self.n or any(len(c) != self.d for c in cols):
            raise InvalidCalibrationError("column shape does not match (d, n)")
        if any(is_zero_vec(c) for c in cols):
            raise InvalidCalibrationError("zero generator column")
        if rank(self.matrix()) != self.d:
            raise InvalidCalibrationError("h is not an epimorphism (rank < d)")
        if not self.virtual <= set(range(1, self.n + 1)):
            raise InvalidCalibrationError("virtual indices out of range")

    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.columns, nrows=self.d)

    def column(self, i: int) -> Vec:
        """1-based generator column h(e_i)."""
        return self.columns[i - 1]

    @property
    def field_m(self) -> Optional[int]:
        m = None
        for c in self.columns:
            for x in c:
                m = common_field(m, x.m)
        return m

    def is_geometric(self) -> bool:
        """No two generator columns are collinear."""
        dirs = set()
        for c in self.columns:
            key = normalize_direction(c)
            key2 = vscale(-1, key)
            if key in dirs or key2 in dirs:
                return False
            dirs.add(key)
        return True

    def is_standard(self) -> bool:
        if self.virtual and self.virtual != frozenset(range(self.n - len(self.virtual) + 1, self.n + 1)):
            return False
        eye = Matrix.identity(self.d)
        return all(self.column(i + 1) == eye.column(i) for i in range(self.d))

    def with_columns(self, columns) -> "Calibration":
        return Calibration(self.d, self.n, tuple(vec(c) for c in columns), self.virtual)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "m": self.field_m,
            "columns": [[x.to_json() for x in c] for c in self.columns],
            "virtual": sorted(self.virtual),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Calibration":
        cols = [[Scalar.from_json(x) for x in c] for c in data["columns"]]
        return cls(int(data["d"]), int(data["n"]), tuple(map(tuple, cols)),
                   frozenset(data.get("virtual", [])))


def gale_transform(c: Calibration) -> Matrix:
    """An n x (n-d) kernel basis k of h, so that h k = 0 and rank k = n - d.

    Deterministic: reduced echelon form with leftmost pivots, free
    variables in increasing order.
    """
    basis = kernel_basis(c.matrix())
    return Matrix.from_columns(basis, nrows=c.n)


def gale_rows(c: Calibration) -> list[Vec]:
    """The vectors k^T(e_1), ..., k^T(e_n) in R^(n-d)."""
    k = gale_transform(c)
    return list(k.rows)


def preimage_matrix(c: Calibration) -> Matrix:
    """The n x (n-d) map chi -> b = k (k^T k)^{-1} chi (minimum-norm preimage)."""
    k = gale_transform(c)
    gram = k.transpose() * k
    m = gram.nrows
    inv_cols = []
    for j in range(m):
        e = [S1 if i == j else S0 for i in range(m)]
        col = solve_unique(gram, e)
        if col is None:
            raise DimensionMismatchError("Gale transform is rank-deficient")
        inv_cols.append(col)
    return k * Matrix.from_columns(inv_cols, nrows=m)


def preimage_of_chi(c: Calibration, chi: Sequence[Scalar]) -> Vec:
    """Minimum-norm b with k^T b = chi, namely b = k (k^T k)^{-1} chi."""
    b = preimage_matrix(c).matvec(vec(chi))
    if len(chi) != c.n - c.d:
        raise DimensionMismatchError("chi has wrong length for this calibration")
    return b


def chi_of_b(c: Calibration, b: Sequence[Scalar]) -> Vec:
    return gale_transform(c).transpose().matvec(vec(b))
