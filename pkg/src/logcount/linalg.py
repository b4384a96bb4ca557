"""Exact integer/rational matrix helpers used as building blocks and oracles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import InvariantError

Row = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense matrix of Python ints. Square for determinant-style operations."""

    rows: Tuple[Row, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise InvariantError("ragged matrix")

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, m: int, n: Optional[int] = None) -> "IntMatrix":
        n = m if n is None else n
        return cls(tuple((0,) * n for _ in range(m)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def n(self) -> int:
        self.require_square()
        return self.nrows

    def require_square(self) -> None:
        if self.nrows != self.ncols:
            raise InvariantError(f"expected a square matrix, got {self.nrows}x{self.ncols}")

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        return self.rows[ij[0]][ij[1]]

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows))) if self.rows else self

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(matmul(self.rows, other.rows))

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    def minor(self, i: int, j: int) -> "IntMatrix":
        """Delete row i and column j (0-based)."""
        return IntMatrix(
            tuple(r[:j] + r[j + 1 :] for k, r in enumerate(self.rows) if k != i)
        )

    def block(self, r0: int, c0: int, h: int, w: int) -> "IntMatrix":
        return IntMatrix(tuple(r[c0 : c0 + w] for r in self.rows[r0 : r0 + h]))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], modulus: Optional[int] = None) -> Tuple[Tuple, ...]:
    if a and b and len(a[0]) != len(b):
        raise InvariantError("dimension mismatch in product")
    bt = list(zip(*b)) if b else []
    out = []
    for r in a:
        row = []
        for c in bt:
            s = sum(x * y for x, y in zip(r, c))
            row.append(s % modulus if modulus else s)
        out.append(tuple(row))
    return tuple(out)


def matpow(a: IntMatrix, m: int, modulus: Optional[int] = None) -> IntMatrix:
    """a**m by repeated squaring (m >= 0)."""
    if m < 0:
        raise InvariantError("negative exponent")
    result = IntMatrix.identity(a.n).rows
    base = a.rows
    while m:
        if m & 1:
            result = matmul(result, base, modulus)
        base = matmul(base, base, modulus)
        m >>= 1
    return IntMatrix(result)


def det_bareiss(a: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = a.n
    if n == 0:
        return 1
    m = [list(r) for r in a.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_mod(a: IntMatrix, p: int) -> int:
    """Determinant modulo a prime p by Gaussian elimination over Z_p."""
    n = a.n
    m = [[x % p for x in r] for r in a.rows]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det = det * m[k][k] % p
        inv = pow(m[k][k], p - 2, p)
        for i in range(k + 1, n):
            f = m[i][k] * inv % p
            if f:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[k])]
    return det % p


def rref(rows: Sequence[Sequence], modulus: Optional[int] = None) -> Tuple[List[List], List[int]]:
    """Reduced row echelon form over Q (Fractions) or Z_p; returns (matrix, pivot columns)."""
    if modulus is None:
        m = [[Fraction(x) for x in r] for r in rows]
    else:
        m = [[x % modulus for x in r] for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        if modulus is None:
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
        else:
            inv = pow(m[r][c], modulus - 2, modulus)
            m[r] = [x * inv % modulus for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                if modulus is None:
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
                else:
                    m[i] = [(x - f * y) % modulus for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m, pivots


def rank_elimination(a: IntMatrix, modulus: Optional[int] = None) -> int:
    """Rank by Gaussian elimination over Q, or over Z_p when ``modulus`` is given."""
    if a.nrows == 0 or a.ncols == 0:
        return 0
    return len(rref(a.rows, modulus)[1])
