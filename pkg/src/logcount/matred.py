"""Matrix problems that reduce to the determinant, and exact linear systems.

Public indices follow the usual 1-based matrix convention (``i, j`` in
``1..n``) for entry-style problems; column sets are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import InvariantError
from .isolation import is_prime
from .linalg import IntMatrix, det_bareiss, det_mod, matmul, matpow, rank_elimination, rref

RationalVec = Tuple[Fraction, ...]


def _check_index(n: int, *idx: int) -> None:
    for x in idx:
        if not 1 <= x <= n:
            raise InvariantError(f"index {x} outside [1, {n}]")


def powerelement(a: IntMatrix, i: int, j: int, m: int, modulus: Optional[int] = None) -> int:
    """(A^m)_{i,j}, optionally reduced modulo ``modulus``."""
    n = a.n
    _check_index(n, i, j)
    if m < 1:
        raise InvariantError("exponent must be at least 1")
    if modulus is not None and modulus < 1:
        raise InvariantError("modulus must be positive")
    x = matpow(a, m, modulus)[i - 1, j - 1]
    return x % modulus if modulus else x


def powerelement_to_det(a: IntMatrix, m: int, i: int = 1, j: Optional[int] = None) -> IntMatrix:
    """A matrix B with det(B) = (A^m)_{i,j} (default entry (1, n)).

    A is read as a bipartite graph; m copies are chained into columns
    0..m, every edge (k, l) with a_kl != 0 is split by a fresh midpoint into
    (k -> mid, weight 1) and (mid -> l, weight a_kl). With s = vertex i of
    column 0 and t = vertex j of column m, the graph gets an edge t -> s and
    unit self-loops on every vertex but t. Every cycle cover is then one
    odd cycle through t -> s plus self-loops, so det(B) is the s-t path sum.
    Since s and t sit in different columns, no row/column permutation is
    needed to move the target entry.
    """
    n = a.n
    if n < 1:
        raise InvariantError("matrix must be non-empty")
    j = n if j is None else j
    _check_index(n, i, j)
    if m < 1:
        raise InvariantError("exponent must be at least 1")
    nz = [(k, l, a[k, l]) for k in range(n) for l in range(n) if a[k, l] != 0]
    size = (m + 1) * n + m * len(nz)
    b = [[0] * size for _ in range(size)]

    def node(col: int, k: int) -> int:
        return col * n + k

    mid = (m + 1) * n
    for col in range(m):
        for k, l, w in nz:
            b[node(col, k)][mid] = 1
            b[mid][node(col + 1, l)] = w
            mid += 1
    s = node(0, i - 1)
    t = node(m, j - 1)
    b[t][s] = 1
    for v in range(size):
        if v != t:
            b[v][v] = 1
    return IntMatrix.of(b)


@dataclass(frozen=True)
class ItMatProdInstance:
    b: IntMatrix
    power: int
    rows: range
    cols: range

    def product_block(self, bpow: IntMatrix) -> IntMatrix:
        return bpow.block(self.rows.start, self.cols.start, len(self.rows), len(self.cols))


def itmatprod_to_powerelement(mats: Sequence[IntMatrix]) -> ItMatProdInstance:
    """Block matrix B with A_1..A_q on the block superdiagonal.

    The upper-right n x n block of B^q is A_1 A_2 ... A_q.
    """
    if not mats:
        raise InvariantError("need at least one matrix")
    n = mats[0].n
    for x in mats:
        if x.nrows != n or x.ncols != n:
            raise InvariantError("all matrices must be square of the same size")
    q = len(mats)
    size = (q + 1) * n
    b = [[0] * size for _ in range(size)]
    for r, x in enumerate(mats):
        for u in range(n):
            for v in range(n):
                b[r * n + u][(r + 1) * n + v] = x[u, v]
    return ItMatProdInstance(IntMatrix.of(b), q, range(0, n), range(q * n, (q + 1) * n))


def matinv_entry(a: IntMatrix, i: int, j: int) -> Tuple[int, int]:
    """((-1)^(i+j) det(A(j|i)), det(A)) where A(j|i) deletes row j and column i.

    The pair equals (A^{-1})_{i,j} as a fraction when det(A) != 0; a zero
    denominator reports a singular matrix.
    """
    n = a.n
    _check_index(n, i, j)
    den = det_bareiss(a)
    num = (-1) ** (i + j) * (det_bareiss(a.minor(j - 1, i - 1)) if n > 1 else 1)
    return num, den


def nilpotent_inverse_instance(a: IntMatrix) -> IntMatrix:
    """n^2 x n^2 matrix N with n-1 copies of A on the block superdiagonal.

    N^n = 0, and block (1, k) of (I - N)^{-1} = I + N + ... + N^{n-1} is A^{k-1}.
    """
    n = a.n
    size = n * n
    b = [[0] * size for _ in range(size)]
    for r in range(n - 1):
        for u in range(n):
            for v in range(n):
                b[r * n + u][(r + 1) * n + v] = a[u, v]
    return IntMatrix.of(b)


def neumann_inverse(nmat: IntMatrix, terms: int) -> IntMatrix:
    """I + N + ... + N^(terms-1)."""
    size = nmat.n
    acc = IntMatrix.identity(size).rows
    p = acc
    for _ in range(terms - 1):
        p = matmul(p, nmat.rows)
        acc = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(acc, p))
    return IntMatrix(acc)


@dataclass(frozen=True)
class LinsysResult:
    feasible: bool
    x: Optional[RationalVec] = None
    y: Optional[RationalVec] = None


def _matvec(rows: Sequence[Sequence], v: Sequence) -> List:
    return [sum((Fraction(a) * b for a, b in zip(r, v)), Fraction(0)) for r in rows]


def linsys_feasible(a: IntMatrix, b: Sequence[int]) -> LinsysResult:
    """Decide Ax = b over Q with a checked certificate either way.

    Feasible systems return a solution x. Infeasible ones return y with
    A^T y = 0 and b^T y = 1, built from the component v of b orthogonal to
    the column space: y = v / (v . v).
    """
    m, n = a.nrows, a.ncols
    if len(b) != m:
        raise InvariantError(f"right-hand side has length {len(b)}, expected {m}")
    aug = [list(r) + [b[k]] for k, r in enumerate(a.rows)]
    red, piv = rref(aug)
    if n not in piv:
        x = [Fraction(0)] * n
        for r, c in enumerate(piv):
            x[c] = red[r][n]
        if _matvec(a.rows, x) != [Fraction(v) for v in b]:
            raise AssertionError("internal error: solution failed verification")
        return LinsysResult(True, x=tuple(x))
    # project b onto the column space via the normal equations A^T A z = A^T b
    at = a.transpose().rows if n else ()
    ata = [_matvec(at, [row[c] for row in a.rows]) for c in range(n)] if n else []
    atb = _matvec(at, b) if n else []
    z = [Fraction(0)] * n
    if n:
        red2, piv2 = rref([list(ata[c]) + [atb[c]] for c in range(n)])
        for r, c in enumerate(piv2):
            if c < n:
                z[c] = red2[r][n]
    az = _matvec(a.rows, z) if n else [Fraction(0)] * m
    v = [Fraction(bb) - x for bb, x in zip(b, az)]
    vv = sum(x * x for x in v)
    y = tuple(x / vv for x in v)
    if any(x != 0 for x in _matvec(at, y)) or sum(Fraction(bb) * yy for bb, yy in zip(b, y)) != 1:
        raise AssertionError("internal error: infeasibility certificate failed verification")
    return LinsysResult(False, y=y)


def lex_least_columns(a: IntMatrix, modulus: Optional[int] = None) -> Tuple[int, ...]:
    """Greedy lexicographically least maximal set of independent columns.

    Columns are scanned left to right and kept whenever the rank grows. Works
    over Q, or over Z_p when a prime ``modulus`` is given.
    """
    if modulus is not None and not is_prime(modulus):
        raise InvariantError(f"modulus {modulus} is not prime")
    chosen: List[int] = []
    cols = a.transpose().rows if a.rows else ()
    rank = 0
    for c, col in enumerate(cols):
        trial = IntMatrix(tuple(cols[k] for k in chosen) + (col,))
        r = rank_elimination(trial, modulus)
        if r > rank:
            chosen.append(c)
            rank = r
    return tuple(chosen)


def det_mod_p(a: IntMatrix, p: int) -> int:
    """det(A) mod p for prime p."""
    if not is_prime(p):
        raise InvariantError(f"modulus {p} is not prime")
    return det_mod(a, p)
