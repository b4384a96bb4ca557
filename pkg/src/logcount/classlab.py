"""Counting functions as tables, their closure combinators, modulus
transforms, and the sign-approximating polynomials used for PL."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, prod
from typing import Callable, Dict, FrozenSet, Hashable, Mapping, Sequence, Tuple, Union

from .errors import InvariantError
from .isolation import is_prime


@dataclass(frozen=True)
class CountFn:
    """A finite table x -> integer with a declared bound |f(x)| <= 2**bits."""

    table: Mapping[Hashable, int]
    bits: int
    nonneg: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", dict(self.table))
        lim = 1 << self.bits
        for x, v in self.table.items():
            if abs(v) > lim:
                raise InvariantError(f"|f({x!r})| = {abs(v)} exceeds 2^{self.bits}")
            if self.nonneg and v < 0:
                raise InvariantError(f"f({x!r}) = {v} is negative for a nonnegative function")

    @classmethod
    def tabulate(cls, fn: Callable[[Hashable], int], domain: Sequence[Hashable], nonneg: bool = False) -> "CountFn":
        table = {x: fn(x) for x in domain}
        bits = max((abs(v).bit_length() for v in table.values()), default=0)
        return cls(table, bits, nonneg)

    def __call__(self, x: Hashable) -> int:
        return self.table[x]

    @property
    def domain(self) -> FrozenSet[Hashable]:
        return frozenset(self.table)


Spec = Union[str, Tuple[str, int]]


def _same_domain(fs: Sequence[CountFn]) -> FrozenSet[Hashable]:
    dom = fs[0].domain
    if any(f.domain != dom for f in fs[1:]):
        raise InvariantError("operands must share a domain")
    return dom


def combine(spec: Spec, fs: Sequence[CountFn]) -> CountFn:
    """Pointwise closure operations on counting functions.

    ``spec`` is one of ``"add"``, ``"mul"``, ``"negate"``, ``"join"`` or a pair
    ``("add_const", c)``, ``("poly_sum", p)``, ``("poly_prod", p)``,
    ``("binom", k)``. For poly_sum/poly_prod the single operand is indexed by
    pairs (x, i) with i in 1..p; the result is indexed by x. join takes two
    operands f, g and returns h((x, 0)) = f(x), h((x, 1)) = g(x).
    """
    name, arg = (spec, None) if isinstance(spec, str) else spec
    fs = list(fs)
    if not fs:
        raise InvariantError("combine needs at least one operand")

    def arity(k: int) -> None:
        if len(fs) != k:
            raise InvariantError(f"{name} takes {k} operand(s), got {len(fs)}")

    nonneg_all = all(f.nonneg for f in fs)
    if name == "add":
        dom = _same_domain(fs)
        bits = max(f.bits for f in fs) + max(len(fs) - 1, 0).bit_length()
        return CountFn({x: sum(f(x) for f in fs) for x in dom}, bits, nonneg_all)
    if name == "mul":
        dom = _same_domain(fs)
        return CountFn({x: prod(f(x) for f in fs) for x in dom}, sum(f.bits for f in fs), nonneg_all)
    if name == "negate":
        arity(1)
        f = fs[0]
        return CountFn({x: -v for x, v in f.table.items()}, f.bits, False)
    if name == "add_const":
        arity(1)
        f = fs[0]
        c = int(arg)
        bits = max(f.bits, abs(c).bit_length()) + 1
        return CountFn({x: v + c for x, v in f.table.items()}, bits, f.nonneg and c >= 0)
    if name in ("poly_sum", "poly_prod"):
        arity(1)
        f = fs[0]
        p = int(arg)
        if p < 1:
            raise InvariantError("p must be positive")
        xs = {k[0] for k in f.table}
        out: Dict[Hashable, int] = {}
        for x in xs:
            try:
                vals = [f((x, i)) for i in range(1, p + 1)]
            except KeyError as exc:
                raise InvariantError(f"operand lacks entry {exc.args[0]!r}") from None
            out[x] = sum(vals) if name == "poly_sum" else prod(vals)
        bits = f.bits + p.bit_length() if name == "poly_sum" else f.bits * p
        return CountFn(out, bits, f.nonneg)
    if name == "binom":
        arity(1)
        f = fs[0]
        k = int(arg)
        if k < 0:
            raise InvariantError("k must be nonnegative")
        if any(v < 0 for v in f.table.values()):
            raise InvariantError("binom needs a nonnegative operand")
        return CountFn({x: comb(v, k) for x, v in f.table.items()}, f.bits * max(k, 1), True)
    if name == "join":
        arity(2)
        f, g = fs
        out = {(x, 0): v for x, v in f.table.items()}
        out.update({(x, 1): v for x, v in g.table.items()})
        return CountFn(out, max(f.bits, g.bits), nonneg_all)
    raise InvariantError(f"unknown combinator {name!r}")


# ---------------------------------------------------------------------------
# Languages defined by counting functions


def language(f: CountFn, cls: str, k: int = 2) -> FrozenSet[Hashable]:
    """Inputs accepted under a counting-class acceptance rule.

    ``nl``/``pl``: f > 0; ``ceql``: f == 0; ``mod``: f not divisible by k;
    ``ul``: f == 1 (with f required to be 0/1-valued).
    """
    if cls in ("nl", "pl"):
        return frozenset(x for x, v in f.table.items() if v > 0)
    if cls == "ceql":
        return frozenset(x for x, v in f.table.items() if v == 0)
    if cls == "mod":
        if k < 2:
            raise InvariantError("modulus must be at least 2")
        return frozenset(x for x, v in f.table.items() if v % k != 0)
    if cls == "ul":
        if any(v not in (0, 1) for v in f.table.values()):
            raise InvariantError("not an unambiguous (0/1-valued) function")
        return frozenset(x for x, v in f.table.items() if v == 1)
    raise InvariantError(f"unknown class {cls!r}")


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise InvariantError(f"{p} is not prime")


def mod_transform(kind: str, f: CountFn, p: int, i: int = 1, j: int = 0) -> CountFn:
    """``fermat``: g = f^(p-1), so g = 1 (mod p) where f != 0 and 0 elsewhere.
    ``affine``: g = (i - j) f + j, sending residue 1 to i and 0 to j."""
    _require_prime(p)
    if kind == "fermat":
        return CountFn({x: v ** (p - 1) for x, v in f.table.items()}, f.bits * (p - 1), f.nonneg or p % 2 == 1)
    if kind == "affine":
        out = {x: (i - j) * v + j for x, v in f.table.items()}
        bits = f.bits + max(abs(i - j).bit_length(), abs(j).bit_length()) + 1
        return CountFn(out, bits, all(v >= 0 for v in out.values()))
    raise InvariantError(f"unknown transform {kind!r}")


def prime_power_flatten(v: int, p: int, e: int) -> int:
    """A value = 1 (mod p) iff v != 0 (mod p^e) and = 0 (mod p) otherwise.

    f_1 = v; for e >= 2, with a = f_{e-1}^(p-1) and b = C(v, p^(e-1))^(p-1),
    f_e = (a b + (a + p - 1) b + a (b + p - 1))^(p-1). Exact integers
    throughout; e = 1 applies the final Fermat power to v directly.
    """
    _require_prime(p)
    if e < 1:
        raise InvariantError("e must be at least 1")
    if v < 0:
        raise InvariantError("v must be nonnegative")
    f = v
    for level in range(2, e + 1):
        a = f ** (p - 1)
        b = comb(v, p ** (level - 1)) ** (p - 1)
        f = (a * b + (a + p - 1) * b + a * (b + p - 1)) ** (p - 1)
    return f ** (p - 1) if e == 1 else f


def base_p_digit(v: int, p: int, e: int) -> int:
    """Coefficient of p^e in the base-p expansion of v."""
    return (v // p**e) % p


def mod_jk_compose(fj: CountFn, fk: CountFn, j: int, k: int) -> CountFn:
    """f = k f_j + j f_k; for coprime j, k, f != 0 (mod jk) iff
    f_j != 0 (mod j) or f_k != 0 (mod k)."""
    if gcd(j, k) != 1:
        raise InvariantError("j and k must be coprime")
    return combine("add", [combine("mul", [_const(fj, k), fj]), combine("mul", [_const(fk, j), fk])])


def _const(like: CountFn, c: int) -> CountFn:
    return CountFn({x: c for x in like.table}, abs(c).bit_length(), c >= 0)


# ---------------------------------------------------------------------------
# Sign-approximating polynomials


def P(n: int, x: int) -> int:
    """P_n(x) = (x - 1) * prod_{i=1..n} (x - 2^i)^2."""
    return (x - 1) * prod((x - 2**i) ** 2 for i in range(1, n + 1))


@dataclass(frozen=True)
class SignValues:
    P: int
    Q: int
    A: int
    B: int
    S: Fraction


def sign_polys(family: str, params: Tuple[int, ...], z: int) -> SignValues:
    """Exact values of the sign-approximation polynomials at integer z.

    ``family="gapl"``, params (n,): n even, A = P(-z)^(n/2+1) - P(z)^(n/2+1),
    B = P(-z)^(n/2+1) + P(z)^(n/2+1), S = A / B; Q is reported as -P(-z).

    ``family="approx"``, params (m, r): Q = -P(z) - P(-z), A = Q^(2r),
    B = Q^(2r) + (2 P(z))^(2r), S = A / B.
    """
    if family == "gapl":
        (n,) = params
        if n < 1 or n % 2:
            raise InvariantError("the gapl family needs an even positive n")
        e = n // 2 + 1
        pz, pm = P(n, z), P(n, -z)
        a = pm**e - pz**e
        b = pm**e + pz**e
        if b == 0:
            raise InvariantError(f"B vanishes at z={z}")
        return SignValues(pz, -pm, a, b, Fraction(a, b))
    if family == "approx":
        m, r = params
        if m < 1 or r < 1:
            raise InvariantError("m and r must be positive")
        pz = P(m, z)
        q = -pz - P(m, -z)
        a = q ** (2 * r)
        b = a + (2 * pz) ** (2 * r)
        if b == 0:
            raise InvariantError(f"B vanishes at z={z}")
        return SignValues(pz, q, a, b, Fraction(a, b))
    raise InvariantError(f"unknown family {family!r}")


def pl_union_H(n: int, d: int, e: int) -> int:
    """H' = (A_D B_E + A_E B_D + B_D B_E)(B_D B_E) for the gapl family with
    bound 2^n; positive iff d > 0 or e > 0 whenever 1 <= |d|, |e| <= 2^n."""
    for v in (d, e):
        if not 1 <= abs(v) <= 2**n:
            raise InvariantError(f"|{v}| outside [1, 2^{n}]")
    D = sign_polys("gapl", (n,), d)
    E = sign_polys("gapl", (n,), e)
    return (D.A * E.B + E.A * D.B + D.B * E.B) * (D.B * E.B)
