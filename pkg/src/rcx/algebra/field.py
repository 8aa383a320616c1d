"""Finite fields F_q, q = p^n, as residue fields of F_q[[t]].

Elements are encoded as integers ``0 <= code < q`` whose base-p digits are
the coefficients (low degree first) in the polynomial basis of the modulus.
All arithmetic goes through precomputed tables, which is plenty for the
small q this package is meant for.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product

__all__ = [
    "DEFAULT_MODULI",
    "FieldParams",
    "FieldElem",
    "FieldError",
    "field_arith",
    "get_field",
    "is_prime",
    "factor_prime_power",
]

# low degree first, monic
DEFAULT_MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (1, 0, 1),  # x^2 + 1
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, n) with q = p**n, or raise FieldError."""
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    p = next(i for i in range(2, q + 1) if q % i == 0)
    n, r = 0, q
    while r % p == 0:
        r //= p
        n += 1
    if r != 1:
        raise FieldError(f"q={q} is not a prime power")
    return p, n


def _poly_mod_p(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m over F_p."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return a[:dm] + [0] * max(0, dm - len(a))


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    # exhaustive trial division by monic polynomials of degree <= n/2
    n = len(m) - 1
    if n < 1 or m[-1] % p != 1:
        return False
    for deg in range(1, n // 2 + 1):
        for low in product(range(p), repeat=deg):
            divisor = tuple(low) + (1,)
            if not any(_poly_mod_p(list(m), divisor, p)):
                return False
    return True


def _first_irreducible(p: int, n: int) -> tuple[int, ...]:
    for low in product(range(p), repeat=n):
        m = tuple(reversed(low)) + (1,)
        if m[0] and _is_irreducible(m, p):
            return m
    raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")  # unreachable


@dataclass(frozen=True, eq=False)
class FieldParams:
    """Residue field F_q with q = p**n.

    ``modulus`` is the monic irreducible defining polynomial (low degree
    first); it is ``None`` for prime fields.
    """

    p: int
    n: int = 1
    modulus: tuple[int, ...] | None = None
    _add: tuple[tuple[int, ...], ...] = dc_field(init=False, repr=False)
    _mul: tuple[tuple[int, ...], ...] = dc_field(init=False, repr=False)
    _neg: tuple[int, ...] = dc_field(init=False, repr=False)
    _inv: tuple[int, ...] = dc_field(init=False, repr=False)

    def __post_init__(self):
        p, n = self.p, self.n
        if not is_prime(p):
            raise FieldError(f"characteristic p={p} is not prime")
        if n < 1:
            raise FieldError("extension degree must be >= 1")
        if n == 1:
            if self.modulus is not None and len(self.modulus) != 2:
                raise FieldError("prime field takes no modulus of degree != 1")
            object.__setattr__(self, "modulus", None)
        else:
            m = self.modulus
            if m is None:
                m = DEFAULT_MODULI.get(p**n) or _first_irreducible(p, n)
            m = tuple(int(c) % p for c in m)
            if len(m) != n + 1:
                raise FieldError(f"modulus must have degree {n}, got {len(m) - 1}")
            if not _is_irreducible(m, p):
                raise FieldError(f"modulus {list(m)} is not irreducible over F_{p}")
            object.__setattr__(self, "modulus", m)
        self._build_tables()

    @property
    def q(self) -> int:
        return self.p**self.n

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        vecs = [self.decode(c) for c in range(q)]
        add = tuple(
            tuple(self.encode([(x + y) % p for x, y in zip(vecs[a], vecs[b])]) for b in range(q))
            for a in range(q)
        )
        neg = tuple(self.encode([(-x) % p for x in vecs[a]]) for a in range(q))
        rows = []
        for a in range(q):
            row = []
            for b in range(q):
                prod_ = [0] * (2 * n - 1)
                for i, x in enumerate(vecs[a]):
                    if x:
                        for j, y in enumerate(vecs[b]):
                            prod_[i + j] += x * y
                if n > 1:
                    prod_ = _poly_mod_p(prod_, self.modulus, p)
                row.append(self.encode([c % p for c in prod_[:n]]))
            rows.append(tuple(row))
        mul = tuple(rows)
        inv = [0] * q
        for a in range(1, q):
            inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
        object.__setattr__(self, "_add", add)
        object.__setattr__(self, "_mul", mul)
        object.__setattr__(self, "_neg", neg)
        object.__setattr__(self, "_inv", tuple(inv))

    def encode(self, coeffs) -> int:
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + (int(c) % self.p)
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    # table-driven primitives on codes
    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in F_q")
        return self._inv[a]

    def elem(self, coeffs) -> "FieldElem":
        if isinstance(coeffs, int):
            return FieldElem(self, coeffs % self.q if self.n == 1 else coeffs)
        return FieldElem(self, self.encode(coeffs))

    def elements(self) -> list["FieldElem"]:
        return [FieldElem(self, c) for c in range(self.q)]

    def __eq__(self, other):
        return isinstance(other, FieldParams) and (self.p, self.n, self.modulus) == (
            other.p,
            other.n,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        if self.modulus is None:
            return f"FieldParams(q={self.q})"
        return f"FieldParams(q={self.q}, modulus={list(self.modulus)})"


@lru_cache(maxsize=None)
def get_field(q: int, modulus: tuple[int, ...] | None = None) -> FieldParams:
    """Cached field constructor keyed by q (and optionally the modulus)."""
    p, n = factor_prime_power(q)
    return FieldParams(p, n, modulus)


@dataclass(frozen=True)
class FieldElem:
    field: FieldParams
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.field.q:
            raise FieldError(f"element code {self.code} out of range for q={self.field.q}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.decode(self.code)

    def _check(self, other):
        if not isinstance(other, FieldElem) or other.field != self.field:
            raise FieldError("operands live in different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.add(self.code, other.code))

    def __sub__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.sub(self.code, other.code))

    def __mul__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.mul(self.code, other.code))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.code))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.code))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        if self.field.n == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"


def field_arith(a: FieldElem, b: FieldElem | None, op: str) -> FieldElem:
    """Apply ``op`` in {add, mul, inv, neg}; unary ops ignore ``b``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown field operation {op!r}")
