"""Polynomials over F_q standing in for elements of O = F_q[[t]].

Every canonical lattice representative in a finite ball has polynomial
entries, so only units ever need a power-series inverse, and that is
computed to an explicit precision.
"""

from __future__ import annotations

from .field import FieldElem, FieldParams

__all__ = ["LocalPoly", "NonUnitError", "unit_inverse"]

NEG_INF = float("-inf")


class NonUnitError(ArithmeticError):
    pass


def _strip(coeffs) -> tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class LocalPoly:
    """Polynomial in t with coefficients in F_q (coefficient of t^i at index i)."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldParams, coeffs=()):
        self.field = field
        self.coeffs = _strip(coeffs)
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def monomial(cls, field, e: int, c: int = 1):
        return cls(field, (0,) * e + (c,))

    @classmethod
    def from_elems(cls, elems):
        elems = list(elems)
        return cls(elems[0].field, [e.code for e in elems])

    # inspection
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def valuation(self):
        """t-adic valuation; +inf for the zero polynomial."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return float("inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def elems(self) -> list[FieldElem]:
        return [FieldElem(self.field, c) for c in self.coeffs]

    # arithmetic
    def __add__(self, other: "LocalPoly") -> "LocalPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = self.field._add
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add[out[i]][c]
        return LocalPoly(self.field, out)

    def __neg__(self) -> "LocalPoly":
        neg = self.field._neg
        return LocalPoly(self.field, [neg[c] for c in self.coeffs])

    def __sub__(self, other: "LocalPoly") -> "LocalPoly":
        return self + (-other)

    def __mul__(self, other: "LocalPoly") -> "LocalPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return LocalPoly(self.field, ())
        add, mul = self.field._add, self.field._mul
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add[out[i + j]][row[y]]
        return LocalPoly(self.field, out)

    def scale(self, c: int) -> "LocalPoly":
        row = self.field._mul[c]
        return LocalPoly(self.field, [row[x] for x in self.coeffs])

    def shift(self, e: int) -> "LocalPoly":
        """Multiply by t^e (e >= 0) or divide exactly by t^-e (e < 0)."""
        if e >= 0 or not self.coeffs:
            return LocalPoly(self.field, (0,) * e + self.coeffs) if self.coeffs else self
        if any(self.coeffs[: -e]):
            raise ArithmeticError("polynomial is not divisible by the requested power of t")
        return LocalPoly(self.field, self.coeffs[-e:])

    def truncate(self, n: int) -> "LocalPoly":
        """Remainder modulo t^n."""
        return LocalPoly(self.field, self.coeffs[:n])

    def quo_t(self, e: int) -> "LocalPoly":
        """Quotient of division by t^e (drops the remainder)."""
        return LocalPoly(self.field, self.coeffs[e:])

    def __eq__(self, other):
        if not isinstance(other, LocalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and self.field == other.field

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"LocalPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = repr(FieldElem(self.field, c))
            if self.field.n > 1 and " + " in cs:
                cs = f"({cs})"
            if i == 0:
                terms.append(cs)
            else:
                mono = "t" if i == 1 else f"t^{i}"
                terms.append(mono if c == 1 else f"{cs}*{mono}")
        return " + ".join(terms)


def unit_inverse(u: LocalPoly, precision: int) -> LocalPoly:
    """Inverse of the unit ``u`` in O modulo t^precision.

    >>> from rcx.algebra.field import get_field
    >>> F = get_field(2)
    >>> str(unit_inverse(LocalPoly(F, (1, 1)), 3))
    '1 + t + t^2'
    """
    F = u.field
    if u.constant() == 0:
        raise NonUnitError("non-unit in O")
    if precision <= 0:
        return LocalPoly(F, ())
    add, mul, neg = F._add, F._mul, F._neg
    u0inv = F.inv(u.coeffs[0])
    a = u.coeffs
    out = [0] * precision
    out[0] = u0inv
    # out_n = -u0^{-1} * sum_{i=1..n} a_i out_{n-i}
    for n in range(1, precision):
        s = 0
        for i in range(1, min(n, len(a) - 1) + 1):
            if a[i] and out[n - i]:
                s = add[s][mul[a[i]][out[n - i]]]
        out[n] = mul[neg[s]][u0inv]
    return LocalPoly(F, out)
