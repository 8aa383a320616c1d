"""Square matrices over O = F_q[[t]] and their canonical forms.

Two normal forms are provided:

* ``hermite_canonical`` picks the unique upper-triangular representative of
  the coset ``M * GL_d(O)`` (column operations), with diagonal ``t^e_i`` and
  the off-diagonal entries of row ``i`` reduced modulo ``t^e_i``.
* ``elementary_divisors`` returns the exponents of the Smith form
  ``U * diag(t^l_1, ..., t^l_d) * V``.

Elimination never divides: a row entry ``t^w u'`` is cleared against a
pivot ``t^v u`` (``v <= w``) by ``col_j <- u*col_j - t^(w-v) u' * col_p``,
which is unimodular over O because ``u`` is a unit. Only the final
normalisation of the diagonal needs ``unit_inverse``.
"""

from __future__ import annotations

from .field import FieldParams
from .poly import LocalPoly, unit_inverse

__all__ = [
    "OMatrix",
    "SingularMatrixError",
    "hermite_canonical",
    "elementary_divisors",
    "is_hermite_canonical",
    "det_valuation",
]


class SingularMatrixError(ArithmeticError):
    pass


class OMatrix:
    """Immutable d x d matrix of LocalPoly entries (row-major)."""

    __slots__ = ("field", "d", "rows", "_key")

    def __init__(self, field: FieldParams, rows):
        self.field = field
        self.rows = tuple(tuple(e for e in row) for row in rows)
        self.d = len(self.rows)
        if any(len(r) != self.d for r in self.rows):
            raise ValueError("OMatrix must be square")
        self._key = None

    @classmethod
    def from_lists(cls, field, rows):
        """Build from nested lists whose entries are LocalPoly, an int code
        (constant polynomial) or a list of coefficient codes."""

        def conv(x):
            if isinstance(x, LocalPoly):
                return x
            if isinstance(x, int):
                return LocalPoly(field, (x,))
            return LocalPoly(field, x)

        return cls(field, [[conv(x) for x in row] for row in rows])

    @classmethod
    def identity(cls, field, d):
        one, zero = LocalPoly.one(field), LocalPoly.zero(field)
        return cls(field, [[one if i == j else zero for j in range(d)] for i in range(d)])

    @classmethod
    def diag_t(cls, field, exps):
        d = len(exps)
        zero = LocalPoly.zero(field)
        return cls(
            field,
            [[LocalPoly.monomial(field, exps[i]) if i == j else zero for j in range(d)] for i in range(d)],
        )

    @classmethod
    def from_columns(cls, field, cols):
        d = len(cols)
        return cls(field, [[cols[j][i] for j in range(d)] for i in range(d)])

    def columns(self) -> list[list[LocalPoly]]:
        return [[self.rows[i][j] for i in range(self.d)] for j in range(self.d)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "OMatrix") -> "OMatrix":
        d = self.d
        zero = LocalPoly.zero(self.field)
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = zero
                for k in range(d):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a.coeffs and b.coeffs:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return OMatrix(self.field, out)

    def scale_t(self, e: int) -> "OMatrix":
        """Multiply (e >= 0) or exactly divide (e < 0) every entry by t^|e|."""
        return OMatrix(self.field, [[x.shift(e) for x in row] for row in self.rows])

    def min_valuation(self):
        return min(x.valuation() for row in self.rows for x in row)

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j].is_zero() for i in range(self.d) for j in range(i))

    def diag_exponents(self) -> tuple[int, ...]:
        """Exponents e_i of a diagonal made of monic monomials t^e_i."""
        out = []
        for i in range(self.d):
            c = self.rows[i][i].coeffs
            if not c or c[-1] != 1 or any(c[:-1]):
                raise ValueError("diagonal entry is not a monic monomial")
            out.append(len(c) - 1)
        return tuple(out)

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(x.coeffs for row in self.rows for x in row)
        return self._key

    def __eq__(self, other):
        return isinstance(other, OMatrix) and self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.rows)
        return f"OMatrix[{body}]"


def _unit_part(x: LocalPoly) -> tuple[int, LocalPoly]:
    v = x.valuation()
    return v, x.quo_t(v)


def _triangularize(M: OMatrix):
    """Column-reduce M to upper-triangular form T = M V, V in GL_d(O).

    Returns the list of columns of T. Raises SingularMatrixError.
    """
    d = M.d
    cols = M.columns()
    for i in range(d - 1, -1, -1):
        best, best_v = None, None
        for j in range(i + 1):
            v = cols[j][i].valuation()
            if v != float("inf") and (best_v is None or v < best_v):
                best, best_v = j, v
        if best is None:
            raise SingularMatrixError("matrix is singular over F_q((t))")
        cols[best], cols[i] = cols[i], cols[best]
        _, u = _unit_part(cols[i][i])
        piv = cols[i]
        for j in range(i):
            a = cols[j][i]
            if a.is_zero():
                continue
            w, ua = _unit_part(a)
            c = ua.shift(w - best_v)
            cols[j] = [u * x - c * y for x, y in zip(cols[j], piv)]
    return cols


def det_valuation(M: OMatrix) -> int:
    cols = _triangularize(M)
    return sum(cols[i][i].valuation() for i in range(M.d))


def _reduce_upper(cols, exps, precision):
    """Reduce entries above the diagonal of an upper-triangular matrix with
    monic monomial diagonal t^exps, working modulo t^precision."""
    d = len(cols)
    for j in range(d):
        for i in range(j - 1, -1, -1):
            a = cols[j][i]
            if a.degree == float("-inf") or a.degree < exps[i]:
                continue
            c = a.quo_t(exps[i])
            cols[j] = [
                (x - c * y).truncate(precision) if r <= i else x
                for r, (x, y) in enumerate(zip(cols[j], cols[i]))
            ]
    return cols


def hermite_canonical(M: OMatrix) -> OMatrix:
    """Unique upper-triangular generator matrix of the lattice spanned by the
    columns of M.

    Diagonal entries are t^e_i and each off-diagonal entry in row i has
    degree < e_i. Computation is exact: the lattice contains t^E O^d with
    E = v(det M), so working modulo t^(E+1) loses nothing.
    """
    d, F = M.d, M.field
    if M.is_upper_triangular() and all(
        (c := M.rows[i][i].coeffs) and c[-1] == 1 and not any(c[:-1]) for i in range(d)
    ):
        exps = M.diag_exponents()
        cols = M.columns()
    else:
        cols = _triangularize(M)
        exps = []
        N = sum(cols[i][i].valuation() for i in range(d)) + 1
        for i in range(d):
            e, u = _unit_part(cols[i][i])
            uinv = unit_inverse(u, N)
            cols[i] = [(x * uinv).truncate(N) for x in cols[i]]
            cols[i][i] = LocalPoly.monomial(F, e)
            exps.append(e)
    N = sum(exps) + 1
    cols = _reduce_upper(cols, exps, N)
    return OMatrix.from_columns(F, cols)


def is_hermite_canonical(M: OMatrix) -> bool:
    if not M.is_upper_triangular():
        return False
    try:
        exps = M.diag_exponents()
    except ValueError:
        return False
    return all(M.rows[i][j].degree < exps[i] for i in range(M.d) for j in range(i + 1, M.d))


def elementary_divisors(M: OMatrix) -> tuple[int, ...]:
    """Smith exponents (l_1 >= ... >= l_d) of M over the DVR O."""
    d = M.d
    A = [list(r) for r in M.rows]
    out = []
    for s in range(d):
        best, best_v = None, None
        for i in range(s, d):
            for j in range(s, d):
                v = A[i][j].valuation()
                if v != float("inf") and (best_v is None or v < best_v):
                    best, best_v = (i, j), v
        if best is None:
            raise SingularMatrixError("matrix is singular over F_q((t))")
        bi, bj = best
        A[s], A[bi] = A[bi], A[s]
        for row in A:
            row[s], row[bj] = row[bj], row[s]
        _, u = _unit_part(A[s][s])
        # clear column s below the pivot (row ops), then row s (column ops)
        for i in range(s + 1, d):
            a = A[i][s]
            if a.is_zero():
                continue
            w, ua = _unit_part(a)
            c = ua.shift(w - best_v)
            A[i] = [u * x - c * y for x, y in zip(A[i], A[s])]
        for j in range(s + 1, d):
            a = A[s][j]
            if a.is_zero():
                continue
            w, ua = _unit_part(a)
            c = ua.shift(w - best_v)
            for i in range(s, d):
                A[i][j] = u * A[i][j] - c * A[i][s]
        out.append(best_v)
    return tuple(sorted(out, reverse=True))
