import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from rcx.algebra import (
    FieldError,
    LocalPoly,
    NonUnitError,
    OMatrix,
    SingularMatrixError,
    det_valuation,
    elementary_divisors,
    field_arith,
    get_field,
    hermite_canonical,
    is_hermite_canonical,
    unit_inverse,
)
from rcx.algebra.field import FieldParams, factor_prime_power

QS = [2, 3, 4, 5, 8, 9]


# ---------- finite fields ----------


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_field_matches_modular_ints(p):
    F = get_field(p)
    for a in range(p):
        for b in range(p):
            assert F.add(a, b) == (a + b) % p
            assert F.mul(a, b) == (a * b) % p
        if a:
            assert (F.inv(a) * a) % p == 1


@pytest.mark.parametrize("q", QS)
def test_field_axioms(q):
    F = get_field(q)
    els = range(q)
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("q", [4, 8, 9])
def test_multiplicative_group_is_cyclic(q):
    F = get_field(q)
    orders = []
    for a in range(1, q):
        x, k = a, 1
        while x != 1:
            x, k = F.mul(x, a), k + 1
        orders.append(k)
    assert max(orders) == q - 1


def test_f4_examples():
    F = get_field(4)
    x = F.elem((0, 1))
    assert (x * x).coeffs == (1, 1)
    assert (x * x.inverse()).coeffs == (1, 0)
    assert field_arith(x, x, "add").coeffs == (0, 0)
    assert field_arith(x, None, "inv").coeffs == (1, 1)


def test_field_errors():
    with pytest.raises(FieldError):
        get_field(6)
    with pytest.raises(FieldError):
        get_field(4, (1, 0, 1))  # x^2+1 = (x+1)^2 over F_2
    with pytest.raises(ZeroDivisionError):
        get_field(3).inv(0)
    assert factor_prime_power(81) == (3, 4)


def test_custom_modulus_gives_isomorphic_field():
    F = get_field(9, (2, 2, 1))  # x^2 + 2x + 2 is irreducible over F_3
    assert isinstance(F, FieldParams) and F.q == 9
    assert all(F.mul(a, F.inv(a)) == 1 for a in range(1, 9))


# ---------- polynomials / O ----------


def poly(F, coeffs):
    return LocalPoly(F, tuple(coeffs))


@st.composite
def polys(draw, q, max_len=4):
    return poly(get_field(q), draw(st.lists(st.integers(0, q - 1), max_size=max_len)))


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_poly_ring_laws(data):
    q = data.draw(st.sampled_from(QS))
    a, b, c = (data.draw(polys(q)) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    assert a * b == b * a
    if not a.is_zero() and not b.is_zero():
        assert (a * b).valuation() == a.valuation() + b.valuation()


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_unit_inverse_property(data):
    q = data.draw(st.sampled_from(QS))
    F = get_field(q)
    u0 = data.draw(st.integers(1, q - 1))
    tail = data.draw(st.lists(st.integers(0, q - 1), max_size=4))
    u = poly(F, [u0] + tail)
    N = data.draw(st.integers(1, 8))
    inv = unit_inverse(u, N)
    assert (u * inv).truncate(N) == LocalPoly.one(F)


def test_unit_inverse_example_and_error():
    F = get_field(2)
    assert unit_inverse(poly(F, [1, 1]), 3) == poly(F, [1, 1, 1])
    with pytest.raises(NonUnitError):
        unit_inverse(poly(F, [0, 1]), 3)


def test_poly_str():
    F = get_field(2)
    assert str(poly(F, [1, 1, 1])) == "1 + t + t^2"


# ---------- matrices ----------


def det(M: OMatrix) -> LocalPoly:
    """Leibniz expansion; independent of the elimination code."""
    F, d = M.field, M.d
    total = LocalPoly.zero(F)
    for perm in itertools.permutations(range(d)):
        term = LocalPoly.one(F)
        for i, j in enumerate(perm):
            term = term * M.rows[i][j]
        inversions = sum(perm[i] > perm[j] for i in range(d) for j in range(i + 1, d))
        total = total - term if inversions % 2 else total + term
    return total


def minor_oracle(M: OMatrix) -> tuple[int, ...]:
    """Smith exponents from the valuations of gcds of i x i minors."""
    d = M.d
    g = [0]
    for i in range(1, d + 1):
        best = float("inf")
        for rows in itertools.combinations(range(d), i):
            for cols in itertools.combinations(range(d), i):
                sub = OMatrix(M.field, [[M.rows[r][c] for c in cols] for r in rows])
                best = min(best, det(sub).valuation())
        g.append(best)
    inc = [g[i] - g[i - 1] for i in range(1, d + 1)]
    return tuple(sorted(inc, reverse=True))


def rand_poly(rng, F, max_len=3):
    return poly(F, [rng.randrange(F.q) for _ in range(rng.randrange(max_len + 1))])


def rand_nonsingular(rng, q, d):
    F = get_field(q)
    while True:
        M = OMatrix(F, [[rand_poly(rng, F) for _ in range(d)] for _ in range(d)])
        if not det(M).is_zero():
            return M


def rand_unimodular(rng, q, d):
    """Permutation times unit-diagonal lower and upper triangular factors."""
    F = get_field(q)
    perm = list(range(d))
    rng.shuffle(perm)
    P = OMatrix(F, [[LocalPoly.one(F) if perm[i] == j else LocalPoly.zero(F) for j in range(d)] for i in range(d)])

    def tri(lower):
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                if i == j:
                    row.append(poly(F, [rng.randrange(1, q)] + [rng.randrange(q) for _ in range(rng.randrange(3))]))
                elif (i > j) == lower:
                    row.append(rand_poly(rng, F))
                else:
                    row.append(LocalPoly.zero(F))
            rows.append(row)
        return OMatrix(F, rows)

    return P @ tri(True) @ tri(False)


seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.sampled_from([2, 3, 4]), st.integers(2, 3))
@settings(max_examples=40, deadline=None)
def test_elementary_divisors_match_minor_gcds(seed, q, d):
    M = rand_nonsingular(random.Random(seed), q, d)
    assert elementary_divisors(M) == minor_oracle(M)
    assert det_valuation(M) == det(M).valuation()


@given(seeds, st.sampled_from([2, 3, 4]), st.integers(2, 3))
@settings(max_examples=40, deadline=None)
def test_hermite_is_canonical_and_invariant(seed, q, d):
    rng = random.Random(seed)
    M = rand_nonsingular(rng, q, d)
    U = rand_unimodular(rng, q, d)
    H = hermite_canonical(M)
    assert is_hermite_canonical(H)
    assert hermite_canonical(H) == H
    assert hermite_canonical(M @ U) == H
    assert elementary_divisors(H) == elementary_divisors(M)
    assert det(H).valuation() == det(M).valuation()


@given(seeds, st.sampled_from([2, 3]), st.integers(2, 3))
@settings(max_examples=30, deadline=None)
def test_elementary_divisors_two_sided_invariance(seed, q, d):
    rng = random.Random(seed)
    M = rand_nonsingular(rng, q, d)
    U, V = rand_unimodular(rng, q, d), rand_unimodular(rng, q, d)
    assert elementary_divisors(U @ M @ V) == elementary_divisors(M)


def test_matrix_examples():
    F = get_field(2)
    t = [0, 1]
    M = OMatrix.from_lists(F, [[t, 1], [0, t]])
    assert elementary_divisors(M) == (2, 0)
    H = hermite_canonical(OMatrix.from_lists(F, [[t, t], [0, 1]]))
    assert H == OMatrix.from_lists(F, [[t, 0], [0, 1]])
    assert hermite_canonical(OMatrix.diag_t(F, (2, 1, 0))) == OMatrix.diag_t(F, (2, 1, 0))


def test_singular_matrix_raises():
    F = get_field(3)
    M = OMatrix.from_lists(F, [[1, 2], [2, 1]])  # rows equal up to -1 mod 3 -> det 1-4 = 0 mod 3
    with pytest.raises(SingularMatrixError):
        hermite_canonical(M)
    with pytest.raises(SingularMatrixError):
        elementary_divisors(M)
