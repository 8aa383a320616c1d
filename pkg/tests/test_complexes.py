import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rcx.complexes import (
    ColoredComplex,
    RcxFormatError,
    circulant_eigenvalues,
    dumps,
    gen_cayley,
    gen_circulant,
    gen_complete,
    gen_random_regular,
    gen_voltage_cover,
    load,
    loads,
    parse_perms,
    parse_voltages,
    relabel,
    save,
)

SAMPLE = """rcx 1
# a triangle as a d=3 complex
d 3
q 2
n 3
l 0 origin
e 1 0 1
e 1 1 2
e 1 2 0
"""


def test_loads_completes_reverse_edges():
    cx = loads(SAMPLE)
    assert cx.d == 3 and cx.q == 2 and cx.n == 3
    assert cx.edges[2] == ((0, 2, 1), (1, 0, 1), (2, 1, 1))
    assert cx.reverse_closed() and cx.labels == {0: "origin"}
    assert np.array_equal(cx.adjacency(2), cx.adjacency(1).T)


def test_strict_closure_reports_line():
    with pytest.raises(RcxFormatError) as exc:
        loads(SAMPLE, closure="strict")
    assert exc.value.code == "closure" and exc.value.line == 7


def test_ignore_closure_keeps_input():
    cx = loads(SAMPLE, closure="ignore")
    assert cx.edges[2] == () and not cx.reverse_closed()


@pytest.mark.parametrize(
    "text,code,line",
    [
        ("", "header", 0),
        ("rcx 2\n", "header", 1),
        ("rcx 1\nd 2\nq 2\ne 1 0 1\n", "header", 4),
        ("rcx 1\nd 2\nq 2\nn 2\ne 1 0 5\n", "range", 5),
        ("rcx 1\nd 3\nq 2\nn 2\ne 3 0 1\n", "color", 5),
        ("rcx 1\nd 2\nq 2\nn 2\ne 1 0 x\n", "syntax", 5),
        ("rcx 1\nd 2\nq 2\nn 2\nz\n", "syntax", 5),
        ("rcx 1\nd 2\nq 2\nn 2\ne 1 0 1 0\n", "syntax", 5),
        ("rcx 1\nd 2\nq 2\nn 2\ne 1 0 1\nq 3\n", "header", 6),
        ("rcx 1\nd 2\nn 2\n", "header", 0),
    ],
)
def test_format_errors(text, code, line):
    with pytest.raises(RcxFormatError) as exc:
        loads(text)
    assert exc.value.code == code and exc.value.line == line


def test_non_prime_power_q_warns(caplog):
    with caplog.at_level(logging.WARNING):
        cx = loads("rcx 1\nd 2\nq 6\nn 1\n")
    assert cx.q == 6 and "not a prime power" in caplog.text


def test_dumps_round_trip(tmp_path):
    cx = gen_circulant(10, [1, 5])
    text = dumps(cx)
    assert dumps(loads(text)) == text
    path = tmp_path / "c.rcx"
    save(cx, path)
    assert path.read_text() == text
    assert load(path).edges == cx.edges
    multi = ColoredComplex.from_edges(2, 2, 2, [(1, 0, 1, 3), (1, 1, 0, 3), (1, 0, 0, 2)])
    assert "e 1 0 1 3\n" in dumps(multi)
    assert loads(dumps(multi)).edges == multi.edges


def test_complete_graph():
    cx = gen_complete(5)
    assert cx.q == 3 and cx.regular_degrees() == (4,)
    assert np.array_equal(cx.adjacency(1), np.ones((5, 5), dtype=int) - np.eye(5, dtype=int))


@given(st.integers(3, 40), st.data())
@settings(max_examples=40, deadline=None)
def test_circulant_eigenvalues_match_eigvalsh(m, data):
    jumps = data.draw(st.lists(st.integers(1, m // 2), min_size=1, max_size=4, unique=True))
    cx = gen_circulant(m, jumps)
    A = cx.adjacency(1)
    assert np.array_equal(A, A.T)
    got = np.sort(np.linalg.eigvalsh(A.astype(float)))
    assert np.allclose(got, np.sort(circulant_eigenvalues(m, jumps)), atol=1e-9)


def test_circulant_errors():
    with pytest.raises(ValueError):
        gen_circulant(6, [4])
    with pytest.raises(ValueError):
        gen_circulant(6, [1, 1])


def test_cayley_reverse_closed_and_regular():
    gens = parse_perms("1 1 2 0 4 5 3  # two 3-cycles\n1 3 4 5 0 1 2\n")
    cx = gen_cayley(3, 2, gens)
    assert cx.reverse_closed() and cx.regular_degrees() == (2, 2)
    assert np.array_equal(cx.adjacency(2), cx.adjacency(1).T)
    with pytest.raises(ValueError):
        gen_cayley(3, 2, [(1, [0, 0, 1])])
    with pytest.raises(ValueError):
        gen_cayley(3, 2, [(3, [0, 1, 2])])


def twisted_spectrum(base, m, volts):
    """Spectrum of a cyclic cover as the union over characters j of the
    eigenvalues of sum_e omega^{j c(e)} E_e on the base."""
    out = []
    for j in range(m):
        w = np.exp(2j * np.pi * j / m)
        B = np.zeros((base.n, base.n), dtype=complex)
        for u, v, mult in base.edges[1]:
            c = volts.get((u, v), (-volts[(v, u)]) if (v, u) in volts else 0)
            if u == v and c % m and (2 * c) % m:
                B[u, u] += mult // 2 * (w**c + w ** (-c))
            else:
                B[u, v] += mult * w**c
        out.extend(np.linalg.eigvalsh(B))
    return np.sort(out)


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_voltage_cover_spectrum(m, seed):
    rng = np.random.default_rng(seed)
    base = gen_complete(4)
    volts = {(u, v): int(rng.integers(0, m)) for u in range(4) for v in range(u + 1, 4)}
    cover = gen_voltage_cover(base, m, volts)
    assert cover.n == 4 * m and cover.reverse_closed() and cover.regular_degrees() == (3,)
    A = cover.adjacency(1).astype(float)
    assert np.allclose(np.sort(np.linalg.eigvalsh(A)), twisted_spectrum(base, m, volts), atol=1e-9)


def test_voltage_cover_with_loop():
    base = ColoredComplex.from_edges(2, 2, 1, [(1, 0, 0, 2)])
    cover = gen_voltage_cover(base, 5, {(0, 0): 1})
    # the 5-cycle
    assert cover.regular_degrees() == (2,)
    assert cover.components() == 1
    assert np.allclose(np.sort(np.linalg.eigvalsh(cover.adjacency(1).astype(float))), np.sort(circulant_eigenvalues(5, [1])))


def test_voltage_cover_errors():
    with pytest.raises(ValueError):
        gen_voltage_cover(loads(SAMPLE), 2, {})
    base = gen_complete(4)
    with pytest.raises(ValueError):
        gen_voltage_cover(base, 3, {(0, 1): 1, (1, 0): 1})


def test_voltage_regression_fixture():
    # odd voltage on a triangle of K_4 makes the double cover bipartite: it is the 3-cube
    cover = gen_voltage_cover(gen_complete(4), 2, parse_voltages("0 1 1\n1 2 1\n2 0 1\n"))
    assert dumps(cover) == dumps(gen_voltage_cover(gen_complete(4), 2, {(0, 1): 1, (1, 2): 1, (2, 0): 1}))
    ev = np.sort(np.linalg.eigvalsh(cover.adjacency(1).astype(float)))
    assert np.allclose(ev, [-3, -1, -1, -1, 1, 1, 1, 3])


def test_random_regular_is_regular():
    rng = np.random.default_rng(0)
    for _ in range(10):
        cx = gen_random_regular(20, 3, rng)
        assert cx.regular_degrees() == (3,) and cx.reverse_closed() and cx.q == 2
    with pytest.raises(ValueError):
        gen_random_regular(5, 3, rng)


def test_relabel_preserves_spectrum():
    cx = gen_circulant(9, [1, 3])
    perm = list(np.random.default_rng(3).permutation(9))
    rl = relabel(cx, perm)
    P = np.eye(9, dtype=int)[perm]
    assert np.array_equal(rl.adjacency(1), P.T @ cx.adjacency(1) @ P)


def test_components():
    assert gen_circulant(8, [2]).components() == 2
    assert gen_circulant(8, [1]).components() == 1
