"""Finite colored complexes: the ``.rcx`` text format and generators.

A complex of rank d carries, for each color k = 1..d-1, a multiset of
directed edges (u, v). Reverse closure means the color-(d-k) multiset is
the reversal of the color-k multiset, so that A_{d-k} = A_k^T.

Format::

    rcx 1
    d 3
    q 2
    n 27
    l <u> <label>          (optional vertex labels)
    e <k> <u> <v> [mult]
"""

from __future__ import annotations

import io
import logging
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra.field import factor_prime_power, FieldError

log = logging.getLogger(__name__)

__all__ = [
    "ColoredComplex",
    "RcxFormatError",
    "CLOSURE_MODES",
    "loads",
    "dumps",
    "load",
    "save",
    "gen_complete",
    "gen_circulant",
    "circulant_eigenvalues",
    "gen_cayley",
    "gen_voltage_cover",
    "gen_random_regular",
    "parse_perms",
    "parse_voltages",
    "relabel",
]

CLOSURE_MODES = ("complete", "strict", "ignore")


class RcxFormatError(ValueError):
    """Malformed .rcx input. ``code`` is one of header, syntax, range,
    color, closure; ``line`` is 1-based (0 when not tied to a line)."""

    def __init__(self, code: str, line: int, message: str):
        where = f"line {line}: " if line else ""
        super().__init__(f"[{code}] {where}{message}")
        self.code = code
        self.line = line


def _warn_q(q):
    if q >= 2:
        try:
            factor_prime_power(q)
            return
        except FieldError:
            pass
    log.warning("q=%s is not a prime power; it is used as a formal parameter only", q)


@dataclass(frozen=True)
class ColoredComplex:
    d: int
    q: int
    n: int
    # color k -> sorted tuple of (u, v, mult)
    edges: dict
    labels: dict = field(default_factory=dict)

    @classmethod
    def from_edges(cls, d, q, n, edge_iter, labels=None, closure="complete"):
        """Build from (k, u, v[, mult]) items; repeated items add up."""
        acc = {k: defaultdict(int) for k in range(1, d)}
        for item in edge_iter:
            k, u, v = item[:3]
            mult = item[3] if len(item) > 3 else 1
            if not 1 <= k <= d - 1:
                raise RcxFormatError("color", 0, f"color must be in 1..d-1, got {k}")
            if not (0 <= u < n and 0 <= v < n):
                raise RcxFormatError("range", 0, f"edge ({u}, {v}) out of range for n={n}")
            acc[k][(u, v)] += mult
        return cls._finish(d, q, n, acc, labels or {}, closure)

    @classmethod
    def _finish(cls, d, q, n, acc, labels, closure, lines=None):
        if closure not in CLOSURE_MODES:
            raise ValueError(f"closure must be one of {CLOSURE_MODES}")
        if closure != "ignore":
            for k in range(1, d):
                j = d - k
                for (u, v), m in list(acc[k].items()):
                    other = acc[j].get((v, u), 0)
                    if other != m:
                        if closure == "strict":
                            line = (lines or {}).get((k, u, v), 0)
                            raise RcxFormatError(
                                "closure",
                                line,
                                f"color-{k} edge {u}->{v} (mult {m}) has color-{j} reverse mult {other}",
                            )
                        top = max(m, other)
                        acc[k][(u, v)] = top
                        acc[j][(v, u)] = top
        edges = {
            k: tuple(sorted((u, v, m) for (u, v), m in acc[k].items() if m > 0)) for k in range(1, d)
        }
        return cls(d, q, n, edges, dict(labels))

    def edge_count(self, k: int) -> int:
        return sum(m for _, _, m in self.edges[k])

    def adjacency(self, k: int) -> np.ndarray:
        """Integer matrix with A[u, v] = multiplicity of color-k edge u -> v."""
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v, m in self.edges[k]:
            A[u, v] += m
        return A

    def out_degrees(self, k: int) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, _, m in self.edges[k]:
            deg[u] += m
        return deg

    def regular_degrees(self):
        """Per-color out-degree tuple if every color is regular, else None."""
        out = []
        for k in range(1, self.d):
            deg = self.out_degrees(k)
            if self.n and np.any(deg != deg[0]):
                return None
            out.append(int(deg[0]) if self.n else 0)
        return tuple(out)

    def reverse_closed(self) -> bool:
        return all(
            sorted((v, u, m) for u, v, m in self.edges[k]) == list(self.edges[self.d - k])
            for k in range(1, self.d)
        )

    def components(self) -> int:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k in range(1, self.d):
            for u, v, _ in self.edges[k]:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        return len({find(x) for x in range(self.n)})


def loads(text: str, closure: str = "complete") -> ColoredComplex:
    header = {}
    seen_magic = False
    acc = None
    lines = {}
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        if not seen_magic:
            if parts != ["rcx", "1"]:
                raise RcxFormatError("header", lineno, "expected 'rcx 1'")
            seen_magic = True
            continue
        if tag in ("d", "q", "n"):
            if acc is not None:
                raise RcxFormatError("header", lineno, f"'{tag}' after the first edge")
            if len(parts) != 2:
                raise RcxFormatError("header", lineno, f"malformed '{tag}' line")
            try:
                header[tag] = int(parts[1])
            except ValueError:
                raise RcxFormatError("header", lineno, f"'{tag}' must be an integer") from None
            continue
        if tag in ("e", "l"):
            missing = [h for h in ("d", "q", "n") if h not in header]
            if missing:
                raise RcxFormatError("header", lineno, f"missing header field(s) {missing}")
            d, n = header["d"], header["n"]
            if acc is None:
                if d < 2:
                    raise RcxFormatError("header", lineno, "d must be >= 2")
                acc = {k: defaultdict(int) for k in range(1, d)}
            if tag == "l":
                if len(parts) < 3:
                    raise RcxFormatError("syntax", lineno, "label line needs '<u> <label>'")
                u = _int(parts[1], lineno)
                if not 0 <= u < n:
                    raise RcxFormatError("range", lineno, f"vertex {u} out of range 0..{n - 1}")
                labels[u] = " ".join(parts[2:])
                continue
            if len(parts) not in (4, 5):
                raise RcxFormatError("syntax", lineno, "edge line must be 'e <k> <u> <v> [mult]'")
            k, u, v = (_int(x, lineno) for x in parts[1:4])
            mult = _int(parts[4], lineno) if len(parts) == 5 else 1
            if not 1 <= k <= d - 1:
                raise RcxFormatError("color", lineno, f"color must be in 1..d-1, got {k}")
            if not (0 <= u < n and 0 <= v < n):
                raise RcxFormatError("range", lineno, f"vertex index out of range 0..{n - 1}")
            if mult < 1:
                raise RcxFormatError("syntax", lineno, "multiplicity must be >= 1")
            acc[k][(u, v)] += mult
            lines.setdefault((k, u, v), lineno)
            continue
        raise RcxFormatError("syntax", lineno, f"unknown record '{tag}'")
    if not seen_magic:
        raise RcxFormatError("header", 0, "empty input")
    missing = [h for h in ("d", "q", "n") if h not in header]
    if missing:
        raise RcxFormatError("header", 0, f"missing header field(s) {missing}")
    d, q, n = header["d"], header["q"], header["n"]
    if d < 2 or n < 0 or q < 1:
        raise RcxFormatError("header", 0, "need d >= 2, q >= 1, n >= 0")
    if acc is None:
        acc = {k: defaultdict(int) for k in range(1, d)}
    _warn_q(q)
    return ColoredComplex._finish(d, q, n, acc, labels, closure, lines)


def _int(s, lineno):
    try:
        return int(s)
    except ValueError:
        raise RcxFormatError("syntax", lineno, f"expected an integer, got {s!r}") from None


def dumps(cx: ColoredComplex) -> str:
    out = io.StringIO()
    out.write(f"rcx 1\nd {cx.d}\nq {cx.q}\nn {cx.n}\n")
    for u in sorted(cx.labels):
        out.write(f"l {u} {cx.labels[u]}\n")
    for k in range(1, cx.d):
        for u, v, m in cx.edges[k]:
            out.write(f"e {k} {u} {v}\n" if m == 1 else f"e {k} {u} {v} {m}\n")
    return out.getvalue()


def load(path, closure: str = "complete") -> ColoredComplex:
    """Read a complex from a path, or from stdin when path is '-'."""
    if str(path) == "-":
        return loads(sys.stdin.read(), closure)
    return loads(Path(path).read_text(), closure)


def save(cx: ColoredComplex, path) -> None:
    if str(path) == "-":
        sys.stdout.write(dumps(cx))
    else:
        Path(path).write_text(dumps(cx))


# generators


def gen_complete(m: int) -> ColoredComplex:
    """K_m as a d=2 complex with q = m - 2, so the graph is (q+1)-regular."""
    if m < 3:
        raise ValueError("need m >= 3")
    q = m - 2
    _warn_q(q)
    return ColoredComplex.from_edges(2, q, m, ((1, u, v) for u in range(m) for v in range(m) if u != v))


def gen_circulant(m: int, jumps, q: int | None = None) -> ColoredComplex:
    """Circulant graph C_m(jumps) as a d=2 complex; q defaults to degree - 1."""
    jumps = list(jumps)
    if len(set(jumps)) != len(jumps):
        raise ValueError(f"duplicate jumps in {jumps}")
    for j in jumps:
        if not 1 <= j <= m // 2:
            raise ValueError(f"jump {j} outside 1..{m // 2}")
    degree = sum(1 if 2 * j == m else 2 for j in jumps)
    if q is None:
        q = max(degree - 1, 1)
    edges = []
    for x in range(m):
        for j in jumps:
            edges.append((1, x, (x + j) % m))
            if 2 * j != m:
                edges.append((1, x, (x - j) % m))
    return ColoredComplex.from_edges(2, q, m, edges)


def circulant_eigenvalues(m: int, jumps) -> np.ndarray:
    """Closed-form spectrum of C_m(jumps), indexed by s = 0..m-1."""
    s = np.arange(m)
    lam = np.zeros(m)
    for j in jumps:
        if 2 * j == m:
            lam += (-1.0) ** s
        else:
            lam += 2 * np.cos(2 * np.pi * s * j / m)
    return lam


def _check_perm(p, m):
    if sorted(p) != list(range(m)):
        raise ValueError(f"not a permutation of 0..{m - 1}: {p}")


def gen_cayley(d: int, q: int, perm_generators, m: int | None = None) -> ColoredComplex:
    """Schreier-style complex from permutation generators.

    Each (k, g) adds color-k edges x -> g(x); the inverse g^-1 is added with
    color d - k, which makes the result reverse closed.
    """
    perm_generators = [(int(k), list(g)) for k, g in perm_generators]
    if m is None:
        if not perm_generators:
            raise ValueError("vertex count m is required when no generators are given")
        m = len(perm_generators[0][1])
    edges = []
    for k, g in perm_generators:
        if not 1 <= k <= d - 1:
            raise ValueError(f"color must be in 1..{d - 1}, got {k}")
        _check_perm(g, m)
        inv = [0] * m
        for x, y in enumerate(g):
            inv[y] = x
        edges += [(k, x, g[x]) for x in range(m)]
        edges += [(d - k, x, inv[x]) for x in range(m)]
    return ColoredComplex.from_edges(d, q, m, edges, closure="strict")


def _normalize_voltages(voltages, m):
    """Directed-edge voltage lookup with auto-negated reverses."""
    table = {}
    for (u, v), a in voltages.items():
        a %= m
        if (u, v) in table and table[(u, v)] != a:
            raise ValueError(f"conflicting voltages on edge ({u}, {v})")
        table[(u, v)] = a
        if u != v:
            rev = (-a) % m
            if (v, u) in voltages and voltages[(v, u)] % m != rev:
                raise ValueError(f"conflicting voltages on edge ({u}, {v}) and its reverse")
            table[(v, u)] = rev
    return table


def gen_voltage_cover(base: ColoredComplex, m: int, voltages) -> ColoredComplex:
    """Cyclic m-fold cover of a d=2 complex: vertex (x, a) is x*m + a and the
    edge x -> y with voltage c lifts to (x, a) -> (y, a + c mod m).

    Unlisted edges carry voltage 0. All parallel copies of an edge share its
    voltage; a loop of even multiplicity lifts with half its copies at +c and
    half at -c.
    """
    if base.d != 2:
        raise ValueError("voltage covers are defined for d=2 complexes")
    if m < 1:
        raise ValueError("need m >= 1")
    table = _normalize_voltages(dict(voltages), m)
    edges = []
    for u, v, mult in base.edges[1]:
        c = table.get((u, v), 0)
        if u == v and c % m and (2 * c) % m:
            if mult % 2:
                raise ValueError(f"loop at {u} has odd multiplicity; cannot assign voltage {c}")
            parts = [(c, mult // 2), ((-c) % m, mult // 2)]
        else:
            parts = [(c, mult)]
        for cc, mm in parts:
            for a in range(m):
                edges.append((1, u * m + a, v * m + (a + cc) % m, mm))
    return ColoredComplex.from_edges(2, base.q, base.n * m, edges, closure="strict")


def gen_random_regular(n: int, r: int, rng, q: int | None = None) -> ColoredComplex:
    """Random r-regular multigraph (configuration model, loops count twice)."""
    if (n * r) % 2:
        raise ValueError("n * r must be even")
    stubs = np.repeat(np.arange(n), r)
    rng.shuffle(stubs)
    edges = []
    for a, b in stubs.reshape(-1, 2):
        edges.append((1, int(a), int(b)))
        edges.append((1, int(b), int(a)))
    return ColoredComplex.from_edges(2, q if q is not None else r - 1, n, edges, closure="strict")


def relabel(cx: ColoredComplex, perm) -> ColoredComplex:
    """Complex with vertex x renamed perm[x]."""
    perm = list(perm)
    _check_perm(perm, cx.n)
    edges = [(k, perm[u], perm[v], mm) for k in range(1, cx.d) for u, v, mm in cx.edges[k]]
    return ColoredComplex.from_edges(cx.d, cx.q, cx.n, edges, closure="ignore")


def parse_perms(text: str):
    """Lines '<k> <g(0)> <g(1)> ...'; '#' starts a comment."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if line:
            out.append((int(line[0]), [int(x) for x in line[1:]]))
    return out


def parse_voltages(text: str) -> dict:
    """Lines '<u> <v> <voltage>'."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) != 3:
            raise ValueError(f"line {lineno}: expected '<u> <v> <voltage>'")
        u, v, a = (int(x) for x in line)
        if (u, v) in out and out[(u, v)] != a:
            raise ValueError(f"line {lineno}: conflicting voltage for edge ({u}, {v})")
        out[(u, v)] = a
    return out
