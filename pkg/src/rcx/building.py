"""Finite balls of the Bruhat-Tits building of PGL_d(F_q((t))).

Vertices are homothety classes of O-lattices, stored as the Hermite
canonical form of a generator matrix scaled so that the lattice lies in
O^d but not in tO^d. Color-k neighbors of gK are gyK for y in Omega_k.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .algebra import FieldParams, LocalPoly, OMatrix, elementary_divisors, hermite_canonical
from .spectrum import gaussian_binomial

log = logging.getLogger(__name__)

__all__ = [
    "BuildingParams",
    "LatticeClass",
    "BuildingBall",
    "BallTooLargeError",
    "DEFAULT_CAP",
    "base_vertex",
    "omega_matrices",
    "lattice_class",
    "neighbors",
    "neighbors_of_rep",
    "build_ball",
    "vertex_type",
    "distance",
    "count_types",
    "types_at_distance",
    "type_size",
    "estimate_ball_size",
    "apply_hecke",
    "apply_hecke_pull",
]

DEFAULT_CAP = 10**6


class BallTooLargeError(RuntimeError):
    pass


@dataclass(frozen=True)
class BuildingParams:
    d: int
    field: FieldParams

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("building dimension d must be >= 2")

    @property
    def q(self) -> int:
        return self.field.q


class LatticeClass:
    """A building vertex: normalized Hermite representative of a lattice class."""

    __slots__ = ("rep", "exps")

    def __init__(self, rep: OMatrix):
        self.rep = rep
        self.exps = rep.diag_exponents()

    def color(self) -> int:
        return sum(self.exps) % self.rep.d

    def key(self):
        return self.rep.key()

    def __eq__(self, other):
        return isinstance(other, LatticeClass) and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __repr__(self):
        return f"LatticeClass({self.rep!r})"


def lattice_class(M: OMatrix) -> LatticeClass:
    """Canonical vertex for the lattice spanned by the columns of M."""
    H = hermite_canonical(M)
    s = H.min_valuation()
    if s:
        H = H.scale_t(-s)
    return LatticeClass(H)


def base_vertex(params: BuildingParams) -> LatticeClass:
    return LatticeClass(OMatrix.identity(params.field, params.d))


@lru_cache(maxsize=None)
def _omega(d: int, k: int, field: FieldParams) -> tuple[OMatrix, ...]:
    q = field.q
    zero, one, t = LocalPoly.zero(field), LocalPoly.one(field), LocalPoly.monomial(field, 1)
    consts = [LocalPoly(field, (c,)) for c in range(q)]
    out = []
    for C in combinations(range(d), k):
        Cs = set(C)
        stars = [(i, j) for i in C for j in range(i + 1, d) if j not in Cs]
        for vals in product(range(q), repeat=len(stars)):
            rows = [[zero] * d for _ in range(d)]
            for i in range(d):
                rows[i][i] = t if i in Cs else one
            for (i, j), c in zip(stars, vals):
                rows[i][j] = consts[c]
            out.append(OMatrix(field, rows))
    return tuple(out)


def omega_matrices(d: int, k: int, field: FieldParams) -> list[OMatrix]:
    """Upper-triangular representatives of the color-k neighbors of the base
    vertex, grouped by the set C of diagonal positions carrying t."""
    if not 1 <= k <= d - 1:
        raise ValueError(f"color k={k} out of range 1..{d - 1}")
    return list(_omega(d, k, field))


def neighbors_of_rep(M: OMatrix, k: int) -> list[LatticeClass]:
    """Color-k neighbors of the class of any generator matrix M."""
    return [lattice_class(M @ m) for m in omega_matrices(M.d, k, M.field)]


def neighbors(v: LatticeClass, k: int) -> list[LatticeClass]:
    """Color-k neighbors of v, as a multiset in Omega_k order."""
    return neighbors_of_rep(v.rep, k)


def vertex_type(v: LatticeClass) -> tuple[int, ...]:
    ell = elementary_divisors(v.rep)
    m = ell[-1]
    return tuple(x - m for x in ell)


def distance(v: LatticeClass) -> int:
    return vertex_type(v)[0]


def types_at_distance(d: int, n: int) -> list[tuple[int, ...]]:
    """Weakly decreasing tuples with l_1 = n and l_d = 0."""
    if n == 0:
        return [(0,) * d]
    out = []

    def rec(prefix, remaining, hi):
        if remaining == 0:
            out.append(tuple(prefix) + (0,))
            return
        for x in range(hi, -1, -1):
            rec(prefix + [x], remaining - 1, x)

    rec([n], d - 2, n)
    return out


def _poincare(m: int, t: Fraction) -> Fraction:
    # sum over S_m of t^length = prod_{i=1..m} (1 + t + ... + t^{i-1})
    out = Fraction(1)
    for i in range(1, m + 1):
        out *= sum(t**j for j in range(i))
    return out


def type_size(ell, q: int) -> int:
    """Number of vertices of a given type (the K-orbit size mu(KgK))."""
    d = len(ell)
    t = Fraction(1, q)
    expo = sum((d + 1 - 2 * (i + 1)) * x for i, x in enumerate(ell))
    val = Fraction(q) ** expo * _poincare(d, t)
    for _, grp in Counter(ell).items():
        val /= _poincare(grp, t)
    assert val.denominator == 1
    return int(val)


def estimate_ball_size(d: int, q: int, r: int) -> int:
    return sum(type_size(ell, q) for n in range(r + 1) for ell in types_at_distance(d, n))


@dataclass(frozen=True, eq=False)
class BuildingBall:
    """Radius-r ball around the base vertex with colored directed adjacency.

    ``edges[k]`` is an int array of shape (E_k, 3) of (source, target,
    multiplicity) rows; adjacency is recorded for every source at distance
    < radius. Vertex indices follow BFS order, vertex 0 is the base.
    """

    params: BuildingParams
    radius: int
    vertices: tuple[LatticeClass, ...]
    index: dict
    colors: np.ndarray
    distances: np.ndarray
    types: tuple[tuple[int, ...], ...]
    edges: dict

    @property
    def n(self) -> int:
        return len(self.vertices)

    def interior(self) -> np.ndarray:
        return np.flatnonzero(self.distances < self.radius)

    def out_degree(self, k: int) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        e = self.edges[k]
        np.add.at(deg, e[:, 0], e[:, 2])
        return deg

    def to_json(self) -> dict:
        p = self.params
        return {
            "params": {
                "d": p.d,
                "q": p.q,
                "modulus": list(p.field.modulus) if p.field.modulus else None,
                "radius": self.radius,
            },
            "vertex_count": self.n,
            "vertices": [
                {
                    "index": i,
                    "color": int(self.colors[i]),
                    "type": list(self.types[i]),
                    "distance": int(self.distances[i]),
                    "rep": [[str(x) for x in row] for row in v.rep.rows],
                }
                for i, v in enumerate(self.vertices)
            ],
            "edges": {str(k): self.edges[k].tolist() for k in sorted(self.edges)},
        }


def build_ball(params: BuildingParams, r: int, cap: int = DEFAULT_CAP) -> BuildingBall:
    """Breadth-first closure of ``neighbors`` from the base vertex."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    d, q = params.d, params.q
    est = estimate_ball_size(d, q, r)
    if est > cap:
        raise BallTooLargeError(f"ball (d={d}, q={q}, r={r}) has an estimated {est} vertices > cap {cap}")
    degrees = {k: gaussian_binomial(d, k, q) for k in range(1, d)}

    base = base_vertex(params)
    vertices = [base]
    index = {base.key(): 0}
    dist = [0]
    edges = {k: [] for k in range(1, d)}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        if dist[i] >= r:
            continue
        v = vertices[i]
        for k in range(1, d):
            nbrs = neighbors(v, k)
            keys = [w.key() for w in nbrs]
            if len(set(keys)) != degrees[k]:
                raise AssertionError(
                    f"vertex {i}: {len(set(keys))} distinct color-{k} neighbors, expected {degrees[k]}"
                )
            for w, key in zip(nbrs, keys):
                j = index.get(key)
                if j is None:
                    j = len(vertices)
                    index[key] = j
                    vertices.append(w)
                    dist.append(dist[i] + 1)
                    queue.append(j)
                edges[k].append((i, j, 1))
    types = tuple(vertex_type(v) for v in vertices)
    for i, ty in enumerate(types):
        if ty[0] != dist[i]:
            raise AssertionError(f"vertex {i}: BFS depth {dist[i]} != type distance {ty[0]}")
    log.info("built ball d=%d q=%d r=%d with %d vertices", d, q, r, len(vertices))
    return BuildingBall(
        params=params,
        radius=r,
        vertices=tuple(vertices),
        index=index,
        colors=np.array([v.color() for v in vertices], dtype=np.int64),
        distances=np.array(dist, dtype=np.int64),
        types=types,
        edges={k: np.array(e, dtype=np.int64).reshape(-1, 3) for k, e in edges.items()},
    )


def count_types(ball: BuildingBall, n: int) -> Counter:
    if n > ball.radius:
        raise ValueError(f"distance {n} exceeds ball radius {ball.radius}")
    return Counter(ty for ty, dd in zip(ball.types, ball.distances) if dd == n)


def apply_hecke(ball: BuildingBall, k: int, f: np.ndarray) -> np.ndarray:
    """(A_k f) on the whole ball, for f supported on interior vertices.

    Uses z in N_k(y) <=> y in N_{d-k}(z), so only edges out of supp f are
    needed and the result is exact at every vertex of the ball.
    """
    f = np.asarray(f)
    d = ball.params.d
    if np.any(f[ball.distances >= ball.radius]):
        raise ValueError("function must be supported at distance < radius")
    e = ball.edges[d - k]
    out = np.zeros_like(f)
    np.add.at(out, e[:, 1], e[:, 2] * f[e[:, 0]])
    return out


def apply_hecke_pull(ball: BuildingBall, k: int, f: np.ndarray) -> np.ndarray:
    """(A_k f)(x) = sum over color-k out-neighbors; valid at interior x only
    (other entries are left 0)."""
    f = np.asarray(f)
    e = ball.edges[k]
    out = np.zeros_like(f)
    np.add.at(out, e[:, 0], e[:, 2] * f[e[:, 1]])
    return out
