"""Joint Hecke spectrum of the building: Satake map, membership in the
simultaneous spectrum S_d, the single-operator regions S_{d,k}, trivial
eigenvalue tuples and the uniform bounds for nontrivial eigenvalues."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_CURVE_SAMPLES",
    "EigenTuple",
    "SpectrumVerdict",
    "CurveSample",
    "RootFindingError",
    "gaussian_binomial",
    "elementary_symmetric",
    "lambda_from_satake",
    "satake_polynomial",
    "find_roots",
    "in_Sd",
    "trivial_tuples",
    "boundary_curve",
    "boundary_curve_array",
    "in_Sdk",
    "region_info",
    "nontrivial_bound",
]

DEFAULT_TOL = 1e-6
DEFAULT_CURVE_SAMPLES = 4096


class RootFindingError(ArithmeticError):
    def __init__(self, message, coeffs):
        super().__init__(f"{message}; polynomial coefficients (high to low): {list(coeffs)}")
        self.coeffs = coeffs


@dataclass
class EigenTuple:
    """(lambda_1, ..., lambda_{d-1}) with optional residual and tags."""

    values: tuple[complex, ...]
    residual: float | None = None
    tags: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=complex)


@dataclass(frozen=True)
class SpectrumVerdict:
    member: bool
    roots: np.ndarray
    max_modulus_deviation: float
    conjugate_symmetric: bool = True


@dataclass(frozen=True)
class CurveSample:
    theta: float
    value: complex


def gaussian_binomial(d: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^d."""
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got k={k}, d={d}")
    num = den = 1
    for i in range(1, k + 1):
        num *= q ** (d - i + 1) - 1
        den *= q**i - 1
    if den == 0:  # q = 1: plain binomial
        return math.comb(d, k)
    return num // den


def elementary_symmetric(z) -> np.ndarray:
    """[sigma_0, ..., sigma_d] of the entries of z."""
    z = np.asarray(z, dtype=complex)
    e = np.zeros(len(z) + 1, dtype=complex)
    e[0] = 1
    for x in z:
        e[1:] = e[1:] + x * e[:-1]
    return e


def _scale(d: int, q: float, k: int) -> float:
    return float(q) ** (k * (d - k) / 2)


def lambda_from_satake(d: int, q: float, z) -> EigenTuple:
    """lambda_k = q^{k(d-k)/2} sigma_k(z), k = 1..d-1."""
    z = np.asarray(z, dtype=complex)
    if len(z) != d:
        raise ValueError(f"expected {d} Satake parameters, got {len(z)}")
    s = elementary_symmetric(z)
    return EigenTuple(tuple(complex(_scale(d, q, k) * s[k]) for k in range(1, d)))


def satake_polynomial(d: int, q: float, lam) -> np.ndarray:
    """Coefficients (high to low) of prod (z - z_i) whose roots are the Satake
    parameters of lam, with sigma_d normalized to 1."""
    lam = np.asarray(lam, dtype=complex)
    if len(lam) != d - 1:
        raise ValueError(f"expected {d - 1} eigenvalues, got {len(lam)}")
    e = np.ones(d + 1, dtype=complex)
    for k in range(1, d):
        e[k] = lam[k - 1] / _scale(d, q, k)
    return np.array([(-1) ** k * e[k] for k in range(d + 1)])


def _polish(c: np.ndarray, roots: np.ndarray, iters: int = 30) -> np.ndarray:
    dc = np.polyder(c)
    roots = roots.copy()
    for idx in range(len(roots)):
        others = np.delete(roots, idx)
        sep = np.min(np.abs(others - roots[idx])) if len(others) else np.inf
        r = roots[idx]
        pr = abs(np.polyval(c, r))
        for _ in range(iters):
            dp = np.polyval(dc, r)
            if dp == 0:
                break
            step = np.polyval(c, r) / dp
            if abs(step) > 0.5 * sep:
                break
            nr = r - step
            pn = abs(np.polyval(c, nr))
            if pn >= pr:
                break
            r, pr = nr, pn
            if abs(step) <= 1e-16 * max(1.0, abs(r)):
                break
        roots[idx] = r
    return roots


def find_roots(coeffs, tol: float = 1e-12) -> np.ndarray:
    """All roots of a polynomial (coefficients high to low, leading 1) from
    the companion-matrix eigenvalues, refined by guarded Newton steps."""
    c = np.asarray(coeffs, dtype=complex)
    if not np.all(np.isfinite(c)):
        raise RootFindingError("non-finite polynomial coefficients", c)
    if c[0] == 0:
        raise RootFindingError("leading coefficient is zero", c)
    c = c / c[0]
    n = len(c) - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    comp = np.zeros((n, n), dtype=complex)
    comp[0, :] = -c[1:]
    if n > 1:
        comp[np.arange(1, n), np.arange(n - 1)] = 1
    roots = np.linalg.eigvals(comp)
    if not np.all(np.isfinite(roots)):
        raise RootFindingError("companion eigensolve returned non-finite roots", c)
    roots = _polish(c, roots)
    scale = np.array([np.sum(np.abs(c) * np.abs(r) ** np.arange(n, -1, -1)) for r in roots])
    backward = np.abs([np.polyval(c, r) for r in roots]) / scale
    if np.max(backward) > tol:
        raise RootFindingError(f"root refinement did not converge (backward error {np.max(backward):.3g})", c)
    return roots


def in_Sd(d: int, q: float, lam, tol: float = DEFAULT_TOL) -> SpectrumVerdict:
    """Is lam = (lambda_1..lambda_{d-1}) in the simultaneous spectrum S_d?

    Membership holds iff the Satake parameters recovered from lam all lie on
    the unit circle (their product is 1 by construction).
    """
    lam = np.asarray(getattr(lam, "values", lam), dtype=complex)
    if len(lam) != d - 1:
        raise ValueError(f"expected {d - 1} eigenvalues, got {len(lam)}")
    conj_ok = all(
        abs(lam[d - k - 1] - np.conj(lam[k - 1])) <= tol * (1 + abs(lam[k - 1])) for k in range(1, d)
    )
    roots = find_roots(satake_polynomial(d, q, lam))
    dev = float(np.max(np.abs(np.abs(roots) - 1.0)))
    return SpectrumVerdict(conj_ok and dev <= tol, roots, dev, conj_ok)


def trivial_tuples(d: int, q: float, t_index: int = 1) -> list[tuple[complex, EigenTuple]]:
    """Eigenvalue tuples of the one-dimensional spherical representations.

    One tuple per zeta with zeta^(d/t_index) = 1, where t_index is
    [Gamma : Gamma cap PSL_d]; the default t_index = 1 keeps all d-th roots
    of unity.
    """
    if t_index < 1 or d % t_index:
        raise ValueError(f"t_index={t_index} must divide d={d}")
    m = d // t_index
    if float(q).is_integer():
        # q^{k(d-k)/2} sigma_k(q^{-(d-1)/2}, ..., q^{(d-1)/2}) = sigma_k(1, q, ..., q^{d-1}) / q^{k(k-1)/2}
        qi = int(q)
        s_int = [1] + [0] * d
        for x in (qi**i for i in range(d)):
            for k in range(d, 0, -1):
                s_int[k] += x * s_int[k - 1]
        base = [s_int[k] // qi ** (k * (k - 1) // 2) for k in range(d + 1)]
    else:
        sat = [float(q) ** ((2 * i - d - 1) / 2) for i in range(1, d + 1)]
        s = elementary_symmetric(sat).real
        base = [_scale(d, q, k) * s[k] for k in range(d + 1)]
    out = []
    for j in range(m):
        zeta = np.exp(2j * np.pi * j / m)
        zeta = complex(0.0 if abs(zeta.real) < 1e-15 else zeta.real, 0.0 if abs(zeta.imag) < 1e-15 else zeta.imag)
        vals = tuple(complex(zeta**k * base[k]) for k in range(1, d))
        out.append((zeta, EigenTuple(vals, tags={"trivial": zeta})))
    return out


def boundary_curve_array(d: int, q: float, k: int, M: int, period: float = 2 * math.pi) -> tuple[np.ndarray, np.ndarray]:
    theta = period * np.arange(M) / M
    a = math.comb(d - 1, k)
    b = math.comb(d - 1, k - 1)
    # sigma_k(e^{it}, ..., e^{it}, e^{-(d-1)it})
    vals = _scale(d, q, k) * (a * np.exp(1j * k * theta) + b * np.exp(-1j * (d - k) * theta))
    return theta, vals


def boundary_curve(d: int, q: float, k: int, M: int) -> list[CurveSample]:
    """M samples of the boundary of S_{d,k} at theta_j = 2 pi j / M."""
    if M < 16:
        raise ValueError("need at least 16 samples")
    if not 1 <= k <= d - 1:
        raise ValueError(f"color k={k} out of range 1..{d - 1}")
    theta, vals = boundary_curve_array(d, q, k, M)
    return [CurveSample(float(t), complex(v)) for t, v in zip(theta, vals)]


def _segments_cross(P: np.ndarray) -> bool:
    """True if any two non-adjacent edges of the closed polygon P intersect."""
    A = P
    B = np.roll(P, -1)
    n = len(P)

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    for i in range(n):
        j = np.arange(i + 2, n)
        if i == 0:
            j = j[j != n - 1]
        if len(j) == 0:
            continue
        a, b = A[i], B[i]
        c, e = A[j], B[j]
        d1 = cross(b - a, c - a)
        d2 = cross(b - a, e - a)
        d3 = cross(e - c, a - c)
        d4 = cross(e - c, b - c)
        hit = (d1 * d2 < 0) & (d3 * d4 < 0)
        if np.any(hit):
            return True
    return False


@dataclass(frozen=True)
class RegionInfo:
    kind: str  # "interval" or "polygon"
    lo: float = 0.0
    hi: float = 0.0
    polygon: np.ndarray | None = None
    simple: bool = True


@lru_cache(maxsize=64)
def region_info(d: int, q: float, k: int, M: int = DEFAULT_CURVE_SAMPLES) -> RegionInfo:
    """Geometry of S_{d,k}: a real interval when A_k is self-adjoint
    (2k = d), otherwise the region enclosed by the sampled boundary curve
    over one fundamental period 2 pi / gcd(k, d)."""
    if 2 * k == d:
        r = 2 * math.comb(d - 1, k) * _scale(d, q, k)
        return RegionInfo("interval", -r, r)
    g = math.gcd(k, d)
    _, poly = boundary_curve_array(d, q, k, M, period=2 * math.pi / g)
    simple = not _segments_cross(poly)
    if not simple:
        log.warning(
            "boundary curve of S_{%d,%d} self-intersects; using the nonzero-winding region", d, k
        )
    return RegionInfo("polygon", polygon=poly, simple=simple)


def _winding(poly: np.ndarray, z: complex) -> int:
    w = poly - z
    ang = np.angle(np.roll(w, -1) / w)
    return int(round(float(np.sum(ang)) / (2 * math.pi)))


def _dist_to_polygon(poly: np.ndarray, z: complex) -> float:
    a = poly
    b = np.roll(poly, -1)
    ab = b - a
    denom = np.abs(ab) ** 2
    t = np.where(denom > 0, ((z - a) * np.conj(ab)).real / np.where(denom > 0, denom, 1), 0.0)
    t = np.clip(t, 0.0, 1.0)
    return float(np.min(np.abs(a + t * ab - z)))


def in_Sdk(
    d: int, q: float, k: int, lam: complex, M: int = DEFAULT_CURVE_SAMPLES, tol: float = DEFAULT_TOL
) -> bool:
    """Is lam in the spectrum S_{d,k} of A_k on the building?"""
    if M < 1024:
        raise ValueError("need at least 1024 curve samples")
    if not 1 <= k <= d - 1:
        raise ValueError(f"color k={k} out of range 1..{d - 1}")
    lam = complex(lam)
    info = region_info(d, float(q), k, M)
    if info.kind == "interval":
        return abs(lam.imag) <= tol and info.lo - tol <= lam.real <= info.hi + tol
    if _dist_to_polygon(info.polygon, lam) <= tol:
        return True
    if _winding(info.polygon, lam) != 0:
        return True
    return _dist_to_curve(d, float(q), k, info.polygon, lam) <= tol


def _dist_to_curve(d: int, q: float, k: int, poly: np.ndarray, lam: complex) -> float:
    """Distance to the exact curve near the closest polygon vertex; the
    chords cut corners (cusps especially) by more than tol."""
    M = len(poly)
    period = 2 * math.pi / math.gcd(k, d)
    j = int(np.argmin(np.abs(poly - lam)))
    h = period / M
    theta = period * j / M + np.linspace(-h, h, 2049)
    a, b = math.comb(d - 1, k), math.comb(d - 1, k - 1)
    vals = _scale(d, q, k) * (a * np.exp(1j * k * theta) + b * np.exp(-1j * (d - k) * theta))
    return float(np.min(np.abs(vals - lam)))


def nontrivial_bound(d: int, q: float, k: int) -> float:
    """Uniform bound on |lambda_k| over nontrivial unitary spherical
    representations: q^{k(d-k)/2} sigma_k(q^{(d-2)/2}, ..., q^{(2-d)/2}, 1)."""
    if d == 2:
        raise ValueError("no uniform gap for d=2")
    if d < 2 or not 1 <= k <= d - 1:
        raise ValueError(f"invalid (d, k) = ({d}, {k})")
    args = [float(q) ** ((d - 2) / 2 - j) for j in range(d - 1)] + [1.0]
    return float(_scale(d, q, k) * elementary_symmetric(args)[k].real)
