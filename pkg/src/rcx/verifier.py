"""Ramanujan verification for finite colored complexes.

Pipeline: integer operator matrices A_k with exact structural checks, a
joint eigenbasis of the commuting normal family, matching against the
trivial eigenvalue tuples, then membership in S_d (Ramanujan) and in each
S_{d,k} (pseudo-Ramanujan).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .complexes import ColoredComplex
from .spectrum import (
    DEFAULT_CURVE_SAMPLES,
    DEFAULT_TOL,
    EigenTuple,
    in_Sd,
    in_Sdk,
    trivial_tuples,
)

log = logging.getLogger(__name__)

__all__ = [
    "OperatorFamily",
    "VerifierReport",
    "SpectralClass",
    "DiagonalizationError",
    "EXIT_RAMANUJAN",
    "EXIT_PSEUDO",
    "EXIT_NEITHER",
    "EXIT_STRUCTURAL",
    "build_operators",
    "joint_spectrum",
    "classify",
    "verify",
    "verify_complex",
]

EXIT_RAMANUJAN, EXIT_PSEUDO, EXIT_NEITHER, EXIT_STRUCTURAL = 0, 1, 2, 3
RESIDUAL_REL = 1e-8
MAX_RETRIES = 5


class DiagonalizationError(RuntimeError):
    pass


class SpectralClass:
    TRIVIAL = "trivial"
    IN_SD = "nontrivial-in-Sd"
    OUTSIDE = "nontrivial-outside"


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    """Integer matrices A_1..A_{d-1} (index 0 holds A_1) plus exact flags."""

    d: int
    mats: tuple[np.ndarray, ...]
    normal: bool
    pairwise_commuting: bool
    adjoint_paired: bool

    @classmethod
    def from_matrices(cls, mats) -> "OperatorFamily":
        mats = tuple(np.asarray(A) for A in mats)
        d = len(mats) + 1
        exact = all(np.issubdtype(A.dtype, np.integer) for A in mats)

        def same(X, Y):
            return np.array_equal(X, Y) if exact else np.allclose(X, Y, atol=1e-9)

        normal = all(same(A @ A.conj().T, A.conj().T @ A) for A in mats)
        commuting = all(
            same(mats[i] @ mats[j], mats[j] @ mats[i]) for i in range(len(mats)) for j in range(i + 1, len(mats))
        )
        paired = all(same(mats[d - k - 1], mats[k - 1].conj().T) for k in range(1, d))
        return cls(d, mats, normal, commuting, paired)

    @property
    def n(self) -> int:
        return self.mats[0].shape[0] if self.mats else 0

    def flags(self) -> dict:
        return {
            "normal": self.normal,
            "pairwise_commuting": self.pairwise_commuting,
            "adjoint_paired": self.adjoint_paired,
        }

    def structurally_ok(self) -> bool:
        return self.normal and self.pairwise_commuting and self.adjoint_paired


def build_operators(X: ColoredComplex) -> OperatorFamily:
    """A_k[x, y] = multiplicity of the color-k edge x -> y."""
    return OperatorFamily.from_matrices([X.adjacency(k) for k in range(1, X.d)])


def joint_spectrum(
    fam: OperatorFamily, tol: float = RESIDUAL_REL, rng=None
) -> list[EigenTuple]:
    """Simultaneous eigen-tuples of a commuting normal family (n of them,
    with multiplicity).

    The eigenbasis comes from ``eigh`` of the Hermitian combination
    sum_k (c_k A_k + conj(c_k) A_k^*) with random unit c_k; each basis vector
    v gives lambda_k = v^* A_k v and is accepted only if
    ||A_k v - lambda_k v|| <= tol * (1 + ||A_k||) for every k.
    """
    if not (fam.normal and fam.pairwise_commuting):
        raise ValueError("joint_spectrum needs a normal, pairwise commuting family")
    n = fam.n
    if n == 0:
        return []
    rng = np.random.default_rng(0) if rng is None else rng
    mats = [A.astype(complex) for A in fam.mats]
    norms = [float(np.linalg.norm(A, 2)) if A.size else 0.0 for A in mats]
    worst = np.inf
    for attempt in range(MAX_RETRIES + 1):
        c = np.exp(2j * np.pi * rng.random(len(mats))) * (0.5 + rng.random(len(mats)))
        H = np.zeros((n, n), dtype=complex)
        for ck, A in zip(c, mats):
            H += ck * A + np.conj(ck) * A.conj().T
        _, V = np.linalg.eigh(H)
        lam = np.empty((n, len(mats)), dtype=complex)
        res = np.zeros(n)
        for k, A in enumerate(mats):
            AV = A @ V
            lk = np.einsum("ij,ij->j", V.conj(), AV)
            lam[:, k] = lk
            rk = np.linalg.norm(AV - V * lk, axis=0)
            res = np.maximum(res, rk / (1 + norms[k]))
        worst = float(res.max())
        if worst <= tol:
            return [EigenTuple(tuple(complex(x) for x in lam[i]), float(res[i])) for i in range(n)]
        log.debug("joint eigensolve attempt %d: worst residual %.3g", attempt, worst)
    raise DiagonalizationError(f"simultaneous diagonalization failed (worst residual {worst:.3g})")


@dataclass
class TupleClass:
    tuple: EigenTuple
    multiplicity: int
    residual: float
    classification: str
    zeta: complex | None = None
    in_Sdk: list = field(default_factory=list)
    root_deviation: float | None = None


@dataclass
class VerifierReport:
    d: int
    q: int
    n: int
    flags: dict
    entries: list = field(default_factory=list)
    ramanujan: bool = False
    pseudo_ramanujan: bool = False
    structural_failure: bool = False
    worst_offender: TupleClass | None = None
    notes: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        if self.structural_failure:
            return EXIT_STRUCTURAL
        if self.ramanujan:
            return EXIT_RAMANUJAN
        if self.pseudo_ramanujan:
            return EXIT_PSEUDO
        return EXIT_NEITHER

    @property
    def verdict(self) -> str:
        return {
            EXIT_RAMANUJAN: "Ramanujan",
            EXIT_PSEUDO: "pseudo-Ramanujan only",
            EXIT_NEITHER: "not Ramanujan",
            EXIT_STRUCTURAL: "not a building-quotient-like complex",
        }[self.exit_code]

    def to_json(self) -> dict:
        def cpx(z):
            return [float(np.real(z)), float(np.imag(z))]

        def entry(e: TupleClass):
            return {
                "lambda": [cpx(x) for x in e.tuple.values],
                "multiplicity": e.multiplicity,
                "residual": e.residual,
                "class": e.classification,
                "zeta": cpx(e.zeta) if e.zeta is not None else None,
                "in_Sdk": e.in_Sdk,
                "root_deviation": e.root_deviation,
            }

        return {
            "d": self.d,
            "q": self.q,
            "n": self.n,
            "flags": self.flags,
            "verdict": self.verdict,
            "exit_code": self.exit_code,
            "ramanujan": self.ramanujan,
            "pseudo_ramanujan": self.pseudo_ramanujan,
            "worst_offender": entry(self.worst_offender) if self.worst_offender else None,
            "notes": self.notes,
            "spectrum": [entry(e) for e in self.entries],
        }

    def csv_rows(self) -> list[list]:
        header = []
        for k in range(1, self.d):
            header += [f"re{k}", f"im{k}"]
        rows = [header + ["multiplicity", "residual", "class"]]
        for e in self.entries:
            row = []
            for x in e.tuple.values:
                row += [repr(float(np.real(x))), repr(float(np.imag(x)))]
            rows.append(row + [e.multiplicity, repr(e.residual), e.classification])
        return rows


def _group(tuples: list[EigenTuple], tol: float) -> list[tuple[EigenTuple, int, float]]:
    """Merge numerically equal tuples; returns (representative, mult, max residual)."""
    groups: list[list] = []
    for t in sorted(tuples, key=lambda t: tuple((round(x.real, 6), round(x.imag, 6)) for x in t.values)):
        a = t.as_array()
        for g in groups:
            if np.max(np.abs(g[0].as_array() - a)) <= tol * (1 + np.max(np.abs(a))):
                g[1] += 1
                g[2] = max(g[2], t.residual or 0.0)
                break
        else:
            groups.append([t, 1, t.residual or 0.0])
    return [tuple(g) for g in groups]


def classify(
    X: ColoredComplex,
    tuples: list[EigenTuple],
    fam: OperatorFamily | None = None,
    tol: float = DEFAULT_TOL,
    t_index: int = 1,
    treat_trivial_as_nontrivial: bool = False,
    curve_samples: int = DEFAULT_CURVE_SAMPLES,
) -> VerifierReport:
    d, q = X.d, X.q
    fam = fam or build_operators(X)
    report = VerifierReport(d, q, X.n, fam.flags())
    if not fam.structurally_ok():
        report.structural_failure = True
        failed = [k for k, v in fam.flags().items() if not v]
        report.notes.append(f"structural check failed: {', '.join(failed)}")
        return report

    triv = trivial_tuples(d, q, t_index)
    nontrivial_seen = False
    ram = pseudo = True
    worst, worst_dev = None, -1.0
    for rep, mult, resid in _group(tuples, 1e-7):
        a = rep.as_array()
        entry = TupleClass(rep, mult, resid, SpectralClass.OUTSIDE)
        match = None
        if not treat_trivial_as_nontrivial:
            for zeta, tt in triv:
                b = tt.as_array()
                if np.all(np.abs(a - b) <= tol * (1 + np.abs(b))):
                    match = zeta
                    break
        if match is not None:
            entry.classification = SpectralClass.TRIVIAL
            entry.zeta = match
            rep.tags["trivial"] = match
            if match != 1:
                report.notes.append(
                    f"tuple {_fmt(a)} (x{mult}) matched the trivial tuple at zeta={_fmt([match])}; "
                    "this needs [Gamma : Gamma cap PSL_d] < d"
                )
        else:
            nontrivial_seen = True
            verdict = in_Sd(d, q, a, tol)
            entry.root_deviation = verdict.max_modulus_deviation
            entry.in_Sdk = [bool(in_Sdk(d, q, k, a[k - 1], curve_samples, tol)) for k in range(1, d)]
            rep.tags["in_Sd"] = verdict.member
            rep.tags["in_Sdk"] = entry.in_Sdk
            if verdict.member:
                entry.classification = SpectralClass.IN_SD
            else:
                ram = False
                if verdict.max_modulus_deviation > worst_dev:
                    worst, worst_dev = entry, verdict.max_modulus_deviation
            if not all(entry.in_Sdk):
                pseudo = False
        report.entries.append(entry)

    ones = [e for e in report.entries if e.classification == SpectralClass.TRIVIAL and e.zeta == 1]
    comps = X.components()
    if comps > 1:
        report.notes.append(f"disconnected: {comps} components")
    if ones and ones[0].multiplicity > 1 and comps == 1:
        report.notes.append("trivial tuple at zeta=1 has multiplicity > 1 in a connected complex")
    if not nontrivial_seen:
        report.notes.append("no nontrivial spectrum")
    report.ramanujan = ram
    report.pseudo_ramanujan = pseudo or ram
    report.worst_offender = worst
    return report


def _fmt(values) -> str:
    parts = []
    for z in values:
        z = complex(z)
        parts.append(f"{z.real:.6g}" if abs(z.imag) < 1e-12 else f"{z.real:.6g}{z.imag:+.6g}i")
    return "(" + ", ".join(parts) + ")"


def verify_complex(
    X: ColoredComplex,
    tol: float = DEFAULT_TOL,
    t_index: int = 1,
    seed: int = 0,
    treat_trivial_as_nontrivial: bool = False,
) -> VerifierReport:
    fam = build_operators(X)
    if not fam.structurally_ok():
        return classify(X, [], fam, tol, t_index)
    tuples = joint_spectrum(fam, rng=np.random.default_rng(seed))
    return classify(X, tuples, fam, tol, t_index, treat_trivial_as_nontrivial)


def verify(path, tol: float = DEFAULT_TOL, t_index: int = 1, strict: bool = False, seed: int = 0, **kw):
    """Load a .rcx file and verify it. In strict mode a reverse-closure
    violation is reported as a structural failure."""
    from .complexes import RcxFormatError, load

    try:
        X = load(path, closure="strict" if strict else "complete")
    except RcxFormatError as exc:
        if exc.code != "closure":
            raise
        report = VerifierReport(0, 0, 0, {"adjoint_paired": False}, structural_failure=True)
        report.notes.append(str(exc))
        return report
    return verify_complex(X, tol, t_index, seed, **kw)
