"""Truncated-Fock brute-force oracle.

Builds the two closed-form state classes as explicit density matrices on a
two-mode Fock space with per-mode dimension d (basis index k1*d + k2) and
evaluates Chernoff traces and error probabilities by dense linear algebra.
Everything here is deliberately independent of the covariance-matrix code
paths it is used to validate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

TRUNC_TOL = 1e-6
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class FockOperator:
    """Dense Hermitian operator on the truncated two-mode Fock space.

    ``deficit`` is the trace lost to the cutoff (1 - Tr rho for a density
    matrix built from an infinite-dimensional target).
    """

    matrix: np.ndarray
    cutoff: int
    deficit: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d2 = self.cutoff * self.cutoff
        if m.shape != (d2, d2):
            raise ValueError(f"matrix shape {m.shape} does not match cutoff {self.cutoff}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL * max(1.0, np.max(np.abs(m))):
            raise ValueError("operator is not Hermitian")
        object.__setattr__(self, "matrix", 0.5 * (m + m.conj().T))

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))


def annihilation(dim: int) -> np.ndarray:
    """Single-mode annihilation operator truncated to ``dim`` levels."""
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def mode_operators(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Two-mode annihilation operators (a on the first mode, b on the second)."""
    a1 = annihilation(cutoff)
    eye = np.eye(cutoff)
    return np.kron(a1, eye), np.kron(eye, a1)


def occupations(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Occupation numbers (k1, k2) of each basis state."""
    k = np.arange(cutoff)
    return np.repeat(k, cutoff), np.tile(k, cutoff)


def _thermal_weights(nu: float, cutoff: int) -> np.ndarray:
    if nu < 1.0:
        raise ValueError(f"thermal symplectic eigenvalue must be >= 1, got {nu}")
    nbar = 0.5 * (nu - 1.0)
    if nbar == 0.0:
        w = np.zeros(cutoff)
        w[0] = 1.0
        return w
    ratio = nbar / (nbar + 1.0)
    return ratio ** np.arange(cutoff) / (nbar + 1.0)


def build_thermal(nu1: float, nu2: float, cutoff: int) -> FockOperator:
    """Product of two thermal states with geometric number distributions
    p_k = nbar^k / (nbar+1)^(k+1), nbar = (nu - 1)/2.

    The raw truncated weights are kept (no renormalization); the missing
    tail is reported in ``deficit``.
    """
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    w1 = _thermal_weights(nu1, cutoff)
    w2 = _thermal_weights(nu2, cutoff)
    diag = np.kron(w1, w2)
    deficit = 1.0 - float(np.sum(diag))
    op = FockOperator(matrix=np.diag(diag.astype(complex)), cutoff=cutoff, deficit=deficit)
    if deficit > TRUNC_TOL:
        warnings.warn(
            f"thermal truncation deficit {deficit:.3e} exceeds {TRUNC_TOL:.0e} "
            f"at cutoff {cutoff}",
            stacklevel=2,
        )
    return op


def boundary_weight(op: FockOperator) -> float:
    """Population of the top Fock shell (either mode at occupation d-1) — the
    standard proxy for how hard a state presses against the cutoff."""
    k1, k2 = occupations(op.cutoff)
    diag = np.real(np.diag(op.matrix))
    edge = (k1 == op.cutoff - 1) | (k2 == op.cutoff - 1)
    return float(np.sum(diag[edge]))


def truncation_deficit(op: FockOperator) -> float:
    """Trace lost to the cutoff plus the population sitting on its edge."""
    return op.deficit + boundary_weight(op)


def _conjugate(op: FockOperator, unitary: np.ndarray) -> FockOperator:
    m = unitary @ op.matrix @ unitary.conj().T
    m = 0.5 * (m + m.conj().T)
    deficit = op.deficit + (op.trace - float(np.real(np.trace(m))))
    return FockOperator(matrix=m, cutoff=op.cutoff, deficit=deficit)


def apply_two_mode_squeeze(op: FockOperator, r: float) -> FockOperator:
    """Conjugate by exp(r (a'b' - a b)).

    The truncated generator is real antisymmetric, so its exponential is
    orthogonal and the trace is preserved; leakage shows up as population on
    the top shell and triggers a warning when it exceeds the truncation
    tolerance.
    """
    a, b = mode_operators(op.cutoff)
    gen = r * (a.T @ b.T - a @ b)
    out = _conjugate(op, expm(gen.real))
    leak = boundary_weight(out)
    if leak > TRUNC_TOL:
        warnings.warn(
            f"squeeze leakage {leak:.3e} exceeds {TRUNC_TOL:.0e} at cutoff {op.cutoff}",
            stacklevel=2,
        )
    return out


def apply_beam_splitter(op: FockOperator, phi: float) -> FockOperator:
    """Conjugate by exp(-phi (a'b - b'a)); conserves total photon number
    exactly, including under truncation."""
    a, b = mode_operators(op.cutoff)
    gen = -phi * (a.T @ b - b.T @ a)
    return _conjugate(op, expm(gen.real))


def apply_local_phase(op: FockOperator, lam: float) -> FockOperator:
    """Conjugate by the phase rotation exp(i lam k1) on the first mode."""
    k1, _ = occupations(op.cutoff)
    phases = np.exp(1j * lam * k1)
    m = op.matrix * np.outer(phases, phases.conj())
    return FockOperator(matrix=m, cutoff=op.cutoff, deficit=op.deficit)


def mean_photons(op: FockOperator) -> float:
    k1, k2 = occupations(op.cutoff)
    return float(np.real(np.diag(op.matrix)) @ (k1 + k2))


def _clipped_spectrum(op: FockOperator) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition with negatives clipped to zero and the spectrum
    renormalized to unit trace."""
    evals, evecs = np.linalg.eigh(op.matrix)
    evals = np.clip(evals, 0.0, None)
    total = float(np.sum(evals))
    if total <= 0.0:
        raise ValueError("operator has no positive spectral weight")
    return evals / total, evecs


def chernoff_trace(rho: FockOperator, sigma: FockOperator, s: float) -> float:
    """Tr[rho^s sigma^(1-s)] for density matrices, via eigendecomposition."""
    if not 0.0 < s < 1.0:
        raise ValueError(f"exponent must lie in (0, 1), got {s}")
    wr, vr = _clipped_spectrum(rho)
    ws, vs = _clipped_spectrum(sigma)
    overlap = np.abs(vr.conj().T @ vs) ** 2
    return float(wr**s @ overlap @ ws ** (1.0 - s))


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def qcb_brute(rho: FockOperator, sigma: FockOperator, s_tol: float = 1e-8) -> tuple[float, float]:
    """min over s in [0, 1] of the Chernoff trace, by golden section.

    Both spectra and the eigenbasis overlap matrix are computed once, so each
    golden-section step costs only two vector-matrix products.
    """
    wr, vr = _clipped_spectrum(rho)
    ws, vs = _clipped_spectrum(sigma)
    overlap = np.abs(vr.conj().T @ vs) ** 2

    def f(s: float) -> float:
        return float(wr**s @ overlap @ ws ** (1.0 - s))

    a, b = 0.0, 1.0
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > s_tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    s_star = 0.5 * (a + b)
    return f(s_star), s_star


def single_copy_error(rho: FockOperator, sigma: FockOperator) -> float:
    """Minimum error probability for one copy with equal priors:
    (1 - ||rho - sigma||_1) / 2."""
    wr, vr = _clipped_spectrum(rho)
    ws, vs = _clipped_spectrum(sigma)
    diff = (vr * wr) @ vr.conj().T - (vs * ws) @ vs.conj().T
    trace_norm = float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    return 0.5 * (1.0 - trace_norm)


def build_class_state(kind: str, nu1: float, nu2: float, param: float, cutoff: int) -> FockOperator:
    """Thermal product pushed through the class symplectic: squeezer for
    "squeezed", beam splitter for "linear_mixed"."""
    op = build_thermal(nu1, nu2, cutoff)
    if kind == "squeezed":
        return apply_two_mode_squeeze(op, param)
    if kind == "linear_mixed":
        return apply_beam_splitter(op, param)
    raise ValueError(f"unknown state class {kind!r}")
