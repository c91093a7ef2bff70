"""Quantum Chernoff bound between a Gaussian state and its image under a
local Gaussian unitary.

Fractional powers of a Gaussian state are again Gaussian: rho^s keeps the
Williamson symplectic matrix and replaces each symplectic eigenvalue nu by
Lambda_s(nu), with normalization Tr[rho^s] = prod_j G_s(nu_j).  The bound is
then Q = min_s Q_s exp(-Delta_s) where Q_s involves only a determinant and
Delta_s the displacement mismatch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnphysicalStateError
from .symplectic import (
    GaussianState,
    GaussianUnitary,
    WilliamsonDecomposition,
    extend_local,
    require_physical,
    williamson,
)

S_LO = 1e-9
S_HI = 1.0 - 1e-9
S_TOL = 1e-9
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def lambda_fn(s: float, x: float) -> float:
    """((x+1)^s + (x-1)^s) / ((x+1)^s - (x-1)^s) for x >= 1, 0 < s <= 1.

    At x = 1 the analytic limit 1 is returned exactly, so pure modes never
    produce 0/0.
    """
    if s <= 0.0 or s > 1.0:
        raise ValueError(f"exponent s must lie in (0, 1], got {s}")
    if x < 1.0:
        if x < 1.0 - 1e-12:
            raise ValueError(f"symplectic eigenvalue must be >= 1, got {x}")
        x = 1.0
    if x == 1.0:
        return 1.0
    up = (x + 1.0) ** s
    dn = (x - 1.0) ** s
    return (up + dn) / (up - dn)


def g_fn(s: float, x: float) -> float:
    """Normalization factor 2^s / ((x+1)^s - (x-1)^s); equals 1 at x = 1."""
    if s <= 0.0 or s > 1.0:
        raise ValueError(f"exponent s must lie in (0, 1], got {s}")
    if x < 1.0:
        if x < 1.0 - 1e-12:
            raise ValueError(f"symplectic eigenvalue must be >= 1, got {x}")
        x = 1.0
    if x == 1.0:
        return 1.0
    return 2.0**s / ((x + 1.0) ** s - (x - 1.0) ** s)


@dataclass(frozen=True)
class SExponentState:
    """Moments of rho^s: covariance ``gamma_s`` and the trace normalization
    ``norm_factor`` = Tr[rho^s]."""

    base: WilliamsonDecomposition
    s: float
    gamma_s: np.ndarray
    norm_factor: float


def exponentiate(decomp: WilliamsonDecomposition, s: float) -> SExponentState:
    """Covariance matrix and normalization of rho^s from the Williamson data."""
    lam = np.array([lambda_fn(s, nu) for nu in decomp.nu])
    gamma_s = decomp.s @ np.diag(np.repeat(lam, 2)) @ decomp.s.T
    norm = float(np.prod([g_fn(s, nu) for nu in decomp.nu]))
    return SExponentState(base=decomp, s=s, gamma_s=0.5 * (gamma_s + gamma_s.T), norm_factor=norm)


def golden_section_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section minimization of a unimodal function on [lo, hi].

    Returns (x_min, f(x_min)) once the bracket is narrower than ``tol``.
    """
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _newton_polish_log(f, x: float, lo: float, hi: float, h: float = 1e-6) -> tuple[float, float]:
    """One Newton step on log f using central differences; kept only if it improves."""
    fx = f(x)
    x0 = min(max(x, lo + h), hi - h)
    gp = math.log(f(x0 + h))
    gm = math.log(f(x0 - h))
    g0 = math.log(f(x0))
    d2 = (gp - 2.0 * g0 + gm) / (h * h)
    if d2 <= 0.0 or not math.isfinite(d2):
        return x, fx
    d1 = (gp - gm) / (2.0 * h)
    x1 = min(max(x0 - d1 / d2, lo), hi)
    f1 = f(x1)
    if f1 <= fx:
        return x1, f1
    return x, fx


def qcb_local(
    state: GaussianState,
    u_local: GaussianUnitary,
    partition: tuple[int, int] | None = None,
) -> tuple[float, float]:
    """Quantum Chernoff bound between ``state`` and its image under a unitary
    acting on the first ``partition[0]`` modes.

    Returns (q, s_star) with q = min_s Q_s exp(-Delta_s).  Determinants are
    accumulated in log space so large thermal occupations cannot overflow.
    The s-minimum is located by golden section on [1e-9, 1 - 1e-9] followed
    by one Newton polish of the log-objective.
    """
    require_physical(state)
    n = state.n_modes
    n_a = u_local.n_modes
    if partition is None:
        partition = (n_a, n - n_a)
    if partition[0] != n_a or partition[0] + partition[1] != n:
        raise ValueError(f"partition {partition} inconsistent with unitary/state sizes")

    decomp = williamson(state)
    u_full = extend_local(u_local, partition[1])
    ut = u_full.u
    delta = (ut - np.eye(2 * n)) @ state.xi + u_full.eta
    has_delta = bool(np.any(np.abs(delta) > 0.0))

    proj = [decomp.s[:, 2 * j : 2 * j + 2] for j in range(n)]
    base = [p @ p.T for p in proj]
    conj = [ut @ m @ ut.T for m in base]
    nu = decomp.nu

    def log_objective(s: float) -> float:
        lam_s = [lambda_fn(s, v) for v in nu]
        lam_1s = [lambda_fn(1.0 - s, v) for v in nu]
        m = np.zeros((2 * n, 2 * n))
        for j in range(n):
            m += lam_s[j] * base[j] + lam_1s[j] * conj[j]
        sign, logdet = np.linalg.slogdet(m)
        if sign <= 0.0:  # pragma: no cover - impossible for physical states
            raise UnphysicalStateError("exponentiated covariance sum is not positive definite")
        val = sum(math.log(a + b) for a, b in zip(lam_s, lam_1s)) - 0.5 * logdet
        if has_delta:
            val -= float(delta @ np.linalg.solve(m, delta))
        return val

    objective = lambda s: math.exp(log_objective(s))
    s_star, q = golden_section_min(objective, S_LO, S_HI, S_TOL)
    s_star, q = _newton_polish_log(objective, s_star, S_LO, S_HI)
    return min(q, 1.0), s_star


def product_gaussian_moments(
    state1: GaussianState, state2: GaussianState
) -> tuple[np.ndarray, np.ndarray]:
    """Characteristic-function moments of the (non-Hermitian) operator
    product rho1 rho2:

        Gamma12 = -i Omega + (Gamma2 + i Omega)(Gamma1 + Gamma2)^-1 (Gamma1 + i Omega)
        xi12    = xi1 - (Gamma1 - i Omega)(Gamma1 + Gamma2)^-1 (xi1 - xi2)
    """
    if state1.n_modes != state2.n_modes:
        raise ValueError("states must have the same number of modes")
    n = state1.n_modes
    from .symplectic import make_symplectic_form

    omega = make_symplectic_form(n)
    g1, g2 = state1.gamma, state2.gamma
    total = g1 + g2
    try:
        inv_total = np.linalg.inv(total)
    except np.linalg.LinAlgError as exc:
        raise ValueError("Gamma1 + Gamma2 is singular") from exc
    gamma12 = -1j * omega + (g2 + 1j * omega) @ inv_total @ (g1 + 1j * omega)
    xi12 = state1.xi.astype(complex) - (g1 - 1j * omega) @ inv_total @ (state1.xi - state2.xi)
    return gamma12, xi12
