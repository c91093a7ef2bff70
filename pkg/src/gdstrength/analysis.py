"""Entanglement, photon accounting and bound checks for the two state classes.

Logarithmic negativity uses the natural logarithm throughout; this is the
base for which the pure two-mode squeezed vacuum satisfies E(1, 1, r) = 2|r|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .strength import gds_closed_form, validate_lambda
from .symplectic import (
    LINEAR_MIXED,
    SQUEEZED,
    GaussianState,
    TwoModeClassState,
    class_state_covariance,
    require_physical,
)


def log_negativity(state: GaussianState) -> float:
    """max{-log(nu_minus_pt), 0} with nu_minus_pt the smallest symplectic
    eigenvalue of the partially transposed two-mode state, computed from the
    invariants Delta_pt = det(Gamma_A) + det(Gamma_B) - 2 det(Gamma_OFF)."""
    if state.n_modes != 2:
        raise ValueError("logarithmic negativity is implemented for two-mode states")
    require_physical(state)
    g = state.gamma
    det_a = float(np.linalg.det(g[:2, :2]))
    det_b = float(np.linalg.det(g[2:, 2:]))
    det_off = float(np.linalg.det(g[:2, 2:]))
    det_g = float(np.linalg.det(g))
    delta_pt = det_a + det_b - 2.0 * det_off
    radicand = max(delta_pt * delta_pt - 4.0 * det_g, 0.0)
    nu_minus_sq = 0.5 * (delta_pt - math.sqrt(radicand))
    if nu_minus_sq <= 0.0:  # pragma: no cover - impossible for physical states
        raise ValueError("partially transposed state has no positive symplectic eigenvalue")
    return max(-0.5 * math.log(nu_minus_sq), 0.0)


def log_negativity_explicit(spec: TwoModeClassState) -> float:
    """Closed-form logarithmic negativity of a squeezed thermal state:

        E = max{0, -1/2 log[cosh(4r) x+^2 + x-^2
                            - sqrt((cosh(4r) x+^2 + x-^2)^2 - nu1^2 nu2^2)]}

    with x_pm = (nu1 +- nu2)/2.
    """
    if spec.kind != SQUEEZED:
        raise ValueError("explicit formula applies to the squeezed class")
    x_plus = 0.5 * (spec.nu1 + spec.nu2)
    x_minus = 0.5 * (spec.nu1 - spec.nu2)
    big = math.cosh(4.0 * spec.param) * x_plus**2 + x_minus**2
    radicand = max(big * big - (spec.nu1 * spec.nu2) ** 2, 0.0)
    inner = big - math.sqrt(radicand)
    return max(-0.5 * math.log(inner), 0.0)


def photon_number(spec: TwoModeClassState) -> float:
    """Total mean photon number.  Beam splitters leave it at the thermal
    value (nu1 + nu2)/2 - 1; two-mode squeezing scales it by cosh(2r)."""
    thermal = 0.5 * (spec.nu1 + spec.nu2)
    if spec.kind == LINEAR_MIXED:
        return thermal - 1.0
    return math.cosh(2.0 * spec.param) * thermal - 1.0


def optimal_lm_gds_at_photon_budget(n_photons: float, lam: float) -> float:
    """Largest discriminating strength reachable by linearly mixing thermal
    states with a fixed photon budget N: (N - N cos(lam)) / (2 + N - N cos(lam)),
    realized by (nu1, nu2, phi) = (2N + 1, 1, pi/4)."""
    validate_lambda(lam)
    if n_photons < 0.0:
        raise ValueError(f"photon number must be >= 0, got {n_photons}")
    spread = n_photons * (1.0 - math.cos(lam))
    return spread / (2.0 + spread)


def _pure_gds(r: float, lam: float) -> float:
    w = math.sin(0.5 * lam) ** 2
    s2 = math.sinh(2.0 * r) ** 2
    return s2 * w / (1.0 + s2 * w)


def _invert_pure_gds(delta: float, lam: float, tol: float = 1e-10) -> float:
    """Squeezing r >= 0 with GDS(1, 1, r) = delta, by bisection on the
    monotone pure-state curve."""
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"target value must lie in [0, 1), got {delta}")
    if delta == 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    while _pure_gds(hi, lam) < delta and hi < 512.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _pure_gds(mid, lam) < delta:
            lo = mid
        else:
            hi = mid
        if _pure_gds(hi, lam) - _pure_gds(lo, lam) <= tol:
            break
    return 0.5 * (lo + hi)


def proposition1_witness(
    entanglement: float, delta: float, lam: float
) -> tuple[float, float] | None:
    """Symmetric state (nu, r) with the given logarithmic negativity and
    discriminating strength, or None when (E, delta) is infeasible.

    Feasible iff GDS(1, 1, E/2) <= delta < 1: the squeezing follows from
    delta alone (symmetric-state GDS does not depend on nu), and
    nu = exp(2r - E) must come out >= 1.
    """
    validate_lambda(lam)
    if not 0.0 <= delta < 1.0 or entanglement < 0.0:
        return None
    r = _invert_pure_gds(delta, lam)
    nu = math.exp(2.0 * r - entanglement)
    if nu < 1.0 - 1e-12:
        return None
    return max(nu, 1.0), r


def proposition2_witness(
    n_photons: float, delta: float, lam: float
) -> tuple[float, float] | None:
    """Symmetric state (nu, r) with the given photon number and
    discriminating strength, or None when infeasible.

    Feasible iff 0 <= delta <= GDS at the pure state with the same photon
    number; nu = (N + 1)/cosh(2r) must come out >= 1.
    """
    validate_lambda(lam)
    if not 0.0 <= delta < 1.0 or n_photons < 0.0:
        return None
    r = _invert_pure_gds(delta, lam)
    nu = (n_photons + 1.0) / math.cosh(2.0 * r)
    if nu < 1.0 - 1e-12:
        return None
    return max(nu, 1.0), r


def check_proposition1(
    spec: TwoModeClassState, lam: float, tol: float = 1e-9
) -> tuple[bool, tuple[float, float] | None]:
    """At fixed entanglement the discriminating strength is minimized on pure
    states.  Returns (bound holds, symmetric witness reproducing this state's
    (E, GDS) pair)."""
    if spec.kind != SQUEEZED:
        raise ValueError("the bound applies to the squeezed class")
    value = gds_closed_form(spec, lam).value
    ent = log_negativity_explicit(spec)
    bound = _pure_gds(0.5 * ent, lam)
    return value >= bound - tol, proposition1_witness(ent, value, lam)


def check_proposition2(
    spec: TwoModeClassState, lam: float, tol: float = 1e-9
) -> tuple[bool, tuple[float, float] | None]:
    """At fixed photon number the discriminating strength is maximized on
    pure states.  Returns (bound holds, symmetric witness reproducing this
    state's (N, GDS) pair)."""
    if spec.kind != SQUEEZED:
        raise ValueError("the bound applies to the squeezed class")
    value = gds_closed_form(spec, lam).value
    n = photon_number(spec)
    r_pure = math.asinh(math.sqrt(0.5 * n))
    bound = _pure_gds(r_pure, lam)
    return value <= bound + tol, proposition2_witness(n, value, lam)


def heterodyne_condition(state: GaussianState, beta) -> GaussianState:
    """State left on subsystem A after projecting B onto the coherent state
    centered at ``beta`` (heterodyne detection):

        Gamma_A|b = Gamma_A - Gamma_OFF (Gamma_B + 1)^-1 Gamma_OFF^T
        xi_A|b    = xi_A - Gamma_OFF (Gamma_B + 1)^-1 (xi_B - beta)

    The conditional covariance does not depend on the outcome.
    """
    require_physical(state)
    n = state.n_modes
    beta = np.asarray(beta, dtype=float).reshape(-1)
    n_b = beta.shape[0] // 2
    n_a = n - n_b
    if n_a < 1:
        raise ValueError("outcome vector covers all modes; nothing is left to condition")
    g = state.gamma
    ga = g[: 2 * n_a, : 2 * n_a]
    gb = g[2 * n_a :, 2 * n_a :]
    off = g[: 2 * n_a, 2 * n_a :]
    kernel = np.linalg.solve(gb + np.eye(2 * n_b), off.T).T
    gamma_cond = ga - kernel @ off.T
    xi_cond = state.xi[: 2 * n_a] - kernel @ (state.xi[2 * n_a :] - beta)
    return GaussianState(gamma=0.5 * (gamma_cond + gamma_cond.T), xi=xi_cond)


def cq_witness(state: GaussianState, partition: tuple[int, int] | None = None):
    """Decide whether the state is classical-quantum.

    For Gaussian states CQ is equivalent to being fully product, so the test
    is Gamma_OFF = 0.  When correlations exist the returned witness is a pair
    of heterodyne outcomes (0, beta0) whose conditional states on A carry
    different displacements and therefore cannot commute.

    Returns:
        (is_cq, witness): witness is None for CQ states, else (beta_zero, beta0).
    """
    require_physical(state)
    n = state.n_modes
    n_a = partition[0] if partition else n // 2
    n_b = n - n_a
    g = state.gamma
    off = g[: 2 * n_a, 2 * n_a :]
    scale = max(1.0, float(np.max(np.abs(g))))
    if float(np.max(np.abs(off))) <= 1e-10 * scale:
        return True, None
    gb = g[2 * n_a :, 2 * n_a :]
    response = np.linalg.solve(gb + np.eye(2 * n_b), off.T).T
    col = int(np.argmax(np.linalg.norm(response, axis=0)))
    beta0 = np.zeros(2 * n_b)
    beta0[col] = 1.0
    return False, (np.zeros(2 * n_b), beta0)


@dataclass(frozen=True)
class SampleRecord:
    spec: TwoModeClassState
    gds: float
    log_neg: float
    photons: float
    seed_index: int


def _record_rng(seed: int, index: int) -> np.random.Generator:
    # counter-based derivation: record i is independent of how many records
    # were drawn before it, so parallel consumers see identical streams
    bg = np.random.Philox(key=np.uint64(seed))
    bg.advance(8 * index)
    return np.random.Generator(bg)


def sample_states(
    count: int,
    kind: str = SQUEEZED,
    nu_range: tuple[float, float] = (1.0, 20.0),
    param_range: tuple[float, float] = (0.0, 5.0),
    symmetric: bool = True,
    seed: int = 0,
    lam: float = math.pi,
) -> Iterator[SampleRecord]:
    """Stream of uniformly sampled class states with their discriminating
    strength, logarithmic negativity and photon number.

    Records are derived from (seed, index) alone, so the stream is
    reproducible regardless of chunking or thread count.
    """
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    if nu_range[0] < 1.0 or nu_range[1] < nu_range[0]:
        raise ValueError(f"invalid thermal range {nu_range}")
    if param_range[1] < param_range[0]:
        raise ValueError(f"invalid parameter range {param_range}")
    validate_lambda(lam)
    for index in range(count):
        rng = _record_rng(seed, index)
        nu1 = rng.uniform(*nu_range)
        nu2 = nu1 if symmetric else rng.uniform(*nu_range)
        param = rng.uniform(*param_range)
        spec = TwoModeClassState(kind=kind, nu1=nu1, nu2=nu2, param=param)
        if kind == SQUEEZED:
            ent = log_negativity_explicit(spec)
        else:
            ent = log_negativity(class_state_covariance(spec))
        yield SampleRecord(
            spec=spec,
            gds=gds_closed_form(spec, lam).value,
            log_neg=ent,
            photons=photon_number(spec),
            seed_index=index,
        )
