"""Gaussian discriminating strength for two-mode states.

The measure is 1 minus the worst-case Chernoff bound between a state and its
image under a local unitary drawn from the conjugated phase rotations
U_A(theta, x) = R(theta) S1(x) R(lambda) S1(-x) R(-theta).  Displacements can
be dropped from the optimization: they only increase the distinguishability,
so the worst case always sits at zero displacement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ._backend import kernels
from .chernoff import lambda_fn
from .errors import InvalidLambdaError
from .symplectic import (
    LINEAR_MIXED,
    SQUEEZED,
    GaussianState,
    TwoModeClassState,
    require_physical,
    williamson,
    wrap_angle,
)

LAMBDA_EPS = 1e-9
CLOSED_FORM = "closed_form"
NUMERIC = "numeric"

GRID_THETAS = 64
GRID_XS = 33
X_MAX_DEFAULT = 5.0
SIMPLEX_TOL = 1e-7


def validate_lambda(lam: float) -> float:
    """Reject rotation angles within 1e-9 of an integer multiple of 2*pi."""
    lam = float(lam)
    frac = lam % (2.0 * math.pi)
    if min(frac, 2.0 * math.pi - frac) <= LAMBDA_EPS:
        raise InvalidLambdaError(
            f"rotation angle {lam} is trivial: it differs from a multiple of 2*pi "
            f"by less than {LAMBDA_EPS}"
        )
    return lam


@dataclass(frozen=True)
class GdsResult:
    value: float
    theta_star: float
    x_star: float
    s_star: float
    method: str


def _a_plus_minus(nu1: float, nu2: float) -> tuple[float, float]:
    l1 = lambda_fn(0.5, nu1)
    l2 = lambda_fn(0.5, nu2)
    return 0.5 * (l1 + l2), 0.5 * (l1 - l2)


def gds_closed_form(spec: TwoModeClassState, lam: float) -> GdsResult:
    """Closed-form discriminating strength for the two thermal-plus-symplectic
    state classes.

    With A_pm = (Lambda_1/2(nu1) +- Lambda_1/2(nu2)) / 2 and w = sin^2(lam/2):

        squeezed:      sinh^2(2r) w / ([1 - (A-/A+)^2] + sinh^2(2r) w)
        linear mixed:  sin^2(2phi) w / ([(A+/A-)^2 - 1] + sin^2(2phi) w)

    Symmetric linearly mixed states (A- = 0) carry no correlations and
    return 0 directly.
    """
    lam = validate_lambda(lam)
    w = math.sin(0.5 * lam) ** 2
    a_plus, a_minus = _a_plus_minus(spec.nu1, spec.nu2)
    if spec.kind == SQUEEZED:
        s2 = math.sinh(2.0 * spec.param) ** 2
        value = s2 * w / ((1.0 - (a_minus / a_plus) ** 2) + s2 * w)
    else:
        if abs(a_minus) < 1e-12:
            return GdsResult(value=0.0, theta_star=0.0, x_star=0.0, s_star=0.5, method=CLOSED_FORM)
        s2 = math.sin(2.0 * spec.param) ** 2
        value = s2 * w / (((a_plus / a_minus) ** 2 - 1.0) + s2 * w)
    return GdsResult(value=value, theta_star=0.0, x_star=0.0, s_star=0.5, method=CLOSED_FORM)


def gds_symmetric_standard(a: float, c: float, kind: str, lam: float) -> float:
    """Discriminating strength of a symmetric (a = b) standard-form state.

        squeezed (c = -d):      c^2 w / (a^2 - c^2 (1 - w))
        linear mixed (c = d):   4 c^2 w / ([sqrt((a+c)^2-1) + sqrt((a-c)^2-1)]^2
                                           - 4 c^2 (1 - w))

    with w = sin^2(lam/2).
    """
    lam = validate_lambda(lam)
    from .symplectic import TwoModeStandardForm, check_physical

    d = -c if kind == SQUEEZED else c
    state = GaussianState(gamma=TwoModeStandardForm(a=a, b=a, c=c, d=d).covariance())
    ok, diag = check_physical(state)
    if not ok:
        from .errors import UnphysicalStateError

        raise UnphysicalStateError(f"(a, c) = ({a}, {c}) is unphysical (min eig {diag:.3e})")
    w = math.sin(0.5 * lam) ** 2
    cos2 = 1.0 - w
    if kind == SQUEEZED:
        return c * c * w / (a * a - c * c * cos2)
    root = math.sqrt(max((a + c) ** 2 - 1.0, 0.0)) + math.sqrt(max((a - c) ** 2 - 1.0, 0.0))
    return 4.0 * c * c * w / (root * root - 4.0 * c * c * cos2)


def f_half(spec: TwoModeClassState, lam: float, theta: float = 0.0, x: float = 0.0) -> float:
    """Determinant entering the s = 1/2 Chernoff quotient, in closed form.

    Independent of theta; ``theta`` is accepted for interface symmetry with
    the numeric objective.
    """
    del theta
    a_plus, a_minus = _a_plus_minus(spec.nu1, spec.nu2)
    ap2, am2 = a_plus * a_plus, a_minus * a_minus
    w = math.sin(0.5 * lam) ** 2
    if spec.kind == SQUEEZED:
        s_term = ap2 * math.sinh(2.0 * spec.param) ** 2
        c_term = ap2 * math.cosh(2.0 * spec.param) ** 2 - am2
    else:
        s_term = am2 * math.sin(2.0 * spec.param) ** 2
        c_term = ap2 - am2 * math.cos(2.0 * spec.param) ** 2
    first = 4.0 * (ap2 - am2) + 4.0 * w * s_term
    return first * first + 16.0 * math.sinh(2.0 * x) ** 2 * math.sin(lam) ** 2 * (ap2 - am2) * c_term


def _refine(objective, theta0: float, x0: float, x_max: float):
    res = minimize(
        objective,
        np.array([theta0, x0]),
        method="Nelder-Mead",
        options={"xatol": SIMPLEX_TOL, "fatol": 1e-15, "maxiter": 800, "maxfev": 1600},
    )
    theta, x = res.x
    return float(theta), float(min(max(x, -x_max), x_max)), float(-res.fun)


def gds_numeric(state: GaussianState, lam: float, x_max: float = X_MAX_DEFAULT) -> GdsResult:
    """Discriminating strength of an arbitrary physical two-mode state by
    direct optimization over the local unitaries U_A(theta, x).

    A 64 x 33 coarse grid over theta in [0, 2*pi) and x in [-x_max, x_max]
    seeds Nelder-Mead refinements from the three best grid points; every
    objective evaluation runs the convex s-minimization.  Ties at the
    optimum are broken toward the smallest |x|, then the smallest theta.
    """
    lam = validate_lambda(lam)
    if state.n_modes != 2:
        raise ValueError("numeric optimization is implemented for two-mode states")
    require_physical(state)

    decomp = williamson(state)
    p1 = decomp.s[:, :2] @ decomp.s[:, :2].T
    p2 = decomp.s[:, 2:] @ decomp.s[:, 2:].T
    nu1, nu2 = float(decomp.nu[0]), float(decomp.nu[1])

    thetas = np.linspace(0.0, 2.0 * math.pi, GRID_THETAS, endpoint=False)
    xs = np.linspace(-x_max, x_max, GRID_XS)
    qgrid = kernels.scan_theta_x(p1, p2, nu1, nu2, lam, thetas, xs)

    flat = [
        (float(qgrid[i, j]), float(thetas[i]), float(xs[j]))
        for i in range(GRID_THETAS)
        for j in range(GRID_XS)
    ]
    flat.sort(key=lambda t: (-t[0], abs(t[2]), t[1]))
    seeds = flat[:3]

    def objective(point):
        theta, x = point
        x = min(max(x, -x_max), x_max)
        ua = _local_unitary_matrix(theta, x, lam)
        q, _ = kernels.min_q_over_s(p1, p2, nu1, nu2, ua)
        return -q

    candidates = [(q, theta, x) for q, theta, x in seeds]
    for _, theta0, x0 in seeds:
        theta, x, q = _refine(objective, theta0, x0, x_max)
        candidates.append((q, wrap_angle(theta), x))

    best = max(candidates, key=lambda t: (t[0], -abs(t[2]), -wrap_angle(t[1])))
    q_best, theta_star, x_star = best
    _, s_star = kernels.min_q_over_s(
        p1, p2, nu1, nu2, _local_unitary_matrix(theta_star, x_star, lam)
    )
    value = min(max(1.0 - q_best, 0.0), 1.0)
    return GdsResult(
        value=value,
        theta_star=wrap_angle(theta_star),
        x_star=float(x_star),
        s_star=float(s_star),
        method=NUMERIC,
    )


def _local_unitary_matrix(theta: float, x: float, lam: float) -> np.ndarray:
    """U_A(theta, x) = R(theta) S1(x) R(lam) S1(-x) R(-theta)."""
    from .symplectic import rotation_matrix, single_mode_squeeze

    return (
        rotation_matrix(theta)
        @ single_mode_squeeze(x)
        @ rotation_matrix(lam)
        @ single_mode_squeeze(-x)
        @ rotation_matrix(-theta)
    )


def theorem1_predicate(
    state: GaussianState, lam: float = math.pi, partition: tuple[int, int] = (1, 1)
) -> bool:
    """True iff the state is a product across the partition, i.e. the
    off-diagonal covariance block vanishes.  This is exactly the zero set of
    the discriminating strength for any valid rotation angle."""
    validate_lambda(lam)
    n_a = partition[0]
    g = state.gamma
    off = g[: 2 * n_a, 2 * n_a :]
    scale = max(1.0, float(np.max(np.abs(g))))
    return float(np.max(np.abs(off))) <= 1e-10 * scale
