"""Covariance-matrix and symplectic-group algebra for multi-mode Gaussian states.

Quadratures are ordered mode by mode, (x1, p1, ..., xn, pn), in dimensionless
units where the vacuum covariance matrix is the identity.  A state is physical
iff Gamma + i*Omega >= 0, with Omega the symplectic form below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import schur

from .errors import DecompositionError, UnphysicalStateError

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10
PHYSICALITY_TOL = 1e-10

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _max_abs(a):
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def mats_close(a, b, tol):
    """Scale-aware matrix equality: tolerance relative to the largest entry,
    with an absolute floor of 1e-12."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(_max_abs(a), _max_abs(b))
    return _max_abs(a - b) <= max(tol * scale, 1e-12)


def make_symplectic_form(n: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form, the direct sum of n copies of
    [[0, 1], [-1, 0]]."""
    if n < 1:
        raise ValueError(f"mode count must be >= 1, got {n}")
    return np.kron(np.eye(n), _J2)


def wrap_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    return float(theta) % (2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """A Gaussian state: real symmetric covariance matrix ``gamma`` (2n x 2n)
    and displacement vector ``xi`` (length 2n).

    Construction checks shape and symmetry only; use :func:`check_physical`
    to test the uncertainty bound (unphysical matrices are representable so
    that diagnostics can be computed on them).
    """

    gamma: np.ndarray
    xi: np.ndarray = None

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2 != 0 or g.shape[0] == 0:
            raise ValueError(f"covariance matrix must be 2n x 2n, got shape {g.shape}")
        if not mats_close(g, g.T, SYMMETRY_TOL):
            raise ValueError("covariance matrix is not symmetric")
        g = 0.5 * (g + g.T)
        xi = self.xi
        if xi is None:
            xi = np.zeros(g.shape[0])
        xi = np.asarray(xi, dtype=float).reshape(-1)
        if xi.shape[0] != g.shape[0]:
            raise ValueError("displacement length does not match covariance size")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "xi", xi)

    @property
    def n_modes(self) -> int:
        return self.gamma.shape[0] // 2


@dataclass(frozen=True, eq=False)
class GaussianUnitary:
    """A Gaussian unitary acting on moments as xi -> u @ xi + eta,
    gamma -> u @ gamma @ u.T.  ``u`` must be symplectic."""

    u: np.ndarray
    eta: np.ndarray = None

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] % 2 != 0:
            raise ValueError(f"symplectic matrix must be 2n x 2n, got shape {u.shape}")
        omega = make_symplectic_form(u.shape[0] // 2)
        if not mats_close(u @ omega @ u.T, omega, SYMPLECTIC_TOL):
            raise ValueError("matrix does not preserve the symplectic form")
        eta = self.eta
        if eta is None:
            eta = np.zeros(u.shape[0])
        eta = np.asarray(eta, dtype=float).reshape(-1)
        if eta.shape[0] != u.shape[0]:
            raise ValueError("displacement length does not match matrix size")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "eta", eta)

    @property
    def n_modes(self) -> int:
        return self.u.shape[0] // 2


@dataclass(frozen=True)
class WilliamsonDecomposition:
    """Gamma = s @ diag(nu_1, nu_1, ..., nu_n, nu_n) @ s.T with s symplectic
    and the symplectic eigenvalues ``nu`` sorted in descending order."""

    s: np.ndarray
    nu: np.ndarray

    def thermal_diagonal(self) -> np.ndarray:
        return np.diag(np.repeat(self.nu, 2))

    def reconstruct(self) -> np.ndarray:
        return self.s @ self.thermal_diagonal() @ self.s.T


@dataclass(frozen=True)
class TwoModeStandardForm:
    """Local-unitary canonical form of a two-mode covariance matrix:
    diagonal blocks a*I, b*I and off-diagonal block diag(c, d), with the
    sign convention c >= 0 and |c| >= |d|."""

    a: float
    b: float
    c: float
    d: float

    def covariance(self) -> np.ndarray:
        g = np.zeros((4, 4))
        g[:2, :2] = self.a * np.eye(2)
        g[2:, 2:] = self.b * np.eye(2)
        g[:2, 2:] = np.diag([self.c, self.d])
        g[2:, :2] = np.diag([self.c, self.d])
        return g


SQUEEZED = "squeezed"
LINEAR_MIXED = "linear_mixed"


@dataclass(frozen=True)
class TwoModeClassState:
    """Two-mode state reachable from a thermal state by either a two-mode
    squeezer (kind="squeezed", param = squeezing r) or a beam splitter
    (kind="linear_mixed", param = mixing angle phi)."""

    kind: str
    nu1: float
    nu2: float
    param: float

    def __post_init__(self):
        if self.kind not in (SQUEEZED, LINEAR_MIXED):
            raise ValueError(f"unknown state class {self.kind!r}")
        if self.nu1 < 1.0 or self.nu2 < 1.0:
            raise UnphysicalStateError(
                f"thermal symplectic eigenvalues must be >= 1, got ({self.nu1}, {self.nu2})"
            )


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def single_mode_squeeze(x: float) -> np.ndarray:
    return np.diag([math.exp(x), math.exp(-x)])


def two_mode_squeeze_matrix(r: float) -> np.ndarray:
    """Symplectic matrix of the two-mode squeezer exp(r(a'b' - ab))."""
    ch, sh = math.cosh(r), math.sinh(r)
    s3 = np.diag([1.0, -1.0])
    return np.block([[ch * np.eye(2), sh * s3], [sh * s3, ch * np.eye(2)]])


def beam_splitter_matrix(phi: float) -> np.ndarray:
    """Symplectic matrix of the beam splitter exp(-phi(a'b - b'a))."""
    c, s = math.cos(phi), math.sin(phi)
    return np.block([[c * np.eye(2), -s * np.eye(2)], [s * np.eye(2), c * np.eye(2)]])


def check_physical(state: GaussianState) -> tuple[bool, float]:
    """Test the uncertainty bound gamma + i*Omega >= 0.

    Returns:
        (ok, min_eig): ``ok`` is True iff the minimum eigenvalue of the
        Hermitian matrix gamma + i*Omega is >= -1e-10; the eigenvalue itself
        is returned as a diagnostic.
    """
    omega = make_symplectic_form(state.n_modes)
    herm = state.gamma + 1j * omega
    min_eig = float(np.linalg.eigvalsh(herm)[0])
    return min_eig >= -PHYSICALITY_TOL, min_eig


def require_physical(state: GaussianState) -> GaussianState:
    ok, diag = check_physical(state)
    if not ok:
        raise UnphysicalStateError(
            f"covariance matrix violates the uncertainty bound (min eig {diag:.3e})"
        )
    return state


def symplectic_eigenvalues(state: GaussianState | np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix, sorted descending.

    Computed as the moduli of the eigenvalues of i*Omega*Gamma; each value
    appears there with multiplicity two and is deduplicated.
    """
    gamma = state.gamma if isinstance(state, GaussianState) else np.asarray(state, dtype=float)
    n = gamma.shape[0] // 2
    omega = make_symplectic_form(n)
    try:
        evals = np.linalg.eigvals(1j * omega @ gamma)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise DecompositionError(f"eigen-solver failed: {exc}") from exc
    moduli = np.sort(np.abs(evals))[::-1]
    return moduli[::2].copy()


def apply_unitary(state: GaussianState, unitary: GaussianUnitary) -> GaussianState:
    """Conjugate a state by a Gaussian unitary: xi -> U xi + eta, Gamma -> U Gamma U^T."""
    if unitary.u.shape[0] != state.gamma.shape[0]:
        raise ValueError(
            f"dimension mismatch: unitary acts on {unitary.n_modes} modes, "
            f"state has {state.n_modes}"
        )
    gamma = unitary.u @ state.gamma @ unitary.u.T
    xi = unitary.u @ state.xi + unitary.eta
    return GaussianState(gamma=0.5 * (gamma + gamma.T), xi=xi)


def phase_unitary(lambdas) -> GaussianUnitary:
    """Phase rotation by lambda_j on each mode: U = direct sum of R(lambda_j), eta = 0."""
    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    blocks = [rotation_matrix(lam) for lam in lambdas]
    n = len(blocks)
    u = np.zeros((2 * n, 2 * n))
    for j, blk in enumerate(blocks):
        u[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = blk
    return GaussianUnitary(u=u)


def extend_local(u_a: GaussianUnitary, n_b: int) -> GaussianUnitary:
    """Extend a unitary on subsystem A to A+B by acting trivially on the last n_b modes."""
    n_a = u_a.n_modes
    u = np.eye(2 * (n_a + n_b))
    u[: 2 * n_a, : 2 * n_a] = u_a.u
    eta = np.zeros(2 * (n_a + n_b))
    eta[: 2 * n_a] = u_a.eta
    return GaussianUnitary(u=u, eta=eta)


# ---------------------------------------------------------------------------
# Williamson decomposition
# ---------------------------------------------------------------------------

def williamson(state: GaussianState | np.ndarray) -> WilliamsonDecomposition:
    """Williamson decomposition of a positive-definite covariance matrix.

    The antisymmetric matrix A = Gamma^(1/2) Omega Gamma^(1/2) is brought to
    canonical form by a real Schur factorization; the symplectic factor is
    S = Gamma^(1/2) O diag(nu)^(-1/2), which satisfies
    Gamma = S diag(nu kron [1,1]) S^T by construction.

    The residual per-block rotation gauge is fixed by rotating each column
    pair so that the diagonal block's first row is (positive, 0); when the
    thermal diagonal alone already reconstructs Gamma, S snaps to the exact
    identity.
    """
    gamma = state.gamma if isinstance(state, GaussianState) else np.asarray(state, dtype=float)
    n = gamma.shape[0] // 2
    evals, evecs = np.linalg.eigh(gamma)
    if evals[0] <= 0.0:
        raise DecompositionError(
            f"covariance matrix must be positive definite (min eig {evals[0]:.3e})"
        )
    ghalf = (evecs * np.sqrt(evals)) @ evecs.T
    omega = make_symplectic_form(n)
    a = ghalf @ omega @ ghalf
    a = 0.5 * (a - a.T)
    t, o = schur(a, output="real")

    nu = np.empty(n)
    for j in range(n):
        hi, lo = t[2 * j, 2 * j + 1], t[2 * j + 1, 2 * j]
        if hi < 0.0:
            # conjugate the block by [[0,1],[1,0]] to make the upper entry positive
            o[:, [2 * j, 2 * j + 1]] = o[:, [2 * j + 1, 2 * j]]
            hi, lo = -hi, -lo
        nu[j] = 0.5 * (abs(hi) + abs(lo))

    order = np.argsort(-nu, kind="stable")
    nu = nu[order]
    col_order = np.empty(2 * n, dtype=int)
    col_order[0::2] = 2 * order
    col_order[1::2] = 2 * order + 1
    o = o[:, col_order]

    s = ghalf @ o @ np.diag(np.repeat(1.0 / np.sqrt(nu), 2))

    # gauge: rotate each column pair so the diagonal block's first row is (h, 0), h >= 0
    for j in range(n):
        p, q = s[2 * j, 2 * j], s[2 * j, 2 * j + 1]
        h = math.hypot(p, q)
        if h > 1e-13:
            rot = np.array([[p / h, -q / h], [q / h, p / h]])
            s[:, 2 * j : 2 * j + 2] = s[:, 2 * j : 2 * j + 2] @ rot

    if mats_close(np.diag(np.repeat(nu, 2)), gamma, SYMPLECTIC_TOL):
        s = np.eye(2 * n)
    return WilliamsonDecomposition(s=s, nu=nu)


# ---------------------------------------------------------------------------
# Euler decomposition of Sp(2, R)
# ---------------------------------------------------------------------------

def euler_compose(theta: float, x: float, theta_prime: float) -> np.ndarray:
    return rotation_matrix(theta) @ single_mode_squeeze(x) @ rotation_matrix(theta_prime)


def euler_decompose(s) -> tuple[float, float, float]:
    """Factor a 2x2 symplectic matrix as R(theta) S1(x) R(theta'), with
    S1(x) = diag(e^x, e^-x), x >= 0 and both angles in [0, 2*pi)."""
    s = np.asarray(s, dtype=float)
    if s.shape != (2, 2) or not mats_close(s @ _J2 @ s.T, _J2, SYMPLECTIC_TOL):
        raise DecompositionError("input is not a 2x2 symplectic matrix")
    u, sigma, vt = np.linalg.svd(s)
    if sigma[0] - 1.0 < 1e-12:
        # pure rotation: absorb everything into theta
        return wrap_angle(math.atan2(s[1, 0], s[0, 0])), 0.0, 0.0
    if np.linalg.det(u) < 0.0:
        u = u.copy()
        vt = vt.copy()
        u[:, 1] *= -1.0
        vt[1, :] *= -1.0
    theta = wrap_angle(math.atan2(u[1, 0], u[0, 0]))
    theta_prime = wrap_angle(math.atan2(vt[1, 0], vt[0, 0]))
    return theta, float(math.log(sigma[0])), theta_prime


# ---------------------------------------------------------------------------
# Two-mode standard form
# ---------------------------------------------------------------------------

def two_mode_standard_form(state: GaussianState) -> TwoModeStandardForm:
    """Reduce a physical two-mode state to standard form (a, b, c, d).

    Only the four local-symplectic invariants det(Gamma_A), det(Gamma_B),
    det(Gamma_OFF) and det(Gamma) enter:

        a = sqrt(det Gamma_A), b = sqrt(det Gamma_B), c*d = det Gamma_OFF,
        det Gamma = (ab - c^2)(ab - d^2).
    """
    if state.n_modes != 2:
        raise ValueError("standard form is defined for two-mode states")
    require_physical(state)
    g = state.gamma
    det_a = float(np.linalg.det(g[:2, :2]))
    det_b = float(np.linalg.det(g[2:, 2:]))
    det_off = float(np.linalg.det(g[:2, 2:]))
    det_g = float(np.linalg.det(g))
    a = math.sqrt(max(det_a, 0.0))
    b = math.sqrt(max(det_b, 0.0))
    ab = a * b
    sum_sq = max((ab * ab + det_off * det_off - det_g) / ab, 0.0)  # c^2 + d^2
    disc = max(sum_sq * sum_sq - 4.0 * det_off * det_off, 0.0)
    c_sq = 0.5 * (sum_sq + math.sqrt(disc))
    d_sq = max(sum_sq - c_sq, 0.0)
    c = math.sqrt(c_sq)
    d = math.copysign(math.sqrt(d_sq), det_off) if c > 1e-15 else 0.0
    return TwoModeStandardForm(a=a, b=b, c=c, d=d)


def class_state_covariance(spec: TwoModeClassState) -> GaussianState:
    """Covariance matrix of a squeezed or linearly mixed thermal state:
    Gamma = S_class diag(nu1, nu1, nu2, nu2) S_class^T, zero displacement."""
    if spec.kind == SQUEEZED:
        s = two_mode_squeeze_matrix(spec.param)
    else:
        s = beam_splitter_matrix(spec.param)
    d = np.diag([spec.nu1, spec.nu1, spec.nu2, spec.nu2])
    gamma = s @ d @ s.T
    return GaussianState(gamma=0.5 * (gamma + gamma.T))


def standard_params_from_class(spec: TwoModeClassState) -> TwoModeStandardForm:
    """Standard-form parameters of a class state, from the closed relations

        squeezed:      a - b = nu1 - nu2,  a + b = (nu1 + nu2) cosh 2r,
                       2c = (nu1 + nu2) sinh 2r,  d = -c
        linear mixed:  a + b = nu1 + nu2,  a - b = (nu1 - nu2) cos 2phi,
                       2c = (nu1 - nu2) sin 2phi,  d = c

    followed by the joint sign flip that enforces c >= 0.
    """
    nu1, nu2 = spec.nu1, spec.nu2
    if spec.kind == SQUEEZED:
        ch, sh = math.cosh(2.0 * spec.param), math.sinh(2.0 * spec.param)
        a = 0.5 * ((nu1 - nu2) + (nu1 + nu2) * ch)
        b = 0.5 * (-(nu1 - nu2) + (nu1 + nu2) * ch)
        c = 0.5 * (nu1 + nu2) * sh
        d = -c
    else:
        c2, s2 = math.cos(2.0 * spec.param), math.sin(2.0 * spec.param)
        a = 0.5 * ((nu1 + nu2) + (nu1 - nu2) * c2)
        b = 0.5 * ((nu1 + nu2) - (nu1 - nu2) * c2)
        c = 0.5 * (nu1 - nu2) * s2
        d = c
    if c < 0.0:
        c, d = -c, -d
    return TwoModeStandardForm(a=a, b=b, c=c, d=d)


# ---------------------------------------------------------------------------
# Block diagonalization of symplectic orthogonal matrices
# ---------------------------------------------------------------------------

def _interleave_permutation(n: int) -> np.ndarray:
    """Permutation matrix mapping (x1,p1,...,xn,pn) to (x1..xn, p1..pn)."""
    perm = np.zeros((2 * n, 2 * n))
    for j in range(n):
        perm[j, 2 * j] = 1.0
        perm[n + j, 2 * j + 1] = 1.0
    return perm


def block_diagonalize_sympo(w) -> tuple[np.ndarray, np.ndarray]:
    """Bring a symplectic orthogonal matrix to a direct sum of rotations.

    Returns (m, lambdas) with m symplectic and orthogonal and
    m.T @ w @ m = direct sum of R(lambda_j), angles sorted ascending in
    [0, 2*pi).  In the (x..x, p..p) ordering w has the block structure
    [[A, -B], [B, A]] with A + iB unitary; diagonalizing that unitary and
    mapping the diagonalizer back to real form yields m.
    """
    w = np.asarray(w, dtype=float)
    n = w.shape[0] // 2
    omega = make_symplectic_form(n)
    if not mats_close(w @ omega @ w.T, omega, SYMPLECTIC_TOL) or not mats_close(
        w @ w.T, np.eye(2 * n), SYMPLECTIC_TOL
    ):
        raise DecompositionError("input is not symplectic orthogonal")

    perm = _interleave_permutation(n)
    w_xp = perm @ w @ perm.T
    a = 0.5 * (w_xp[:n, :n] + w_xp[n:, n:])
    b = 0.5 * (w_xp[n:, :n] - w_xp[:n, n:])
    unitary = a + 1j * b
    t, q = schur(unitary, output="complex")
    lambdas = np.mod(np.angle(np.diag(t)), 2.0 * math.pi)
    order = np.argsort(lambdas, kind="stable")
    lambdas = lambdas[order]
    q = q[:, order]
    m_xp = np.block([[q.real, -q.imag], [q.imag, q.real]])
    m = perm.T @ m_xp @ perm
    return m, lambdas
