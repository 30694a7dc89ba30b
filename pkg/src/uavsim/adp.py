"""Actor-critic nearly-optimal controller for the combined error dynamics.

On the sliding manifolds the combined error E_V = [e_Theta; z_Theta; e_V]
obeys E_V' = F_V + G_V U_a - X_d with

    F_V = [z_Theta; 0; -D/m - g_v],
    G_V = [[0, 0], [R_Theta I^{-1}, 0], [0, cos a cos b / m]]  (7x4 blocks),
    X_d = [0; Theta_d''; V_d'],
    U_a = [M_a; T_xa].

Two 35-neuron networks over fixed polynomial features sigma_w(E_V) learn
online, with no pre-training and no initial stabilizing controller:

* critic: V_hat = beta_w ||E||^2 + W_c^T sigma_w, trained by normalized
  gradient descent on the squared Bellman residual Delta_B;
* actor: U_hat = -1/2 R_u^{-1} G_V^T (2 beta_w E + grad_sigma^T W_a), with a
  decay+coupling law plus a stabilizing term gated by the indicator Pi,
  which fires whenever the learned control fails to descend the Lyapunov
  surrogate Psi = 1/2 ||E||^2.

The printed actor law contracts several products without explicit shapes;
the implementation fixes them the only shape-consistent way:

    W_a' = -a0 [ Gamma_a W_a - Gamma_b (m_1w . W_c)
                 - 1/4 (mbar_w^T J A J^T W_c) W_a ] + (a0/2) Pi J A gradPsi

with J = grad_sigma (35x7), A = G R_u^{-1} G^T, m_w = J (F + G U - X_d),
mbar_w = m_w/(1+m_w.m_w)^2 and m_1w = m_w/(1+m_w.m_w); the parenthesized
factors are scalars.  A duplicate-expression oracle in the test suite pins
this reading down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import ComState, UavParams, UavState, airspeed_quantities, rotation_R_Theta
from .mathcore import min_eigenvalue_spd

N_NEURONS = 35


def _default_q_e() -> np.ndarray:
    return 1.5 * np.eye(7)


def _default_r_u() -> np.ndarray:
    return np.array([1.2, 1.23, 1.0, 2.2])


def _default_gamma_a() -> np.ndarray:
    return 5.0 * np.eye(N_NEURONS)


def _default_gamma_b() -> np.ndarray:
    return 0.1 * np.ones(N_NEURONS)


@dataclass
class AdpParams:
    """Hyperparameters of the actor-critic layer.

    beta_w, c0, a0, gamma_a and gamma_b have no canonical published values;
    the defaults below let the decay term dominate early training and are
    recorded in every run's output metadata.
    """

    beta_w: float = 0.5
    q_e: np.ndarray = field(default_factory=_default_q_e)        # 7x7 SPD
    r_u: np.ndarray = field(default_factory=_default_r_u)        # diag of 4x4 SPD
    c0: float = 1.0
    a0: float = 1.5
    gamma_a: np.ndarray = field(default_factory=_default_gamma_a)  # 35x35 SPD
    gamma_b: np.ndarray = field(default_factory=_default_gamma_b)  # 35-vector
    n: int = N_NEURONS

    def validate(self) -> None:
        for name in ("beta_w", "c0", "a0"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.n != N_NEURONS:
            raise ValueError(f"n must be {N_NEURONS} (the feature set is fixed)")
        q_e = np.asarray(self.q_e, dtype=float)
        if q_e.shape != (7, 7) or min_eigenvalue_spd(q_e) <= 0.0:
            raise ValueError("q_e must be a 7x7 symmetric positive definite matrix")
        r_u = np.asarray(self.r_u, dtype=float)
        if r_u.shape != (4,) or np.any(r_u <= 0.0):
            raise ValueError("r_u must be 4 positive diagonal entries")
        gamma_a = np.asarray(self.gamma_a, dtype=float)
        if gamma_a.shape != (N_NEURONS, N_NEURONS) or min_eigenvalue_spd(gamma_a) <= 0.0:
            raise ValueError("gamma_a must be a 35x35 symmetric positive definite matrix")
        if np.asarray(self.gamma_b, dtype=float).shape != (N_NEURONS,):
            raise ValueError("gamma_b must be a 35-vector")


@dataclass
class AdpState:
    """Critic and actor weight vectors."""

    w_c: np.ndarray
    w_a: np.ndarray

    @classmethod
    def initial(cls, rng: np.random.Generator, n: int = N_NEURONS) -> "AdpState":
        """Draw both weight vectors uniformly from (0, 2], critic first."""
        w_c = 2.0 - rng.uniform(0.0, 2.0, n)
        w_a = 2.0 - rng.uniform(0.0, 2.0, n)
        return cls(w_c=w_c, w_a=w_a)


@dataclass
class CombinedError:
    """Combined-error snapshot consumed by every ADP operation."""

    e_v7: np.ndarray                  # E_V = [e_Theta; z_Theta; e_V]
    f_v: np.ndarray                   # drift
    g_v: np.ndarray                   # 7x4 input map
    x_d: np.ndarray                   # feedforward [0; Theta_d''; V_d']
    u_a: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def dynamics(self, u_a: np.ndarray) -> np.ndarray:
        return self.f_v + self.g_v @ u_a - self.x_d


def sigma_w(e: np.ndarray) -> np.ndarray:
    """The 35 fixed polynomial features of E_V (all of total degree >= 2)."""
    e1, e2, e3, z1, z2, z3, ev = (float(x) for x in e)
    return np.array([
        e1 * e1, e1 * e2, e2 * e2, e1 * e3, e3 * e3, e2 * e3,
        z1 * z1, z1 * z2, z2 * z2, z1 * z3, z3 * z3, z2 * z3,
        e1 ** 3 * z1, e2 ** 3 * z2, e3 ** 3 * z3,
        e1 * z1 * z2, e2 * z2 * z3, e3 * z3 * z1,
        e1 * z2, e1 * z3, e2 * z1, e2 * z3, e3 * z1, e3 * z2,
        z1 ** 3 * e3 * e2, z2 ** 3 * e1 * e3, z3 ** 3 * e1 * e2,
        e1 * z1 ** 3, e2 * z2 ** 3, e3 * z3 ** 3,
        ev * ev, ev * e1, ev * e2, ev * e1 ** 3, ev * e2 ** 3,
    ])


def grad_sigma_w(e: np.ndarray) -> np.ndarray:
    """Analytic Jacobian d sigma_w / d E_V, shape (35, 7)."""
    e1, e2, e3, z1, z2, z3, ev = (float(x) for x in e)
    j = np.zeros((N_NEURONS, 7))
    # quadratic attitude-error block
    j[0, 0] = 2.0 * e1
    j[1, 0] = e2; j[1, 1] = e1
    j[2, 1] = 2.0 * e2
    j[3, 0] = e3; j[3, 2] = e1
    j[4, 2] = 2.0 * e3
    j[5, 1] = e3; j[5, 2] = e2
    # quadratic rate block
    j[6, 3] = 2.0 * z1
    j[7, 3] = z2; j[7, 4] = z1
    j[8, 4] = 2.0 * z2
    j[9, 3] = z3; j[9, 5] = z1
    j[10, 5] = 2.0 * z3
    j[11, 4] = z3; j[11, 5] = z2
    # cubic-error x rate
    j[12, 0] = 3.0 * e1 * e1 * z1; j[12, 3] = e1 ** 3
    j[13, 1] = 3.0 * e2 * e2 * z2; j[13, 4] = e2 ** 3
    j[14, 2] = 3.0 * e3 * e3 * z3; j[14, 5] = e3 ** 3
    # error x rate x rate
    j[15, 0] = z1 * z2; j[15, 3] = e1 * z2; j[15, 4] = e1 * z1
    j[16, 1] = z2 * z3; j[16, 4] = e2 * z3; j[16, 5] = e2 * z2
    j[17, 2] = z3 * z1; j[17, 5] = e3 * z1; j[17, 3] = e3 * z3
    # cross error-rate bilinears
    j[18, 0] = z2; j[18, 4] = e1
    j[19, 0] = z3; j[19, 5] = e1
    j[20, 1] = z1; j[20, 3] = e2
    j[21, 1] = z3; j[21, 5] = e2
    j[22, 2] = z1; j[22, 3] = e3
    j[23, 2] = z2; j[23, 4] = e3
    # cubic-rate x error x error
    j[24, 3] = 3.0 * z1 * z1 * e3 * e2; j[24, 2] = z1 ** 3 * e2; j[24, 1] = z1 ** 3 * e3
    j[25, 4] = 3.0 * z2 * z2 * e1 * e3; j[25, 0] = z2 ** 3 * e3; j[25, 2] = z2 ** 3 * e1
    j[26, 5] = 3.0 * z3 * z3 * e1 * e2; j[26, 0] = z3 ** 3 * e2; j[26, 1] = z3 ** 3 * e1
    # error x cubic rate
    j[27, 0] = z1 ** 3; j[27, 3] = 3.0 * e1 * z1 * z1
    j[28, 1] = z2 ** 3; j[28, 4] = 3.0 * e2 * z2 * z2
    j[29, 2] = z3 ** 3; j[29, 5] = 3.0 * e3 * z3 * z3
    # airspeed couplings
    j[30, 6] = 2.0 * ev
    j[31, 6] = e1; j[31, 0] = ev
    j[32, 6] = e2; j[32, 1] = ev
    j[33, 6] = e1 ** 3; j[33, 0] = 3.0 * ev * e1 * e1
    j[34, 6] = e2 ** 3; j[34, 1] = 3.0 * ev * e2 * e2
    return j


def assemble_combined(
    s: UavState,
    com: ComState,
    theta_d_ddot: np.ndarray,
    v_d_dot: float,
    uav: UavParams,
    t: float | None = None,
    *,
    wind: tuple[float, float, float, float, float] | None = None,
    r_theta: np.ndarray | None = None,
) -> CombinedError:
    """Build the combined-error snapshot from vehicle state and references.

    ``wind`` (the :func:`airspeed_quantities` tuple) and ``r_theta`` let the
    simulation loop reuse values it has already computed this step.
    """
    e_v7 = np.concatenate([com.e_Theta, com.z_Theta, [com.e_V]])
    _, alpha, beta, g_v_grav, drag = wind if wind is not None else airspeed_quantities(s, uav, t)
    f_v = np.zeros(7)
    f_v[0:3] = com.z_Theta
    f_v[6] = -drag / uav.m - g_v_grav
    g_mat = np.zeros((7, 4))
    if r_theta is None:
        r_theta = rotation_R_Theta(s.Theta, uav)
    g_mat[3:6, 0:3] = r_theta @ uav.inertia_inv
    g_mat[6, 3] = math.cos(alpha) * math.cos(beta) / uav.m
    x_d = np.zeros(7)
    x_d[3:6] = theta_d_ddot
    x_d[6] = v_d_dot
    return CombinedError(e_v7=e_v7, f_v=f_v, g_v=g_mat, x_d=x_d)


def value_hat(e: np.ndarray, w_c: np.ndarray, beta_w: float) -> float:
    return beta_w * float(e @ e) + float(w_c @ sigma_w(e))


def control_Ua_hat(
    combined: CombinedError,
    w_a: np.ndarray,
    params: AdpParams,
    *,
    jac: np.ndarray | None = None,
) -> np.ndarray:
    """U_hat = -1/2 R_u^{-1} G_V^T (2 beta_w E + grad_sigma^T W_a)."""
    if jac is None:
        jac = grad_sigma_w(combined.e_v7)
    grad_v = 2.0 * params.beta_w * combined.e_v7 + jac.T @ w_a
    return -0.5 * (combined.g_v.T @ grad_v) / params.r_u


def psi_and_grad(e: np.ndarray) -> tuple[float, np.ndarray]:
    """Lyapunov surrogate Psi = 1/2 ||E||^2 and its gradient E."""
    return 0.5 * float(e @ e), e


def pi_indicator(combined: CombinedError, u_a: np.ndarray, grad_psi: np.ndarray) -> int:
    """0 when the closed-loop dynamics descend Psi, 1 otherwise (ties -> 1)."""
    return 0 if float(grad_psi @ combined.dynamics(u_a)) < 0.0 else 1


def hjb_residual(
    combined: CombinedError,
    w_c: np.ndarray,
    u_a: np.ndarray,
    params: AdpParams,
    *,
    jac: np.ndarray | None = None,
) -> float:
    """Bellman residual: grad V_hat . dynamics + E^T Q_E E + U^T R_u U.

    ``jac`` lets callers reuse an already-evaluated ``grad_sigma_w(E)``.
    """
    e = combined.e_v7
    if jac is None:
        jac = grad_sigma_w(e)
    grad_v = 2.0 * params.beta_w * e + jac.T @ w_c
    running_cost = float(e @ params.q_e @ e) + float(u_a @ (params.r_u * u_a))
    return float(grad_v @ combined.dynamics(u_a)) + running_cost


def regressor_m_w(
    combined: CombinedError, u_a: np.ndarray, *, jac: np.ndarray | None = None
) -> np.ndarray:
    """m_w = grad_sigma (F + G U - X_d), the critic's 35-regressor."""
    if jac is None:
        jac = grad_sigma_w(combined.e_v7)
    return jac @ combined.dynamics(u_a)


def critic_update(
    w_c: np.ndarray,
    combined: CombinedError,
    u_a: np.ndarray,
    params: AdpParams,
    dt: float,
    *,
    jac: np.ndarray | None = None,
    delta_b: float | None = None,
) -> np.ndarray:
    """Euler step of W_c' = -c0 m_w/(1+m_w.m_w)^2 Delta_B."""
    if jac is None:
        jac = grad_sigma_w(combined.e_v7)
    m_w = regressor_m_w(combined, u_a, jac=jac)
    if delta_b is None:
        delta_b = hjb_residual(combined, w_c, u_a, params, jac=jac)
    mbar = m_w / (1.0 + float(m_w @ m_w)) ** 2
    return w_c - params.c0 * delta_b * mbar * dt


def actor_update(
    w_a: np.ndarray,
    w_c: np.ndarray,
    combined: CombinedError,
    u_a: np.ndarray,
    params: AdpParams,
    grad_psi: np.ndarray,
    dt: float,
    *,
    jac: np.ndarray | None = None,
) -> np.ndarray:
    """Euler step of the actor law (shape conventions in module docstring)."""
    if jac is None:
        jac = grad_sigma_w(combined.e_v7)
    dyn = combined.dynamics(u_a)
    m_w = jac @ dyn
    den = 1.0 + float(m_w @ m_w)
    m_1w = m_w / den
    mbar = m_w / (den * den)
    a_mat = combined.g_v @ (combined.g_v.T / params.r_u[:, None])  # G R_u^{-1} G^T
    # scalar factors of the coupling terms
    couple = float(m_1w @ w_c)
    # mbar^T J A J^T w_c without forming the 35x35 product
    quart = float(mbar @ (jac @ (a_mat @ (jac.T @ w_c))))
    rhs = -params.a0 * (params.gamma_a @ w_a - params.gamma_b * couple - 0.25 * quart * w_a)
    if pi_indicator(combined, u_a, grad_psi):
        rhs = rhs + 0.5 * params.a0 * (jac @ (a_mat @ grad_psi))
    return w_a + rhs * dt
