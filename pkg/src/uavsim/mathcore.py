"""Vector sign/power primitives and small matrix helpers.

These are the building blocks shared by both sliding-mode loops and the
optimal-control layer: the multivariable unit-sign function, its
fractional-power generalization, a Kronecker product, and a guarded
minimum-eigenvalue query for symmetric positive definite matrices.
"""

from __future__ import annotations

import numpy as np

#: Norms at or below this are treated as exactly zero by msign/pow_sign.
EPS_ZERO = 1e-12


def msign(x, eps_zero: float = EPS_ZERO):
    """Multivariable sign: x/||x|| for nonzero x, the zero vector at 0.

    The zero convention keeps the function single-valued at the origin
    (the Filippov selection used throughout the switching laws).  Scalars
    take a fast path and come back as floats.
    """
    if np.ndim(x) == 0:
        x = float(x)
        if abs(x) <= eps_zero:
            return 0.0
        return 1.0 if x > 0.0 else -1.0
    x = np.asarray(x, dtype=float)
    n = float(np.linalg.norm(x))
    if n <= eps_zero:
        return np.zeros_like(x)
    return x / n


def pow_sign(x, rho: float, eps_zero: float = EPS_ZERO):
    """Signed fractional power: ||x||^rho * msign(x); zero vector at 0.

    rho=0 reduces to msign, rho=1 is the identity on nonzero vectors.
    Scalars take a fast path and come back as floats.
    """
    if rho < 0:
        raise ValueError(f"pow_sign exponent must be >= 0, got {rho}")
    if np.ndim(x) == 0:
        x = float(x)
        ax = abs(x)
        if ax <= eps_zero:
            return 0.0
        mag = ax ** rho
        return mag if x > 0.0 else -mag
    x = np.asarray(x, dtype=float)
    n = float(np.linalg.norm(x))
    if n <= eps_zero:
        return np.zeros_like(x)
    return (n ** rho / n) * x


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product (thin wrapper kept for a stable local name)."""
    return np.kron(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def min_eigenvalue_spd(a: np.ndarray, sym_rtol: float = 1e-10) -> float:
    """Minimum eigenvalue of a symmetric matrix, rejecting asymmetric input.

    Symmetry is checked to a relative tolerance of ``sym_rtol`` against the
    largest magnitude entry; eigenvalues come from the symmetric solver so
    the result is real by construction.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = float(np.max(np.abs(a)))
    tol = sym_rtol * max(scale, 1.0)
    if float(np.max(np.abs(a - a.T))) > tol:
        raise ValueError("matrix is not symmetric to tolerance")
    return float(np.linalg.eigvalsh(a)[0])
