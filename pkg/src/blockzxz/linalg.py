"""Dense complex-matrix primitives used by the decomposition.

Everything here is a thin, contract-checked layer over LAPACK (via numpy and
scipy). Results are deterministic for a fixed input on a fixed build; no
cross-platform bit reproducibility is promised.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla

from .errors import FactorizationError


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex ndarray with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def unitarity_defect(u: np.ndarray) -> float:
    """max-norm of U†U − I."""
    d = u.shape[0]
    return float(np.max(np.abs(u.conj().T @ u - np.eye(d))))


def assert_unitary(u: np.ndarray, tol: float = 1e-10, name: str = "matrix") -> None:
    if math.isinf(tol):
        return
    defect = unitarity_defect(u)
    if defect > tol:
        raise ValueError(f"{name} is not unitary within {tol:g} (defect {defect:.3e})")


def kron(a, b) -> np.ndarray:
    """Kronecker product, A on the more significant index block."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def direct_sum(a, b) -> np.ndarray:
    """Block-diagonal [A 0; 0 B]."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


class SVDResult(NamedTuple):
    v: np.ndarray
    sigma: np.ndarray
    wd: np.ndarray


class PolarResult(NamedTuple):
    s: np.ndarray
    uf: np.ndarray


class UnitaryEig(NamedTuple):
    v: np.ndarray
    lam: np.ndarray


def svd(m) -> SVDResult:
    """SVD of a square matrix: m = V · diag(sigma) · Wd, sigma descending."""
    a = as_complex_matrix(m)
    try:
        v, sigma, wd = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - backend dependent
        raise FactorizationError(f"SVD did not converge: {exc}") from exc
    return SVDResult(v, sigma, wd)


def polar(m) -> PolarResult:
    """Polar decomposition m = S · Uf with S = VΣV† PSD Hermitian, Uf = V·Wd."""
    v, sigma, wd = svd(m)
    s = (v * sigma) @ v.conj().T
    uf = v @ wd
    return PolarResult(s, uf)


def unitary_eig(u, tol: float = 1e-10, factor_tol: float = 1e-10) -> UnitaryEig:
    """Eigendecomposition u = V · diag(lam) · V† of a unitary matrix.

    Uses a complex Schur decomposition: the Schur form of a normal matrix is
    diagonal, and the Schur vectors stay orthonormal even when eigenvalues are
    degenerate (which plain `eig` does not guarantee).
    """
    a = as_complex_matrix(u)
    assert_unitary(a, tol, "unitary_eig input")
    t, v = sla.schur(a, output="complex")
    lam = np.diag(t).copy()
    lam = lam / np.abs(lam)  # eigenvalues of a unitary are unit modulus
    residual = float(np.max(np.abs((v * lam) @ v.conj().T - a)))
    if residual > max(factor_tol, 1e-10):
        raise FactorizationError(
            "Schur-based eigendecomposition missed its reconstruction contract",
            residual=residual,
        )
    return UnitaryEig(v, lam)


def principal_sqrt_phase(z: complex, tol: float = 1e-10) -> complex:
    """e^{i·arg(z)/2} for unit-modulus z, with arg on the branch (−π, π]."""
    z = complex(z)
    if abs(abs(z) - 1.0) > tol:
        raise ValueError(f"expected unit-modulus input, got |z| = {abs(z):.12g}")
    return complex(np.exp(0.5j * np.angle(z)))


def haar_random(dim: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary of the given dimension.

    QR of a complex Gaussian matrix with the R-diagonal phase normalization;
    the seed fully determines the result for a given build.
    """
    if dim < 1:
        raise ValueError("dimension must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    d = np.where(np.abs(d) < 1e-300, 1.0, d)
    return q * (d / np.abs(d))
