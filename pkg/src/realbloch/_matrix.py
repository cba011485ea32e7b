"""Small dense-matrix helpers used throughout the package."""

import numpy as np
import scipy.linalg

from .errors import BranchCutError


def frob(a) -> float:
    return float(np.linalg.norm(a))


def polar_unitary(a: np.ndarray) -> tuple[np.ndarray, float]:
    """Unitary factor of the polar decomposition and the smallest singular value."""
    u, s, vh = np.linalg.svd(a)
    return u @ vh, float(s[-1]) if s.size else 0.0


def unitarity_defect(u: np.ndarray) -> float:
    m = u.shape[-1]
    return frob(u.conj().swapaxes(-1, -2) @ u - np.eye(m))


def principal_log_unitary(u: np.ndarray, *, guard: float = 1e-9, what: str = "matrix"):
    """Principal logarithm of a unitary matrix, anti-Hermitized.

    Raises BranchCutError when an eigenvalue sits within `guard` of -1,
    where the principal branch is ambiguous.
    """
    if u.shape == (1, 1):
        z = u[0, 0]
        if abs(z + 1.0) < guard:
            raise BranchCutError(
                f"{what}: eigenvalue at -1 within {guard:g}; refine the lattice"
            )
        return np.array([[1j * np.angle(z)]], dtype=complex)
    w = np.linalg.eigvals(u)
    if np.min(np.abs(w + 1.0)) < guard:
        raise BranchCutError(
            f"{what}: eigenvalue at -1 within {guard:g}; refine the lattice"
        )
    a = scipy.linalg.logm(u)
    return 0.5 * (a - a.conj().T)


def expm(a: np.ndarray) -> np.ndarray:
    if a.shape == (1, 1):
        return np.array([[np.exp(a[0, 0])]], dtype=complex)
    return scipy.linalg.expm(a)


def symmetric_unitary_sqrt(w: np.ndarray, *, guard: float = 1e-9) -> np.ndarray:
    """Principal square root of a symmetric unitary matrix.

    The principal root of a symmetric matrix is symmetric, so g = sqrt(W)
    satisfies g g^T = W (a Takagi factor).
    """
    if w.shape == (1, 1):
        z = w[0, 0]
        if abs(z + 1.0) < guard:
            raise BranchCutError("sewing matrix eigenvalue at -1; refine the lattice")
        return np.array([[np.exp(0.5j * np.angle(z))]], dtype=complex)
    ev = np.linalg.eigvals(w)
    if np.min(np.abs(ev + 1.0)) < guard:
        raise BranchCutError("sewing matrix eigenvalue at -1; refine the lattice")
    return scipy.linalg.sqrtm(w)
