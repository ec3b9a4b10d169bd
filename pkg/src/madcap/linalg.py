"""Dense Hermitian linear algebra, spectra and entropies.

Everything here works on small complex numpy arrays (d <= 16). Functions
never mutate their inputs.
"""
from __future__ import annotations

import numpy as np
from scipy.special import xlogy

__all__ = [
    "DimensionError",
    "InvalidStateError",
    "hermitize",
    "eig_hermitian",
    "entropy",
    "shannon_entropy",
    "is_psd",
    "check_density",
    "partial_trace",
    "kron",
]

HERMITIAN_TOL = 1e-9
CLIP_TOL = 1e-12


class DimensionError(ValueError):
    """Raised on shape mismatches."""


class InvalidStateError(ValueError):
    """Raised when a matrix is not a valid density matrix."""


def _square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitize(h: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return (H + H^dagger)/2, raising if H is not Hermitian within `tol`."""
    h = _square(h).astype(complex)
    dev = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3g})")
    return 0.5 * (h + h.conj().T)


def eig_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order."""
    return np.linalg.eigvalsh(hermitize(h, tol))[::-1]


def shannon_entropy(p, axis: int = -1) -> np.ndarray:
    """Shannon entropy in bits of the distribution(s) along `axis`.

    Accepts unnormalized weights; 0 log 0 is taken as 0. Tiny negative
    weights from round-off are clipped to zero.
    """
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    return -np.sum(xlogy(p, p), axis=axis) / np.log(2.0)


def entropy(rho: np.ndarray, tol: float = 1e-9) -> float:
    """Von Neumann entropy of a density matrix, in bits.

    Eigenvalues in [-1e-12, 0) are clipped to zero; anything more negative
    means `rho` is not a state and raises :class:`InvalidStateError`.
    """
    rho = check_density(rho, tol)
    lam = eig_hermitian(rho)
    if lam[-1] < -CLIP_TOL:
        raise InvalidStateError(f"negative eigenvalue {lam[-1]:.3g}")
    lam = np.clip(lam, 0.0, 1.0)
    return float(shannon_entropy(lam))


def is_psd(m: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff the smallest eigenvalue of Hermitian `m` is >= -tol."""
    m = _square(m)
    if m.size == 0:
        return True
    return bool(eig_hermitian(m)[-1] >= -tol)


def check_density(rho: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Validate a density matrix and return its Hermitian part.

    Raises
    ------
    DimensionError
        If `rho` is not square.
    InvalidStateError
        If `rho` is not Hermitian, not unit trace, or has an eigenvalue
        below -tol.
    """
    rho = _square(rho)
    try:
        rho = hermitize(rho, tol)
    except ValueError as exc:
        raise InvalidStateError(str(exc)) from None
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"trace is {tr:.12g}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -tol:
        raise InvalidStateError("matrix is not positive semidefinite")
    return rho


def partial_trace(m: np.ndarray, keep: str | int, dims: tuple[int, int]) -> np.ndarray:
    """Partial trace of an operator on A (x) B.

    Parameters
    ----------
    m : (dA*dB, dA*dB) array
    keep : "A" / 0 keeps the first factor, "B" / 1 the second.
    dims : (dA, dB)
    """
    m = _square(m)
    da, db = dims
    if da * db != m.shape[0]:
        raise DimensionError(f"dims {dims} do not match operator of size {m.shape[0]}")
    t = m.reshape(da, db, da, db)
    if keep in ("A", 0):
        return np.einsum("ikjk->ij", t)
    if keep in ("B", 1):
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))
