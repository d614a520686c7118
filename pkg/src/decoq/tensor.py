"""Fixed-shape complex matrix algebra for one- and two-qubit operators.

Basis ordering is |00>, |01>, |10>, |11>, where |0> is positive helicity
along the fermion momentum axis.
"""

import numpy as np

HERMITICITY_RTOL = 1e-10
PSD_TOL = 1e-10

_PAULI = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# sigma_+ = sigma^1 + i sigma^2 (no factor 1/2)
SIGMA_PLUS = np.array([[0, 2], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [2, 0]], dtype=complex)

I2 = _PAULI[0]
I4 = np.eye(4, dtype=complex)


class ContractViolation(ValueError):
    """Raised when a matrix does not satisfy an operation's precondition."""


class NotPSDError(ContractViolation):
    pass


def as_cmat(m, dim: int) -> np.ndarray:
    """Return `m` as a complex (dim, dim) array without reshaping."""
    a = np.asarray(m, dtype=complex)
    if a.shape != (dim, dim):
        raise ContractViolation(f"expected shape ({dim}, {dim}), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractViolation("matrix has non-finite entries")
    return a


def pauli(i: int) -> np.ndarray:
    """Pauli matrix sigma^i, with sigma^0 the 2x2 identity."""
    if not isinstance(i, (int, np.integer)) or not 0 <= i <= 3:
        raise ValueError(f"Pauli index must be in 0..3, got {i!r}")
    return _PAULI[i].copy()


def kron(a, b) -> np.ndarray:
    return np.kron(as_cmat(a, 2), as_cmat(b, 2))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def is_hermitian(m: np.ndarray, rtol: float = HERMITICITY_RTOL) -> bool:
    scale = max(np.linalg.norm(m), 1.0)
    return bool(np.linalg.norm(m - dagger(m)) <= rtol * scale)


def _require_hermitian(m: np.ndarray) -> None:
    if not is_hermitian(m):
        raise ContractViolation(
            f"matrix is not Hermitian: |m - m^dag|_F = {np.linalg.norm(m - dagger(m)):.3e}"
        )


def eig_hermitian(m, dim: int = 4):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with the eigenvalues real and
    sorted in descending order; column ``k`` of ``eigenvectors`` belongs to
    ``eigenvalues[k]``.
    """
    a = as_cmat(m, dim)
    _require_hermitian(a)
    # symmetrise away round-off before handing to LAPACK
    w, v = np.linalg.eigh(0.5 * (a + dagger(a)))
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def sqrt_psd(m, dim: int = 4) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in [-PSD_TOL, 0) are clipped."""
    w, v = eig_hermitian(m, dim)
    if w[-1] < -PSD_TOL:
        raise NotPSDError(f"matrix has eigenvalue {w[-1]:.3e} < -{PSD_TOL}")
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ dagger(v)
