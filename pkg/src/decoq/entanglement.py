"""Two-qubit entanglement measures: Wootters concurrence and negativity."""

from dataclasses import dataclass

import numpy as np

from decoq.states import DensityMatrix
from decoq.tensor import eig_hermitian, kron, pauli

_YY = kron(pauli(2), pauli(2))


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    lambdas: tuple

    def __float__(self):
        return self.value


def _dm(rho) -> np.ndarray:
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    return rho.m


def spin_flip(m: np.ndarray) -> np.ndarray:
    return _YY @ np.conj(m) @ _YY


def concurrence(rho) -> ConcurrenceResult:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are square roots of the eigenvalues of rho * rho_tilde.  With
    rho = A A^dagger they are exactly the singular values of the complex
    symmetric matrix A^T (sigma_y x sigma_y) A, which avoids square roots of
    tiny (noise-level) eigenvalues.
    """
    m = _dm(rho)
    w, v = eig_hermitian(m)
    a = v * np.sqrt(np.clip(w, 0.0, None))
    tau = a.T @ _YY @ a
    lam = np.linalg.svd(tau, compute_uv=False)
    value = float(np.clip(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0))
    return ConcurrenceResult(value, tuple(float(x) for x in lam))


def partial_transpose_b(m: np.ndarray) -> np.ndarray:
    t = np.asarray(m).reshape(2, 2, 2, 2)
    return t.transpose(0, 3, 2, 1).reshape(4, 4)


def negativity(rho) -> float:
    """Sum of |negative eigenvalues| of the partial transpose on qubit b."""
    w = np.linalg.eigvalsh(partial_transpose_b(_dm(rho)))
    return float(-w[w < 0].sum())


def partial_trace(m: np.ndarray, keep: str) -> np.ndarray:
    """Reduced 2x2 state of qubit ``keep`` ('a' or 'b')."""
    t = np.asarray(m).reshape(2, 2, 2, 2)
    if keep == "a":
        return np.einsum("ijkj->ik", t)
    if keep == "b":
        return np.einsum("ijil->jl", t)
    raise ValueError("keep must be 'a' or 'b'")
