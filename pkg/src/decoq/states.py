"""Kinematics, the leading-order R-matrix and two-qubit density matrices."""

import enum
import math
from dataclasses import dataclass

import numpy as np

from decoq.tensor import PSD_TOL, ContractViolation, as_cmat, eig_hermitian, is_hermitian


class DomainError(ValueError):
    """Kinematics or parameters outside the physical domain."""


class CouplingKind(str, enum.Enum):
    SCALAR = "S"
    PSEUDOSCALAR = "P"
    VECTOR = "V"
    AXIAL = "A"

    @classmethod
    def parse(cls, value) -> "CouplingKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        aliases = {"SCALAR": "S", "PSEUDOSCALAR": "P", "VECTOR": "V", "AXIAL": "A"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown coupling kind {value!r}") from None


COUPLING_ORDER = (CouplingKind.SCALAR, CouplingKind.PSEUDOSCALAR,
                  CouplingKind.VECTOR, CouplingKind.AXIAL)


@dataclass(frozen=True)
class Coupling:
    kind: CouplingKind
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "kind", CouplingKind.parse(self.kind))
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise DomainError(f"coupling strength must be >= 0, got {self.alpha}")


@dataclass(frozen=True)
class KinematicPoint:
    """Decay kinematics of a scalar of mass `m_phi` into fermions of mass `m_f` (GeV)."""

    m_f: float
    m_phi: float

    def __post_init__(self):
        if not (self.m_f > 0 and self.m_phi > 2 * self.m_f):
            raise DomainError(
                f"need m_phi > 2 m_f > 0, got m_f={self.m_f}, m_phi={self.m_phi}"
            )

    @classmethod
    def from_beta(cls, m_f: float, beta: float) -> "KinematicPoint":
        if not 0 < beta < 1:
            raise DomainError(f"beta must lie in (0, 1), got {beta}")
        return cls(m_f, 2 * m_f / math.sqrt(1 - beta * beta))

    @property
    def beta(self) -> float:
        return math.sqrt(1 - 4 * self.m_f**2 / self.m_phi**2)

    @property
    def s(self) -> float:
        return self.m_phi**2


class DensityMatrix:
    """Validated 4x4 two-qubit density matrix.

    Construction checks Hermiticity, unit trace (1e-12) and positivity
    (eigenvalues >= -1e-10).  The underlying array is read-only.
    """

    TRACE_TOL = 1e-12

    __slots__ = ("_m",)

    def __init__(self, m):
        a = as_cmat(m, 4).copy()
        if not is_hermitian(a):
            raise ContractViolation("density matrix must be Hermitian")
        tr = np.trace(a)
        if abs(tr - 1) > self.TRACE_TOL:
            raise ContractViolation(f"density matrix trace {tr} != 1")
        w, _ = eig_hermitian(a)
        if w[-1] < -PSD_TOL:
            raise ContractViolation(f"density matrix has negative eigenvalue {w[-1]:.3e}")
        a.setflags(write=False)
        self._m = a

    @property
    def m(self) -> np.ndarray:
        return self._m

    def __array__(self, dtype=None, copy=None):
        return self._m.astype(dtype) if dtype is not None else self._m.copy()

    def __repr__(self):
        return f"DensityMatrix({np.array2string(self._m, precision=4)})"


@dataclass(frozen=True)
class RMatrix:
    m: np.ndarray
    context: KinematicPoint

    def __post_init__(self):
        a = as_cmat(self.m, 4)
        if not is_hermitian(a):
            raise ContractViolation("R-matrix must be Hermitian")
        object.__setattr__(self, "m", a)

    @property
    def trace(self) -> float:
        return float(np.trace(self.m).real)


def lo_r_matrix(kin: KinematicPoint, y_f: float, n_c: int) -> RMatrix:
    """Leading-order R-matrix of phi -> f fbar for Yukawa coupling `y_f`."""
    if not isinstance(kin, KinematicPoint):
        raise DomainError("kin must be a KinematicPoint")
    if int(n_c) != n_c or n_c < 1:
        raise ValueError(f"n_c must be a positive integer, got {n_c}")
    b2 = kin.beta**2
    pref = 4 * n_c * y_f**2 * kin.m_f**2 * b2 / (1 - b2)
    m = np.zeros((4, 4), dtype=complex)
    m[1:3, 1:3] = pref
    return RMatrix(m, kin)


def lo_width(r: RMatrix) -> float:
    """Leading-order width tr[R] beta / (16 pi m_phi) in GeV."""
    kin = r.context
    return r.trace * kin.beta / (16 * math.pi * kin.m_phi)


def normalize(r) -> DensityMatrix:
    m = r.m if isinstance(r, RMatrix) else as_cmat(r, 4)
    tr = np.trace(m).real
    if not tr > 0:
        raise DomainError(f"cannot normalise matrix with trace {tr}")
    return DensityMatrix(m / tr)


_BELL_VECTORS = {
    "psi+": np.array([0, 1, 1, 0]) / math.sqrt(2),
    "psi-": np.array([0, 1, -1, 0]) / math.sqrt(2),
    "phi+": np.array([1, 0, 0, 1]) / math.sqrt(2),
    "phi-": np.array([1, 0, 0, -1]) / math.sqrt(2),
}


def bell_state(which: str = "psi+") -> DensityMatrix:
    key = which.lower().replace("ψ", "psi").replace("φ", "phi").replace("Φ", "phi")
    try:
        v = _BELL_VECTORS[key].astype(complex)
    except KeyError:
        raise ValueError(f"unknown Bell state {which!r}") from None
    return DensityMatrix(np.outer(v, v.conj()))


def pure_state(psi) -> DensityMatrix:
    v = np.asarray(psi, dtype=complex).reshape(4)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()))
