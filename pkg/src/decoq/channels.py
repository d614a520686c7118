"""Kraus-operator channels on two qubits.

A channel is a list of Kraus operators.  ``Channel.full`` certifies
sum K^dag K = 1 (trace preserving); partial channels, sub-maps of a larger
trace-preserving map, only need 0 <= sum K^dag K <= 1.
"""

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from decoq.states import DensityMatrix
from decoq.tensor import I2, I4, SIGMA_MINUS, SIGMA_PLUS, as_cmat, dagger, kron, pauli

COMPLETENESS_TOL = 1e-10

# structural tags for one qubit: Pauli indices and the ladder pair
_STRUCTURES = {
    "0": I2, "1": pauli(1), "2": pauli(2), "3": pauli(3),
    "+": SIGMA_PLUS, "-": SIGMA_MINUS,
}


def single_qubit_structure(tag: str) -> np.ndarray:
    try:
        return _STRUCTURES[str(tag)].copy()
    except KeyError:
        raise ValueError(f"unknown structural tag {tag!r}") from None


@dataclass(frozen=True)
class KrausOperator:
    matrix: np.ndarray
    label: tuple = ("?", "?")

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_cmat(self.matrix, 4))
        object.__setattr__(self, "label", tuple(str(t) for t in self.label))

    @classmethod
    def structured(cls, label: Sequence[str], weight: float) -> "KrausOperator":
        """sqrt(weight) times the tensor product named by `label`, e.g. ("0", "3")."""
        if weight < 0:
            raise ValueError(f"Kraus weight must be non-negative, got {weight}")
        a, b = label
        m = np.sqrt(weight) * kron(single_qubit_structure(a), single_qubit_structure(b))
        return cls(m, (a, b))

    @property
    def weight(self) -> float:
        """Weight recovered from the matrix, assuming the structure stored in the label."""
        try:
            ref = kron(single_qubit_structure(self.label[0]), single_qubit_structure(self.label[1]))
        except ValueError:
            return float("nan")
        return float(np.linalg.norm(self.matrix) ** 2 / np.linalg.norm(ref) ** 2)


@dataclass(frozen=True)
class Channel:
    kraus_ops: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "kraus_ops", tuple(self.kraus_ops))

    @classmethod
    def identity(cls, weight: float = 1.0) -> "Channel":
        return cls((KrausOperator.structured(("0", "0"), weight),))

    @classmethod
    def from_matrices(cls, mats: Iterable, labels: Iterable = None) -> "Channel":
        mats = list(mats)
        labels = list(labels) if labels is not None else [("?", "?")] * len(mats)
        return cls(tuple(KrausOperator(m, l) for m, l in zip(mats, labels)))

    @property
    def completeness(self) -> np.ndarray:
        out = np.zeros((4, 4), dtype=complex)
        for k in self.kraus_ops:
            out += dagger(k.matrix) @ k.matrix
        return out

    @property
    def full(self) -> bool:
        return completeness_defect(self) <= COMPLETENESS_TOL

    @property
    def partial_valid(self) -> bool:
        w = np.linalg.eigvalsh(self.completeness)
        return bool(w[0] >= -COMPLETENESS_TOL and w[-1] <= 1 + COMPLETENESS_TOL)

    def __add__(self, other: "Channel") -> "Channel":
        # disjoint union of Kraus lists; apply() is additive under it
        return Channel(self.kraus_ops + other.kraus_ops)

    def __len__(self):
        return len(self.kraus_ops)

    def __iter__(self):
        return iter(self.kraus_ops)

    def to_dict(self) -> dict:
        return {
            "kraus_ops": [
                {
                    "label": list(k.label),
                    "weight": k.weight,
                    "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in k.matrix],
                }
                for k in self.kraus_ops
            ]
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Channel":
        ops = []
        for item in d["kraus_ops"]:
            m = np.array([[complex(re, im) for re, im in row] for row in item["matrix"]])
            ops.append(KrausOperator(m, tuple(item["label"])))
        return cls(tuple(ops))

    @classmethod
    def from_json(cls, s: str) -> "Channel":
        return cls.from_dict(json.loads(s))


def _matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.m
    return as_cmat(rho, 4)


def apply(ch: Channel, rho) -> np.ndarray:
    """Operator-sum action sum_j K_j rho K_j^dag (returned as a raw 4x4 array)."""
    r = _matrix(rho)
    out = np.zeros((4, 4), dtype=complex)
    for k in ch.kraus_ops:
        out += k.matrix @ r @ dagger(k.matrix)
    return out


def completeness_defect(ch: Channel) -> float:
    return float(np.linalg.norm(ch.completeness - I4))


def choi(ch: Channel) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) E(|i><j|), unnormalised (trace 4 for full channels)."""
    out = np.zeros((16, 16), dtype=complex)
    for i in range(4):
        for j in range(4):
            e = np.zeros((4, 4), dtype=complex)
            e[i, j] = 1.0
            out[4 * i:4 * i + 4, 4 * j:4 * j + 4] = apply(ch, e)
    return out


def choi_min_eigenvalue(ch: Channel) -> float:
    c = choi(ch)
    return float(np.linalg.eigvalsh(0.5 * (c + dagger(c)))[0])


def tensor_independent(ea: Sequence, eb: Sequence, labels_a=None, labels_b=None) -> Channel:
    """Independent map: every product K_a (x) K_b of single-qubit Kraus operators."""
    ea = [as_cmat(k, 2) for k in ea]
    eb = [as_cmat(k, 2) for k in eb]
    labels_a = list(labels_a) if labels_a is not None else [str(i) for i in range(len(ea))]
    labels_b = list(labels_b) if labels_b is not None else [str(i) for i in range(len(eb))]
    ops = []
    for ka, la in zip(ea, labels_a):
        for kb, lb in zip(eb, labels_b):
            ops.append(KrausOperator(np.kron(ka, kb), (la, lb)))
    return Channel(tuple(ops))


def on_qubit_a(kraus_2x2: Sequence) -> Channel:
    return Channel(tuple(KrausOperator(np.kron(as_cmat(k, 2), I2)) for k in kraus_2x2))


def on_qubit_b(kraus_2x2: Sequence) -> Channel:
    return Channel(tuple(KrausOperator(np.kron(I2, as_cmat(k, 2))) for k in kraus_2x2))
