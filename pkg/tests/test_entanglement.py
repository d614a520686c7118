import numpy as np
import pytest

from decoq.entanglement import concurrence, negativity, partial_transpose_b
from decoq.states import DensityMatrix, bell_state, pure_state
from decoq.tensor import ContractViolation

from conftest import random_density_matrix, random_pure_vector, random_unitary

PSI_PLUS = bell_state("psi+").m


def wootters_by_hand(rho):
    # independent route: eigenvalues of the non-Hermitian product rho * rho_tilde
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def werner(p):
    return p * PSI_PLUS + (1 - p) * np.eye(4) / 4


def test_examples():
    for w in ("psi+", "psi-", "phi+", "phi-"):
        assert concurrence(bell_state(w)).value == pytest.approx(1, abs=1e-12)
    assert concurrence(np.eye(4) / 4).value == 0
    assert negativity(PSI_PLUS) == pytest.approx(0.5)
    assert negativity(np.eye(4) / 4) == 0


def test_werner_family_oracle():
    for p in np.linspace(0, 1, 100):
        expected = wootters_by_hand(werner(p))
        assert expected == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-7)
        assert concurrence(werner(p)).value == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-10)


def test_threshold_on_werner_grid():
    grid = np.arange(0, 1.0005, 1e-3)
    c_on = grid[[concurrence(werner(p)).value > 1e-12 for p in grid]].min()
    n_on = grid[[negativity(werner(p)) > 1e-12 for p in grid]].min()
    assert abs(c_on - 1 / 3) <= 1e-3 and abs(n_on - 1 / 3) <= 1e-3


def test_matches_direct_wootters(rng):
    for _ in range(50):
        rho = random_density_matrix(rng)
        assert concurrence(rho).value == pytest.approx(wootters_by_hand(rho), abs=1e-7)


def test_positivity_sets_coincide(rng):
    for _ in range(200):
        rho = random_density_matrix(rng, rank=int(rng.integers(1, 5)))
        c = concurrence(rho).value
        pt_min = np.linalg.eigvalsh(partial_transpose_b(rho)).min()
        assert (c > 1e-9) == (pt_min < -1e-9)
        assert (negativity(rho) > 1e-9) == (c > 1e-9)


def test_local_unitary_invariance(rng):
    for _ in range(50):
        rho = random_density_matrix(rng)
        u = np.kron(random_unitary(rng), random_unitary(rng))
        rotated = u @ rho @ u.conj().T
        assert abs(concurrence(rotated).value - concurrence(rho).value) <= 1e-10


def test_product_states_are_separable(rng):
    for _ in range(50):
        a = random_density_matrix(rng)[:2, :2]
        a = a / np.trace(a)
        b = random_density_matrix(rng)[2:, 2:]
        b = b / np.trace(b)
        assert concurrence(np.kron(a, b)).value <= 1e-7


def test_pure_states_determinant(rng):
    for _ in range(50):
        v = random_pure_vector(rng)
        c = concurrence(pure_state(v)).value
        assert c == pytest.approx(2 * abs(np.linalg.det(v.reshape(2, 2))), abs=1e-7)


def test_lambdas_sorted_nonnegative():
    r = concurrence(werner(0.7))
    assert all(x >= 0 for x in r.lambdas)
    assert list(r.lambdas) == sorted(r.lambdas, reverse=True)


def test_rejects_invalid():
    with pytest.raises(ContractViolation):
        concurrence(np.diag([2.0, 0, 0, 0]))
    assert isinstance(DensityMatrix(PSI_PLUS), DensityMatrix)
