import math

import numpy as np
import pytest

from tcqubits import (bell1_vector, bell2_vector, concurrence, concurrence_x_state, eof,
                      fidelity, singlet_vector, target, werner_eta_from_k)

RNG = np.random.default_rng(55)


def random_density(rng=RNG):
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_x_density(rng=RNG):
    d = rng.uniform(0.05, 1.0, size=4)
    d /= d.sum()
    rho = np.diag(d).astype(complex)
    m14 = math.sqrt(d[0] * d[3]) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    m23 = math.sqrt(d[1] * d[2]) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    rho[0, 3], rho[3, 0] = m14, np.conj(m14)
    rho[1, 2], rho[2, 1] = m23, np.conj(m23)
    return rho


def test_concurrence_product_state():
    assert concurrence(np.diag([0, 0, 0, 1.0]).astype(complex)) == 0.0


def test_concurrence_bell2_is_one():
    rho = np.zeros((4, 4), dtype=complex)
    rho[1:3, 1:3] = 0.5
    assert concurrence(rho) == pytest.approx(1.0, abs=1e-12)


def test_concurrence_werner_eta_one_is_zero():
    assert concurrence(target("werner", eta=1.0).matrix) == 0.0


def test_concurrence_rejects_non_hermitian():
    rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    rho[0, 1] = 0.4
    with pytest.raises(ValueError):
        concurrence(rho)


def test_concurrence_matches_x_state_closed_form():
    for _ in range(50):
        rho = random_x_density()
        assert concurrence(rho) == pytest.approx(concurrence_x_state(rho), abs=1e-10)


def test_concurrence_local_phase_invariant():
    for _ in range(25):
        rho = random_density()
        theta, chi = RNG.uniform(0, 2 * np.pi, size=2)
        u = np.kron(np.diag([np.exp(1j * theta), 1]), np.diag([np.exp(1j * chi), 1]))
        rotated = u @ rho @ u.conj().T
        assert concurrence(rotated) == pytest.approx(concurrence(rho), abs=1e-10)


def test_concurrence_in_unit_interval():
    for _ in range(50):
        c = concurrence(random_density())
        assert 0.0 <= c <= 1.0


def test_eof_endpoints():
    assert eof(0.0) == 0.0
    assert eof(1.0) == 1.0


def test_eof_half():
    # frozen from direct evaluation of the binary-entropy formula
    assert eof(0.5) == pytest.approx(0.3545790, abs=1e-6)


def test_eof_monotone():
    grid = np.linspace(0.01, 1.0, 200)
    vals = [eof(float(c)) for c in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_eof_range_check():
    with pytest.raises(ValueError):
        eof(1.2)
    with pytest.raises(ValueError):
        eof(-0.1)


def test_bell1_target_corners():
    t = target("bell1", phi=0.0)
    assert t.matrix[0, 0] == pytest.approx(0.5)
    assert t.matrix[0, 3] == pytest.approx(0.5)
    assert t.matrix[3, 0] == pytest.approx(0.5)
    assert np.count_nonzero(np.abs(t.matrix) > 1e-15) == 4
    tpi = target("bell1", phi=math.pi)
    assert tpi.matrix[3, 0] == pytest.approx(-0.5)


def test_bell_targets_are_rank_one_projectors():
    for t in (target("bell1", phi=1.1), target("bell2")):
        evals = np.linalg.eigvalsh(t.matrix)
        assert evals[-1] == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(evals[:-1])) < 1e-12
        assert np.allclose(t.matrix @ t.matrix, t.matrix, atol=1e-12)


def test_werner_eta_one_matrix():
    t = target("werner", eta=1.0)
    expected = np.diag([1 / 3, 1 / 6, 1 / 6, 1 / 3]).astype(complex)
    expected[1, 2] = expected[2, 1] = 1 / 6
    assert np.allclose(t.matrix, expected, atol=1e-15)


def test_werner_k_one_is_singlet():
    t = target("werner", k=1.0)
    psi = singlet_vector()
    assert np.allclose(t.matrix, np.outer(psi, psi.conj()), atol=1e-15)
    assert werner_eta_from_k(1.0) == 0.0


def test_werner_parameter_range():
    with pytest.raises(ValueError):
        target("werner", eta=1.2)
    with pytest.raises(ValueError):
        target("werner", k=-0.5)
    with pytest.raises(ValueError):
        target("werner")


def test_target_unknown_kind():
    with pytest.raises(ValueError):
        target("ghz")


def test_fidelity_self():
    rho = random_density()
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)


def test_fidelity_gg_vs_bell1():
    rho = np.diag([0, 0, 0, 1.0]).astype(complex)
    assert fidelity(rho, target("bell1", phi=0.0)) == pytest.approx(0.5, abs=1e-12)


def test_fidelity_pure_target_reduction():
    # against a pure target the Uhlmann form collapses to <psi|rho|psi>
    for vec in (bell1_vector(0.7), bell2_vector(), singlet_vector()):
        rho = random_density()
        direct = float((vec.conj() @ rho @ vec).real)
        assert fidelity(rho, np.outer(vec, vec.conj())) == pytest.approx(direct, abs=1e-10)


def test_fidelity_symmetric():
    a, b = random_density(), random_density()
    assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-10)
