import math

import numpy as np
import pytest

from tchlab import (
    HilbertSpace,
    HopSpec,
    NetworkConfig,
    WalkConfig,
    ballistic_exponent,
    build_tch,
    cavity_basis_index,
    coupling_network,
    embed_in_space,
    feynman_kernel,
    free_hamiltonian,
    momentum_operator,
    momentum_values,
    qft_matrix,
    simulate_walk,
    walk_space,
)


@pytest.mark.parametrize("n", [2, 8, 64])
def test_qft_is_unitary(n):
    f = qft_matrix(n)
    assert np.max(np.abs(f @ f.conj().T - np.eye(n))) < 1e-10


def test_qft_two_site_matrix():
    f = qft_matrix(2)
    expected = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    assert np.max(np.abs(f - expected)) < 1e-15


@pytest.mark.parametrize("n", [2, 8, 64])
def test_momentum_spectrum_is_exact(n):
    p = momentum_operator(n)
    assert np.max(np.abs(p - p.conj().T)) < 1e-12
    w = np.sort(np.linalg.eigvalsh(p))
    assert np.max(np.abs(w - np.sort(momentum_values(n)))) < 1e-8
    assert momentum_values(n)[0] == -math.sqrt(n) / 2.0


@pytest.mark.parametrize("n", [8, 64, 128])
def test_momentum_commutes_with_generator_for_even_n(n):
    p = momentum_operator(n)
    h = free_hamiltonian(n, 1.0)
    assert np.max(np.abs(p @ h - h @ p)) < 1e-10


def test_odd_ring_breaks_the_commutation():
    # the band-centering shift is a clean translation only for even rings
    p = momentum_operator(9)
    h = free_hamiltonian(9, 1.0)
    assert np.max(np.abs(p @ h - h @ p)) > 1e-2


def test_coupling_network_round_trip():
    h = free_hamiltonian(16, 0.7)
    net = coupling_network(h)
    assert np.max(np.abs(net.to_matrix() - h)) < 1e-12
    assert all(q < p for q, p, _, _ in net.hops)
    profile = net.distance_profile()
    assert [d for d, _, _, _ in profile] == sorted({p - q for q, p, _, _ in net.hops})
    with pytest.raises(ValueError):
        coupling_network(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_network_realized_as_cavity_hamiltonian():
    # hop list + uniform cavity detuning reproduce the one-photon matrix
    n = 8
    h = free_hamiltonian(n, 1.0)
    net = coupling_network(h)
    diag = net.diagonal
    assert np.max(np.abs(diag - diag[0])) < 1e-12  # circulant: constant diagonal
    cfg = NetworkConfig(
        n_cavities=n,
        atoms_per_cavity=(0,) * n,
        max_photons=1,
        omega=float(diag[0]),
    )
    space = HilbertSpace(cfg, sector=1)
    assert space.dim == n
    assert walk_space(n).dim == n
    hops = [HopSpec(q, p, amplitude=r, phase=phi) for q, p, r, phi in net.hops]
    produced = build_tch(space, hops).matrix
    embedded = embed_in_space(space, h).matrix
    assert np.max(np.abs(produced - embedded)) < 1e-12
    # basis order maps cavities through cavity_basis_index
    for q in range(n):
        idx = cavity_basis_index(space, q)
        assert space.states[idx].photons[q] == 1


def test_walk_config_defaults_and_validation():
    cfg = WalkConfig(n_cavities=64, mass=2.0)
    assert cfg.resolved_origin == 32
    assert cfg.resolved_t_max == 0.5
    with pytest.raises(ValueError):
        WalkConfig(n_cavities=1)
    with pytest.raises(ValueError):
        WalkConfig(mass=0.0)
    with pytest.raises(ValueError):
        WalkConfig(origin=200)
    with pytest.raises(ValueError):
        WalkConfig(t_max=-1.0)
    with pytest.raises(ValueError):
        WalkConfig(n_times=1)


def test_simulated_walk_conserves_everything():
    result = simulate_walk(WalkConfig(n_cavities=128))
    assert result.norm_drift < 1e-10
    assert result.momentum_drift < 1e-10
    assert abs(result.variances[0]) < 1e-12  # starts localized
    n, origin = 128, 64
    mirror = (2 * origin - np.arange(n)) % n
    refl = np.max(
        np.abs(np.abs(result.amplitudes) - np.abs(result.amplitudes[:, mirror]))
    )
    assert refl < 1e-8


def test_ballistic_spreading_exponent():
    result = simulate_walk(WalkConfig(n_cavities=128))
    slope = ballistic_exponent(result.times, result.variances)
    assert abs(slope - 2.0) < 0.05


def test_kernel_matches_dynamics_in_band():
    # phases agree with the free propagator where the stationary momentum
    # stays inside the band
    t_max = 2.0
    result = simulate_walk(WalkConfig(n_cavities=128, t_max=t_max, n_times=3))
    n, origin = 128, 64
    x = result.positions - result.positions[origin]
    x_lim = 0.8 * (math.sqrt(n) / 2.0) * t_max / (2.0 * math.pi)
    band = np.abs(x) <= x_lim
    psi = result.amplitudes[-1, band]
    ker = result.kernel[-1, band]
    overlap = abs(np.vdot(ker, psi)) / (np.linalg.norm(ker) * np.linalg.norm(psi))
    assert overlap > 0.98
    assert np.max(np.abs(result.kernel[0])) == 0.0  # undefined at t = 0


def test_kernel_domain_errors():
    with pytest.raises(ValueError):
        feynman_kernel(np.zeros(3), 0.0, 1.0)
    with pytest.raises(ValueError):
        feynman_kernel(np.zeros(3), -1.0, 1.0)
    with pytest.raises(ValueError):
        feynman_kernel(np.zeros(3), 1.0, 0.0)


def test_ballistic_exponent_needs_data():
    with pytest.raises(ValueError):
        ballistic_exponent([0.0], [0.0])
