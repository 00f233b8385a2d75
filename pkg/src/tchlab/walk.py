"""A free massive particle emulated by one photon on a cavity ring.

Positions are the N cavity labels mapped to x_q = q / sqrt(N), so the ring
spans [0, sqrt(N)).  The discrete Fourier transform defines a momentum
operator with the exact spectrum sqrt(N) (a/N - 1/2) for a = 0..N-1, and the
free Hamiltonian is that momentum squared over twice the mass, diagonal in
the same Fourier basis.  Reading the Hamiltonian's matrix elements row by
row yields the hop amplitudes and phases a physical cavity chain would need
in order to realize the particle.

The momentum operator follows the half-shift-conjugated Fourier form
A^-1 F D F^-1 A with A = diag(e^{i pi a}).  For even N that conjugation is a
half-ring translation in Fourier space, so momentum and the free Hamiltonian
commute exactly; odd N breaks the translation and the commutation with it.
All pinned checks use even N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import BasisState, HilbertSpace, NetworkConfig
from .operators import OperatorMatrix


def qft_matrix(n: int) -> np.ndarray:
    """Unitary with elements exp(-2 pi i a c / n) / sqrt(n)."""
    if n < 2:
        raise ValueError("need at least two sites")
    a = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(a, a) / n) / math.sqrt(n)


def momentum_values(n: int) -> np.ndarray:
    """The exact momentum spectrum sqrt(n) * (a/n - 1/2), a = 0..n-1."""
    if n < 2:
        raise ValueError("need at least two sites")
    a = np.arange(n)
    return math.sqrt(n) * (a / n - 0.5)


def momentum_operator(n: int) -> np.ndarray:
    """Discrete momentum: A^-1 F diag(sqrt(n)(a/n - 1/2)) F^-1 A with
    A = diag(e^{i pi a}).  Hermitian with the spectrum of momentum_values."""
    f = qft_matrix(n)
    a_phase = np.exp(1j * np.pi * np.arange(n))
    d = momentum_values(n)
    core = f @ (d[:, None] * f.conj().T)
    return (a_phase.conj()[:, None] * core) * a_phase[None, :]


def free_hamiltonian(n: int, mass: float) -> np.ndarray:
    """Kinetic energy p^2 / 2m, diagonal in the Fourier basis."""
    if mass <= 0.0:
        raise ValueError("mass must be positive")
    f = qft_matrix(n)
    energies = momentum_values(n) ** 2 / (2.0 * mass)
    return f @ (energies[:, None] * f.conj().T)


@dataclass
class CouplingNetwork:
    """Cavity-chain realization of a one-photon Hamiltonian: per-cavity
    energies plus hop links (q, p, amplitude, phase) for q < p."""

    n: int
    diagonal: np.ndarray
    hops: list[tuple[int, int, float, float]]

    def to_matrix(self) -> np.ndarray:
        m = np.diag(self.diagonal.astype(complex))
        for q, p, r, phi in self.hops:
            m[q, p] = r * np.exp(1j * phi)
            m[p, q] = np.conj(m[q, p])
        return m

    def distance_profile(self) -> list[tuple[int, int, float, float]]:
        """Per-separation aggregates (distance, count, mean amplitude,
        mean phase) over all hops."""
        buckets: dict[int, list[tuple[float, float]]] = {}
        for q, p, r, phi in self.hops:
            buckets.setdefault(p - q, []).append((r, phi))
        out = []
        for d in sorted(buckets):
            rs = [r for r, _ in buckets[d]]
            phis = [phi for _, phi in buckets[d]]
            out.append((d, len(rs), float(np.mean(rs)), float(np.mean(phis))))
        return out


def coupling_network(h: np.ndarray, tol: float = 1e-12) -> CouplingNetwork:
    """Read a Hermitian one-photon Hamiltonian as a cavity network."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("need a square matrix")
    if np.max(np.abs(h - h.conj().T)) > 1e-9 * max(1.0, float(np.max(np.abs(h)))):
        raise ValueError("need a Hermitian matrix")
    n = h.shape[0]
    hops = []
    for q in range(n):
        for p in range(q + 1, n):
            r = abs(h[q, p])
            if r > tol:
                hops.append((q, p, float(r), float(np.angle(h[q, p]))))
    return CouplingNetwork(n=n, diagonal=np.real(np.diag(h)).copy(), hops=hops)


def feynman_kernel(x, t: float, mass: float, amplitude: float = 1.0, hbar: float = 1.0):
    """Free-particle propagator profile A t^{-1/2} exp(i m x^2 / (hbar t)).
    Only the x-dependence at fixed t matters for comparisons; ``amplitude``
    absorbs the overall normalization.  Undefined at t <= 0.

    In the lattice units used by the walk (positions q / sqrt(N), Fourier
    phases 2 pi q a / N, plain exp(-i E t) time phases), the stationary-phase
    limit of the ring dynamics for particle mass m carries the curvature of
    ``mass = 2 pi^2 m`` in this parametrization, times an exact alternating
    sign from centering the momentum band; ``simulate_walk`` stores that
    matched form."""
    if t <= 0.0:
        raise ValueError("the kernel is defined for t > 0 only")
    if mass <= 0.0:
        raise ValueError("mass must be positive")
    x = np.asarray(x, dtype=float)
    return amplitude * t ** -0.5 * np.exp(1j * mass * x**2 / (hbar * t))


def walk_space(n: int) -> HilbertSpace:
    """One photon on n atomless cavities."""
    cfg = NetworkConfig(
        n_cavities=n,
        atoms_per_cavity=(0,) * n,
        couplings=(),
        max_photons=1,
        omega=1.0,
    )
    return HilbertSpace(cfg, sector=1)


def cavity_basis_index(space: HilbertSpace, q: int) -> int:
    """Basis index of the state with the photon in cavity q."""
    photons = [0] * space.config.n_cavities
    photons[q] = 1
    return space.index_of(BasisState(tuple(photons), ()))


def embed_in_space(space: HilbertSpace, matrix: np.ndarray) -> OperatorMatrix:
    """Re-index a cavity-ordered one-photon matrix into a sector space."""
    n = space.config.n_cavities
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (n, n) or space.dim != n:
        raise ValueError("matrix shape must match the one-photon sector")
    perm = [cavity_basis_index(space, q) for q in range(n)]
    out = np.zeros_like(matrix)
    out[np.ix_(perm, perm)] = matrix
    return OperatorMatrix(space, out)


@dataclass(frozen=True)
class WalkConfig:
    """Walk run parameters.  ``t_max = None`` picks mass/4, early enough
    that the spreading photon has not wrapped around the ring."""

    n_cavities: int = 128
    mass: float = 1.0
    origin: int | None = None
    t_max: float | None = None
    n_times: int = 51

    def __post_init__(self):
        if self.n_cavities < 2:
            raise ValueError("need at least two cavities")
        if self.mass <= 0.0:
            raise ValueError("mass must be positive")
        if self.origin is not None and not 0 <= self.origin < self.n_cavities:
            raise ValueError("origin cavity out of range")
        if self.t_max is not None and self.t_max <= 0.0:
            raise ValueError("t_max must be positive")
        if self.n_times < 2:
            raise ValueError("need at least two time samples")

    @property
    def resolved_origin(self) -> int:
        return self.n_cavities // 2 if self.origin is None else self.origin

    @property
    def resolved_t_max(self) -> float:
        return self.mass / 4.0 if self.t_max is None else self.t_max


@dataclass
class WalkResult:
    """Simulated single-photon spread plus the analytic comparisons."""

    config: WalkConfig
    times: np.ndarray
    positions: np.ndarray  # x_q = q / sqrt(N), cavity order
    amplitudes: np.ndarray  # (n_times, N) complex, cavity order
    kernel: np.ndarray  # (n_times, N) complex, lattice-matched; zero at t = 0
    variances: np.ndarray
    momentum_populations: np.ndarray  # (n_times, N) magnitudes
    momentum_drift: float
    norm_drift: float
    network: CouplingNetwork = field(repr=False)


def simulate_walk(config: WalkConfig) -> WalkResult:
    """Spread one photon from the origin cavity under the free-particle
    Hamiltonian and tabulate everything the comparisons need: amplitudes,
    lattice-matched kernel values at the same points (see feynman_kernel for
    the unit conversion), position variance, and momentum-basis populations
    (conserved because momentum commutes with the generator).

    The kernel describes the dynamics where the stationary momentum lies
    inside the band, |x - x0| < (sqrt(N)/2) t / (2 pi m); outside that cone
    propagation is bandwidth-limited and the comparison is not meaningful."""
    n = config.n_cavities
    m = config.mass
    origin = config.resolved_origin
    times = np.linspace(0.0, config.resolved_t_max, config.n_times)

    h = free_hamiltonian(n, m)
    w, v = np.linalg.eigh(h)
    psi0 = np.zeros(n, dtype=complex)
    psi0[origin] = 1.0
    coef = v.conj().T @ psi0

    positions = np.arange(n) / math.sqrt(n)
    x0 = positions[origin]
    # exact alternating sign from centering the momentum band at zero
    band_sign = np.exp(-1j * np.pi * (np.arange(n) - origin))

    pw, pv = np.linalg.eigh(momentum_operator(n))
    del pw  # populations are labeled by eigenvector column order

    amplitudes = np.empty((len(times), n), dtype=complex)
    kernel = np.zeros((len(times), n), dtype=complex)
    variances = np.empty(len(times))
    populations = np.empty((len(times), n))
    norm_drift = 0.0
    for i, t in enumerate(times):
        amps = v @ (np.exp(-1j * w * t) * coef)
        amplitudes[i] = amps
        prob = np.abs(amps) ** 2
        norm_drift = max(norm_drift, abs(float(prob.sum()) - 1.0))
        mean = float(prob @ positions)
        variances[i] = float(prob @ positions**2) - mean**2
        populations[i] = np.abs(pv.conj().T @ amps)
        if t > 0.0:
            kernel[i] = band_sign * feynman_kernel(
                positions - x0, t, 2.0 * math.pi**2 * m
            )
    momentum_drift = float(np.max(np.abs(populations - populations[0])))

    return WalkResult(
        config=config,
        times=times,
        positions=positions,
        amplitudes=amplitudes,
        kernel=kernel,
        variances=variances,
        momentum_populations=populations,
        momentum_drift=momentum_drift,
        norm_drift=norm_drift,
        network=coupling_network(h),
    )


def ballistic_exponent(times, variances) -> float:
    """Log-log slope of variance growth; 2 means ballistic spreading."""
    times = np.asarray(times, dtype=float)
    variances = np.asarray(variances, dtype=float)
    mask = (times > 0.0) & (variances > 0.0)
    if mask.sum() < 2:
        raise ValueError("need at least two positive-time variance samples")
    slope, _ = np.polyfit(np.log(times[mask]), np.log(variances[mask]), 1)
    return float(slope)
