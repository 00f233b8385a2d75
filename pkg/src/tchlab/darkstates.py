"""Optical selection of dark (collectively decoupled) atomic states.

A register of two-level atoms in one leaky cavity couples to the mode only
through the collective lowering operator sum_j g_j sigma_j^-.  States the
collective raising operator annihilates (singlets, for equal couplings)
never absorb the probe photon, so the photon leaks out with exactly the
empty-cavity profile.  Any other state hybridizes with the mode; in the
strong-coupling regime the dressed components with more photons leak
faster, so the first arrival shifts earlier on average.  Either way the
arrival-time statistics of the leaked photon separate "dark" from "light"
hypotheses.

Atomic basis indices are the bit patterns of the excited flags, atom 0 most
significant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .basis import BasisState, HilbertSpace, NetworkConfig
from .evolution import NumericalDriftError
from .operators import OperatorMatrix, build_tc, photon_number_operator


# ---------------------------------------------------------------------------
# state constructors
# ---------------------------------------------------------------------------

def singlet_state() -> np.ndarray:
    """Two-atom singlet (|01> - |10>) / sqrt(2)."""
    s = np.zeros(4, dtype=complex)
    s[1] = 1.0 / math.sqrt(2.0)
    s[2] = -1.0 / math.sqrt(2.0)
    return s


def triplet_state() -> np.ndarray:
    """Two-atom symmetric one-excitation state (|01> + |10>) / sqrt(2)."""
    t = np.zeros(4, dtype=complex)
    t[1] = 1.0 / math.sqrt(2.0)
    t[2] = 1.0 / math.sqrt(2.0)
    return t


def singlet_product(pairing) -> np.ndarray:
    """Tensor product of singlets over a perfect matching of the atoms.

    ``pairing`` is a sequence of index pairs covering 0..n-1 exactly once,
    e.g. ((0, 1), (2, 3)) or the crossed ((0, 2), (1, 3)).  Each pair (i, j)
    with i < j contributes (|0_i 1_j> - |1_i 0_j>) / sqrt(2).
    """
    pairs = [tuple(sorted(p)) for p in pairing]
    if not pairs:
        raise ValueError("pairing must contain at least one pair")
    flat = [a for p in pairs for a in p]
    n = len(flat)
    if sorted(flat) != list(range(n)):
        raise ValueError("pairing must cover atoms 0..n-1 exactly once")
    amps = np.zeros(2**n, dtype=complex)
    weight = (1.0 / math.sqrt(2.0)) ** len(pairs)
    for choices in itertools.product((0, 1), repeat=len(pairs)):
        index = 0
        sign = 1.0
        for (i, j), c in zip(pairs, choices):
            # c = 0 puts the excitation on atom j (plus branch), c = 1 on atom i
            hi, lo = (i, j) if c else (j, i)
            index |= 1 << (n - 1 - hi)
            if c:
                sign = -sign
        amps[index] = sign * weight
    return amps


def multi_singlet_d3() -> np.ndarray:
    """Completely antisymmetric state of three three-level atoms,
    (1/sqrt(6)) sum over permutations of the levels with alternating sign.
    Basis index of levels (l0, l1, l2) is 9 l0 + 3 l1 + l2."""
    amps = np.zeros(27, dtype=complex)
    for perm in itertools.permutations(range(3)):
        inversions = sum(
            1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b]
        )
        sign = -1.0 if inversions % 2 else 1.0
        amps[9 * perm[0] + 3 * perm[1] + perm[2]] = sign / math.sqrt(6.0)
    return amps


# ---------------------------------------------------------------------------
# darkness check
# ---------------------------------------------------------------------------

def collective_lowering(couplings) -> np.ndarray:
    """Matrix of sum_j g_j sigma_j^- on the atomic register."""
    couplings = tuple(float(g) for g in couplings)
    n = len(couplings)
    dim = 2**n
    op = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        for j in range(n):
            bit = 1 << (n - 1 - j)
            if b & bit:
                op[b & ~bit, b] += couplings[j]
    return op


def three_level_lowering(upper: int, lower: int, n_atoms: int = 3) -> np.ndarray:
    """Collective lowering sum_j |lower><upper|_j on a register of three-level
    atoms, for checking darkness of qutrit states such as the antisymmetric
    triple.  Basis index is the base-3 expansion of the levels, atom 0 most
    significant."""
    if not 0 <= lower < upper <= 2:
        raise ValueError("need levels 0 <= lower < upper <= 2")
    dim = 3**n_atoms
    op = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        digits = b
        for j in range(n_atoms - 1, -1, -1):
            level = digits % 3
            digits //= 3
            if level == upper:
                place = 3 ** (n_atoms - 1 - j)
                op[b - (upper - lower) * place, b] += 1.0
    return op


class DarknessReport(NamedTuple):
    is_dark: bool
    absorption_residual: float
    emission_residual: float


def is_dark(psi_at, couplings, tol: float = 1e-9) -> DarknessReport:
    """Check whether an atomic state decouples from the cavity mode.

    The absorption channel is the collective raising operator applied to the
    state (can it take a photon?), the emission channel the collective
    lowering (can it give one up?).  Darkness means the absorption residual
    vanishes within tolerance."""
    psi_at = np.asarray(psi_at, dtype=complex)
    n = len(couplings)
    if psi_at.shape != (2**n,):
        raise ValueError("atomic state dimension must be 2**n_atoms")
    if abs(np.vdot(psi_at, psi_at).real - 1.0) > 1e-9:
        raise ValueError("atomic state must be normalized")
    lowering = collective_lowering(couplings)
    absorption = float(np.linalg.norm(lowering.conj().T @ psi_at))
    emission = float(np.linalg.norm(lowering @ psi_at))
    return DarknessReport(absorption < tol, absorption, emission)


# ---------------------------------------------------------------------------
# leaky-cavity emission
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecayConfig:
    """One leaky cavity holding the atomic register.

    ``kappa = None`` picks a photon loss rate of a tenth of the first
    coupling (or 1e-4 with no atoms); ``t_max = None`` observes for 20
    photon lifetimes."""

    couplings: tuple[float, ...] = (1e-3, 1e-3)
    kappa: float | None = None
    omega: float = 1.0
    n_times: int = 2001

    t_max: float | None = None

    def __post_init__(self):
        if self.kappa is not None and self.kappa <= 0.0:
            raise ValueError("kappa must be positive")
        if self.n_times < 3:
            raise ValueError("need at least three time samples")
        if self.t_max is not None and self.t_max <= 0.0:
            raise ValueError("t_max must be positive")
        object.__setattr__(self, "couplings", tuple(float(g) for g in self.couplings))

    @property
    def n_atoms(self) -> int:
        return len(self.couplings)

    @property
    def resolved_kappa(self) -> float:
        if self.kappa is not None:
            return self.kappa
        base = self.couplings[0] if self.couplings else 1e-3
        return base / 10.0

    @property
    def resolved_t_max(self) -> float:
        return 20.0 / self.resolved_kappa if self.t_max is None else self.t_max


@dataclass
class EmissionReport:
    """Survival curve and emission-time density of the probe photon."""

    config: DecayConfig
    sector: int
    times: np.ndarray
    survival: np.ndarray
    density: np.ndarray
    escape_probability: float
    mean_emission_time: float  # censored at t_max


def _atomic_excitation_count(psi_at: np.ndarray, n_atoms: int) -> int:
    counts = {
        bin(b).count("1")
        for b in range(len(psi_at))
        if abs(psi_at[b]) > 1e-12
    }
    if not counts:
        raise ValueError("atomic state must not vanish")
    if len(counts) > 1:
        raise ValueError(
            "atomic state must have a definite excitation count "
            f"(found components with {sorted(counts)} excitations)"
        )
    del n_atoms
    return counts.pop()


def emission_density(psi_at, config: DecayConfig) -> EmissionReport:
    """Evolve photon + atomic state under the lossy cavity and tabulate the
    survival probability S(t) and emission density p(t) = -dS/dt.

    The density comes from centered differences of S; a grid too coarse to
    keep p non-negative (beyond -1e-6) raises NumericalDriftError, as does a
    broken balance between the integrated density and the remaining
    survival."""
    psi_at = np.asarray(psi_at, dtype=complex)
    s = config.n_atoms
    if psi_at.shape != (2**s,):
        raise ValueError("atomic state dimension must be 2**n_atoms")
    if abs(np.vdot(psi_at, psi_at).real - 1.0) > 1e-9:
        raise ValueError("atomic state must be normalized")
    excitations = _atomic_excitation_count(psi_at, s)
    sector = 1 + excitations
    # photons never exceed the total excitation count, so this cap is exact
    network = NetworkConfig(
        n_cavities=1,
        atoms_per_cavity=(s,),
        couplings=config.couplings,
        max_photons=sector,
        omega=config.omega,
    )
    space = HilbertSpace(network, sector)
    kappa = config.resolved_kappa
    h_eff = (
        build_tc(space, 0).matrix
        - 0.5j * kappa * photon_number_operator(space, 0).matrix
    )

    gain = (h_eff - h_eff.conj().T) / 2j
    if float(np.max(np.linalg.eigvalsh(gain))) > 1e-12 * max(1.0, kappa):
        raise ValueError("effective generator has a growing direction")

    amps = np.zeros(space.dim, dtype=complex)
    for b in range(2**s):
        if abs(psi_at[b]) > 0.0:
            bits = tuple((b >> (s - 1 - j)) & 1 for j in range(s))
            amps[space.index_of(BasisState((1,), bits))] = psi_at[b]

    times = np.linspace(0.0, config.resolved_t_max, config.n_times)
    dt = times[1] - times[0]
    step = scipy.linalg.expm(-1j * h_eff * dt)
    survival = np.empty(len(times))
    for i in range(len(times)):
        survival[i] = float(np.vdot(amps, amps).real)
        if i + 1 < len(times):
            amps = step @ amps

    density = -np.gradient(survival, times)
    if float(density.min()) < -1e-6:
        raise NumericalDriftError(
            f"emission density dips to {density.min():.3e}; refine the time grid"
        )
    balance = float(np.trapezoid(density, times)) + float(survival[-1])
    if abs(balance - 1.0) > 1e-4:
        raise NumericalDriftError(
            f"density + survival balance off by {balance - 1.0:.3e}"
        )
    mean = float(np.trapezoid(times * density, times)) + times[-1] * float(survival[-1])
    return EmissionReport(
        config=config,
        sector=sector,
        times=times,
        survival=survival,
        density=density,
        escape_probability=1.0 - float(survival[-1]),
        mean_emission_time=mean,
    )


# ---------------------------------------------------------------------------
# sampling and classification
# ---------------------------------------------------------------------------

@dataclass
class EmissionSamples:
    """Monte Carlo emission times; censored entries sit at t_max."""

    times: np.ndarray
    censored: np.ndarray

    @property
    def n_censored(self) -> int:
        return int(self.censored.sum())


def sample_emission_times(report: EmissionReport, n_trials: int, rng=None) -> EmissionSamples:
    """Inverse-CDF draws from the numeric emission density.  Trials whose
    uniform draw exceeds the total escape probability are censored at the
    observation horizon."""
    if n_trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(rng)
    cdf = np.maximum.accumulate(1.0 - report.survival)
    u = rng.random(n_trials)
    times = np.interp(u, cdf, report.times)
    censored = u > cdf[-1]
    times[censored] = report.times[-1]
    return EmissionSamples(times=times, censored=censored)


@dataclass
class Classification:
    decision: str
    z_score: float
    n_trials: int
    sample_mean: float
    threshold: float
    dark_mean: float
    light_mean: float
    detector_error: float
    n_censored: int | None


def classify_dark(
    samples,
    dark_mean: float,
    light_mean: float,
    detector_error: float = 0.03,
    rng=None,
) -> Classification:
    """Decide dark vs light from sampled emission times.

    Detector error flips each sample's evidence with probability epsilon by
    mirroring it across the hypothesis midpoint; at epsilon = 1/2 the mean
    carries no information and the z-score collapses.  The decision compares
    the (flipped) sample mean with the midpoint threshold; an exact tie goes
    to "light"."""
    if not 0.0 <= detector_error <= 1.0:
        raise ValueError("detector_error must lie in [0, 1]")
    if dark_mean == light_mean:
        raise ValueError("hypotheses with equal means cannot be classified")
    if isinstance(samples, EmissionSamples):
        times = samples.times
        n_censored = samples.n_censored
    else:
        times = np.asarray(samples, dtype=float)
        n_censored = None
    n = len(times)
    if n < 2:
        raise ValueError("need at least two samples")
    rng = np.random.default_rng(rng)
    flips = rng.random(n) < detector_error
    observed = np.where(flips, dark_mean + light_mean - times, times)
    threshold = 0.5 * (dark_mean + light_mean)
    mean = float(observed.mean())
    se = float(observed.std(ddof=1)) / math.sqrt(n)
    z = (mean - threshold) / se if se > 0.0 else math.inf * np.sign(mean - threshold)
    if mean == threshold:
        decision = "light"
    elif (mean < threshold) == (dark_mean < threshold):
        decision = "dark"
    else:
        decision = "light"
    return Classification(
        decision=decision,
        z_score=float(z),
        n_trials=n,
        sample_mean=mean,
        threshold=threshold,
        dark_mean=dark_mean,
        light_mean=light_mean,
        detector_error=detector_error,
        n_censored=n_censored,
    )
