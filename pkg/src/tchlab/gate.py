"""Two-qubit conditional-sign gate on a three-cavity photonic register.

Qubit encoding: logical |0> is an excited atom in an empty cavity, logical
|1> is one photon next to a de-excited atom.  Cavity 0 carries qubit x,
cavity 1 carries qubit y, cavity 2 is an auxiliary cavity that starts empty
with its atom in the ground state, so every register state sits in the
two-excitation sector of the three-cavity network.

The gate itself is a timed sequence of photon-exchange pulses and free
stretches.  Exchanges are Gaussian hop pulses whose time-integrated area is
a quarter of a full hop cycle (a complete photon swap, phase -i per moved
photon); free stretches last half a one-excitation Rabi period, except for
the central stretch of 2*n2 two-excitation half-periods.  The pair (n1, n2)
is chosen so that 2*n2 two-excitation periods come as close as possible to
2*n1 + 1/2 one-excitation periods; the leftover mismatch is the gate's
intrinsic error and shrinks as better pairs are allowed.

With the sign convention used here the ideal action is
|x,y> -> (-1)^((x XOR 1) AND y) |x,y>, i.e. only |01> changes sign; the
variant that flips |10> instead is exposed separately.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .basis import BasisState, HilbertSpace, NetworkConfig
from .evolution import (
    EvolutionSettings,
    StateVector,
    evolve_const,
    evolve_pulsed,
    rabi_periods,
)
from .operators import (
    GaussianPulse,
    HopSpec,
    OperatorMatrix,
    amplitude_for_area,
    build_tch,
    jump_operator,
)

X_CAVITY, Y_CAVITY, AUX_CAVITY = 0, 1, 2
BASIS_LABELS = ("00", "01", "10", "11")
PULSE_CUTOFF = 6.0  # envelope truncation, in sigmas; window width is twice this


# ---------------------------------------------------------------------------
# ideal 4x4 references
# ---------------------------------------------------------------------------

def pauli_x() -> np.ndarray:
    return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def hadamard_matrix() -> np.ndarray:
    """The basis-change that conjugates a phase flip into a bit flip."""
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def csign_matrix() -> np.ndarray:
    return np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def cnot_matrix() -> np.ndarray:
    """Controlled NOT, first qubit controls."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[1, 1] = m[2, 3] = m[3, 2] = 1.0
    return m


def cocsign_matrix() -> np.ndarray:
    """Sign flip on |01> only: phase (-1)^((x XOR 1) AND y)."""
    return np.diag([1.0, -1.0, 1.0, 1.0]).astype(complex)


def cocsign_alt_matrix() -> np.ndarray:
    """The mirrored convention, sign flip on |10>: (-1)^(x AND (y XOR 1))."""
    return np.diag([1.0, 1.0, -1.0, 1.0]).astype(complex)


def _as_qubit_pair(q) -> np.ndarray:
    q = np.asarray(q, dtype=complex)
    if q.shape != (4,):
        raise ValueError("a two-qubit state needs exactly 4 amplitudes")
    if abs(np.vdot(q, q).real - 1.0) > 1e-9:
        raise ValueError("two-qubit amplitudes must be normalized")
    return q


def uniform_superposition() -> np.ndarray:
    """The balanced input (|00> + |01> + |10> + |11>) / 2."""
    return np.full(4, 0.5, dtype=complex)


def ideal_cocsign(q) -> np.ndarray:
    """Apply the ideal gate (sign flip on |01>) to a two-qubit state."""
    return cocsign_matrix() @ _as_qubit_pair(q)


def ideal_cocsign_alt(q) -> np.ndarray:
    """Apply the mirrored-convention gate (sign flip on |10>)."""
    return cocsign_alt_matrix() @ _as_qubit_pair(q)


# ---------------------------------------------------------------------------
# resonance pairs
# ---------------------------------------------------------------------------

def resonance_table(n_max: int, top: int | None = None) -> list[tuple[int, int, float]]:
    """All (n1, n2) pairs up to n_max ranked by the timing mismatch
    |2 n2 / sqrt(2) - 2 n1 - 1/2|, in units of the one-excitation period.
    Ties prefer smaller n2, then smaller n1."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    rows = []
    for n1 in range(1, n_max + 1):
        for n2 in range(1, n_max + 1):
            residual = abs(2.0 * n2 / math.sqrt(2.0) - 2.0 * n1 - 0.5)
            rows.append((n1, n2, residual))
    rows.sort(key=lambda r: (r[2], r[1], r[0]))
    if top is not None:
        if top < 0:
            raise ValueError("top must be non-negative")
        rows = rows[:top]
    return rows


def find_resonance(g: float, n_max: int) -> tuple[int, int, float]:
    """Best (n1, n2, residual) with both counters <= n_max.  The residual is
    in units of the one-excitation Rabi period, so it does not depend on g;
    g is validated because the pair is meaningless without a coupling."""
    if g <= 0.0:
        raise ValueError("coupling g must be positive")
    n1, n2, residual = resonance_table(n_max, top=1)[0]
    return n1, n2, residual


# ---------------------------------------------------------------------------
# configuration and schedule
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GateConfig:
    """Physical and numerical parameters of one gate run.

    ``alpha = None`` selects the pulse-area rule: the Gaussian's integral is
    fixed to a quarter hop cycle (pi/2 in hbar = 1 units), which executes a
    complete photon swap.  ``dt = None`` selects the default integrator step
    min(sigma/50, tau1/200).
    """

    g: float = 1e-3
    sigma: float = 0.5
    alpha: float | None = None
    n1: int = 4
    n2: int = 6
    omega: float = 1.0
    max_photons: int = 2
    dt: float | None = None
    norm_tolerance: float = 1e-8

    def __post_init__(self):
        if self.g <= 0.0:
            raise ValueError("coupling g must be positive")
        if self.sigma <= 0.0:
            raise ValueError("pulse sigma must be positive")
        if self.alpha is not None and self.alpha < 0.0:
            raise ValueError("pulse amplitude must be non-negative")
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("resonance counters must be positive integers")
        if self.max_photons < 2:
            raise ValueError("the register needs max_photons >= 2")
        if self.sigma > self.tau1 / 10.0:
            warnings.warn(
                "pulse sigma is not small against the Rabi period; "
                "exchange and Rabi dynamics will mix",
                stacklevel=2,
            )

    @property
    def tau1(self) -> float:
        return rabi_periods(self.g)[0]

    @property
    def tau2(self) -> float:
        return rabi_periods(self.g)[1]

    @property
    def resolved_alpha(self) -> float:
        if self.alpha is not None:
            return self.alpha
        return amplitude_for_area(math.pi / 2.0, self.sigma)

    @property
    def window(self) -> float:
        return 2.0 * PULSE_CUTOFF * self.sigma

    @property
    def resolved_dt(self) -> float:
        if self.dt is not None:
            return self.dt
        return min(self.sigma / 50.0, self.tau1 / 200.0)

    def settings(self) -> EvolutionSettings:
        return EvolutionSettings(dt=self.resolved_dt, norm_tolerance=self.norm_tolerance)

    def network(self) -> NetworkConfig:
        return NetworkConfig(
            n_cavities=3,
            atoms_per_cavity=(1, 1, 1),
            couplings=(self.g, self.g, self.g),
            max_photons=self.max_photons,
            omega=self.omega,
        )


@dataclass(frozen=True)
class FreeSegment:
    duration: float


@dataclass(frozen=True)
class ExchangeSegment:
    cavity_a: int
    cavity_b: int
    duration: float
    pulse: GaussianPulse  # center is relative to the segment start


@dataclass(frozen=True)
class PulseSchedule:
    events: tuple

    def __post_init__(self):
        for ev in self.events:
            if ev.duration < 0.0:
                raise ValueError("segment durations must be non-negative")
            if isinstance(ev, ExchangeSegment):
                half = ev.pulse.cutoff * ev.pulse.sigma
                if ev.pulse.center - half < -1e-12 or ev.pulse.center + half > ev.duration + 1e-12:
                    raise ValueError("pulse truncation window must fit inside its segment")

    @property
    def total_duration(self) -> float:
        return sum(ev.duration for ev in self.events)


def cocsign_schedule(config: GateConfig) -> PulseSchedule:
    """The gate's segment sequence: exchange aux<->x, free tau1/2, exchange
    aux<->y, free 2 n2 tau2, exchange aux<->x, free tau1/2, exchange aux<->y,
    and a trailing free tau1/2 over the whole register."""
    tau1, tau2 = rabi_periods(config.g)
    w = config.window
    if w > tau1 / 2.0:
        raise ValueError(
            f"exchange window {w:.3g} does not fit the free gaps of {tau1 / 2.0:.3g}; "
            "reduce sigma"
        )

    def exchange(a: int, b: int) -> ExchangeSegment:
        pulse = GaussianPulse(
            amplitude=config.resolved_alpha,
            center=w / 2.0,
            sigma=config.sigma,
            cutoff=PULSE_CUTOFF,
        )
        return ExchangeSegment(a, b, w, pulse)

    events = (
        exchange(AUX_CAVITY, X_CAVITY),
        FreeSegment(tau1 / 2.0),
        exchange(AUX_CAVITY, Y_CAVITY),
        FreeSegment(2.0 * config.n2 * tau2),
        exchange(AUX_CAVITY, X_CAVITY),
        FreeSegment(tau1 / 2.0),
        exchange(AUX_CAVITY, Y_CAVITY),
        FreeSegment(tau1 / 2.0),
    )
    return PulseSchedule(events)


# ---------------------------------------------------------------------------
# register embedding
# ---------------------------------------------------------------------------

def gate_space(config: GateConfig) -> HilbertSpace:
    """The two-excitation sector of the three-cavity register."""
    return HilbertSpace(config.network(), sector=2)


def _embedded_basis_state(x: int, y: int) -> BasisState:
    return BasisState(photons=(x, y, 0), atom_bits=(1 - x, 1 - y, 0))


def encode(q, space: HilbertSpace) -> StateVector:
    """Embed two-qubit amplitudes into the register sector."""
    q = _as_qubit_pair(q)
    amps = np.zeros(space.dim, dtype=complex)
    for k, label in enumerate(BASIS_LABELS):
        x, y = int(label[0]), int(label[1])
        amps[space.index_of(_embedded_basis_state(x, y))] = q[k]
    return StateVector(space, amps)


def decode(psi: StateVector) -> np.ndarray:
    """Project a register state back onto the four encoded basis states.
    The result is not renormalized; missing weight is leakage."""
    out = np.zeros(4, dtype=complex)
    for k, label in enumerate(BASIS_LABELS):
        x, y = int(label[0]), int(label[1])
        idx = psi.space.index_of(_embedded_basis_state(x, y))
        out[k] = psi.amplitudes[idx]
    return out


# ---------------------------------------------------------------------------
# running the gate
# ---------------------------------------------------------------------------

def run_gate(q, config: GateConfig, instant_swaps: bool = False) -> StateVector:
    """Evolve an encoded two-qubit state through the full schedule.

    ``instant_swaps`` replaces each Gaussian exchange by its zero-width
    limit, the exact quarter-cycle hop map exp(-i (pi/2) J); free segments
    are untouched.  Useful for separating timing error from pulse error.
    """
    space = gate_space(config)
    schedule = cocsign_schedule(config)
    h0 = build_tch(space)
    settings = config.settings()
    jumps: dict[tuple[int, int], OperatorMatrix] = {}
    psi = encode(q, space)
    for ev in schedule.events:
        if isinstance(ev, FreeSegment):
            psi = evolve_const(h0, psi, ev.duration)
            continue
        key = (ev.cavity_a, ev.cavity_b)
        if key not in jumps:
            jumps[key] = jump_operator(space, HopSpec(*key, amplitude=1.0))
        if instant_swaps:
            psi = evolve_const(jumps[key], psi, math.pi / 2.0)
        else:
            psi = evolve_pulsed(h0, [(jumps[key], ev.pulse)], psi, 0.0, ev.duration, settings)
    return psi


def schedule_phase(config: GateConfig, instant_swaps: bool = False) -> complex:
    """Deterministic global phase the schedule imprints on a perfectly
    executed gate, relative to the bare encoded ideal state.

    Two exact bookkeeping facts: each half-period Rabi flip and each
    completed photon swap contributes -i, and over the schedule every input
    branch accumulates the same overall -1; the resonant diagonal commutes
    with everything and adds exp(-2 i omega T) for the two excitations over
    the total duration T."""
    schedule = cocsign_schedule(config)
    total = sum(
        ev.duration
        for ev in schedule.events
        if isinstance(ev, FreeSegment) or not instant_swaps
    )
    return -np.exp(-2j * config.omega * total)


def ideal_target_state(q, config: GateConfig, instant_swaps: bool = False) -> StateVector:
    """The encoded ideal gate output, carrying the schedule's deterministic
    global phase so that raw (phase-sensitive) distances measure genuine
    error."""
    space = gate_space(config)
    target = encode(ideal_cocsign(q), space)
    target.amplitudes *= schedule_phase(config, instant_swaps=instant_swaps)
    return target


def branch_phase(psi: StateVector, label: str, config: GateConfig) -> complex:
    """Phase of the surviving encoded component for a basis input, relative
    to the schedule's deterministic global phase.  Near +1 for inputs the
    gate leaves alone, near -1 for the flipped branch."""
    if label not in BASIS_LABELS:
        raise ValueError(f"label must be one of {BASIS_LABELS}")
    x, y = int(label[0]), int(label[1])
    idx = psi.space.index_of(_embedded_basis_state(x, y))
    overlap = complex(psi.amplitudes[idx])
    if abs(overlap) < 1e-9:
        raise ValueError("no surviving weight on the encoded branch")
    return overlap / abs(overlap) / schedule_phase(config)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def _amps(psi) -> np.ndarray:
    if isinstance(psi, StateVector):
        return psi.amplitudes
    return np.asarray(psi, dtype=complex)


def density(psi) -> np.ndarray:
    """Pure-state density matrix |psi><psi|."""
    a = _amps(psi)
    return np.outer(a, a.conj())


def trace_distance(rho, rho_id) -> float:
    """tr sqrt((rho - rho_id)^dag (rho - rho_id)): the sum of the absolute
    eigenvalues of the (Hermitian) difference.  Insensitive to global phase
    of the underlying states."""
    rho = np.asarray(rho, dtype=complex)
    rho_id = np.asarray(rho_id, dtype=complex)
    if rho.shape != rho_id.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("trace distance needs two square matrices of equal shape")
    delta = rho - rho_id
    delta = (delta + delta.conj().T) / 2.0
    return float(np.sum(np.abs(np.linalg.eigvalsh(delta))))


def modular_distance(psi, psi_id) -> float:
    """Squared amplitude distance ||psi - psi_id||^2, taken raw: a global
    phase between the states shows up in full (maximum 4 for unit vectors)."""
    a, b = _amps(psi), _amps(psi_id)
    if a.shape != b.shape:
        raise ValueError("modular distance needs states of equal dimension")
    d = a - b
    return float(np.vdot(d, d).real)


def aligned_modular_distance(psi, psi_id) -> float:
    """Squared amplitude distance minimized over a global phase."""
    a, b = _amps(psi), _amps(psi_id)
    if a.shape != b.shape:
        raise ValueError("modular distance needs states of equal dimension")
    return float(np.vdot(a, a).real + np.vdot(b, b).real - 2.0 * abs(np.vdot(b, a)))


# ---------------------------------------------------------------------------
# parameter sweeps
# ---------------------------------------------------------------------------

def _sweep_point(args):
    config, alpha, sigma, n1, n2, q = args
    cfg = dataclasses.replace(config, alpha=alpha, sigma=sigma, n1=n1, n2=n2)
    psi = run_gate(q, cfg)
    target = ideal_target_state(q, cfg)
    d_tr = trace_distance(density(psi), density(target))
    d_mod = modular_distance(psi, target)
    return (alpha, sigma, n1, n2, d_tr, d_mod)


def sweep(
    config: GateConfig,
    alphas,
    sigmas=None,
    pairs=None,
    q=None,
    max_workers: int = 1,
) -> list[tuple[float, float, int, int, float, float]]:
    """Gate-error curves over pulse amplitude (and optionally width and
    resonance pair).  Returns rows (alpha, sigma, n1, n2, d_tr, d_mod) in
    deterministic grid order regardless of worker count."""
    if q is None:
        q = uniform_superposition()
    q = _as_qubit_pair(q)
    if sigmas is None:
        sigmas = [config.sigma]
    if pairs is None:
        pairs = [(config.n1, config.n2)]
    points = [
        (config, float(alpha), float(sigma), int(n1), int(n2), q)
        for n1, n2 in pairs
        for sigma in sigmas
        for alpha in alphas
    ]
    if max_workers <= 1:
        return [_sweep_point(p) for p in points]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(_sweep_point, points))


# ---------------------------------------------------------------------------
# physical-transfer bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransferWindow:
    """Shortest admissible exchange time against the gate clock."""

    delta_tau: float
    ratio: float
    flag: bool


def min_transfer_time(delta_omega_max: float) -> float:
    """Time-energy bound: an exchange confined to a frequency window of
    width delta_omega cannot be shorter than 1/delta_omega."""
    if delta_omega_max <= 0.0:
        raise ValueError("frequency window must be positive")
    return 1.0 / delta_omega_max


def transfer_window_check(delta_omega_max: float, tau1: float) -> TransferWindow:
    """Compare the shortest exchange time with the Rabi period; the flag
    trips when the exchange eats 1e-3 of the period or more."""
    if tau1 <= 0.0:
        raise ValueError("tau1 must be positive")
    delta_tau = min_transfer_time(delta_omega_max)
    ratio = delta_tau / tau1
    return TransferWindow(delta_tau=delta_tau, ratio=ratio, flag=ratio >= 1e-3)
