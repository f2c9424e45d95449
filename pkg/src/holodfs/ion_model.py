"""Trapped-ion Hamiltonians and second-order effective couplings.

Each ion carries four internal levels ordered ``0, 1, a, e``; the common
centre-of-mass mode is the last tensor factor (``phonon``). Energies and
frequencies are in units of the trap frequency, time in units of its inverse.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from . import kernels
from .core import (
    HilbertStructure,
    ValidationError,
    dagger,
    expm_hermitian,
    matrix_exponential,
    step_propagators_from_samples,
    tensor_product,
)

LEVELS = ("0", "1", "a", "e")
LEVEL_INDEX = {name: i for i, name in enumerate(LEVELS)}
WEAK_FIELD_LIMIT = 0.2


def level_projector(bra_ket: tuple[str, str]) -> np.ndarray:
    """|k><b| on one four-level ion, for ``bra_ket = (k, b)``."""
    k, b = bra_ket
    m = np.zeros((4, 4), dtype=complex)
    m[LEVEL_INDEX[k], LEVEL_INDEX[b]] = 1.0
    return m


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), 1).astype(complex)


@dataclass(frozen=True)
class IonLevelScheme:
    energies: dict = field(default_factory=lambda: {"0": 0.0, "1": 0.3, "a": 0.7, "e": 6.0})

    def __post_init__(self):
        if set(self.energies) != set(LEVELS):
            raise ValidationError(f"energies needed for levels {LEVELS}")
        e = {k: float(v) for k, v in self.energies.items()}
        if not all(np.isfinite(v) for v in e.values()):
            raise ValidationError("level energies must be finite")
        if any(e["e"] <= e[k] for k in ("0", "1", "a")):
            raise ValidationError("|e> must lie above every other level")
        if any(e["0"] > e[k] for k in ("1", "a")):
            raise ValidationError("|0> must be the lowest level")
        object.__setattr__(self, "energies", e)

    def transition(self, alpha: str) -> float:
        """omega_{e alpha} = E_e - E_alpha."""
        return self.energies["e"] - self.energies[alpha]


@dataclass(frozen=True)
class TrapIonConfig:
    eta: float = 0.1
    n_max: int = 3
    n_ions: int = 2
    nu: float = 1.0
    levels: IonLevelScheme = field(default_factory=IonLevelScheme)

    def __post_init__(self):
        if self.n_ions not in (1, 2, 4):
            raise ValidationError("n_ions must be 1, 2 or 4")
        if int(self.n_max) < 1:
            raise ValidationError("n_max must be >= 1")
        if self.nu <= 0:
            raise ValidationError("trap frequency must be positive")
        if not self.eta >= 0 or self.eta**2 * (self.n_max + 1) >= 0.5:
            raise ValidationError(
                f"eta^2 (n_max+1) = {self.eta**2 * (self.n_max + 1):.3g} outside the Lamb-Dicke regime"
            )

    @property
    def structure(self) -> HilbertStructure:
        return HilbertStructure(
            (4,) * self.n_ions + (self.n_max + 1,),
            tuple(f"ion{i}" for i in range(self.n_ions)) + ("phonon",),
        )

    def ion_operator(self, ion: int, op: np.ndarray, phonon_op: np.ndarray | None = None) -> np.ndarray:
        if not 0 <= ion < self.n_ions:
            raise ValidationError(f"no ion with index {ion}")
        mats = [np.eye(4)] * self.n_ions + [np.eye(self.n_max + 1)]
        mats[ion] = op
        if phonon_op is not None:
            mats[-1] = phonon_op
        return tensor_product(mats)

    def state(self, levels: str, n: int) -> np.ndarray:
        """Product basis state such as ``state("10", 0)`` for |1,0; n=0>."""
        if len(levels) != self.n_ions:
            raise ValidationError(f"need {self.n_ions} level labels, got {levels!r}")
        return self.structure.basis_state([LEVEL_INDEX[c] for c in levels] + [n])


@dataclass(frozen=True)
class LaserPulse:
    ion_index: int
    transition: str
    rabi: complex
    frequency: float

    def __post_init__(self):
        if self.transition not in ("0", "1", "a"):
            raise ValidationError(f"pulse must couple 0, 1 or a to e, got {self.transition!r}")
        if abs(self.rabi) == 0:
            raise ValidationError("pulse Rabi frequency must be nonzero")


@dataclass(frozen=True)
class BichromaticDrive:
    """Pulse pair at omega_{e alpha} +/- (nu - delta) on one ion."""

    ion_index: int
    transition: str
    rabi: complex
    detuning: float

    def __post_init__(self):
        if self.transition not in ("0", "1", "a"):
            raise ValidationError(f"drive must couple 0, 1 or a to e, got {self.transition!r}")
        if not self.detuning > 0:
            raise ValidationError("detuning delta must be positive")

    def weak_field_ratio(self, eta: float) -> float:
        return abs(eta * self.rabi) / self.detuning

    def pulses(self, config: TrapIonConfig) -> tuple[LaserPulse, LaserPulse]:
        if not self.detuning < config.nu:
            raise ValidationError("detuning must be below the trap frequency")
        w = config.levels.transition(self.transition)
        off = config.nu - self.detuning
        return (
            LaserPulse(self.ion_index, self.transition, self.rabi, w + off),
            LaserPulse(self.ion_index, self.transition, self.rabi, w - off),
        )


@dataclass(frozen=True)
class EffectiveCouplings:
    omega_1: complex = 0.0
    omega_0: complex = 0.0
    omega_a: complex = 0.0
    omega_11: complex = 0.0
    omega_AA: complex = 0.0

    @property
    def phase_11(self) -> float:
        return float(np.angle(self.omega_11))

    @property
    def phase_AA(self) -> float:
        return float(np.angle(self.omega_AA))


# ---------------------------------------------------------------- full model


def _free_hamiltonian(config: TrapIonConfig) -> np.ndarray:
    nf = config.n_max + 1
    a = annihilation(config.n_max)
    levels = np.diag([config.levels.energies[k] for k in LEVELS]).astype(complex)
    h = config.ion_operator(0, np.eye(4), config.nu * (dagger(a) @ a + 0.5 * np.eye(nf)))
    for i in range(config.n_ions):
        h = h + config.ion_operator(i, levels)
    return h


def _pulse_coupling(config: TrapIonConfig, pulse: LaserPulse) -> np.ndarray:
    """Omega * exp(i eta (a + a^dag)) |e><alpha| on the pulse's ion (no time factor)."""
    a = annihilation(config.n_max)
    disp = matrix_exponential(a + dagger(a), 1j * config.eta)
    return pulse.rabi * config.ion_operator(pulse.ion_index, level_projector(("e", pulse.transition)), disp)


def build_full_hamiltonian(config: TrapIonConfig, pulses, t: float) -> np.ndarray:
    """Lab-frame Hamiltonian H0 + H_int(t) with the full displacement operator."""
    h = _free_hamiltonian(config)
    for p in pulses:
        c = _pulse_coupling(config, p) * np.exp(-1j * p.frequency * t)
        h = h + c + dagger(c)
    return h


def full_hamiltonian_samples(config: TrapIonConfig, pulses, times) -> np.ndarray:
    """Vectorised :func:`build_full_hamiltonian` over an array of times."""
    times = np.asarray(times, dtype=float)
    h0 = _free_hamiltonian(config)
    out = np.broadcast_to(h0, (len(times),) + h0.shape).copy()
    for p in pulses:
        c = _pulse_coupling(config, p)
        ph = np.exp(-1j * p.frequency * times)[:, None, None]
        out += ph * c + np.conj(ph) * dagger(c)
    return out


# ---------------------------------------------------------- sideband model


def _check_weak_field(config: TrapIonConfig, drives) -> None:
    for d in drives:
        r = d.weak_field_ratio(config.eta)
        if r >= WEAK_FIELD_LIMIT:
            warnings.warn(
                f"drive on ion {d.ion_index} has |eta Omega|/delta = {r:.3g}, outside the weak-field regime",
                stacklevel=3,
            )


def sideband_components(config: TrapIonConfig, drives) -> list[tuple[float, np.ndarray]]:
    """Raising parts of the first-order sideband Hamiltonian.

    Returns ``(frequency, V)`` pairs with H(t) = sum V e^{-i f t} + h.c. Each
    drive yields ``(+delta, i eta Omega a |e><alpha|)`` and
    ``(-delta, i eta Omega a^dag |e><alpha|)``.
    """
    _check_weak_field(config, drives)
    a = annihilation(config.n_max)
    comps = []
    for d in drives:
        if d.detuning <= 0:
            raise ValidationError("detuning delta must be positive")
        up = level_projector(("e", d.transition))
        pre = 1j * config.eta * d.rabi
        comps.append((d.detuning, pre * config.ion_operator(d.ion_index, up, a)))
        comps.append((-d.detuning, pre * config.ion_operator(d.ion_index, up, dagger(a))))
    return comps


def build_sideband_hamiltonian(config: TrapIonConfig, drives, t: float) -> np.ndarray:
    """Interaction-picture Lamb-Dicke Hamiltonian after the rotating-wave approximation."""
    dim = config.structure.dim
    h = np.zeros((dim, dim), dtype=complex)
    for f, v in sideband_components(config, drives):
        h += v * np.exp(-1j * f * t)
    return h + dagger(h)


def sideband_hamiltonian_samples(config: TrapIonConfig, drives, times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    dim = config.structure.dim
    out = np.zeros((len(times), dim, dim), dtype=complex)
    for f, v in sideband_components(config, drives):
        out += np.exp(-1j * f * times)[:, None, None] * v
    return out + dagger(out)


# ------------------------------------------------ second-order couplings


def effective_rabi_closed_form(drive_j1: BichromaticDrive, drive_j2: BichromaticDrive, eta: float) -> complex:
    """-2 eta^2 Omega^{j1} Omega^{j2} / delta."""
    delta = _shared_detuning(drive_j1, drive_j2)
    return -2.0 * eta**2 * drive_j1.rabi * drive_j2.rabi / delta


def _shared_detuning(d1: BichromaticDrive, d2: BichromaticDrive) -> float:
    if d1.detuning <= 0 or d2.detuning <= 0:
        raise ValidationError("detuning delta must be positive")
    if not np.isclose(d1.detuning, d2.detuning, rtol=1e-12, atol=0):
        raise ValidationError("both drives must share the same detuning")
    return d1.detuning


def effective_rabi_single(
    drive_j1: BichromaticDrive,
    drive_j2: BichromaticDrive,
    eta: float,
    n: int = 0,
    levels: IonLevelScheme | None = None,
    nu: float = 1.0,
) -> complex:
    """Second-order coupling |alpha1 alpha2, n> -> |e e, n> by explicit perturbation sum.

    The sum runs over every basis state of a two-ion + phonon space and every
    ordered pair of laser tones (each drive contributes a blue tone acting
    with a^dag and a red tone acting with a); only tone pairs whose photon
    energies bridge initial and final states contribute. Denominators are
    E_m - E_i - omega_m with omega_m the first absorbed tone.
    """
    _shared_detuning(drive_j1, drive_j2)
    levels = levels or IonLevelScheme()
    cfg = TrapIonConfig(eta=eta, n_max=n + 2, n_ions=2, nu=nu, levels=levels)
    a = annihilation(cfg.n_max)
    tones = []
    for ion, d in ((0, drive_j1), (1, drive_j2)):
        up = level_projector(("e", d.transition))
        w = levels.transition(d.transition)
        pre = 1j * eta * d.rabi
        tones.append((w + (nu - d.detuning), pre * cfg.ion_operator(ion, up, dagger(a))))
        tones.append((w - (nu - d.detuning), pre * cfg.ion_operator(ion, up, a)))

    energies = np.real(np.diag(_free_hamiltonian(cfg)))
    i = int(np.argmax(cfg.state(drive_j1.transition + drive_j2.transition, n)))
    f = int(np.argmax(cfg.state("ee", n)))
    total = 0.0j
    for (w1, v1), (w2, v2) in itertools.product(tones, repeat=2):
        if abs(energies[i] + w1 + w2 - energies[f]) > 1e-9:
            continue
        first = v1[:, i]
        second = v2[f, :]
        for m in np.flatnonzero(np.abs(first * second) > 0):
            denom = energies[m] - energies[i] - w1
            total += second[m] * first[m] / denom
    return complex(total)


# ----------------------------------------------- effective Hamiltonians

SINGLE_BASIS = ("0L", "1L", "E", "A")
TWO_BASIS = ("00L", "01L", "10L", "11L", "EE", "AA")


def build_effective_single_qubit_h(c: EffectiveCouplings) -> np.ndarray:
    """Effective Hamiltonian on (|0>_L, |1>_L, |E>_L, |A>_L)."""
    h = np.zeros((4, 4), dtype=complex)
    h[2, 0] = c.omega_0
    h[2, 1] = c.omega_1
    h[2, 3] = c.omega_a
    return h + dagger(h)


def build_effective_two_qubit_h(c: EffectiveCouplings) -> np.ndarray:
    """Effective Hamiltonian on (|00>, |01>, |10>, |11>, |EE>, |AA>)_L."""
    h = np.zeros((6, 6), dtype=complex)
    h[4, 3] = c.omega_11
    h[4, 5] = c.omega_AA
    return h + dagger(h)


# ------------------------------------------------------ full-model oracle


@dataclass
class OracleReport:
    predicted_rabi: float
    fitted_rabi: float
    fitted_amplitude: float
    relative_error: float
    max_phonon_population: float
    phonon_population_cycle_end: float
    phonon_bound: float
    light_shift: float
    times: np.ndarray
    populations: dict

    @property
    def rabi_ok(self) -> bool:
        return self.relative_error <= 0.10

    @property
    def phonon_ok(self) -> bool:
        return self.max_phonon_population < self.phonon_bound


def effective_model_oracle(
    config: TrapIonConfig,
    rabi: complex = 0.01,
    detuning: float = 0.01,
    periods: int | None = None,
    steps_per_period: int = 512,
) -> OracleReport:
    """Simulate |10, n=0> <-> |ee, n=0> under the sideband Hamiltonian.

    Ion 0 is driven on 1<->e and ion 1 on 0<->e with equal Rabi frequency.
    The Hamiltonian is periodic in 2 pi / delta, so one period of step
    propagators is built and reused. Populations are recorded at every step
    for the phonon bound and at period ends for the Rabi fit.
    """
    if config.n_ions != 2:
        raise ValidationError("the oracle simulates a two-ion sub-system")
    drives = [BichromaticDrive(0, "1", rabi, detuning), BichromaticDrive(1, "0", rabi, detuning)]
    predicted = abs(effective_rabi_closed_form(*drives, config.eta))
    period = 2 * np.pi / detuning
    if periods is None:
        # about 1.6 effective Rabi half-cycles
        periods = int(np.ceil(1.6 * np.pi / (predicted * period)))
    dt = period / steps_per_period
    mids = (np.arange(steps_per_period) + 0.5) * dt
    steps = step_propagators_from_samples(sideband_hamiltonian_samples(config, drives, mids), dt)

    psi = config.state("10", 0)[:, None]
    idx_10 = int(np.argmax(config.state("10", 0)))
    idx_ee = int(np.argmax(config.state("ee", 0)))
    nf = config.n_max + 1
    excited = (np.arange(config.structure.dim) % nf) != 0

    t_all, p10, pee, pph = [0.0], [1.0], [0.0], [0.0]
    max_ph = 0.0
    for k in range(periods):
        rec = kernels.propagate(steps, psi, 1)[1:, :, 0]
        pops = np.abs(rec) ** 2
        max_ph = max(max_ph, float(pops[:, excited].sum(axis=1).max()))
        psi = rec[-1][:, None]
        t_all.append((k + 1) * period)
        p10.append(float(pops[-1, idx_10]))
        pee.append(float(pops[-1, idx_ee]))
        pph.append(float(pops[-1, excited].sum()))
    t_all = np.array(t_all)
    pee_arr = np.array(pee)

    model = lambda t, amp, w: amp * np.sin(w * t) ** 2
    (amp, w), _ = scipy.optimize.curve_fit(model, t_all, pee_arr, p0=[1.0, predicted])
    w = abs(w)
    # cycle end: first stroboscopic sample after a full |10> -> |ee> -> |10> period
    full_cycle = np.pi / w
    k_end = min(int(np.argmin(np.abs(t_all - full_cycle))), len(t_all) - 1)
    light = -(config.eta**2) * 2 * abs(rabi) ** 2 / detuning
    return OracleReport(
        predicted_rabi=float(predicted),
        fitted_rabi=float(w),
        fitted_amplitude=float(amp),
        relative_error=float(abs(w - predicted) / predicted),
        max_phonon_population=max_ph,
        phonon_population_cycle_end=float(pph[k_end]),
        phonon_bound=float(5 * (config.eta * abs(rabi) / detuning) ** 2),
        light_shift=float(light),
        times=t_all,
        populations={"pop_10": np.array(p10), "pop_ee": pee_arr, "pop_phonon": np.array(pph)},
    )


def lab_frame_crosscheck(
    config: TrapIonConfig,
    drive: BichromaticDrive,
    initial: tuple[str, int],
    duration: float | None = None,
    lab_steps: int = 32000,
    samples: int = 100,
) -> float:
    """Max population difference between lab-frame and sideband evolution.

    Populations in the product basis are unchanged by the interaction-picture
    transformation, so the two trajectories are compared directly.
    """
    duration = 2 * np.pi / drive.detuning if duration is None else duration
    pulses = drive.pulses(config)
    psi0 = config.state(*initial)[:, None]

    def run(samples_fn, n_steps):
        dt = duration / n_steps
        mids = (np.arange(n_steps) + 0.5) * dt
        steps = expm_hermitian(samples_fn(mids), dt)
        rec = kernels.propagate(steps, psi0, n_steps // samples)
        return np.abs(rec[:, :, 0]) ** 2

    lab = run(lambda t: full_hamiltonian_samples(config, pulses, t), lab_steps)
    sb = run(lambda t: sideband_hamiltonian_samples(config, [drive], t), lab_steps // 10)
    n = min(len(lab), len(sb))
    return float(np.max(np.abs(lab[:n] - sb[:n])))
