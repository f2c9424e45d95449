"""Time-domain adiabatic transport in the effective dark-state models.

A :class:`Schedule` maps a :class:`~holodfs.holonomy.ControlPath` onto time.
Two timings are available:

``proportional``  each segment gets time in proportion to its length.
``gap_locked``    each segment lasts a whole number of gap periods 2 pi / Omega;
                  the leftover time is spent at the base point before the loop.

Non-adiabatic leakage excited at a segment corner rotates at the gap
frequency, so with ``proportional`` timing the amplitudes excited at
successive corners interfere with a T-dependent phase and the infidelity
oscillates strongly with T. Locking segment durations to the gap period
removes that phase and gives clean power-law convergence.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import (
    NumericalError,
    ValidationError,
    dagger,
    operator_distance,
    step_propagators_from_samples,
    unitarity_error,
)
from .dfs import LogicalEncoding, collective_z, effective_z_weights
from .holonomy import (
    ControlPath,
    _check_base_point,
    dark_count,
    effective_dim,
    effective_hamiltonian_samples,
    logical_dim,
    logical_indices,
    projective_distance,
    transported_gate,
)

RAMP_SHAPES = ("linear", "sine")
TIMINGS = ("proportional", "gap_locked")
SINGLE_LABELS = ("0L", "1L", "E", "A")
TWO_LABELS = ("00", "01", "10", "11", "EE", "AA")


def _ramp(shape: str, u):
    if shape == "linear":
        return u
    return u - np.sin(2 * np.pi * u) / (2 * np.pi)


def _ramp_rate(shape: str, u):
    if shape == "linear":
        return np.ones_like(u)
    return 1 - np.cos(2 * np.pi * u)


@dataclass(frozen=True)
class Schedule:
    """Controls (theta(t), phi(t)) traversing ``path`` in time ``total_time``."""

    family: str
    path: ControlPath
    total_time: float
    omega_scale: float = 1.0
    ramp_shape: str = "linear"
    timing: str = "gap_locked"
    steps_per_unit: int = 64

    def __post_init__(self):
        if self.family not in ("u1", "u2", "u3"):
            raise ValidationError(f"unknown family {self.family!r}")
        if not (np.isfinite(self.total_time) and self.total_time > 0):
            raise ValidationError("total_time must be positive")
        if not (np.isfinite(self.omega_scale) and self.omega_scale >= 0):
            raise ValidationError("omega_scale must be non-negative")
        if self.ramp_shape not in RAMP_SHAPES:
            raise ValidationError(f"ramp_shape must be one of {RAMP_SHAPES}")
        if self.timing not in TIMINGS:
            raise ValidationError(f"timing must be one of {TIMINGS}")
        if int(self.steps_per_unit) < 1:
            raise ValidationError("steps_per_unit must be >= 1")
        if not self.path.closed:
            raise ValidationError("schedule path must be closed")
        _check_base_point(self.family, self.path)
        th = self.path.samples[:, 0]
        if np.any(th < -1e-12) or np.any(th > np.pi / 2 + 1e-12):
            raise ValidationError("theta must lie in [0, pi/2]")
        dwell, durations = self._timing()
        object.__setattr__(self, "_dwell", dwell)
        object.__setattr__(self, "_durations", durations)

    # -------------------------------------------------------------- timing

    def _timing(self) -> tuple[float, np.ndarray]:
        lengths = self.path.segment_lengths()
        total = lengths.sum()
        T = float(self.total_time)
        if total == 0:
            return T, np.zeros_like(lengths)
        if self.timing == "proportional" or self.omega_scale == 0:
            return 0.0, T * lengths / total
        period = 2 * np.pi / self.omega_scale
        counts = np.floor(T * lengths / (total * period))
        counts = np.where(lengths > 0, np.maximum(counts, 1), 0)
        durations = counts * period
        dwell = T - durations.sum()
        if dwell < -1e-9 * T:
            raise ValidationError(
                f"total_time {T:g} too short for gap_locked timing "
                f"(needs {durations.sum():g}); use timing='proportional'"
            )
        return max(dwell, 0.0), durations

    @property
    def dwell(self) -> float:
        return self._dwell

    @property
    def segment_durations(self) -> np.ndarray:
        return self._durations.copy()

    @property
    def n_steps(self) -> int:
        return max(1, int(np.ceil(self.steps_per_unit * self.omega_scale * self.total_time - 1e-9)))

    def with_steps_per_unit(self, spu: int) -> "Schedule":
        return Schedule(self.family, self.path, self.total_time, self.omega_scale, self.ramp_shape, self.timing, spu)

    def with_total_time(self, total_time: float) -> "Schedule":
        return Schedule(
            self.family, self.path, total_time, self.omega_scale, self.ramp_shape, self.timing, self.steps_per_unit
        )

    def _locate(self, t):
        """Segment index (-1 during the dwell) and local fraction u for times t."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        starts = self._dwell + np.concatenate([[0.0], np.cumsum(self._durations)[:-1]])
        seg = np.searchsorted(starts, t, side="right") - 1
        seg = np.clip(seg, -1, len(starts) - 1)
        # skip zero-duration segments
        while True:
            bad = (seg >= 0) & (self._durations[np.maximum(seg, 0)] == 0)
            if not np.any(bad):
                break
            seg = np.where(bad, seg - 1, seg)
        safe = np.maximum(seg, 0)
        dur = np.where(self._durations[safe] > 0, self._durations[safe], 1.0)
        u = np.clip((t - starts[safe]) / dur, 0.0, 1.0)
        u = np.where(seg < 0, 0.0, u)
        return seg, u

    def _segment_arc(self, k: int):
        a, b = self.path.segments[k]
        pts = self.path.samples[a : b + 1]
        arc = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))])
        return pts, arc

    def control(self, t) -> np.ndarray:
        """(theta, phi) at the given times, shape (n, 2)."""
        seg, u = self._locate(t)
        out = np.tile(self.path.samples[0], (seg.shape[0], 1))
        s = _ramp(self.ramp_shape, u)
        for k in np.unique(seg[seg >= 0]):
            m = seg == k
            pts, arc = self._segment_arc(k)
            x = s[m] * arc[-1]
            out[m, 0] = np.interp(x, arc, pts[:, 0])
            out[m, 1] = np.interp(x, arc, pts[:, 1])
        return out

    def velocity(self, t) -> np.ndarray:
        """d(theta, phi)/dt at the given times, shape (n, 2)."""
        seg, u = self._locate(t)
        out = np.zeros((seg.shape[0], 2))
        rate = _ramp_rate(self.ramp_shape, u)
        s = _ramp(self.ramp_shape, u)
        for k in np.unique(seg[seg >= 0]):
            m = seg == k
            pts, arc = self._segment_arc(k)
            seglen = np.diff(arc)
            x = s[m] * arc[-1]
            i = np.clip(np.searchsorted(arc, x, side="right") - 1, 0, len(seglen) - 1)
            tangent = np.diff(pts, axis=0)[i] / np.where(seglen[i] > 0, seglen[i], 1.0)[:, None]
            speed = arc[-1] * rate[m] / self._durations[k]
            out[m] = tangent * speed[:, None]
        return out

    def step_midpoints(self, n_steps: int | None = None) -> tuple[np.ndarray, float]:
        n = self.n_steps if n_steps is None else int(n_steps)
        dt = self.total_time / n
        return (np.arange(n) + 0.5) * dt, dt

    def to_record(self) -> dict:
        return {
            "family": self.family,
            "total_time": float(self.total_time),
            "omega_scale": float(self.omega_scale),
            "ramp_shape": self.ramp_shape,
            "timing": self.timing,
            "steps_per_unit": int(self.steps_per_unit),
            "n_steps": self.n_steps,
            "dwell": float(self._dwell),
            "segment_durations": [float(x) for x in self._durations],
            "path": self.path.to_record(),
        }


def step_stack(schedule: Schedule, n_steps: int | None = None) -> np.ndarray:
    """Midpoint-rule step propagators of the schedule, earliest first."""
    tm, dt = schedule.step_midpoints(n_steps)
    lam = schedule.control(tm)
    hs = effective_hamiltonian_samples(schedule.family, lam[:, 0], lam[:, 1], schedule.omega_scale)
    return step_propagators_from_samples(hs, dt)


# ------------------------------------------------------------ simulation


@dataclass
class Trajectory:
    times: np.ndarray
    populations: np.ndarray  # (n_samples, effective dim)
    labels: tuple[str, ...]
    leakage: np.ndarray

    def columns(self) -> list[str]:
        return ["t"] + [f"pop_{x}" for x in self.labels] + ["leakage"]

    def rows(self) -> np.ndarray:
        return np.column_stack([self.times, self.populations, self.leakage])


def basis_labels(family: str) -> tuple[str, ...]:
    return TWO_LABELS if family == "u3" else SINGLE_LABELS


def simulate_schedule(schedule: Schedule, initial, samples: int = 201) -> tuple[np.ndarray, Trajectory]:
    """Integrate i d/dt psi = H_eff(t) psi; return the final state and sampled populations.

    ``samples`` is the target number of trajectory rows (the initial and
    final states are always included).
    """
    psi0 = np.asarray(initial, dtype=complex)
    d = effective_dim(schedule.family)
    if psi0.shape != (d,):
        raise ValidationError(f"initial state must have dimension {d} for {schedule.family}")
    if abs(np.linalg.norm(psi0) - 1) > 1e-10:
        raise ValidationError("initial state must be normalized")
    steps = step_stack(schedule)
    n = steps.shape[0]
    stride = max(1, n // max(1, samples - 1))
    rec = kernels.propagate(steps, psi0[:, None], stride)[:, :, 0]
    idx = np.arange(0, n + 1, stride)
    if idx[-1] != n:
        idx = np.append(idx, n)
    times = idx * (schedule.total_time / n)
    pops = np.abs(rec) ** 2
    norm_err = np.max(np.abs(pops.sum(axis=1) - 1))
    if norm_err > 1e-9:
        raise NumericalError(f"norm drift {norm_err:.3g}; increase steps_per_unit")
    logical = logical_indices(schedule.family)
    leak = 1 - pops[:, logical].sum(axis=1)
    return rec[-1], Trajectory(times, pops, basis_labels(schedule.family), np.clip(leak, 0, 1))


@dataclass
class AdiabaticityReport:
    min_gap: float
    max_rate: float
    ratio: float
    corner_rate: float


def adiabaticity_diagnostic(schedule: Schedule, n_points: int | None = None) -> AdiabaticityReport:
    """Bright-dark gap (from eigenvalues), max |d(theta, phi)/dt| and their ratio.

    ``corner_rate`` is the largest speed at segment boundaries, where the
    path turns; the sine ramp brings it to zero.
    """
    n = n_points or min(schedule.n_steps, 20000)
    tm = (np.arange(n) + 0.5) * (schedule.total_time / n)
    lam = schedule.control(tm)
    hs = effective_hamiltonian_samples(schedule.family, lam[:, 0], lam[:, 1], schedule.omega_scale)
    w = np.sort(np.abs(np.linalg.eigvalsh(hs)), axis=1)
    gap = float(np.min(w[:, dark_count(schedule.family)]))
    # evaluate speeds on the step grid and exactly at segment boundaries
    bounds = schedule.dwell + np.concatenate([[0.0], np.cumsum(schedule.segment_durations)])
    eps = 1e-12 * schedule.total_time
    edge_t = np.concatenate([bounds[:-1] + eps, bounds[1:] - eps])
    edge_t = edge_t[(edge_t > 0) & (edge_t < schedule.total_time)]
    speed = np.linalg.norm(schedule.velocity(np.concatenate([tm, edge_t])), axis=1)
    corner = float(np.max(np.linalg.norm(schedule.velocity(edge_t), axis=1))) if edge_t.size else 0.0
    rate = float(np.max(speed)) if speed.size else 0.0
    ratio = rate / gap if gap > 0 else float("inf")
    return AdiabaticityReport(gap, rate, ratio, corner)


@dataclass
class GateReport:
    family: str
    realized_gate: np.ndarray
    target_gate: np.ndarray
    infidelity: float
    leakage: float
    min_gap: float
    max_drive_rate: float
    adiabaticity_ratio: float
    unitarity_error: float
    n_steps: int
    step_change: float | None = None
    projective_distance: float = field(default=float("nan"))
    renormalized_infidelity: float = field(default=float("nan"))
    refine_converged: bool | None = None

    @property
    def failed(self) -> bool:
        return self.leakage > 0.5


def _logical_block(u_full: np.ndarray, family: str) -> tuple[np.ndarray, np.ndarray, float]:
    """Projected block, its column-renormalized version and the worst leakage."""
    idx = logical_indices(family)
    block = u_full[np.ix_(idx, idx)]
    norms = np.linalg.norm(block, axis=0)
    leakage = float(np.max(1 - norms**2))
    safe = np.where(norms > 0, norms, 1.0)
    return block, block / safe, min(max(leakage, 0.0), 1.0)


def gate_infidelity(target: np.ndarray, realized: np.ndarray) -> float:
    d = target.shape[0]
    f = abs(np.trace(dagger(target) @ realized)) / d
    return float(min(max(1 - f, 0.0), 1.0))


def full_propagator(schedule: Schedule, n_steps: int | None = None) -> np.ndarray:
    return kernels.ordered_product(step_stack(schedule, n_steps))


def extract_logical_gate(
    schedule: Schedule,
    target: np.ndarray | None = None,
    refine: bool = False,
    refine_tol: float = 1e-8,
    max_doublings: int = 6,
) -> GateReport:
    """Realized logical gate versus the transported holonomy of the schedule's path.

    ``realized_gate`` is the projected logical block with columns
    renormalized. ``infidelity`` scores the projected block before
    renormalization, so population left outside the logical space counts as
    gate error; ``renormalized_infidelity`` scores ``realized_gate`` and is
    sensitive only to the in-subspace error.

    With ``refine`` the step count is doubled until the realized gate moves
    by less than ``refine_tol`` (or ``max_doublings`` is reached);
    ``step_change`` records the last change.
    """
    n = schedule.n_steps
    u = full_propagator(schedule, n)
    change = None
    if refine:
        for _ in range(max_doublings):
            n *= 2
            u_new = full_propagator(schedule, n)
            change = operator_distance(u_new, u)
            u = u_new
            if change < refine_tol:
                break
    uerr = unitarity_error(u)
    if uerr > 1e-9:
        raise NumericalError(f"propagator not unitary (|U^dag U - 1| = {uerr:.3g}); increase steps")
    block, realized, leakage = _logical_block(u, schedule.family)
    if target is None:
        target = transported_gate(schedule.family, schedule.path)
    diag = adiabaticity_diagnostic(schedule)
    return GateReport(
        family=schedule.family,
        realized_gate=realized,
        target_gate=np.asarray(target, dtype=complex),
        infidelity=gate_infidelity(target, block),
        leakage=leakage,
        min_gap=diag.min_gap,
        max_drive_rate=diag.max_rate,
        adiabaticity_ratio=diag.ratio,
        unitarity_error=uerr,
        n_steps=n,
        step_change=change,
        projective_distance=projective_distance(realized, target),
        renormalized_infidelity=gate_infidelity(target, realized),
        refine_converged=None if change is None else bool(change < refine_tol),
    )


# ------------------------------------------------------------------ noise

NOISE_KINDS = ("none", "phase_kicks", "dephasing_generator")


@dataclass(frozen=True)
class NoiseModel:
    """Collective dephasing through Z.

    ``phase_kicks``: unitaries exp(-i beta_k Z), beta_k ~ N(0, strength).
    ``dephasing_generator``: gamma (Z rho Z - (Z^2 rho + rho Z^2)/2), gamma = strength.
    ``kick_count`` None means one kick per integration step.
    ``duration`` is the evolution time used when no schedule is involved.
    """

    kind: str = "none"
    strength: float = 0.0
    seed: int = 0
    kick_count: int | None = None
    realizations: int = 32
    duration: float = 1.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValidationError(f"noise kind must be one of {NOISE_KINDS}")
        if not (np.isfinite(self.strength) and self.strength >= 0):
            raise ValidationError("noise strength must be non-negative")
        if self.kick_count is not None and int(self.kick_count) < 0:
            raise ValidationError("kick_count must be non-negative")
        if int(self.realizations) < 1:
            raise ValidationError("realizations must be >= 1")
        if int(self.seed) < 0:
            raise ValidationError("seed must be non-negative")

    def rng(self, realization: int) -> np.random.Generator:
        return np.random.default_rng([int(self.seed), int(realization)])

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "strength": float(self.strength),
            "seed": int(self.seed),
            "kick_count": self.kick_count,
            "realizations": int(self.realizations),
            "duration": float(self.duration),
        }


def dephasing_mask(z: np.ndarray, gamma_t: float) -> np.ndarray:
    """Elementwise factor exp(-gamma t (z_i - z_j)^2 / 2) for diagonal Z."""
    dz = z[:, None] - z[None, :]
    return np.exp(-0.5 * gamma_t * dz**2)


def _z_diagonal(z) -> np.ndarray:
    z = np.asarray(z)
    if z.ndim == 2:
        if np.max(np.abs(z - np.diag(np.diag(z)))) > 1e-12:
            raise ValidationError("collective generator must be diagonal in the working basis")
        z = np.diag(z)
    return np.real(z).astype(float)


def apply_collective_dephasing(state, noise: NoiseModel, enc: LogicalEncoding | None = None, z=None):
    """Collective dephasing on a physical register state (no Hamiltonian evolution).

    ``state`` is a vector (phase kicks; returns one vector per realization,
    shape (realizations, dim)) or a density matrix (dephasing generator;
    returns the evolved density matrix after ``noise.duration``). ``z``
    overrides the generator, which defaults to sigma_z summed over the
    encoding's pair.
    """
    if noise.kind == "none":
        raise ValidationError("noise kind 'none' has nothing to apply")
    enc = enc or LogicalEncoding()
    zd = _z_diagonal(enc.dephasing_generator() if z is None else z)
    arr = np.asarray(state, dtype=complex)
    if noise.kind == "phase_kicks":
        if arr.shape != (zd.shape[0],):
            raise ValidationError("phase kicks act on a state vector")
        kicks = 1 if noise.kick_count is None else int(noise.kick_count)
        out = np.empty((noise.realizations, arr.shape[0]), dtype=complex)
        for r in range(noise.realizations):
            betas = noise.rng(r).normal(0.0, noise.strength, kicks)
            # product of the diagonal kick unitaries
            out[r] = np.prod(np.exp(-1j * betas[:, None] * zd[None, :]), axis=0) * arr
        return out
    rho = arr if arr.ndim == 2 else np.outer(arr, arr.conj())
    if rho.shape != (zd.shape[0],) * 2:
        raise ValidationError("density matrix does not match the generator")
    return rho * dephasing_mask(zd, noise.strength * noise.duration)


def coherence_after_kicks(noise: NoiseModel) -> float:
    """|<0|rho|1>| of a bare ion prepared in (|0> + |1>)/sqrt(2), averaged over realizations."""
    plus = np.zeros(4, dtype=complex)
    plus[:2] = 1 / np.sqrt(2)
    states = apply_collective_dephasing(plus, noise, z=collective_z(1))
    rho01 = np.mean(states[:, 0] * states[:, 1].conj())
    return float(abs(rho01))


def memory_fidelity(logical, noise: NoiseModel, enc: LogicalEncoding | None = None) -> float:
    """Mean fidelity of an encoded logical state after collective dephasing."""
    from .dfs import encode

    enc = enc or LogicalEncoding()
    psi = encode(logical, enc)
    if noise.kind == "phase_kicks":
        out = apply_collective_dephasing(psi, noise, enc)
        return float(np.mean(np.abs(out @ psi.conj()) ** 2))
    rho = apply_collective_dephasing(psi, noise, enc)
    return float(np.real(psi.conj() @ rho @ psi))


def _kick_steps(n_steps: int, kick_count: int | None) -> np.ndarray:
    """Step indices after which a kick is applied."""
    if kick_count is None:
        return np.arange(n_steps)
    k = int(kick_count)
    if k == 0:
        return np.zeros(0, dtype=int)
    return np.minimum(((np.arange(k) + 1) * n_steps) // k - 1, n_steps - 1)


def noisy_gate_fidelity(
    schedule: Schedule,
    noise: NoiseModel,
    z_weights: np.ndarray,
    target: np.ndarray,
) -> tuple[float, float]:
    """Gate fidelity under collective dephasing and the worst trace error.

    Fidelity is sqrt of the entanglement fidelity of the averaged channel on
    the logical block: sqrt(mean_r |Tr(T^dag V_r)|^2) / d for kicks.
    """
    steps = step_stack(schedule)
    n, d_eff = steps.shape[0], steps.shape[1]
    idx = logical_indices(schedule.family)
    d = len(idx)
    z = np.asarray(z_weights, dtype=float)
    if noise.kind == "none" or noise.strength == 0:
        v = kernels.ordered_product(steps)[np.ix_(idx, idx)]
        return float(abs(np.trace(dagger(target) @ v)) / d), 0.0
    if noise.kind == "phase_kicks":
        where = _kick_steps(n, noise.kick_count)
        acc = 0.0
        worst = 0.0
        for r in range(noise.realizations):
            betas = noise.rng(r).normal(0.0, noise.strength, where.shape[0])
            total = np.zeros(n)
            np.add.at(total, where, betas)
            kicked = np.exp(-1j * total[:, None] * z[None, :])[:, :, None] * steps
            u = kernels.ordered_product(kicked)
            worst = max(worst, unitarity_error(u))
            v = u[np.ix_(idx, idx)]
            acc += abs(np.trace(dagger(target) @ v)) ** 2
        return float(np.sqrt(acc / noise.realizations) / d), worst
    # dephasing generator: superoperator on vec(rho), row-major vec
    tm, dt = schedule.step_midpoints()
    mask = dephasing_mask(z, noise.strength * dt).reshape(-1)
    sup = np.einsum("nik,njl->nijkl", steps, steps.conj()).reshape(n, d_eff**2, d_eff**2)
    sup = mask[None, :, None] * sup
    s_total = kernels.ordered_product(sup)
    fe = 0.0
    worst = 0.0
    t_dag = dagger(target)
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            e = np.zeros((d_eff, d_eff), dtype=complex)
            e[i, j] = 1.0
            out = (s_total @ e.reshape(-1)).reshape(d_eff, d_eff)
            if i == j:
                worst = max(worst, abs(np.trace(out) - 1))
            block = out[np.ix_(idx, idx)]
            fe += (t_dag @ block @ target)[a, b]
    fe = float(np.real(fe)) / d**2
    return float(np.sqrt(max(fe, 0.0))), worst


@dataclass
class ImmunityReport:
    family: str
    noise: NoiseModel
    encoded_clean_infidelity: float
    encoded_noisy_infidelity: float
    bare_clean_infidelity: float
    bare_noisy_infidelity: float
    encoded_z_weights: np.ndarray
    bare_z_weights: np.ndarray
    transient_exposure: float
    max_trace_error: float

    @property
    def encoded_degradation(self) -> float:
        return self.encoded_noisy_infidelity - self.encoded_clean_infidelity

    @property
    def bare_degradation(self) -> float:
        return self.bare_noisy_infidelity - self.bare_clean_infidelity

    @property
    def advantage(self) -> float:
        """bare degradation / encoded degradation (inf when the encoded gate is untouched)."""
        enc = max(self.encoded_degradation, 0.0)
        if enc == 0:
            return float("inf")
        return self.bare_degradation / enc


def transient_exposure(schedule: Schedule, z_weights: np.ndarray) -> float:
    """Time average over the gate of max over logical inputs of <psi|Z^2|psi>.

    Measures how much of the evolving state sits where collective dephasing
    acts; zero when every populated level has zero collective weight.
    """
    steps = step_stack(schedule)
    idx = logical_indices(schedule.family)
    d_eff = steps.shape[1]
    block = np.eye(d_eff, dtype=complex)[:, idx]
    stride = max(1, steps.shape[0] // 2000)
    rec = kernels.propagate(steps, block, stride)
    z2 = np.asarray(z_weights, dtype=float) ** 2
    expo = np.einsum("tik,i->tk", np.abs(rec) ** 2, z2)
    return float(np.mean(np.max(expo, axis=1)))


def dfs_immunity_experiment(schedule: Schedule, noise: NoiseModel) -> ImmunityReport:
    """Encoded gate versus the same protocol on bare ions, with and without noise.

    Z weights of the effective basis come from the physical embedding:
    sigma_z summed over every ion, with |a> and |e> at weight zero.
    """
    target = transported_gate(schedule.family, schedule.path)
    z_enc = effective_z_weights(schedule.family, encoded=True)
    z_bare = effective_z_weights(schedule.family, encoded=False)
    clean = NoiseModel()
    fe_c, _ = noisy_gate_fidelity(schedule, clean, z_enc, target)
    fe_n, te = noisy_gate_fidelity(schedule, noise, z_enc, target)
    fb_c, _ = noisy_gate_fidelity(schedule, clean, z_bare, target)
    fb_n, tb = noisy_gate_fidelity(schedule, noise, z_bare, target)
    clip = lambda f: float(min(max(1 - f, 0.0), 1.0))  # noqa: E731
    return ImmunityReport(
        family=schedule.family,
        noise=noise,
        encoded_clean_infidelity=clip(fe_c),
        encoded_noisy_infidelity=clip(fe_n),
        bare_clean_infidelity=clip(fb_c),
        bare_noisy_infidelity=clip(fb_n),
        encoded_z_weights=z_enc,
        bare_z_weights=z_bare,
        transient_exposure=transient_exposure(schedule, z_enc),
        max_trace_error=max(te, tb),
    )


def logical_basis_state(family: str, k: int) -> np.ndarray:
    v = np.zeros(effective_dim(family), dtype=complex)
    v[logical_indices(family)[k]] = 1.0
    return v


__all__ = [
    "AdiabaticityReport",
    "GateReport",
    "ImmunityReport",
    "NoiseModel",
    "Schedule",
    "Trajectory",
    "adiabaticity_diagnostic",
    "apply_collective_dephasing",
    "coherence_after_kicks",
    "dfs_immunity_experiment",
    "extract_logical_gate",
    "gate_infidelity",
    "logical_basis_state",
    "logical_dim",
    "memory_fidelity",
    "noisy_gate_fidelity",
    "simulate_schedule",
    "transient_exposure",
]
