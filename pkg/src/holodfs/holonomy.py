"""Dark-state frames, non-Abelian connections and Wilson loops.

Three loop families are supported, each over the control angles (theta, phi):

``u1``  Omega_0 = 0, Omega_1 = Omega sin(theta), Omega_a = Omega cos(theta) e^{i phi}
``u2``  Omega_0 = Omega sin(theta) cos(phi), Omega_1 = Omega sin(theta) sin(phi),
        Omega_a = Omega cos(theta)
``u3``  Omega_11 = Omega sin(theta), Omega_AA = Omega cos(theta) e^{-i phi}

Frames, connections and :func:`wilson_loop` follow the convention
U(C) = P exp(oint A) with A_mu^{ij} = <D_i| d_mu |D_j>. A state carried
adiabatically around C picks up the inverse, U(C^-1); see
:func:`transported_gate`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import (
    ValidationError,
    dagger,
    expm_hermitian,
    matrix_exponential,
    operator_distance,
)
from .ion_model import EffectiveCouplings, build_effective_single_qubit_h, build_effective_two_qubit_h

FAMILIES = ("u1", "u2", "u3")
TWO_PI = 2 * np.pi
_DOMAIN_SLACK = 1e-12

R_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
R_Z = np.diag([1.0, -1.0]).astype(complex)


def _check_family(family: str) -> str:
    if family not in FAMILIES:
        raise ValidationError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return family


def effective_dim(family: str) -> int:
    return 6 if _check_family(family) == "u3" else 4


def logical_dim(family: str) -> int:
    return 4 if _check_family(family) == "u3" else 2


def logical_indices(family: str) -> list[int]:
    """Positions of the computational states inside the effective basis."""
    return [0, 1, 2, 3] if _check_family(family) == "u3" else [0, 1]


def dark_count(family: str) -> int:
    """Dimension of the zero-energy subspace (u3 also has |01>, |10> idle)."""
    return 4 if _check_family(family) == "u3" else 2


# ------------------------------------------------------------ Hamiltonians


def family_couplings(family: str, theta: float, phi: float, omega: float = 1.0) -> EffectiveCouplings:
    _check_family(family)
    s, c = np.sin(theta), np.cos(theta)
    if family == "u1":
        return EffectiveCouplings(omega_1=omega * s, omega_0=0.0, omega_a=omega * c * np.exp(1j * phi))
    if family == "u2":
        return EffectiveCouplings(omega_0=omega * s * np.cos(phi), omega_1=omega * s * np.sin(phi), omega_a=omega * c)
    return EffectiveCouplings(omega_11=omega * s, omega_AA=omega * c * np.exp(-1j * phi))


def effective_hamiltonian(family: str, theta: float, phi: float, omega: float = 1.0) -> np.ndarray:
    c = family_couplings(family, theta, phi, omega)
    if family == "u3":
        return build_effective_two_qubit_h(c)
    return build_effective_single_qubit_h(c)


def effective_hamiltonian_samples(family: str, theta, phi, omega: float = 1.0) -> np.ndarray:
    """Stack of effective Hamiltonians for arrays of control angles."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = theta.shape[0]
    d = effective_dim(family)
    h = np.zeros((n, d, d), dtype=complex)
    s, c = omega * np.sin(theta), omega * np.cos(theta)
    if family == "u1":
        h[:, 2, 1] = s
        h[:, 2, 3] = c * np.exp(1j * phi)
    elif family == "u2":
        h[:, 2, 0] = s * np.cos(phi)
        h[:, 2, 1] = s * np.sin(phi)
        h[:, 2, 3] = c
    else:
        h[:, 4, 3] = s
        h[:, 4, 5] = c * np.exp(-1j * phi)
    return h + dagger(h)


# ------------------------------------------------------------------ paths


@dataclass(frozen=True)
class ControlPath:
    """Sampled path in (theta, phi); ``breaks`` are segment boundary sample indices."""

    samples: np.ndarray
    breaks: tuple[int, ...] = ()

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[1] != 2 or s.shape[0] < 2:
            raise ValidationError("path samples must have shape (N+1, 2) with N >= 1")
        if not np.all(np.isfinite(s)):
            raise ValidationError("path samples must be finite")
        n = s.shape[0] - 1
        b = tuple(sorted(set(int(x) for x in self.breaks) | {0, n}))
        if b[0] < 0 or b[-1] > n:
            raise ValidationError("segment breaks out of range")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "breaks", b)

    @property
    def n_intervals(self) -> int:
        return self.samples.shape[0] - 1

    @property
    def base_point(self) -> tuple[float, float]:
        return float(self.samples[0, 0]), float(self.samples[0, 1])

    @property
    def closed(self) -> bool:
        d = self.samples[-1] - self.samples[0]
        dphi = (d[1] + np.pi) % TWO_PI - np.pi
        return abs(d[0]) < 1e-12 and abs(dphi) < 1e-12

    @property
    def segments(self) -> list[tuple[int, int]]:
        return list(zip(self.breaks[:-1], self.breaks[1:]))

    def segment_lengths(self) -> np.ndarray:
        steps = np.linalg.norm(np.diff(self.samples, axis=0), axis=1)
        return np.array([steps[a:b].sum() for a, b in self.segments])

    def reversed(self) -> "ControlPath":
        n = self.n_intervals
        return ControlPath(self.samples[::-1].copy(), tuple(n - b for b in self.breaks))

    def to_record(self) -> dict:
        return {
            "base_point": list(self.base_point),
            "n_samples": int(self.samples.shape[0]),
            "breaks": list(self.breaks),
            "closed": self.closed,
        }


def three_segment_loop(
    theta0: float,
    samples: int = 4096,
    windings: int = 1,
    direction: int = 1,
    theta1: float | None = None,
    phi0: float = 0.0,
) -> ControlPath:
    """Ramp theta 0 -> theta0, sweep phi by 2 pi windings, ramp back to theta = 0.

    With ``theta1`` set, theta moves linearly from theta0 to theta1 during the
    sweep (a tilted loop whose phase integral is not a single product).
    ``samples`` is the total number of intervals N, split between segments in
    proportion to their lengths.
    """
    if direction not in (1, -1):
        raise ValidationError("direction must be +1 or -1")
    if windings < 1:
        raise ValidationError("windings must be >= 1")
    theta1 = theta0 if theta1 is None else theta1
    sweep = direction * TWO_PI * windings
    pieces = [
        ((0.0, phi0), (theta0, phi0)),
        ((theta0, phi0), (theta1, phi0 + sweep)),
        ((theta1, phi0 + sweep), (0.0, phi0 + sweep)),
    ]
    lengths = np.array([np.hypot(b[0] - a[0], b[1] - a[1]) for a, b in pieces])
    keep = lengths > 0
    pieces = [p for p, k in zip(pieces, keep) if k]
    lengths = lengths[keep]
    counts = np.maximum(1, np.round(samples * lengths / lengths.sum()).astype(int))
    counts[np.argmax(counts)] += samples - counts.sum()
    pts = [np.array([pieces[0][0]])]
    breaks = [0]
    for (a, b), m in zip(pieces, counts):
        u = np.linspace(0, 1, m + 1)[1:, None]
        pts.append(np.array(a) + u * (np.array(b) - np.array(a)))
        breaks.append(breaks[-1] + int(m))
    return ControlPath(np.vstack(pts), tuple(breaks))


def constant_path(point=(0.0, 0.0), samples: int = 1) -> ControlPath:
    return ControlPath(np.tile(np.asarray(point, dtype=float), (samples + 1, 1)))


def path_from_function(func, s_values, breaks=()) -> ControlPath:
    """Sample ``func(s) -> (theta, phi)`` at the given parameter values."""
    pts = np.array([func(s) for s in s_values], dtype=float)
    return ControlPath(pts, breaks)


# ----------------------------------------------------------------- frames


@dataclass(frozen=True)
class DarkFrame:
    family: str
    point: tuple[float, float]
    vectors: np.ndarray  # shape (2, dim): rows |D_0>, |D_1>


def _frames(family: str, theta, phi) -> np.ndarray:
    """Closed-form dark frames, shape (n, 2, dim), without domain checks."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    n = theta.shape[0]
    s, c = np.sin(theta), np.cos(theta)
    f = np.zeros((n, 2, effective_dim(family)), dtype=complex)
    if family == "u1":
        f[:, 0, 0] = 1.0
        f[:, 1, 1] = c
        f[:, 1, 3] = -s * np.exp(-1j * phi)
    elif family == "u2":
        f[:, 0, 0] = c * np.cos(phi)
        f[:, 0, 1] = c * np.sin(phi)
        f[:, 0, 3] = -s
        f[:, 1, 0] = -np.sin(phi)
        f[:, 1, 1] = np.cos(phi)
    else:
        f[:, 0, 0] = 1.0
        f[:, 1, 3] = c
        f[:, 1, 5] = -s * np.exp(1j * phi)
    return f


def _check_domain(theta) -> None:
    theta = np.asarray(theta)
    if np.any(theta < -_DOMAIN_SLACK) or np.any(theta > np.pi / 2 + _DOMAIN_SLACK):
        raise ValidationError("theta must lie in [0, pi/2]")


def dark_states(family: str, theta: float, phi: float) -> DarkFrame:
    _check_family(family)
    _check_domain(theta)
    return DarkFrame(family, (float(theta), float(phi)), _frames(family, theta, phi)[0])


def darkness_residual(family: str, theta: float, phi: float, omega: float = 1.0) -> float:
    """max_i ||H_eff |D_i>||."""
    h = effective_hamiltonian(family, theta, phi, omega)
    frame = dark_states(family, theta, phi).vectors
    return float(np.max(np.linalg.norm(frame @ h.T, axis=1)))


# ------------------------------------------------------------- connection


@dataclass(frozen=True)
class ConnectionSample:
    point: tuple[float, float]
    A_theta: np.ndarray
    A_phi: np.ndarray

    def anti_hermiticity_error(self) -> float:
        return max(
            float(np.max(np.abs(self.A_theta + dagger(self.A_theta)))),
            float(np.max(np.abs(self.A_phi + dagger(self.A_phi)))),
        )


def _connection_analytic_arrays(family: str, theta) -> tuple[np.ndarray, np.ndarray]:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    n = theta.shape[0]
    a_th = np.zeros((n, 2, 2), dtype=complex)
    if family == "u1":
        a_ph = (-0.5j * np.sin(theta) ** 2)[:, None, None] * (np.eye(2) - R_Z)
    elif family == "u2":
        a_ph = (-1j * np.cos(theta))[:, None, None] * R_Y
    else:
        a_ph = np.zeros((n, 2, 2), dtype=complex)
        a_ph[:, 1, 1] = 1j * np.sin(theta) ** 2
    return a_th, a_ph


def _connection_numeric_arrays(family: str, theta, phi, h: float) -> tuple[np.ndarray, np.ndarray]:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    f0 = _frames(family, theta, phi)
    d_th = (_frames(family, theta + h, phi) - _frames(family, theta - h, phi)) / (2 * h)
    d_ph = (_frames(family, theta, phi + h) - _frames(family, theta, phi - h)) / (2 * h)
    a_th = np.einsum("nik,njk->nij", f0.conj(), d_th)
    a_ph = np.einsum("nik,njk->nij", f0.conj(), d_ph)
    if not (np.all(np.isfinite(a_th)) and np.all(np.isfinite(a_ph))):
        raise ValidationError("non-finite connection (frame discontinuity)")
    return a_th, a_ph


def connection_numeric(family: str, point, h: float = 1e-4) -> ConnectionSample:
    """A_mu^{ij} = <D_i| d_mu |D_j> by central differences of the closed-form frames."""
    _check_family(family)
    if not 0 < h <= 1e-2:
        raise ValidationError("finite-difference step must lie in (0, 1e-2]")
    theta, phi = point
    _check_domain(theta)
    a_th, a_ph = _connection_numeric_arrays(family, theta, phi, h)
    return ConnectionSample((float(theta), float(phi)), a_th[0], a_ph[0])


def connection_analytic(family: str, point) -> ConnectionSample:
    """Closed forms: A_theta = 0 for every family, and

    u1: A_phi = -(i/2) sin^2(theta) (1 - R_z)
    u2: A_phi = -i cos(theta) R_y
    u3: A_phi = diag(0, i sin^2(theta)) on (|00>_L, |D_1>)
    """
    _check_family(family)
    theta, phi = point
    a_th, a_ph = _connection_analytic_arrays(family, theta)
    return ConnectionSample((float(theta), float(phi)), a_th[0], a_ph[0])


# ------------------------------------------------------------ Wilson loop


@dataclass
class HolonomyResult:
    family: str
    unitary: np.ndarray
    phase_integral: float
    path: ControlPath = field(repr=False)

    def logical_gate(self) -> np.ndarray:
        return frame_to_logical(self.family, self.unitary)


def frame_to_logical(family: str, u: np.ndarray) -> np.ndarray:
    """Express a base-point frame operator on the computational basis.

    At theta = 0 (and phi = 0 for u2) the dark frame coincides with the
    computational basis. For u3 the frame spans (|00>, |11>); |01> and |10>
    are idle and get the identity.
    """
    if family != "u3":
        return np.array(u, dtype=complex)
    g = np.eye(4, dtype=complex)
    idx = [0, 3]
    g[np.ix_(idx, idx)] = u
    return g


def _check_base_point(family: str, path: ControlPath) -> None:
    theta, phi = path.base_point
    if abs(theta) > 1e-12:
        raise ValidationError(f"{family} loops must start at theta = 0")
    if family == "u2" and abs((phi + np.pi) % TWO_PI - np.pi) > 1e-12:
        raise ValidationError("u2 loops must start at (theta, phi) = (0, 0)")


def wilson_loop(family: str, path: ControlPath, connection: str = "analytic", h: float = 1e-5) -> HolonomyResult:
    """Path-ordered product of exp(A_theta dtheta + A_phi dphi) over path intervals.

    Connections are evaluated at interval midpoints; later intervals multiply
    from the left.
    """
    _check_family(family)
    if not path.closed:
        raise ValidationError("wilson_loop needs a closed path")
    _check_base_point(family, path)
    s = path.samples
    _check_domain(s[:, 0])
    start, end = _frames(family, s[0, 0], s[0, 1])[0], _frames(family, s[-1, 0], s[-1, 1])[0]
    if np.max(np.abs(start - end)) > 1e-10:
        raise ValidationError("dark frame is not single-valued along this loop")
    mid = 0.5 * (s[1:] + s[:-1])
    dl = np.diff(s, axis=0)
    if connection == "analytic":
        a_th, a_ph = _connection_analytic_arrays(family, mid[:, 0])
    elif connection == "numeric":
        a_th, a_ph = _connection_numeric_arrays(family, mid[:, 0], mid[:, 1], h)
    else:
        raise ValidationError("connection must be 'analytic' or 'numeric'")
    gen = a_th * dl[:, 0, None, None] + a_ph * dl[:, 1, None, None]
    # exp(X) for anti-Hermitian X equals exp(-i (iX))
    steps = expm_hermitian(1j * gen, 1.0)
    u = kernels.ordered_product(steps)
    return HolonomyResult(family, u, analytic_phase(family, path), path)


def loop_generator_integral(family: str, path: ControlPath) -> np.ndarray:
    """Midpoint-rule oint A (no path ordering)."""
    s = path.samples
    mid = 0.5 * (s[1:] + s[:-1])
    dl = np.diff(s, axis=0)
    a_th, a_ph = _connection_analytic_arrays(family, mid[:, 0])
    return np.sum(a_th * dl[:, 0, None, None] + a_ph * dl[:, 1, None, None], axis=0)


def phase_density(family: str, theta) -> np.ndarray:
    """Integrand per unit phi of the geometric phase."""
    _check_family(family)
    theta = np.asarray(theta, dtype=float)
    if family == "u1":
        return 0.5 * np.sin(theta) ** 2
    if family == "u2":
        return -np.cos(theta)
    return np.sin(theta) ** 2


def analytic_phase(family: str, path: ControlPath) -> float:
    """Trapezoid-rule line integral of the family's phase density d(phi).

    u1: (1/2) oint sin^2(theta) dphi;  u2: -oint cos(theta) dphi;
    u3: oint sin^2(theta) dphi (the |11>_L Berry phase).
    """
    if not path.closed:
        raise ValidationError("analytic_phase needs a closed path")
    s = path.samples
    f = phase_density(family, s[:, 0])
    return float(np.sum(0.5 * (f[1:] + f[:-1]) * np.diff(s[:, 1])))


def analytic_holonomy(family: str, phase: float) -> np.ndarray:
    """Frame-basis gate from the phase integral.

    u1: e^{-i phase} e^{i phase R_z};  u2: e^{i phase R_y};  u3: diag(1, e^{i phase}).
    """
    _check_family(family)
    if family == "u1":
        return np.exp(-1j * phase) * matrix_exponential(R_Z, 1j * phase)
    if family == "u2":
        return matrix_exponential(R_Y, 1j * phase)
    return np.diag([1.0, np.exp(1j * phase)]).astype(complex)


@dataclass
class ConsistencyReport:
    family: str
    phase: float
    wilson: np.ndarray
    analytic: np.ndarray
    distance: float
    projective_distance: float
    wilson_global_phase: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.distance < self.tolerance


def projective_distance(u: np.ndarray, v: np.ndarray) -> float:
    """min over gamma of ||u - e^{i gamma} v||."""
    ov = np.trace(dagger(v) @ u)
    gamma = np.angle(ov) if abs(ov) > 0 else 0.0
    return operator_distance(u, np.exp(1j * gamma) * v)


def holonomy_vs_phase_consistency(family: str, path: ControlPath, tolerance: float = 1e-6) -> ConsistencyReport:
    res = wilson_loop(family, path)
    ana = analytic_holonomy(family, res.phase_integral)
    w = res.logical_gate()
    a = frame_to_logical(family, ana)
    return ConsistencyReport(
        family=family,
        phase=res.phase_integral,
        wilson=w,
        analytic=a,
        distance=operator_distance(w, a),
        projective_distance=projective_distance(w, a),
        wilson_global_phase=float(np.angle(np.linalg.det(res.unitary)) / 2),
        tolerance=tolerance,
    )


def transported_gate(family: str, path: ControlPath) -> np.ndarray:
    """Logical gate applied to states when the controls traverse ``path``.

    Adiabatic transport solves c' = -A c, so the state acquires
    P exp(-oint_C A) = U(C^-1): the Wilson loop of the reversed path.
    """
    return wilson_loop(family, path.reversed()).logical_gate()


__all__ = [
    "FAMILIES",
    "ConnectionSample",
    "ConsistencyReport",
    "ControlPath",
    "DarkFrame",
    "HolonomyResult",
    "analytic_holonomy",
    "analytic_phase",
    "connection_analytic",
    "connection_numeric",
    "constant_path",
    "dark_states",
    "darkness_residual",
    "effective_hamiltonian",
    "effective_hamiltonian_samples",
    "family_couplings",
    "frame_to_logical",
    "holonomy_vs_phase_consistency",
    "path_from_function",
    "three_segment_loop",
    "transported_gate",
    "wilson_loop",
]
