"""Analytic gate constructors, loop design and single-qubit Euler synthesis."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ValidationError, dagger, matrix_exponential, unitarity_error
from .holonomy import R_Y, R_Z, TWO_PI, ControlPath, analytic_phase, phase_density, three_segment_loop

GATE_KINDS = ("u1", "u2", "u3", "arbitrary_su2")

_S2 = 1 / np.sqrt(2)
NAMED_TARGETS = {
    "hadamard": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.diag([1, -1]).astype(complex),
    "s": np.diag([1, 1j]).astype(complex),
    "t": np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
}


@dataclass(frozen=True)
class GateSpec:
    kind: str
    angle: float | None = None
    unitary: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"gate kind must be one of {GATE_KINDS}")
        if self.kind == "arbitrary_su2":
            if self.unitary is None:
                raise ValidationError("arbitrary_su2 needs a unitary")
            u = np.asarray(self.unitary, dtype=complex)
            if u.shape != (2, 2) or unitarity_error(u) > 1e-10:
                raise ValidationError("arbitrary_su2 input must be a 2x2 unitary within 1e-10")
        elif self.angle is None or not np.isfinite(self.angle):
            raise ValidationError(f"{self.kind} needs a finite angle")


def build_gate(spec: GateSpec) -> np.ndarray:
    """u1: e^{-i phi} e^{i phi R_z};  u2: e^{i phi R_y};  u3: e^{i phi |11><11|};
    arbitrary_su2: the unitary itself."""
    if spec.kind == "u1":
        return np.exp(-1j * spec.angle) * matrix_exponential(R_Z, 1j * spec.angle)
    if spec.kind == "u2":
        return matrix_exponential(R_Y, 1j * spec.angle)
    if spec.kind == "u3":
        return np.diag([1, 1, 1, np.exp(1j * spec.angle)]).astype(complex)
    return np.array(spec.unitary, dtype=complex)


def u1(phi: float) -> np.ndarray:
    return build_gate(GateSpec("u1", phi))


def u2(phi: float) -> np.ndarray:
    return build_gate(GateSpec("u2", phi))


def u3(phi: float) -> np.ndarray:
    return build_gate(GateSpec("u3", phi))


# ------------------------------------------------------------ loop design

# largest |phase| a single constant-theta circle can produce
_PER_WINDING = {"u1": np.pi, "u2": TWO_PI, "u3": TWO_PI}
# sign of the phase for a positive (counter-clockwise) sweep
_NATURAL_SIGN = {"u1": 1, "u2": -1, "u3": 1}


@dataclass(frozen=True)
class LoopDesign:
    kind: str
    target_phase: float
    theta0: float
    windings: int
    direction: int
    path: ControlPath

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "target_phase": float(self.target_phase),
            "theta0": float(self.theta0),
            "windings": int(self.windings),
            "direction": int(self.direction),
            "phase_integral": analytic_phase(self.kind, self.path),
        }


def _invert_density(kind: str, x: float) -> float:
    """theta in [0, pi/2] with phase_density(kind, theta) = x."""
    if kind == "u1":
        return float(np.arcsin(np.sqrt(np.clip(2 * x, 0.0, 1.0))))
    if kind == "u2":
        return float(np.arccos(np.clip(-x, 0.0, 1.0)))
    return float(np.arcsin(np.sqrt(np.clip(x, 0.0, 1.0))))


def loop_for_phase(
    kind: str,
    target_phase: float,
    allow_windings: bool = True,
    samples: int = 4096,
) -> LoopDesign:
    """Constant-theta three-segment loop whose phase integral equals ``target_phase``.

    u1 and u3 circles give positive phases for a positive sweep, u2 circles
    negative ones. Targets of the other sign reverse the sweep and targets
    beyond one circle's range add windings; both need ``allow_windings``.
    """
    if kind not in ("u1", "u2", "u3"):
        raise ValidationError(f"loop kind must be u1, u2 or u3, got {kind!r}")
    x = float(target_phase)
    if not np.isfinite(x):
        raise ValidationError("target phase must be finite")
    natural = _NATURAL_SIGN[kind]
    direction = 1 if x == 0 or np.sign(x) == natural else -1
    windings = max(1, int(np.ceil(abs(x) / _PER_WINDING[kind] - 1e-12)))
    if not allow_windings and (direction == -1 or windings > 1):
        raise ValidationError(
            f"{kind} target {x:g} is outside the single-winding range; enable windings"
        )
    sweep = direction * TWO_PI * windings
    theta0 = _invert_density(kind, x / sweep)
    path = three_segment_loop(theta0, samples=samples, windings=windings, direction=direction)
    got = analytic_phase(kind, path)
    if abs(got - x) > 1e-10:
        raise ValidationError(f"cannot realize {kind} phase {x:g} (best {got:g})")
    return LoopDesign(kind, x, theta0, windings, direction, path)


# -------------------------------------------------------- Euler synthesis


@dataclass(frozen=True)
class EulerAngles:
    """U = e^{i global_phase} U1(phi_z2) U2(phi_y) U1(phi_z1)."""

    phi_z1: float
    phi_y: float
    phi_z2: float
    global_phase: float

    def as_tuple(self) -> tuple[float, float, float]:
        return self.phi_z1, self.phi_y, self.phi_z2

    def compose(self) -> np.ndarray:
        return np.exp(1j * self.global_phase) * (u1(self.phi_z2) @ u2(self.phi_y) @ u1(self.phi_z1))


def euler_decompose(target: np.ndarray, atol: float = 1e-12) -> EulerAngles:
    """ZYZ decomposition exp(i a R_z) exp(i b R_y) exp(i c R_z) of a 2x2 unitary.

    With exp(i b R_y) = [[cos b, sin b], [-sin b, cos b]], an SU(2) matrix has
    V00 = e^{i(a+c)} cos b and V01 = e^{i(a-c)} sin b. Degenerate cases put
    the free angle into a.
    """
    u = np.asarray(target, dtype=complex)
    if u.shape != (2, 2):
        raise ValidationError("euler_decompose needs a 2x2 matrix")
    if not np.all(np.isfinite(u)) or unitarity_error(u) > 1e-10:
        raise ValidationError("euler_decompose needs a unitary input")
    v = u / np.sqrt(np.linalg.det(u))
    b = float(np.arctan2(abs(v[0, 1]), abs(v[0, 0])))
    if abs(v[0, 1]) < atol:
        a, c = float(np.angle(v[0, 0])), 0.0
    elif abs(v[0, 0]) < atol:
        a, c = float(np.angle(v[0, 1])), 0.0
    else:
        s, d = np.angle(v[0, 0]), np.angle(v[0, 1])
        a, c = float((s + d) / 2), float((s - d) / 2)
    body = u1(a) @ u2(b) @ u1(c)
    gp = float(np.angle(np.trace(dagger(body) @ u)))
    return EulerAngles(phi_z1=c, phi_y=b, phi_z2=a, global_phase=gp)


def composition_fidelity(target: np.ndarray, realized: np.ndarray) -> float:
    """|Tr(T^dag R)| / d, insensitive to a global phase."""
    return float(abs(np.trace(dagger(target) @ realized)) / target.shape[0])


@dataclass
class SynthesisResult:
    target: np.ndarray
    angles: EulerAngles
    loops: list[LoopDesign]
    composed: np.ndarray
    fidelity: float


def synthesize_su2(target: np.ndarray, samples: int = 4096) -> SynthesisResult:
    """Three loops (u1, u2, u1), applied in that order, composing ``target``.

    Each loop's phase integral equals its Euler angle, so its Wilson loop is
    the printed gate; the adiabatic drive traverses each loop reversed (see
    :func:`holodfs.holonomy.transported_gate`).
    """
    ang = euler_decompose(target)
    loops = [
        loop_for_phase("u1", ang.phi_z1, samples=samples),
        loop_for_phase("u2", ang.phi_y, samples=samples),
        loop_for_phase("u1", ang.phi_z2, samples=samples),
    ]
    composed = build_gate(GateSpec("u1", loops[2].target_phase))
    composed = composed @ build_gate(GateSpec("u2", loops[1].target_phase))
    composed = composed @ build_gate(GateSpec("u1", loops[0].target_phase))
    return SynthesisResult(np.asarray(target, dtype=complex), ang, loops, composed, composition_fidelity(target, composed))


def resolve_target(name_or_matrix) -> np.ndarray:
    if isinstance(name_or_matrix, str):
        key = name_or_matrix.strip().lower()
        if key not in NAMED_TARGETS:
            raise ValidationError(f"unknown target {name_or_matrix!r}; known: {sorted(NAMED_TARGETS)}")
        return NAMED_TARGETS[key].copy()
    return np.asarray(name_or_matrix, dtype=complex)


__all__ = [
    "NAMED_TARGETS",
    "EulerAngles",
    "GateSpec",
    "LoopDesign",
    "SynthesisResult",
    "build_gate",
    "composition_fidelity",
    "euler_decompose",
    "loop_for_phase",
    "phase_density",
    "resolve_target",
    "synthesize_su2",
    "u1",
    "u2",
    "u3",
]
