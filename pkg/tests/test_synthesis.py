import numpy as np
import pytest
from hypothesis import given, strategies as st

from holodfs.core import ValidationError, operator_distance
from holodfs.holonomy import analytic_phase, transported_gate, wilson_loop
from holodfs.synthesis import (
    NAMED_TARGETS,
    GateSpec,
    build_gate,
    composition_fidelity,
    euler_decompose,
    loop_for_phase,
    resolve_target,
    synthesize_su2,
    u1,
    u2,
    u3,
)
from conftest import haar_unitary

RY = np.array([[0, -1j], [1j, 0]])


def expm_2x2_pauli(pauli, angle):
    # exp(i a P) = cos(a) I + i sin(a) P for any Pauli P
    return np.cos(angle) * np.eye(2) + 1j * np.sin(angle) * np.asarray(pauli)


def test_build_gate_examples():
    assert np.allclose(u1(0.0), np.eye(2))
    assert np.allclose(u1(np.pi / 2), np.diag([1, -1]))
    assert np.allclose(u3(np.pi), np.diag([1, 1, 1, -1]))
    assert np.allclose(u2(-np.pi), -np.eye(2))


@given(st.floats(-10, 10))
def test_u1_u2_closed_forms(a):
    assert np.allclose(u1(a), np.exp(-1j * a) * expm_2x2_pauli(np.diag([1, -1]), a), atol=1e-12)
    assert np.allclose(u2(a), expm_2x2_pauli(RY, a), atol=1e-12)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_composition_soundness(a, b):
    for g in (u1, u2):
        lhs = g(a) @ g(b)
        rhs = g(a + b)
        ph = np.vdot(rhs.ravel(), lhs.ravel())
        assert operator_distance(lhs, ph / abs(ph) * rhs) < 1e-12


@given(st.floats(-10, 10))
def test_controlled_phase_idles_other_states(phi):
    g = u3(phi)
    assert np.array_equal(g[:3, :3], np.eye(3))
    assert np.array_equal(g[:3, 3], np.zeros(3)) and np.array_equal(g[3, :3], np.zeros(3))


def test_gate_spec_validation():
    with pytest.raises(ValidationError):
        GateSpec("u7", 0.1)
    with pytest.raises(ValidationError):
        GateSpec("u1")
    with pytest.raises(ValidationError):
        GateSpec("arbitrary_su2", unitary=np.ones((2, 2)))
    h = NAMED_TARGETS["hadamard"]
    assert np.allclose(build_gate(GateSpec("arbitrary_su2", unitary=h)), h)


@pytest.mark.parametrize(
    "kind,target,theta0",
    [("u1", np.pi, np.pi / 2), ("u1", 3 * np.pi / 4, np.pi / 3), ("u2", -np.pi, np.pi / 3), ("u3", np.pi, np.pi / 4)],
)
def test_loop_for_phase_examples(kind, target, theta0):
    d = loop_for_phase(kind, target)
    assert d.theta0 == pytest.approx(theta0, abs=1e-12)
    assert d.windings == 1 and d.direction == 1


@pytest.mark.parametrize("kind", ["u1", "u2", "u3"])
@given(x=st.floats(-12, 12))
def test_loop_round_trip(kind, x):
    d = loop_for_phase(kind, x, samples=512)
    assert abs(analytic_phase(kind, d.path) - x) < 1e-10
    assert d.path.closed and d.path.base_point == (0.0, 0.0)


def test_loop_wilson_gate_matches_build_gate():
    for kind, x in (("u1", 1.3), ("u2", -2.2), ("u2", 0.9), ("u3", np.pi)):
        d = loop_for_phase(kind, x)
        got = wilson_loop(kind, d.path).logical_gate()
        assert operator_distance(got, build_gate(GateSpec(kind, x))) < 1e-10
        # the drive realizes the gate when the loop is traversed reversed
        assert operator_distance(transported_gate(kind, d.path.reversed()), build_gate(GateSpec(kind, x))) < 1e-10


def test_loop_without_windings():
    with pytest.raises(ValidationError):
        loop_for_phase("u1", -0.5, allow_windings=False)
    with pytest.raises(ValidationError):
        loop_for_phase("u2", 0.5, allow_windings=False)
    with pytest.raises(ValidationError):
        loop_for_phase("u1", 4.0, allow_windings=False)
    d = loop_for_phase("u1", 4.0)
    assert d.windings == 2
    assert loop_for_phase("u1", 0.0).theta0 == 0.0
    with pytest.raises(ValidationError):
        loop_for_phase("u1", np.inf)


def test_euler_examples():
    assert euler_decompose(np.eye(2)).as_tuple() == (0.0, 0.0, 0.0)
    z1, y, z2 = euler_decompose(expm_2x2_pauli(RY, np.pi / 4)).as_tuple()
    assert (z1, z2) == (0.0, 0.0) and y == pytest.approx(np.pi / 4)


def test_euler_haar_random(rng):
    for _ in range(200):
        u = haar_unitary(rng, 2)
        ang = euler_decompose(u)
        assert composition_fidelity(u, u1(ang.phi_z2) @ u2(ang.phi_y) @ u1(ang.phi_z1)) > 1 - 1e-9
        assert operator_distance(ang.compose(), u) < 1e-12


@pytest.mark.parametrize("name", sorted(NAMED_TARGETS))
def test_euler_degenerate_targets(name):
    u = NAMED_TARGETS[name]
    assert operator_distance(euler_decompose(u).compose(), u) < 1e-12


def test_euler_rejects_non_unitary():
    with pytest.raises(ValidationError):
        euler_decompose(np.ones((2, 2)))
    with pytest.raises(ValidationError):
        euler_decompose(np.eye(3))


def test_synthesize_hadamard_sequence():
    res = synthesize_su2(NAMED_TARGETS["hadamard"])
    assert res.fidelity > 1 - 1e-9
    assert [lp.kind for lp in res.loops] == ["u1", "u2", "u1"]
    # composing the transported gates of the reversed loops reproduces the target
    g = np.eye(2)
    for lp in res.loops:
        g = transported_gate(lp.kind, lp.path.reversed()) @ g
    assert composition_fidelity(NAMED_TARGETS["hadamard"], g) > 1 - 1e-9


def test_resolve_target():
    assert np.allclose(resolve_target("Hadamard"), NAMED_TARGETS["hadamard"])
    with pytest.raises(ValidationError):
        resolve_target("toffoli")
