import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from holodfs.core import ValidationError, dagger, operator_distance
from holodfs.holonomy import (
    FAMILIES,
    ControlPath,
    analytic_holonomy,
    analytic_phase,
    connection_analytic,
    connection_numeric,
    constant_path,
    dark_states,
    darkness_residual,
    effective_hamiltonian,
    effective_hamiltonian_samples,
    holonomy_vs_phase_consistency,
    path_from_function,
    phase_density,
    three_segment_loop,
    transported_gate,
    wilson_loop,
)

angles = st.tuples(st.floats(0, np.pi / 2), st.floats(-2 * np.pi, 2 * np.pi))


@pytest.mark.parametrize("family", FAMILIES)
@given(pt=angles)
def test_dark_frame_orthonormal_and_dark(family, pt):
    f = dark_states(family, *pt).vectors
    assert np.allclose(f.conj() @ f.T, np.eye(2), atol=1e-12)
    assert darkness_residual(family, *pt, omega=2.5) < 1e-12


@pytest.mark.parametrize("family", FAMILIES)
def test_bright_states_sit_at_plus_minus_omega(family):
    w = np.linalg.eigvalsh(effective_hamiltonian(family, 0.8, 1.9, omega=1.7))
    assert np.allclose(np.sort(np.abs(w))[-2:], 1.7)
    assert np.sum(np.abs(w) < 1e-12) == len(w) - 2


def test_vectorized_hamiltonian_matches_scalar():
    th, ph = np.array([0.1, 0.9]), np.array([2.0, -0.4])
    for fam in FAMILIES:
        stack = effective_hamiltonian_samples(fam, th, ph, 1.3)
        for k in range(2):
            assert np.allclose(stack[k], effective_hamiltonian(fam, th[k], ph[k], 1.3))


def test_u3_printed_dark_state():
    # cos(theta)|11> - sin(theta) e^{i phi}|AA>
    f = dark_states("u3", 0.6, 1.1).vectors[1]
    expected = np.zeros(6, dtype=complex)
    expected[3] = np.cos(0.6)
    expected[5] = -np.sin(0.6) * np.exp(1.1j)
    assert np.allclose(f, expected)


def test_dark_states_domain():
    with pytest.raises(ValidationError):
        dark_states("u1", 1.7, 0.0)
    with pytest.raises(ValidationError):
        dark_states("u5", 0.1, 0.0)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("pt", [(0.7, 0.4), (1.2, -2.2), (0.05, 3.0)])
def test_numeric_connection_matches_analytic(family, pt):
    a = connection_numeric(family, pt, h=1e-4)
    b = connection_analytic(family, pt)
    assert np.max(np.abs(a.A_theta - b.A_theta)) < 1e-7
    assert np.max(np.abs(a.A_phi - b.A_phi)) < 1e-7
    assert a.anti_hermiticity_error() < 1e-8
    assert b.anti_hermiticity_error() == 0


def test_connection_closed_forms():
    th = 0.9
    assert np.allclose(connection_analytic("u1", (th, 0)).A_phi, np.diag([0, -1j * np.sin(th) ** 2]))
    assert np.allclose(connection_analytic("u2", (th, 0)).A_phi, [[0, -np.cos(th)], [np.cos(th), 0]])
    assert np.allclose(connection_analytic("u3", (th, 0)).A_phi, np.diag([0, 1j * np.sin(th) ** 2]))


def test_connection_step_validation():
    with pytest.raises(ValidationError):
        connection_numeric("u1", (0.5, 0.5), h=0.5)


def test_path_properties():
    p = three_segment_loop(np.pi / 3, samples=300)
    assert p.closed
    assert p.base_point == (0.0, 0.0)
    assert p.n_intervals == 300
    assert len(p.segments) == 3
    lengths = p.segment_lengths()
    assert np.allclose(lengths, [np.pi / 3, 2 * np.pi, np.pi / 3])
    r = p.reversed()
    assert np.allclose(r.samples, p.samples[::-1])
    assert r.closed and len(r.segments) == 3
    assert not ControlPath(np.array([[0, 0], [0.1, 0.0]])).closed


def test_path_validation():
    with pytest.raises(ValidationError):
        ControlPath(np.zeros((1, 2)))
    with pytest.raises(ValidationError):
        ControlPath(np.array([[0, np.nan], [0, 0]]))
    with pytest.raises(ValidationError):
        three_segment_loop(0.5, direction=2)


def test_theta_zero_loop_collapses_to_sweep():
    p = three_segment_loop(0.0, samples=64)
    assert len(p.segments) == 1
    for fam in FAMILIES:
        if fam == "u2":
            continue  # a theta = 0 sweep is a full u2 rotation
        assert np.allclose(wilson_loop(fam, p).logical_gate(), np.eye(4 if fam == "u3" else 2), atol=1e-12)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("theta0", [0.3, np.pi / 3, np.pi / 2])
def test_wilson_loop_matches_analytic_gate(family, theta0):
    rep = holonomy_vs_phase_consistency(family, three_segment_loop(theta0, 2048))
    assert rep.ok
    assert rep.distance < 1e-10


def test_printed_gates_at_pi_over_three():
    p = three_segment_loop(np.pi / 3, 4096)
    phi1 = 3 * np.pi / 4
    u1_ = wilson_loop("u1", p).logical_gate()
    assert operator_distance(u1_, np.diag([1, np.exp(-2j * phi1)])) < 1e-10
    u2_ = wilson_loop("u2", p).logical_gate()
    assert operator_distance(u2_, -np.eye(2)) < 1e-10
    u3_ = wilson_loop("u3", p).logical_gate()
    assert operator_distance(u3_, np.diag([1, 1, 1, np.exp(1.5j * np.pi)])) < 1e-10


def test_numeric_connection_wilson_loop():
    p = three_segment_loop(1.0, 4096)
    for fam in FAMILIES:
        a = wilson_loop(fam, p).unitary
        b = wilson_loop(fam, p, connection="numeric").unitary
        assert operator_distance(a, b) < 1e-8


@pytest.mark.parametrize("family", FAMILIES)
def test_reversal_inverts_holonomy(family):
    p = three_segment_loop(0.9, 1024, theta1=0.4)
    u = wilson_loop(family, p).unitary
    v = wilson_loop(family, p.reversed()).unitary
    assert np.allclose(u @ v, np.eye(2), atol=1e-12)
    assert np.allclose(transported_gate(family, p), dagger(wilson_loop(family, p).logical_gate()), atol=1e-12)


def test_windings_add_phases():
    one = analytic_phase("u1", three_segment_loop(0.7, 2000))
    two = analytic_phase("u1", three_segment_loop(0.7, 4000, windings=2))
    back = analytic_phase("u1", three_segment_loop(0.7, 2000, direction=-1))
    assert two == pytest.approx(2 * one, rel=1e-12)
    assert back == pytest.approx(-one, rel=1e-12)


@pytest.mark.parametrize("family", FAMILIES)
def test_reparameterization_invariance(family):
    # same geometric loop, non-uniform sampling of the sweep
    base = three_segment_loop(0.8, 8192)
    s = np.linspace(0, 1, 8193)
    warped = s + 0.05 * np.sin(2 * np.pi * s) / (2 * np.pi)

    def point(u):
        # ramp up [0, 1/6), sweep [1/6, 5/6), ramp down [5/6, 1]
        if u < 1 / 6:
            return (0.8 * 6 * u, 0.0)
        if u < 5 / 6:
            return (0.8, 2 * np.pi * (u - 1 / 6) * 1.5)
        return (0.8 * (1 - 6 * (u - 5 / 6)), 2 * np.pi)

    path = path_from_function(point, warped)
    a = wilson_loop(family, base).unitary
    b = wilson_loop(family, path).unitary
    assert operator_distance(a, b) < 1e-6


@pytest.mark.parametrize("family", FAMILIES)
def test_tilted_loop_midpoint_convergence(family):
    # theta varies during the sweep, so the midpoint rule has O(N^-2) error
    th0, th1 = 0.4, 1.2
    exact, _ = quad(lambda u: float(phase_density(family, th0 + (th1 - th0) * u)) * 2 * np.pi, 0, 1, epsabs=1e-14)
    target = analytic_holonomy(family, exact)
    errs = []
    for n in (512, 1024, 2048):
        u = wilson_loop(family, three_segment_loop(th0, n, theta1=th1)).unitary
        errs.append(operator_distance(u, target))
    assert errs[-1] < 1e-4
    assert 3.5 < errs[0] / errs[1] < 4.5
    assert 3.5 < errs[1] / errs[2] < 4.5


def test_wilson_loop_preconditions():
    with pytest.raises(ValidationError):
        wilson_loop("u1", ControlPath(np.array([[0, 0], [0.5, 0]])))
    off_base = ControlPath(np.array([[0.3, 0], [0.3, np.pi], [0.3, 2 * np.pi]]))
    with pytest.raises(ValidationError):
        wilson_loop("u1", off_base)
    with pytest.raises(ValidationError):
        wilson_loop("u2", three_segment_loop(0.5, 64, phi0=1.0))
    with pytest.raises(ValidationError):
        wilson_loop("u1", three_segment_loop(0.5, 64), connection="magic")


def test_constant_path_trivial():
    p = constant_path((0.0, 0.0), 5)
    for fam in FAMILIES:
        assert np.allclose(wilson_loop(fam, p).unitary, np.eye(2))
        assert analytic_phase(fam, p) == 0.0


def test_u1_u2_do_not_commute():
    a = analytic_holonomy("u1", np.pi / 2)
    b = analytic_holonomy("u2", np.pi / 2)
    assert np.linalg.norm(a @ b - b @ a, 2) == pytest.approx(2.0, abs=1e-12)
