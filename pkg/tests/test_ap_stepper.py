"""AP stepper building blocks: friction factors, tridiagonal solves, the
CFL step, rest fixed points and the large-epsilon degeneration."""

import numpy as np
import pytest

from pipeflow import _kernels
from pipeflow.ap_stepper import (_cyclic_thomas, ap_timestep, fill_ghosts,
                                 network_step, phi_half, psi)
from pipeflow.errors import SingularSystem
from pipeflow.explicit_stepper import explicit_step
from pipeflow.flux import stiffness_params
from pipeflow.model import (GasParameters, Inlet, JunctionSpec, NetworkState,
                            NetworkTopology, Outlet, PeriodicEnd,
                            PipeGeometry, PipeState)

GAMMA = 5.0 / 3.0


# ---------------------------------------------------------------------------
# friction factors
# ---------------------------------------------------------------------------

def test_psi_values():
    assert psi(1.0, 0.01, GasParameters(epsilon=0.1)) == pytest.approx(1.0005, rel=1e-15)
    assert psi(1.0, 0.01, GasParameters(epsilon=0.01)) == pytest.approx(1.05, rel=1e-15)
    assert psi(-1.0, 0.01, GasParameters(epsilon=0.01)) == pytest.approx(1.05, rel=1e-15)
    assert psi(0.0, 0.5, GasParameters(epsilon=1e-6)) == 1.0


def test_phi_half_values():
    assert phi_half(1.0, 1.0) == 1.0
    assert phi_half(1.0005, 1.0005) == pytest.approx(1.0 / 1.0005, rel=1e-15)
    assert phi_half(1.0, 2.0) == pytest.approx(0.75, rel=1e-15)


# ---------------------------------------------------------------------------
# tridiagonal solves
# ---------------------------------------------------------------------------

def test_thomas_identity():
    rhs = np.array([3.0, -1.0, 2.0, 0.5])
    x = _kernels.thomas(np.zeros(4), np.ones(4), np.zeros(4), rhs)
    np.testing.assert_array_equal(x, rhs)


def test_thomas_small_system_exact():
    # diag 3, off-diagonals -1, rhs (1, 0, 1) has the rational solution
    # (3/7, 2/7, 3/7)
    sub = np.array([0.0, -1.0, -1.0])
    sup = np.array([-1.0, -1.0, 0.0])
    diag = np.full(3, 3.0)
    x = _kernels.thomas(sub, diag, sup, np.array([1.0, 0.0, 1.0]))
    np.testing.assert_allclose(x, [3.0 / 7.0, 2.0 / 7.0, 3.0 / 7.0], rtol=1e-14)


def test_thomas_diag_two_system():
    sub = np.array([0.0, -1.0, -1.0])
    sup = np.array([-1.0, -1.0, 0.0])
    diag = np.full(3, 2.0)
    x = _kernels.thomas(sub, diag, sup, np.array([1.0, 0.0, 1.0]))
    np.testing.assert_allclose(x, [1.0, 1.0, 1.0], rtol=1e-14)


def test_thomas_matches_dense_solver():
    rng = np.random.default_rng(61)
    for n in (2, 7, 50):
        sub = np.zeros(n)
        sup = np.zeros(n)
        sub[1:] = rng.normal(0.0, 0.3, n - 1)
        sup[:-1] = rng.normal(0.0, 0.3, n - 1)
        diag = rng.uniform(2.0, 3.0, n)
        rhs = rng.normal(size=n)
        a = np.diag(diag) + np.diag(sub[1:], -1) + np.diag(sup[:-1], 1)
        np.testing.assert_allclose(_kernels.thomas(sub, diag, sup, rhs),
                                   np.linalg.solve(a, rhs), rtol=1e-11, atol=1e-13)


def test_thomas_singular_raises():
    with pytest.raises(SingularSystem):
        _kernels.thomas(np.zeros(3), np.zeros(3), np.zeros(3), np.ones(3))


def test_cyclic_thomas_matches_dense():
    rng = np.random.default_rng(67)
    for n in (4, 11, 60):
        off = rng.uniform(0.1, 0.4, n)  # symmetric interface couplings
        diag = 2.0 + off + np.roll(off, -1)
        sub = np.zeros(n)
        sup = np.zeros(n)
        sub[1:] = -off[1:]
        sup[:-1] = -off[1:]
        corner = -off[0]
        rhs = rng.normal(size=n)
        a = np.diag(diag) + np.diag(sub[1:], -1) + np.diag(sup[:-1], 1)
        a[0, -1] = a[-1, 0] = corner
        np.testing.assert_allclose(
            _cyclic_thomas(sub, diag, sup, corner, rhs),
            np.linalg.solve(a, rhs), rtol=1e-11, atol=1e-13)


# ---------------------------------------------------------------------------
# network fixtures
# ---------------------------------------------------------------------------

def _single_pipe_net(inlet_rho=1.1, n=10, dx=0.1, rho0=1.0):
    topo = NetworkTopology(
        pipes=[PipeGeometry(n * dx, n)],
        boundaries={(0, "left"): Inlet(rho=inlet_rho), (0, "right"): Outlet()})
    return NetworkState(topo, [PipeState(dx, np.full(n, rho0), np.zeros(n))])


def _t_junction_net(n=8, dx=0.1):
    topo = NetworkTopology(
        pipes=[PipeGeometry(n * dx, n)] * 3,
        junctions=[JunctionSpec(ingoing=(0,), outgoing=(1, 2))],
        boundaries={(0, "left"): Inlet(rho=1.0),
                    (1, "right"): Outlet(), (2, "right"): Outlet()})
    return NetworkState(
        topo, [PipeState(dx, np.ones(n), np.zeros(n)) for _ in range(3)])


def _periodic_net(n=16):
    dx = 1.0 / n
    topo = NetworkTopology(
        pipes=[PipeGeometry(1.0, n)],
        boundaries={(0, "left"): PeriodicEnd(), (0, "right"): PeriodicEnd()})
    x = (np.arange(n) + 0.5) * dx
    return NetworkState(topo, [PipeState(dx, 1.0 + 0.1 * np.sin(2 * np.pi * x),
                                         np.zeros(n))])


# ---------------------------------------------------------------------------
# time step
# ---------------------------------------------------------------------------

def test_ap_timestep_inlet_jump_value():
    # rest pipe at rho = 1 behind an inlet ghost at 1.1: the only wave speed
    # is sqrt(p'(1.1) - p'(1)) from the ghost, giving dt = nu*dx/0.33066
    net = _single_pipe_net()
    params = GasParameters(epsilon=0.1)
    fill_ghosts(net, params)
    split = stiffness_params(net.pipes, params)
    dt = ap_timestep(net.pipes, split, params, dt_max=1.0)
    expected = 0.45 * 0.1 / np.sqrt(GAMMA * (1.1 ** (GAMMA - 1.0) - 1.0))
    assert dt == pytest.approx(expected, rel=1e-13)
    assert dt == pytest.approx(0.13609, abs=5e-5)


def test_ap_timestep_epsilon_independent():
    dts = []
    for eps in (0.1, 0.01, 1e-3, 1e-6):
        net = _single_pipe_net()
        params = GasParameters(epsilon=eps)
        fill_ghosts(net, params)
        split = stiffness_params(net.pipes, params)
        dts.append(ap_timestep(net.pipes, split, params, dt_max=1.0))
    assert max(dts) - min(dts) <= 1e-10


def test_ap_timestep_default_cap_is_min_dx():
    net = _single_pipe_net(inlet_rho=1.0)  # fully at rest: no wave speeds
    params = GasParameters(epsilon=0.1)
    fill_ghosts(net, params)
    split = stiffness_params(net.pipes, params)
    assert ap_timestep(net.pipes, split, params) == 0.1


# ---------------------------------------------------------------------------
# rest fixed points and degeneration
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("eps", [1.0, 0.1, 0.01, 1e-3])
def test_rest_state_is_bitwise_fixed_point(eps):
    params = GasParameters(epsilon=eps)
    net = _single_pipe_net(inlet_rho=1.0)
    for _ in range(5):
        network_step(net, params)
    np.testing.assert_array_equal(net.pipes[0].rho, 1.0)
    np.testing.assert_array_equal(net.pipes[0].q, 0.0)


@pytest.mark.parametrize("eps", [0.1, 1e-3])
def test_rest_junction_network_fixed_point(eps):
    params = GasParameters(epsilon=eps)
    net = _t_junction_net()
    for _ in range(5):
        report = network_step(net, params)
    assert report.junction_residuals[0] <= 1e-8
    for pipe in net.pipes:
        np.testing.assert_array_equal(pipe.rho, 1.0)
        np.testing.assert_array_equal(pipe.q, 0.0)


def test_periodic_uniform_momentum_relaxes_pointwise():
    # a uniform translating periodic state has zero flux divergence, so one
    # step is exactly the pointwise friction relaxation q -> q / psi
    n = 8
    params = GasParameters(epsilon=0.01)
    topo = NetworkTopology(
        pipes=[PipeGeometry(1.0, n)],
        boundaries={(0, "left"): PeriodicEnd(), (0, "right"): PeriodicEnd()})
    net = NetworkState(topo, [PipeState(1.0 / n, np.ones(n), np.ones(n))])
    network_step(net, params, dt=0.01)
    np.testing.assert_array_equal(net.pipes[0].rho, 1.0)
    np.testing.assert_allclose(net.pipes[0].q, 1.0 / 1.05, rtol=1e-15)


def test_ap_equals_explicit_at_epsilon_one():
    # at epsilon = 1 the splitting degenerates (alpha = 1, a_n = 0) and the
    # AP step must reproduce the explicit step exactly
    params = GasParameters(epsilon=1.0)
    rng = np.random.default_rng(71)
    rho0 = 1.0 + 0.2 * rng.random(12)
    q0 = 0.1 * rng.standard_normal(12)

    def fresh():
        topo = NetworkTopology(
            pipes=[PipeGeometry(1.2, 12)],
            boundaries={(0, "left"): Inlet(rho=1.1), (0, "right"): Outlet()})
        return NetworkState(topo, [PipeState(0.1, rho0.copy(), q0.copy())])

    net_ap = fresh()
    net_ex = fresh()
    dt = 0.01
    for _ in range(3):
        network_step(net_ap, params, dt=dt)
        explicit_step(net_ex, params, dt=dt)
    np.testing.assert_array_equal(net_ap.pipes[0].rho, net_ex.pipes[0].rho)
    np.testing.assert_array_equal(net_ap.pipes[0].q, net_ex.pipes[0].q)


def test_periodic_step_conserves_mass():
    params = GasParameters(epsilon=0.1)
    net = _periodic_net()
    before = net.total_mass()
    for _ in range(50):
        network_step(net, params)
    assert net.total_mass() == pytest.approx(before, rel=1e-13)


def test_boundary_dx_variant_changes_solution():
    params = GasParameters(epsilon=0.01)
    net_a = _single_pipe_net()
    net_b = _single_pipe_net()
    for _ in range(3):
        network_step(net_a, params, dt=0.01)
        network_step(net_b, params, dt=0.01, boundary_dx_variant=True)
    assert not np.array_equal(net_a.pipes[0].rho, net_b.pipes[0].rho)
