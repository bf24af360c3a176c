"""Explicit baseline scheme: acoustic CFL step, rest fixed point and
blow-up detection."""

import numpy as np
import pytest

from pipeflow.errors import BlowUp, NonPositiveDensity
from pipeflow.explicit_stepper import explicit_step, explicit_timestep, full_residual
from pipeflow.ap_stepper import fill_ghosts
from pipeflow.model import (GasParameters, Inlet, NetworkState,
                            NetworkTopology, Outlet, PipeGeometry, PipeState)

GAMMA = 5.0 / 3.0


def _single_pipe_net(inlet_rho=1.1, n=10, dx=0.1, rho0=1.0, q0=0.0):
    topo = NetworkTopology(
        pipes=[PipeGeometry(n * dx, n)],
        boundaries={(0, "left"): Inlet(rho=inlet_rho), (0, "right"): Outlet()})
    return NetworkState(topo, [PipeState(dx, np.full(n, rho0), np.full(n, q0))])


def test_acoustic_timestep_at_rest():
    # uniform rest state at rho = 1: speed is the sound speed sqrt(gamma)/eps
    net = _single_pipe_net(inlet_rho=1.0)
    params = GasParameters(epsilon=0.1)
    fill_ghosts(net, params)
    dt = explicit_timestep(net.pipes, params, dt_max=1.0)
    expected = 0.45 * 0.1 / (np.sqrt(GAMMA) / 0.1)
    assert dt == pytest.approx(expected, rel=1e-13)
    assert dt == pytest.approx(0.0034857, abs=5e-7)


def test_acoustic_timestep_moving_state():
    net = _single_pipe_net(inlet_rho=1.0, q0=0.5)
    params = GasParameters(epsilon=1.0)
    fill_ghosts(net, params)
    dt = explicit_timestep(net.pipes, params, dt_max=1.0)
    assert dt == pytest.approx(0.45 * 0.1 / (0.5 + np.sqrt(GAMMA)), rel=1e-13)


def test_timestep_scales_with_epsilon():
    params_a = GasParameters(epsilon=0.1)
    params_b = GasParameters(epsilon=0.001)
    net = _single_pipe_net(inlet_rho=1.0)
    fill_ghosts(net, params_a)
    dt_a = explicit_timestep(net.pipes, params_a, dt_max=1.0)
    dt_b = explicit_timestep(net.pipes, params_b, dt_max=1.0)
    assert dt_a / dt_b == pytest.approx(100.0, rel=1e-12)


def test_timestep_includes_ghost_waves():
    # the inlet ghost at rho = 1.3 carries the fastest sound speed
    net = _single_pipe_net(inlet_rho=1.3)
    params = GasParameters(epsilon=0.1)
    fill_ghosts(net, params)
    dt = explicit_timestep(net.pipes, params, dt_max=1.0)
    expected = 0.45 * 0.1 / (np.sqrt(GAMMA * 1.3 ** (GAMMA - 1.0)) / 0.1)
    assert dt == pytest.approx(expected, rel=1e-13)


def test_uniform_residual_vanishes():
    net = _single_pipe_net(inlet_rho=1.0)
    params = GasParameters(epsilon=0.1)
    fill_ghosts(net, params)
    r_rho, r_q = full_residual(net.pipes[0], params)
    assert np.all(r_rho == 0.0)
    assert np.all(r_q == 0.0)


def test_rest_state_is_fixed_point():
    params = GasParameters(epsilon=0.01)
    net = _single_pipe_net(inlet_rho=1.0)
    for _ in range(5):
        explicit_step(net, params)
    np.testing.assert_array_equal(net.pipes[0].rho, 1.0)
    np.testing.assert_array_equal(net.pipes[0].q, 0.0)


def test_oversized_step_blows_up():
    # forcing dt = dx violates the acoustic CFL limit by orders of magnitude
    # at eps = 1e-3 and must be caught, not silently produce garbage
    params = GasParameters(epsilon=1e-3)
    net = _single_pipe_net(inlet_rho=1.3)
    with pytest.raises((BlowUp, NonPositiveDensity)):
        for _ in range(50):
            explicit_step(net, params, dt=0.1)
