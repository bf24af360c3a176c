"""Gas law, parameter validation and topology checks."""

import numpy as np
import pytest

from pipeflow.errors import NonPositiveDensity
from pipeflow.model import (GasParameters, Inlet, JunctionSpec, NetworkState,
                            NetworkTopology, Outlet, PeriodicEnd,
                            PipeGeometry, PipeState, pressure,
                            pressure_derivative, validate_topology)


def test_pressure_values():
    params = GasParameters()
    assert pressure(1.0, params) == 1.0
    assert pressure(1.1, params) == pytest.approx(1.1 ** (5.0 / 3.0), rel=1e-14)
    assert pressure(1.1, params) == pytest.approx(1.17216, abs=5e-6)


def test_pressure_derivative_values():
    params = GasParameters()
    assert pressure_derivative(1.0, params) == pytest.approx(5.0 / 3.0, rel=1e-15)
    assert pressure_derivative(1.1, params) == pytest.approx(1.77600, abs=5e-6)


def test_pressure_derivative_is_derivative():
    params = GasParameters(gamma=1.4)
    rng = np.random.default_rng(7)
    rho = rng.uniform(0.5, 2.0, 50)
    h = 1e-6
    fd = (pressure(rho + h, params) - pressure(rho - h, params)) / (2.0 * h)
    assert np.allclose(fd, pressure_derivative(rho, params), rtol=1e-8)


def test_vacuum_rejected():
    params = GasParameters()
    with pytest.raises(NonPositiveDensity):
        pressure(0.0, params)
    with pytest.raises(NonPositiveDensity):
        pressure_derivative(np.array([1.0, -0.5]), params)


def test_parameter_validation():
    with pytest.raises(ValueError):
        GasParameters(gamma=1.0)
    with pytest.raises(ValueError):
        GasParameters(epsilon=0.0)
    with pytest.raises(ValueError):
        GasParameters(theta=2.5)
    with pytest.raises(ValueError):
        GasParameters(nu=0.0)
    with pytest.raises(ValueError):
        GasParameters(b=1.0)


def test_alpha_clamped():
    assert GasParameters(epsilon=2.0).alpha == 1.0
    assert GasParameters(epsilon=0.1).alpha == pytest.approx(0.01, rel=1e-15)


def test_alpha_over_eps2_exact_for_default_exponent():
    # with b == 2 the ratio alpha/eps^2 must be exactly 1 for eps < 1,
    # which is what makes the AP time step epsilon-independent
    for eps in (0.1, 0.01, 0.001, 1e-6):
        assert GasParameters(epsilon=eps).alpha_over_eps2 == 1.0


def test_friction_coeff():
    params = GasParameters(epsilon=0.1)
    assert params.friction_coeff == pytest.approx(1e-3 / (2.0 * 0.01), rel=1e-15)


def test_pipe_state_validation():
    with pytest.raises(ValueError):
        PipeState(0.1, np.ones(2), np.zeros(2))
    with pytest.raises(ValueError):
        PipeState(-0.1, np.ones(5), np.zeros(5))
    with pytest.raises(NonPositiveDensity):
        PipeState(0.1, np.zeros(5), np.zeros(5))
    p = PipeState(0.5, np.ones(4), np.full(4, 2.0))
    assert p.length == 2.0
    assert np.allclose(p.u, 2.0)
    assert np.allclose(p.x_centers(), [0.25, 0.75, 1.25, 1.75])


def _t_junction_topology():
    return NetworkTopology(
        pipes=[PipeGeometry(1.0, 10)] * 3,
        junctions=[JunctionSpec(ingoing=(0,), outgoing=(1, 2))],
        boundaries={(0, "left"): Inlet(rho=1.1),
                    (1, "right"): Outlet(), (2, "right"): Outlet()})


def test_validate_single_pipe_ok():
    topo = NetworkTopology(pipes=[PipeGeometry(1.0, 10)],
                           boundaries={(0, "left"): Inlet(rho=1.0),
                                       (0, "right"): Outlet()})
    assert validate_topology(topo) == []


def test_validate_t_junction_ok():
    assert validate_topology(_t_junction_topology()) == []


def test_validate_dangling_end():
    topo = NetworkTopology(pipes=[PipeGeometry(1.0, 10)],
                           boundaries={(0, "left"): Inlet(rho=1.0)})
    defects = validate_topology(topo)
    assert any("dangling" in d for d in defects)


def test_validate_doubly_claimed_end():
    topo = _t_junction_topology()
    topo.boundaries[(0, "right")] = Inlet(rho=1.2)
    defects = validate_topology(topo)
    assert any("doubly-claimed" in d for d in defects)


def test_junction_spec_validation():
    with pytest.raises(ValueError):
        JunctionSpec(ingoing=(0,), outgoing=(1,), condition="bogus")
    spec = JunctionSpec(ingoing=(0, 1), outgoing=(2,))
    assert spec.pipes == (0, 1, 2)


def test_network_state_roles():
    topo = _t_junction_topology()
    pipes = [PipeState(0.1, np.ones(10), np.zeros(10)) for _ in range(3)]
    net = NetworkState(topo, pipes)
    assert net.end_role(0, "left")[0] == "inlet"
    assert net.end_role(0, "right") == ("junction", 0)
    assert net.end_role(1, "left") == ("junction", 0)
    assert net.end_role(2, "right")[0] == "outlet"
    assert not net.is_periodic(0)
    assert net.total_mass() == pytest.approx(3.0, rel=1e-14)


def test_periodic_network_state():
    topo = NetworkTopology(pipes=[PipeGeometry(1.0, 8)],
                           boundaries={(0, "left"): PeriodicEnd(),
                                       (0, "right"): PeriodicEnd()})
    net = NetworkState(topo, [PipeState(0.125, np.ones(8), np.zeros(8))])
    assert net.is_periodic(0)
