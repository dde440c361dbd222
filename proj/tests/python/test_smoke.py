"""Smoke tests for the python bindings: the main operations round-trip."""

import math

import pytest

import relayopt as ro


def desk_params():
    p = ro.PhyParams()
    p.distance_m = 2000.0
    p.altitude_m = 100.0
    p.gamma0_db = 80.0
    p.vmax_mps = 50.0
    p.slot_len_s = 1.0
    return p


def test_trajectory_and_gains():
    params = desk_params()
    traj = ro.generate_trajectory(ro.TrajectoryPattern.toward_dest(), params, 41)
    assert traj.n_slots() == 41
    assert traj.x_m[0] == 0.0
    assert traj.x_m[-1] == pytest.approx(2000.0)
    assert ro.validate_trajectory(traj) == []

    gains = ro.channel_gains(traj)
    assert gains.g_sr[0] == pytest.approx(1e4)
    assert ro.is_monotone_instance(gains)


def test_waterfilling_kernels():
    res = ro.classic_wf([10.0, 2.0], 1.0)
    assert res.powers == pytest.approx([0.7, 0.3])
    assert res.water_level == pytest.approx(0.8)

    rate = ro.rate_curve([4.0, 2.0], 2.0)
    assert rate == pytest.approx(math.log2(15.125))
    assert ro.invert_rate_curve([4.0, 2.0], rate, 6.0) == pytest.approx(2.0)


def test_solve_small_instance():
    gains = ro.LinkGains([1.0, 1.0], [1.0, 1.0])
    inst = ro.ProblemInstance(gains, 1.0, 1.0)
    sol = ro.solve(inst)
    assert sol.objective == pytest.approx(1.0, abs=1e-9)
    assert sol.throughput == pytest.approx(0.5, abs=1e-9)

    report = ro.check_feasibility(inst, sol)
    assert report.passed

    oracle = ro.grid_search_solve(inst, 21, 2)
    assert oracle.solution.objective <= sol.objective + 1e-6
    assert sol.objective <= oracle.solution.objective + oracle.band


def test_scenario_end_to_end():
    params = desk_params()
    traj = ro.generate_trajectory(ro.TrajectoryPattern.toward_source(), params, 21)
    gains = ro.channel_gains(traj)
    n = traj.n_slots()
    e = n * 10 ** ((10.0 - 30.0) / 10.0)
    sol = ro.solve_general(ro.ProblemInstance(gains, e, e))
    assert sol.objective > 0.0
    assert sol.gap <= 1e-3 * max(1.0, sol.objective)
    assert min(sol.buffer) >= -1e-9


def test_errors_are_typed():
    with pytest.raises(ro.SolverError):
        ro.weighted_wf([1.0], [0.0], 1.0)
    with pytest.raises(ro.SolverError):
        ro.generate_trajectory(ro.TrajectoryPattern.fixed(-5.0), desk_params(), 4)
