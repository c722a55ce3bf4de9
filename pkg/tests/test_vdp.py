import numpy as np
import pytest

from pidoc.vdp import StepSizeUnderflowError, Trajectory, VdpConfig, integrate, vdp_rhs

SIX_INITIALS = [(1, 0), (2, 0), (3, 0), (0, 1), (0, 2), (0, 3)]


def test_rhs_damping_vanishes_at_zero_velocity():
    assert vdp_rhs((1.0, 0.0), 1.0) == (0.0, -1.0)


def test_rhs_direct_substitution():
    assert vdp_rhs((0.0, 1.0), 1.0) == (1.0, 1.0)
    assert vdp_rhs((2.0, 1.0), 3.0) == (1.0, -11.0)


def test_config_validation():
    with pytest.raises(ValueError):
        VdpConfig(mu=-1.0)
    with pytest.raises(ValueError):
        VdpConfig(n_points=1)
    with pytest.raises(ValueError):
        VdpConfig(t_end=0.0)
    with pytest.raises(ValueError):
        VdpConfig(rtol=0.0)


def test_grid_and_initial_point():
    cfg = VdpConfig(mu=1.0, initial=(3.0, 0.0), n_points=500)
    tr = integrate(cfg)
    assert len(tr.t) == len(tr.x) == len(tr.v) == 500
    assert tr.t[0] == 0.0
    assert tr.t[-1] == cfg.t_end
    assert np.all(np.diff(tr.t) > 0)
    assert (tr.x[0], tr.v[0]) == cfg.initial


def test_harmonic_limit_matches_cosine():
    tr = integrate(VdpConfig(mu=0.0))
    assert np.max(np.abs(tr.x - np.cos(tr.t))) < 1e-5
    assert np.max(np.abs(tr.v + np.sin(tr.t))) < 1e-5


def test_harmonic_energy_conserved():
    # Energy drift tracks the integration tolerance; the 1e-6 oracle needs a
    # tolerance pair a few orders below it.
    tr = integrate(VdpConfig(mu=0.0, rtol=1e-9, atol=1e-12))
    energy = tr.x**2 + tr.v**2
    assert np.max(np.abs(energy - energy[0])) / energy[0] < 1e-6


def test_tolerance_halving_changes_solution_within_budget():
    cfg = VdpConfig(mu=1.0)
    tight = VdpConfig(mu=1.0, rtol=cfg.rtol / 2, atol=cfg.atol / 2)
    diff = np.max(np.abs(integrate(cfg).x - integrate(tight).x))
    assert diff < 10.0 * cfg.rtol


@pytest.mark.parametrize("initial", SIX_INITIALS)
def test_limit_cycle_attraction(initial):
    tr = integrate(VdpConfig(mu=1.0, initial=initial))
    late = np.abs(tr.x[tr.t > 20.0])
    assert 1.9 <= late.max() <= 2.1


def test_late_orbits_agree_across_initial_points():
    a = integrate(VdpConfig(mu=1.0, initial=(3.0, 0.0)))
    b = integrate(VdpConfig(mu=1.0, initial=(0.0, 3.0)))
    keep = a.t > 20.0
    pa = np.stack([a.x[keep], a.v[keep]])
    pb = np.stack([b.x[keep], b.v[keep]])
    d2 = ((pa[:, :, None] - pb[:, None, :]) ** 2).sum(axis=0)
    hausdorff = max(np.sqrt(d2.min(axis=1)).max(), np.sqrt(d2.min(axis=0)).max())
    assert hausdorff < 0.1


def test_deterministic():
    cfg = VdpConfig(mu=1.0)
    a, b = integrate(cfg), integrate(cfg)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.v, b.v)


def test_step_size_underflow_signalled():
    # Denormal tolerances can never be met, so the controller must give up.
    with pytest.raises(StepSizeUnderflowError):
        integrate(VdpConfig(mu=1.0, rtol=5e-324, atol=5e-324))


def test_csv_dump(tmp_path):
    tr = integrate(VdpConfig(mu=1.0, n_points=50))
    path = tmp_path / "traj.csv"
    tr.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x,v"
    assert len(lines) == 51
    t0, x0, v0 = (float(c) for c in lines[1].split(","))
    assert (t0, x0, v0) == (0.0, 1.0, 0.0)
