import math

import numpy as np
import pytest

import vorwave as vw

G = 9.81


def test_dispersion_anchor():
    vf = vw.VorticityFunction.constant(0.0)
    lc = vw.lambda_c(vf, G)
    assert lc == pytest.approx(G ** (2 / 3), rel=1e-10)
    assert vw.q_tilde(vf, lc, G) == pytest.approx(1.5 * G ** (2 / 3), rel=1e-10)
    assert abs(vw.q_tilde_prime(vf, lc, G)) < 1e-9


def test_criteria_agree_for_constant_vorticity():
    for gamma in (-0.1, -0.6, -1.2):
        c = vw.gamma_criteria(vw.VorticityFunction.constant(gamma), G, math.pi)
        assert c["gammasmall"]["status"] == c["gammasmallest"]["status"]


def test_branch_and_fields():
    grid = vw.StripGrid(32, 24)
    vf = vw.VorticityFunction.constant(-0.3)
    bif = vw.find_bifurcation(grid, vf, G)
    assert 0 < bif["lambda_star"] < bif["lambda_c"]
    br = vw.continue_branch(grid, vf, G, steps=5)
    assert br["stop_reason"] == "max_steps"
    amps = [p["amplitude"] for p in br["points"]]
    assert amps[0] == 0.0 and all(b > a for a, b in zip(amps, amps[1:]))
    wf = vw.reconstruct(br["fields"][-1])
    assert wf.u.shape == (33, 25)
    assert np.all(wf.u < 0)
    assert abs(wf.eta.mean()) < 1e-3
    c = wf.consistency()
    assert c["dynamic"] < 1e-9 * max(1.0, wf.Q)
    report = vw.audit(wf, vf, bif["lambda_c"])
    assert report["summary"]["fail"] == 0
    ids = {d["id"] for d in report["diagnostics"]}
    assert {"D-slope", "D-ABC", "D-press-a", "D-angle"} <= ids


def test_laminar_is_flat():
    vf = vw.VorticityFunction.polynomial([-0.2, -0.3])
    hf = vw.discrete_laminar(vw.StripGrid(8, 16), vf, G, 2.0)
    wf = vw.reconstruct(hf)
    assert np.max(np.abs(wf.v)) == 0.0
    assert np.max(np.abs(wf.eta)) < 1e-14


def test_gerstner():
    gw = vw.GerstnerWave.from_steepness(1.0, 0.5)
    assert gw.speed == pytest.approx(3.1321, rel=1e-4)
    assert gw.max_slope()["angle_deg"] == pytest.approx(30.0, abs=1e-10)
    wf = gw.field(32, 24)
    assert np.all(wf.omega > 0)
    assert gw.euler_residual(0.7, gw.b0 - 0.5) < 1e-6
    with pytest.raises(vw.DomainError):
        vw.GerstnerWave.from_steepness(1.0, 1.0)


def test_config_errors():
    with pytest.raises(vw.ConfigError):
        vw.parse_config('{"unknown": 1}')
    assert '"kind": "poly"' in vw.parse_config('{"vorticity": {"kind": "poly", "coeffs": [0.1]}}')
