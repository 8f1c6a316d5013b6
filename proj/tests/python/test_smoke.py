# SPDX-License-Identifier: Apache-2.0
import math

import numpy as np
import pytest
from scipy import integrate, special, stats

import overbeam as ob


def test_pattern_matrix_two_patterns():
    b = ob.BeamPatternMatrix.generate(2).matrix
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(b, [[1, r, 0], [0, r, 1]], atol=1e-15)


def test_steering_vector_unit_norm():
    grid = ob.AngleGrid(27)
    u = grid.steering(5)
    assert u.shape == (27,)
    assert abs(np.linalg.norm(u) - 1) < 1e-14


@pytest.mark.parametrize("z", [0.0, 0.3, 5.0, 40.0])
def test_bessel_matches_scipy(z):
    assert ob.bessel_i0(z) == pytest.approx(special.i0(z), rel=1e-13)


@pytest.mark.parametrize("a,b", [(0.0, 1.0), (1.0, 2.0), (3.0, 1.5), (5.0, 7.0)])
def test_marcum_matches_noncentral_chi2(a, b):
    expected = stats.ncx2.sf(b * b, 2, a * a) if a > 0 else math.exp(-b * b / 2)
    assert ob.marcum_q1(a, b) == pytest.approx(expected, rel=1e-10, abs=1e-300)


def test_rayleigh_average_matches_quadrature():
    ctx = ob.PairwiseContext(rho=0.5, n0=1.0, p_t=0.02, var_alpha=27.0**2)
    var = ctx.var_alpha

    def integrand(x):
        return ob.pairwise_error_fixed_alpha(ctx, x) * 2 * x / var * math.exp(-x * x / var)

    quad, _ = integrate.quad(integrand, 0, 30 * math.sqrt(var), limit=200)
    assert ob.pairwise_error_rayleigh(ctx) == pytest.approx(quad, abs=1e-9)


def test_self_term_rejected():
    with pytest.raises(ValueError):
        ob.pairwise_error_rayleigh(ob.PairwiseContext(rho=1.0))


def test_slot_counts():
    assert ob.slot_counts(27, 3) == (12, 27)
    assert ob.slot_counts(2401, 7) == (36, 196)


def test_noiseless_estimate_is_exact():
    est = ob.Estimator(27, 3, ob.Algorithm.overlapped)
    for theta, phi in [(0, 26), (13, 4), (26, 0)]:
        ch = ob.ChannelRealization(theta=theta, phi=phi, alpha=2 - 1j, n=27)
        tr = est.run(ch, p_t=1.0, n0=0.0, var_alpha=729.0)
        assert (tr.theta_hat, tr.phi_hat) == (theta, phi)
        assert not ob.failure_indicator(tr, ch)
        assert tr.slots == 12


def test_bound_is_monotone_and_clamped():
    curve = ob.bound_curve(27, 3, ob.energy_grid(-10, 40, 10), 729.0, zero_energy=True)
    totals = [p.bound.total for p in curve.points]
    assert curve.points[0].zero_energy and totals[0] == 1.0
    assert all(b <= a for a, b in zip(totals, totals[1:]))
    assert all(0.0 <= t <= 1.0 for t in totals)


def test_sweep_deterministic_across_workers():
    cfg = ob.ExperimentConfig()
    cfg.n, cfg.k, cfg.trials, cfg.seed = 27, 3, 400, 7
    cfg.et_db = [10.0, 20.0]
    cfg.include_noiseless = True
    runs = []
    for workers in (1, 2):
        cfg.workers = workers
        res = ob.run_sweep(cfg)
        runs.append([(p.failures, p.pcef) for t in res.tables for p in t.points])
    assert runs[0] == runs[1]
    points = ob.run_sweep(cfg).table(ob.Algorithm.overlapped).points
    noiseless = [p for p in points if p.noiseless]
    assert len(noiseless) == 1 and noiseless[0].failures == 0
