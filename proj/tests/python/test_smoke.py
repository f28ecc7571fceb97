import numpy as np
import pytest

import sga


def bump(n, center, sigma):
    x = (np.arange(n) + 0.5) / n
    return np.exp(-0.5 * ((x - center) / sigma) ** 2)


def test_normalize_density():
    d = sga.normalize_density(np.ones((8, 8)))
    assert d.shape == (8, 8)
    assert np.allclose(d, 1.0)
    with pytest.raises(sga.SgaError):
        sga.normalize_density(np.zeros(16))


def test_c_transform_zero_potential():
    fc, argmin = sga.c_transform(np.zeros((6, 6)))
    assert np.all(fc == 0.0)
    assert np.array_equal(argmin, np.arange(36))


def test_poisson_round_trip():
    n = 64
    x = (np.arange(n) + 0.5) / n
    rho = np.cos(np.pi * x)
    g = sga.solve_neumann(rho)
    assert np.max(np.abs(g - rho / np.pi**2)) < 1e-3
    assert sga.h1_norm(g) > 0.0


def test_w2_against_quantile_oracle():
    n = 128
    a = bump(n, 0.3, 0.08)
    b = bump(n, 0.7, 0.1)
    exact = sga.quantile_w2_1d(a, b)
    assert abs(sga.w2_distance(a, b, iterations=300) - exact) < 0.02 * exact
    res = sga.sga_ot(a, b, iterations=800)
    assert not res["diverged"]
    assert abs(res["w2"] - exact) < 0.02 * exact


def test_barycenter_smoke():
    n = 96
    marg = [bump(n, 0.3, 0.07), bump(n, 0.55, 0.09), bump(n, 0.75, 0.06)]
    res = sga.sga_barycenter(marg, weights=[0.4, 0.3, 0.3], sweeps=300)
    assert not res["diverged"]
    rho = res["barycenter"]
    assert rho.shape == (n,)
    assert np.all(rho >= 0.0)
    assert np.isclose(rho.sum() / n, 1.0)
    # mass concentrates around the weighted mean of the bump centers
    x = (np.arange(n) + 0.5) / n
    mean = float((x * rho).sum() / n)
    assert abs(mean - (0.4 * 0.3 + 0.3 * 0.55 + 0.3 * 0.75)) < 0.02
