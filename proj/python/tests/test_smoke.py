import numpy as np
import pytest

import rfid

EXPO = {"family": "exponential", "sigma": 2.0, "lx": 30.0, "ly": 20.0}


def test_psd_and_covariance_agree_with_closed_forms():
    assert rfid.covariance(EXPO, 0.0, 0.0) == pytest.approx(4.0)
    assert rfid.covariance(EXPO, 30.0, 0.0) == pytest.approx(4.0 * np.exp(-1.0))
    expect = 4.0 * 2 * 30.0 * 2 * 20.0
    assert rfid.psd(EXPO, 0.0, 0.0) == pytest.approx(expect)
    assert rfid.model_variance(EXPO) == pytest.approx(4.0)


def test_simulate_shape_and_determinism():
    a = rfid.simulate(EXPO, 32, 24, 10.0, 10.0, mean=5.0, seed=3, count=3)
    b = rfid.simulate(EXPO, 32, 24, 10.0, 10.0, mean=5.0, seed=3, count=3)
    assert a.shape == (3, 24, 32)
    assert np.array_equal(a, b)
    assert not np.array_equal(a[0], a[1])


def test_periodogram_parseval():
    z = np.random.default_rng(0).normal(size=(12, 16))
    p = rfid.periodogram(z, 0.5, 2.0, window="rect", demean=False)
    df = (p.fx[1] - p.fx[0]) * (p.fy[1] - p.fy[0])
    assert p.values.shape == (12, 16)
    assert p.values.sum() * df == pytest.approx(np.mean(z**2), rel=1e-12)


def test_fit_recovers_exponential():
    z = rfid.simulate(EXPO, 96, 96, 10.0, 10.0, seed=11, count=20)
    p = rfid.periodogram(z, 10.0, 10.0)
    report = rfid.fit(p, "exponential", seed=1)
    assert report["family"] == "exponential"
    assert report["parameters"]["sigma"] == pytest.approx(2.0, rel=0.15)
    best = rfid.fit(p, ["exponential", "gaussian"], seed=1)
    assert best["family"] == "exponential"


def test_homogeneity_and_microstructure():
    z = rfid.simulate(EXPO, 32, 32, 10.0, 10.0, mean=100.0, seed=2, count=6)
    h = rfid.homogeneity(z)
    assert h["K"] == [2, 3, 4, 5, 6]
    g = rfid.voronoi(10, 40, 40, seed=1)
    assert set(np.unique(g)) == set(range(10))
    assert max(abs(t) for t in rfid.schmid_factors()) == pytest.approx(np.sqrt(2) / 3)
    assert rfid.sample_orientations(5, seed=1).shape == (5, 3)


def test_errors_and_cli(tmp_path):
    with pytest.raises(rfid.RfidError):
        rfid.simulate({"family": "nope"}, 8, 8)
    assert rfid.run_cli(["frobnicate"]) == 1
    assert rfid.run_cli(["--version"]) == 0
