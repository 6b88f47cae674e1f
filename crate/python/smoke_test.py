"""Smoke test for the cvgkp extension module.

Build and install first:

    pip install --no-build-isolation ./crates/py

then run `python python/smoke_test.py` (or `pytest python/smoke_test.py`).
"""

import math

import cvgkp


def close(a, b, tol):
    return abs(a - b) <= tol


def test_gaussian_state():
    s = cvgkp.GaussianState.vacuum(2)
    s = s.apply("squeeze", [0], 0.5).apply("beam_splitter", [0, 1], math.pi / 2)
    assert s.n_modes == 2
    ok, asym, _ = s.physicality()
    assert ok and asym < 1e-12
    lossy = s.loss(0.8)
    assert lossy.cov[0][0] > 0
    mean, var, rest = cvgkp.GaussianState.coherent(1.0, 0.0).tensor(s).homodyne(0, 0.0, 0.3)
    assert close(mean, 1.0, 1e-12) and close(var, 0.5, 1e-12)
    assert rest.n_modes == 2


def test_gkp_layer():
    assert close(cvgkp.p_fail(0.04), 9.373853928926265e-6, 1e-18)
    bit, index, dev = cvgkp.bin_outcome(math.sqrt(math.pi) + 0.1)
    assert (bit, index) == (1, 1) and close(dev, 0.1, 1e-12)
    stats = cvgkp.hrm_stats(0.09, 0.4)
    assert close(stats["p_accept"], 0.8949481871568872, 1e-12)
    var_q, var_p, p = cvgkp.sqec_step((0.02, 0.02), (0.01, 0.01), "q")
    assert close(var_q, 0.01, 1e-15) and close(var_p, 0.03, 1e-15)


def test_anchors():
    sigma2, db = cvgkp.solve_threshold(1e-6)
    assert close(db, 20.5, 0.1) and close(sigma2, 4.44e-3, 0.05e-3)
    sigma_c, _ = cvgkp.capacity_point()
    assert close(sigma_c, 0.555, 0.002)


def test_cluster_and_fock():
    variances = cvgkp.cluster_nullifier_variances(4, [(0, 1), (1, 2), (2, 3)], 1.0)
    assert all(close(v, 0.5 * math.exp(-2.0), 1e-12) for v in variances)
    fidelity, average = cvgkp.cubic_phase_fidelity(0.1, 20.0)
    assert fidelity >= 0.99 and average >= 0.99
    rounds = cvgkp.breeding(2.0, 1.0, 1)
    assert rounds[0][0] == 3


def test_experiments():
    mc = cvgkp.analog_vs_binary_mc(0.5, 20000, 1)
    assert mc["p_analog"] <= mc["p_binary"]
    text = "sigma_min = 0.1\nsigma_max = 0.6\nsigma_step = 0.05\n"
    a = cvgkp.run_experiment("pfail_curve", text, seed=5)
    assert a == cvgkp.run_experiment("pfail_curve", text, seed=5)
    rows = [line for line in a.splitlines() if not line.startswith("#")]
    assert rows[0] == "sigma,variance,p_fail,p_lattice_flip" and len(rows) == 12
    try:
        cvgkp.run_experiment("threshold", "bogus = 1\n")
    except ValueError as e:
        assert "bogus" in str(e)
    else:
        raise AssertionError("schema error not raised")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok {name}")
