import math

import numpy as np
import pytest

import corrsense


def test_exponents_at_unit_energy():
    r = corrsense.exponents(2, 1.0)
    assert r["heterodyne"] == pytest.approx(math.log2(4 / 3), rel=1e-12)
    assert r["ratio_quantum_heterodyne"] == pytest.approx(3.0, rel=1e-12)
    assert r["quantum"] >= r["photon"] >= 0


def test_single_exponent_and_bases():
    nats = corrsense.exponent("homodyne", 3, 0.5, base="nats")
    bits = corrsense.exponent("hom", 3, 0.5)
    assert bits == pytest.approx(0.5, rel=1e-12)
    assert nats == pytest.approx(0.5 * math.log(2), rel=1e-12)


def test_identity_f_of_1_plus_2x():
    for x in (1e-6, 0.3, 12.0):
        assert corrsense.func_f(1 + 2 * x) == pytest.approx(corrsense.gordon_g(x), rel=1e-12)


def test_symplectic_spectrum():
    nu = corrsense.symplectic_eigenvalues(4, 0.25)
    assert nu[0] == pytest.approx(3.0)
    assert nu[1:] == pytest.approx([1.0, 1.0, 1.0])
    v = corrsense.quantum_covariance(2, 0.5)
    assert v.shape == (4, 4)


def test_fock_state_entropy():
    rho = corrsense.correlated_state(2, 0.1, 12)
    assert isinstance(rho, np.ndarray)
    assert rho.shape == (169, 169)
    rho = rho / np.trace(rho).real
    s = corrsense.von_neumann_entropy(rho, 2, 12)
    assert s == pytest.approx(corrsense.func_f(1.4), abs=1e-6)


def test_sweep_rows():
    rows = corrsense.sweep([2, 4], e_min=1e-3, e_max=1.0, points=5)
    assert len(rows) == 10
    assert all(r["quantum"] >= r["photon"] for r in rows)


def test_simulate_is_reproducible():
    a = corrsense.simulate("homodyne", 2, 0.5, n_grid=[10, 20], shots=1000, seed=3)
    b = corrsense.simulate("homodyne", 2, 0.5, n_grid=[10, 20], shots=1000, seed=3)
    assert a == b
    assert [r["n"] for r in a] == [10, 20]


def test_taylor_coefficient():
    c = corrsense.taylor_coefficient("heterodyne", 3, 2)
    assert c == pytest.approx(6 / math.log(4), rel=1e-3)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        corrsense.exponents(0, 1.0)
    with pytest.raises(ValueError):
        corrsense.exponent("bogus", 2, 1.0)
    with pytest.raises(MemoryError):
        corrsense.correlated_state(4, 0.2, 8)


def test_validate_fast():
    ok, text = corrsense.validate("fast")
    assert ok
    assert "[PASS]" in text
