import math

import numpy as np
import pytest

import hermite_boltzmann as hb


@pytest.fixture(scope="module")
def maxwell_tensor():
    return hb.assemble(4, hb.KernelModel(5.0), threads=1)


def test_basis():
    assert hb.basis_size(10) == 286
    idx = hb.index_set(3)
    assert len(idx) == hb.basis_size(3)
    assert idx[:4] == [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for r, k in enumerate(idx):
        assert hb.rank(k) == r
        assert hb.unrank(r, 3) == k
    x = np.linspace(-2.0, 2.0, 5)
    np.testing.assert_allclose(hb.hermite(3, x), x**3 - 3 * x)


def test_kernel_constants():
    k5 = hb.KernelModel(5.0)
    assert k5.is_maxwell
    assert k5.i_integral(2) == pytest.approx(-0.925309526885442, rel=1e-9)
    assert hb.bgk_tau(k5) == pytest.approx(0.4864946756, rel=1e-8)
    assert hb.scaled_time_constant(hb.KernelModel(3.1)) == pytest.approx(1.36017, abs=1e-4)
    with pytest.raises(ValueError):
        hb.KernelModel(2.5)


def test_tensor_conserves_invariants(maxwell_tensor):
    A = maxwell_tensor
    assert A.M0 == 4 and A.eta == 5.0
    k, i, j, v = A.entries()
    assert len(v) == len(A) and np.all(i <= j)
    rng = np.random.default_rng(7)
    f = rng.uniform(-0.2, 0.2, hb.basis_size(4))
    f[0] = 1.0
    q = hb.quadratic_rhs(A, f)
    assert np.max(np.abs(q[:4])) < 1e-12
    trace = q[hb.rank((2, 0, 0))] + q[hb.rank((0, 2, 0))] + q[hb.rank((0, 0, 2))]
    assert abs(trace) < 1e-12
    with pytest.raises(ValueError):
        hb.quadratic_rhs(A, f[:-1])
    L = hb.linearized_operator(A)
    assert L.shape == (len(f), len(f))
    assert hb.spectral_radius(L) > 0.0


def test_hybrid_run_tracks_bkw(maxwell_tensor):
    M = 8
    model = hb.HybridModel(maxwell_tensor, M)
    assert model.M == M and model.nu > 0.0
    times, states = hb.integrate(model, hb.bkw_coeffs(0.0, M), dt=0.01, t_end=0.5, record_every=10)
    assert states.shape == (len(times), hb.basis_size(M))
    assert times[0] == 0.0 and times[-1] == pytest.approx(0.5)
    exact = hb.bkw_coeffs(0.5, M)
    low = hb.basis_size(4)
    np.testing.assert_allclose(states[-1, :low], exact[:low], atol=1e-9)
    m = hb.moments(states[-1])
    assert m["rho"] == pytest.approx(1.0, abs=1e-12)
    assert m["theta"] == pytest.approx(1.0, abs=1e-12)
    assert m["q"] is not None


def test_bgk_and_projections():
    f0 = hb.project_bigaussian(8)
    tau = hb.bgk_tau(hb.KernelModel(10.0))
    times, states = hb.integrate(tau, f0, dt=0.01, t_end=0.2)
    assert len(times) == 21
    np.testing.assert_allclose(states[-1, 4:], f0[4:] * math.exp(-0.2 / tau), rtol=1e-6, atol=1e-14)
    np.testing.assert_allclose(hb.bgk_rhs(tau, f0)[1:], -f0[1:] / tau)

    d = hb.project_discontinuous(6)
    v = np.linspace(-3.0, 3.0, 7)
    assert hb.marginal_1d(d, v).shape == (7,)
    assert hb.marginal_2d(d, v, v[:3]).shape == (7, 3)
    with pytest.raises(ValueError):
        hb.moments(np.ones(5))


def test_cache_round_trip(tmp_path):
    A = hb.assemble(3, hb.KernelModel(10.0), threads=1)
    path = hb.cache_path(tmp_path, 10.0, 3)
    assert path.name == "A_eta10_M3.bin"
    hb.save(A, path)
    assert hb.load(path) == A
    assert hb.load(path, eta=10.0, M0=3) == A
    with pytest.raises(hb.StaleCacheError):
        hb.load(path, eta=5.0, M0=3)
    path.write_bytes(b"garbage")
    with pytest.raises(hb.CacheFormatError):
        hb.load(path)


def test_memory_cap():
    assert hb.memory_estimate(10) == 8 * 286**3
    with pytest.raises(hb.MemoryCapError):
        hb.assemble(4, hb.KernelModel(5.0), memory_cap_bytes=1000)
