import numpy as np
import pytest

from decaycert import InvalidParams, decompose, gen_random_valid
from decaycert._backend import (
    BACKEND_ENV,
    HAS_NUMBA,
    THREADS_ENV,
    active_backend,
    kernels,
    requested_backend,
)
from decaycert.constants import grid_matrices

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


class TestSelection:
    def test_default_is_auto(self, monkeypatch):
        monkeypatch.delenv(BACKEND_ENV, raising=False)
        assert requested_backend() == "auto"
        assert active_backend() == ("numba" if HAS_NUMBA else "numpy")

    def test_forced_numpy(self, monkeypatch):
        monkeypatch.setenv(BACKEND_ENV, "numpy")
        assert active_backend() == "numpy"
        assert kernels().__name__.endswith("_kernels_numpy")

    @needs_numba
    def test_forced_numba(self, monkeypatch):
        monkeypatch.setenv(BACKEND_ENV, "numba")
        assert active_backend() == "numba"
        assert kernels().__name__.endswith("_kernels_numba")

    def test_case_and_whitespace_tolerant(self, monkeypatch):
        monkeypatch.setenv(BACKEND_ENV, "  NumPy ")
        assert active_backend() == "numpy"

    def test_invalid_value(self, monkeypatch):
        monkeypatch.setenv(BACKEND_ENV, "fortran")
        with pytest.raises(InvalidParams):
            requested_backend()

    def test_kernels_cached(self, monkeypatch):
        monkeypatch.setenv(BACKEND_ENV, "numpy")
        assert kernels() is kernels()

    def test_thread_cap_validation(self, monkeypatch):
        if not HAS_NUMBA:
            pytest.skip("thread cap only applies to numba")
        monkeypatch.setenv(BACKEND_ENV, "numba")
        monkeypatch.setenv(THREADS_ENV, "zero")
        with pytest.raises(InvalidParams):
            kernels()
        monkeypatch.setenv(THREADS_ENV, "0")
        with pytest.raises(InvalidParams):
            kernels()
        monkeypatch.setenv(THREADS_ENV, "1")
        kernels()


@needs_numba
class TestBackendEquivalence:
    """The jitted kernels must be bit-identical to the numpy twins."""

    def _modules(self):
        from decaycert import _kernels_numba, _kernels_numpy

        return _kernels_numpy, _kernels_numba

    def test_theorem1_grid_identical(self):
        ref, jit = self._modules()
        dec = decompose(gen_random_valid(6, 1.0, 1.0, seed=11))
        gm = grid_matrices(dec)
        ks = np.geomspace(1e-3 * dec.beta, 0.999 * dec.beta, 24)
        ms = np.linspace(1e-6, 1 - 1e-6, 24)
        args = (gm.D1, gm.G1, gm.G12, gm.G2, gm.B1, gm.B2, ks, ms)
        r0, o10, o20 = ref.theorem1_rate_grid(*args)
        r1, o11, o21 = jit.theorem1_rate_grid(*args)
        assert np.array_equal(r0, r1)
        assert np.array_equal(o10, o11)
        assert np.array_equal(o20, o21)

    def test_theorem2_grid_identical(self):
        ref, jit = self._modules()
        dec = decompose(gen_random_valid(6, 0.3, 2.0, seed=12))
        gm = grid_matrices(dec)
        ks = np.geomspace(1e-3 * dec.beta, 0.999 * dec.beta, 12)
        ps = np.linspace(1e-6, 1 - 1e-6, 12)
        qs = np.linspace(1e-6, 1 - 1e-6, 12)
        args = (
            gm.B1, gm.B2, dec.a0, dec.delta, dec.norm_S, dec.norm_D2_dual,
            ks, ps, qs,
        )
        r0, o20 = ref.theorem2_rate_grid(*args)
        r1, o21 = jit.theorem2_rate_grid(*args)
        assert np.array_equal(r0, r1)
        assert np.array_equal(o20, o21)

    def test_optimizer_result_backend_independent(self, monkeypatch):
        from decaycert import SearchConfig, Variant, optimize_rate

        dec = decompose(gen_random_valid(4, 0.5, 1.0, seed=13))
        cfg = SearchConfig(grid=16, refine_starts=1, refine_sweeps=1, refine_iters=8)
        for variant in (Variant.THEOREM1, Variant.THEOREM2):
            out = {}
            for name in ("numpy", "numba"):
                monkeypatch.setenv(BACKEND_ENV, name)
                out[name] = optimize_rate(dec, variant, config=cfg)
            assert out["numpy"] == out["numba"]
