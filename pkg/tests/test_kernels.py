"""The numba kernels and their numpy fallbacks must agree."""

import numpy as np
import pytest

from pcx import _kernels
from pcx._backend import active_backend, numba_available


def _values_both(monkeypatch, a, g1, g2):
    monkeypatch.setenv("PCX_BACKEND", "numpy")
    plain = _kernels.grid_values_3(*a, g1, g2)
    monkeypatch.setenv("PCX_BACKEND", "numba")
    jitted = _kernels.grid_values_3(*a, g1, g2)
    return plain, jitted


@pytest.mark.skipif(not numba_available(), reason="numba not installed")
class TestBackendAgreement:
    def test_grid_values_3(self, monkeypatch, rng):
        for _ in range(5):
            a = np.exp(rng.uniform(-2, 2, size=3))
            g1 = np.linspace(-2.5, 2.5, 61)
            g2 = np.linspace(-1.5, 3.0, 47)
            plain, jitted = _values_both(monkeypatch, a, g1, g2)
            np.testing.assert_allclose(jitted, plain, rtol=1e-13)
            assert np.argmin(jitted) == np.argmin(plain)

    def test_grid_min_4(self, monkeypatch, rng):
        for _ in range(3):
            upper = np.exp(rng.uniform(-1.5, 1.5, size=6))
            grids = [np.linspace(-2.0, 2.0, 31) for _ in range(3)]
            monkeypatch.setenv("PCX_BACKEND", "numpy")
            plain = _kernels.grid_min_4(upper, *grids)
            monkeypatch.setenv("PCX_BACKEND", "numba")
            jitted = _kernels.grid_min_4(upper, *grids)
            assert jitted[1:] == plain[1:]
            assert abs(jitted[0] - plain[0]) <= 1e-12 * max(1.0, plain[0])


class TestBackendSelection:
    def test_env_flag(self, monkeypatch):
        monkeypatch.setenv("PCX_BACKEND", "numpy")
        assert active_backend() == "numpy"
        monkeypatch.delenv("PCX_BACKEND")
        assert active_backend() in ("numba", "numpy")

    def test_invalid_flag_rejected(self, monkeypatch):
        monkeypatch.setenv("PCX_BACKEND", "fortran")
        with pytest.raises(RuntimeError):
            active_backend()


class TestLocalMinMask:
    def test_hand_built_field(self):
        v = np.full((5, 5), 9.0)
        v[2, 2] = 1.0  # interior minimum
        v[0, 0] = 0.0  # boundary points are never counted
        mask = _kernels.local_min_mask(v)
        assert mask[2, 2]
        assert mask.sum() == 1

    def test_plateaus_are_not_strict_minima(self):
        v = np.zeros((4, 4))
        assert _kernels.local_min_mask(v).sum() == 0
