import numpy as np
import pytest

from artifact import _kernels_py, kernels
from artifact.propagators import eval_eta, eval_four_color, eval_kontsevich

try:
    from artifact import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

COEFFS = [(1.0, -1.0, 0.0, 0.0), (1.0, 1.0, 0.0, 0.0), (1.0, -1.0, -1.0, 1.0),
          (1.0, 1.0, -1.0, -1.0), (1.0, -1.0, 1.0, -1.0), (1.0, 1.0, 1.0, 1.0)]


def sample(n, seed, quadrant=True):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.1, 2, n) if quadrant else rng.uniform(-2, 2, n)
    return x + 1j * rng.uniform(0.1, 2, n)


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
@pytest.mark.parametrize("coeffs", COEFFS)
def test_cython_matches_python(coeffs):
    w1, w2 = sample(1000, 1), sample(1000, 2)
    a = _ckernels.arg_grad4(w1, w2, coeffs)
    b = _kernels_py.arg_grad4(w1, w2, coeffs)
    assert np.max(np.abs(a - b)) < 1e-13


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
def test_cython_eta_matches_python():
    w = sample(1000, 3)
    assert np.max(np.abs(_ckernels.eta_grad(w) - _kernels_py.eta_grad(w))) < 1e-15


@pytest.mark.parametrize("color", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
def test_kernel_matches_jet_four_color(color):
    e1, e2 = color
    w1, w2 = sample(50, 4), sample(50, 5)
    got = kernels.arg_grad4(w1, w2, (1.0, -e2, -e1, e1 * e2))
    for k in range(50):
        f = eval_four_color("quadrant", (w1[k], w2[k]), e1, e2)
        want = [f["z1.x"], f["z1.y"], f["z2.x"], f["z2.y"]]
        assert np.max(np.abs(got[k] - want)) < 1e-12


@pytest.mark.parametrize("sign", [1, -1])
def test_kernel_matches_jet_kontsevich(sign):
    z1, z2 = sample(50, 6, False), sample(50, 7, False)
    got = kernels.arg_grad4(z1, z2, (1.0, -sign, 0.0, 0.0))
    for k in range(50):
        f = eval_kontsevich(z1[k], z2[k], sign)
        want = [f["z1.x"], f["z1.y"], f["z2.x"], f["z2.y"]]
        assert np.max(np.abs(got[k] - want)) < 1e-12


def test_kernel_matches_jet_eta():
    w = sample(50, 8)
    got = kernels.eta_grad(w)
    for k in range(50):
        f = eval_eta("quadrant", w[k])[1]
        assert abs(got[k, 0] - f["z1.x"]) < 1e-12 and abs(got[k, 1] - f["z1.y"]) < 1e-12
