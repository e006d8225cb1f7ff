import numpy as np
import pytest

from cortexwaves.retina import ShapeSpec, generate_synthetic, quantize
from cortexwaves.v1 import (ORIENTATIONS, convolve, dump_iom, gabor_bank, gabor_kernel,
                            inhibit, integrate, load_iom)


def _direct(theta, x, y, sigma=2.8, lam=3.5, gamma=0.3):
    t = np.deg2rad(theta)
    x0 = x * np.cos(t) + y * np.sin(t)
    y0 = -x * np.sin(t) + y * np.cos(t)
    return np.exp(-(x0 ** 2 + gamma ** 2 * y0 ** 2) / (2 * sigma ** 2)) * np.cos(2 * np.pi * x0 / lam)


@pytest.mark.parametrize("theta", ORIENTATIONS)
def test_kernel_center_is_one(theta):
    k = gabor_kernel(theta)
    assert k.weights.shape == (7, 7)
    assert k.weights[3, 3] == 1.0


@pytest.mark.parametrize("theta", ORIENTATIONS)
def test_kernel_matches_direct_evaluation(theta):
    k = gabor_kernel(theta)
    for i in range(7):
        for j in range(7):
            assert k.weights[i, j] == pytest.approx(_direct(theta, i - 3, j - 3), abs=1e-14)


def test_ninety_is_zero_transposed():
    assert np.abs(gabor_kernel(90).weights - gabor_kernel(0).weights.T).max() <= 1e-12


def test_envelope_decays_along_principal_axis():
    k = gabor_kernel(0, wavelength=1e9)  # carrier flattened to expose the envelope
    axis = k.weights[3:, 3]
    assert np.all(np.diff(axis) < 0)
    env = np.exp(-np.arange(4) ** 2 / (2 * 2.8 ** 2))
    assert np.allclose(np.abs(gabor_kernel(0).weights[3:, 3]),
                       env * np.abs(np.cos(2 * np.pi * np.arange(4) / 3.5)))


def test_kernel_rejects_bad_parameters():
    with pytest.raises(ValueError):
        gabor_kernel(0, size=6)
    with pytest.raises(ValueError):
        gabor_kernel(0, sigma=0)
    with pytest.raises(ValueError):
        gabor_kernel(0, wavelength=-1)


def test_zero_mean_option():
    assert abs(gabor_kernel(45, zero_mean=True).weights.sum()) < 1e-12


def test_convolution_matches_double_loop(rng):
    img = quantize(rng.random((12, 10)))
    k = gabor_kernel(45)
    out = convolve(img, k)
    assert out.shape == (6, 4)
    flipped = k.weights[::-1, ::-1]
    for i in range(6):
        for j in range(4):
            ref = abs((img.pixels[i:i + 7, j:j + 7] * flipped).sum())
            assert out[i, j] == pytest.approx(ref, abs=1e-12)


def test_all_black_gives_blank_iom(bank):
    iom = integrate(quantize(np.zeros((100, 100))), bank)
    assert iom.shape == (94, 94)
    assert not iom.any()


def test_horizontal_bar_wins_zero_degree_map(bank):
    r = generate_synthetic(ShapeSpec("bar", theta=0, width=3))
    maps = np.stack([convolve(r, k) for k in bank])
    rows, cols = np.nonzero(r.pixels)
    inside = [(i - 3, j - 3) for i, j in zip(rows, cols) if cols.min() + 4 <= j <= cols.max() - 4]
    winners = {int(np.argmax(maps[:, i, j])) for i, j in inside}
    assert winners == {0}


def test_inhibit_examples():
    maps = np.array([0.9, 0.2, 0.1, 0.0]).reshape(4, 1, 1)
    assert inhibit(maps, 0.05)[0, 0] == 1
    assert inhibit(maps, 0.95)[0, 0] == 0
    tie = np.array([0.5, 0.5, 0.1, 0.1]).reshape(4, 1, 1)
    assert inhibit(tie, 0.05)[0, 0] == 1
    late = np.array([0.1, 0.2, 0.3, 0.7]).reshape(4, 1, 1)
    assert inhibit(late, 0.05)[0, 0] == 4


def test_inhibit_argument_checks():
    with pytest.raises(ValueError):
        inhibit(np.zeros((3, 2, 2)), 0.1)
    with pytest.raises(ValueError):
        inhibit(np.zeros((4, 2, 2)), 0.1, codes=(1, 1, 2, 3))


def test_iom_is_one_code_per_location(bank, rng):
    iom = integrate(quantize(rng.random((30, 30))), bank)
    assert iom.shape == (24, 24)
    assert set(np.unique(iom)) <= {0, 1, 2, 3, 4}


def test_iom_text_roundtrip(tmp_path, catalog_ioms):
    dump_iom(tmp_path / "iom.txt", catalog_ioms[0])
    assert np.array_equal(load_iom(tmp_path / "iom.txt"), catalog_ioms[0])
    assert len(gabor_bank()) == 4
