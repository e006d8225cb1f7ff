import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cortexwaves.pgm import PGMError, read_pgm, write_pgm
from cortexwaves.retina import (CATALOG, SHAPES, Retina, ShapeSpec, StimulusError,
                                generate_synthetic, load_stimulus, parse_shape, quantize,
                                save_stimulus)


def test_pgm_binary_and_ascii_roundtrip(tmp_path, rng):
    img = rng.integers(0, 256, size=(9, 13))
    for binary in (True, False):
        p = tmp_path / f"a{binary}.pgm"
        write_pgm(p, img, 255, binary=binary)
        back, maxval = read_pgm(p)
        assert maxval == 255
        assert np.array_equal(back, img)


def test_pgm_sixteen_bit(tmp_path):
    img = np.array([[0, 1000], [65535, 300]])
    write_pgm(tmp_path / "w.pgm", img, 65535)
    back, maxval = read_pgm(tmp_path / "w.pgm")
    assert maxval == 65535 and np.array_equal(back, img)


def test_pgm_header_comments(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P2\n# a comment\n3 1 # trailing\n10\n0 5 10\n")
    back, maxval = read_pgm(p)
    assert maxval == 10 and back.tolist() == [[0, 5, 10]]


@pytest.mark.parametrize("payload", [b"P6\n1 1\n255\n\x00\x00\x00", b"P2\n2 2\n255\n1 2 3", b"", b"P5\n2 2\n0\n"])
def test_pgm_rejects_bad_files(tmp_path, payload):
    p = tmp_path / "bad.pgm"
    p.write_bytes(payload)
    with pytest.raises(PGMError):
        read_pgm(p)


def test_quantize_examples():
    assert quantize([[0.0]]).pixels[0, 0] == 0.0
    assert quantize([[0.44]]).pixels[0, 0] == 0.4
    assert quantize([[0.45]]).pixels[0, 0] == 0.5
    assert quantize([[1.0]]).pixels[0, 0] == 1.0
    with pytest.raises(StimulusError):
        quantize([[1.2]])


def test_quantize_random_draws_land_on_levels(rng):
    r = quantize(rng.random((100, 100)))
    levels = r.pixels * 10
    assert np.array_equal(levels, np.round(levels))
    assert set(np.unique(r.levels)) <= set(range(11))


@given(arrays(float, (6, 5), elements=st.floats(0, 1)))
@settings(max_examples=200, deadline=None)
def test_quantize_idempotent(values):
    once = quantize(values)
    assert quantize(once.pixels) == once
    assert np.abs(once.pixels - values).max() <= 0.05 + 1e-9


def test_retina_is_immutable_and_validated():
    r = quantize(np.full((8, 8), 0.3))
    with pytest.raises(ValueError):
        r.pixels[0, 0] = 1.0
    with pytest.raises(StimulusError):
        Retina(np.full((8, 8), 0.33))


def test_load_maps_gray_linearly(tmp_path):
    img = np.full((100, 100), 128)
    write_pgm(tmp_path / "g.pgm", img, 255)
    r = load_stimulus(tmp_path / "g.pgm")
    assert np.all(r.pixels == 0.5)
    write_pgm(tmp_path / "w.pgm", np.full((100, 100), 255), 255, binary=False)
    assert np.all(load_stimulus(tmp_path / "w.pgm").pixels == 1.0)


def test_load_rejects_small_and_mismatched(tmp_path):
    write_pgm(tmp_path / "s.pgm", np.zeros((5, 5), int), 255)
    with pytest.raises(StimulusError):
        load_stimulus(tmp_path / "s.pgm", target=None)
    # nearest-neighbour resampling may upscale a small file to the target
    assert load_stimulus(tmp_path / "s.pgm", resize=True).shape == (100, 100)
    write_pgm(tmp_path / "m.pgm", np.zeros((50, 80), int), 255)
    with pytest.raises(StimulusError):
        load_stimulus(tmp_path / "m.pgm")
    assert load_stimulus(tmp_path / "m.pgm", resize=True).shape == (100, 100)


def test_save_load_roundtrip_bit_exact(tmp_path, rng):
    r = quantize(rng.random((100, 100)))
    for binary in (True, False):
        save_stimulus(tmp_path / "r.pgm", r, binary=binary)
        assert load_stimulus(tmp_path / "r.pgm") == r


def test_synthetic_is_deterministic():
    a = generate_synthetic("bar:theta=0", seed=1)
    b = generate_synthetic(ShapeSpec("bar"), seed=1)
    assert a == b


def test_horizontal_bar_lies_in_a_horizontal_band():
    r = generate_synthetic(ShapeSpec("bar", theta=0.0, width=4))
    rows, cols = np.nonzero(r.pixels)
    assert rows.size
    # a horizontal bar spans many columns but only a few rows
    assert rows.max() - rows.min() + 1 <= 5
    assert cols.max() - cols.min() + 1 >= 50


def test_catalog_is_pairwise_distinct():
    retinas = [generate_synthetic(spec, seed=k) for k, spec in enumerate(CATALOG)]
    assert len(retinas) == 10
    for i in range(10):
        for j in range(i + 1, 10):
            assert retinas[i] != retinas[j]


@pytest.mark.parametrize("name", SHAPES)
def test_every_shape_paints_something(name):
    r = generate_synthetic(ShapeSpec(name))
    assert r.shape == (100, 100)
    assert 0 < np.count_nonzero(r.pixels) < r.pixels.size


def test_shape_tokens_roundtrip():
    for spec in CATALOG:
        assert parse_shape(spec.token()) == spec
    with pytest.raises(ValueError):
        parse_shape("triangle")
    with pytest.raises(ValueError):
        parse_shape("bar:colour=3")
