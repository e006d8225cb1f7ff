import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cortexwaves.v4 import (FeatureRepository, Prototype, admit, build_maps, load_map_csv,
                            rbf_response, save_map_csv, tile)

vectors = st.lists(st.integers(0, 4), min_size=9, max_size=9).filter(any)


def test_tiling_counts(catalog_ioms):
    coords, vecs = tile(catalog_ioms[0])
    assert vecs.shape == (31, 31, 9)
    assert coords[1, 2].tolist() == [3, 6]


def test_tile_flattens_row_major():
    iom = np.arange(9).reshape(3, 3) % 5
    _, vecs = tile(iom)
    assert vecs.shape == (1, 1, 9)
    assert vecs[0, 0].tolist() == iom.ravel().tolist()


def test_blank_tile_is_zero_vector():
    _, vecs = tile(np.zeros((6, 6), int))
    assert not vecs.any()
    with pytest.raises(ValueError):
        tile(np.zeros((2, 5)))


def test_prototype_parameters():
    repo = FeatureRepository()
    p = repo.add([4] * 9)
    assert p.dist_v4 == 144
    assert p.beta_v4 == 1 / (2 * (144 / 10))
    assert p.beta_v4 == 1 / 28.8


def test_admission_examples():
    repo = FeatureRepository()
    assert admit(repo, [1, 0, 0, 0, 0, 0, 0, 0, 0]) == (1, True)
    assert admit(repo, [1, 0, 0, 0, 0, 0, 0, 0, 0]) == (1, False)
    repo = FeatureRepository()
    repo.add([4] * 9)
    assert admit(repo, [0] + [4] * 8) == (1, False)   # distance 4 < 14.4
    assert admit(repo, [0, 0] + [4] * 7) == (1, False)  # sqrt 32 < 14.4
    assert len(repo) == 1
    with pytest.raises(ValueError):
        admit(repo, [0] * 9)


def test_admission_uses_nearest_prototype():
    repo = FeatureRepository()
    repo.add([1, 0, 0, 0, 0, 0, 0, 0, 0])  # radius 0.1
    repo.add([4] * 9)                       # radius 14.4
    # nearest is prototype 1 at distance 1 > 0.1, so it is admitted
    assert admit(repo, [2, 0, 0, 0, 0, 0, 0, 0, 0]) == (3, True)


def test_rbf_examples():
    p = Prototype(1, (4,) * 9, 144, 1 / 28.8)
    assert rbf_response((4,) * 9, p) == 1.0
    x = (0,) + (4,) * 8
    assert rbf_response(x, p) == pytest.approx(np.exp(-16 / 28.8))
    assert round(rbf_response(x, p), 4) == 0.5738


@given(vectors, vectors)
@settings(max_examples=300, deadline=None)
def test_rbf_in_unit_interval(a, b):
    repo = FeatureRepository()
    p = repo.add(a)
    r = rbf_response(b, p)
    assert 0 < r <= 1
    assert (r == 1.0) == (list(a) == list(b))


@given(st.lists(vectors, min_size=1, max_size=60))
@settings(max_examples=200, deadline=None)
def test_admitted_prototypes_respect_their_radius(stream):
    repo = FeatureRepository()
    for v in stream:
        before = len(repo)
        vec = np.array(v)
        dists = [np.sqrt(((vec - np.array(p.vector)) ** 2).sum()) for p in repo.prototypes]
        pid, admitted = repo.admit(v)
        if before == 0:
            assert admitted
            continue
        k = int(np.argmin(dists))
        assert admitted == (dists[k] > 0.1 * repo[k + 1].dist_v4)
        assert pid == (before + 1 if admitted else k + 1)
    # ids stay dense and vectors are never blank
    assert [p.id for p in repo.prototypes] == list(range(1, len(repo) + 1))
    assert all(p.dist_v4 > 0 for p in repo.prototypes)


def test_build_maps_properties(catalog_ioms):
    repo = FeatureRepository()
    fmap, rmap = build_maps(catalog_ioms[0], repo, stimulus=1)
    assert fmap.shape == rmap.shape == (31, 31)
    nonblank = tile(catalog_ioms[0])[1].any(axis=2)
    assert np.array_equal(fmap > 0, nonblank)
    assert np.all((rmap[nonblank] > 0) & (rmap[nonblank] <= 1))
    assert np.all(rmap[~nonblank] == 0)
    assert (rmap == 1.0).any()
    assert repo.taus.sum() == nonblank.sum()
    assert all(p.born == 1 for p in repo.prototypes)


def test_build_maps_matches_scalar_oracle(catalog_ioms):
    repo = FeatureRepository()
    fmap, rmap = build_maps(catalog_ioms[4], repo)
    _, vecs = tile(catalog_ioms[4])
    for i, j in itertools.product(range(31), range(31)):
        v = vecs[i, j]
        if not v.any():
            continue
        resp = [rbf_response(v, p) for p in repo.prototypes]
        k = int(np.argmax(resp))
        assert fmap[i, j] == k + 1 and rmap[i, j] == resp[k]


def test_build_maps_deterministic_and_frozen(catalog_ioms):
    a, b = FeatureRepository(), FeatureRepository()
    fa, ra = build_maps(catalog_ioms[1], a)
    fb, rb = build_maps(catalog_ioms[1], b)
    assert np.array_equal(fa, fb) and np.array_equal(ra, rb)
    n = len(a)
    f2, r2 = build_maps(catalog_ioms[2], a, grow=False)
    assert len(a) == n
    with pytest.raises(ValueError):
        build_maps(catalog_ioms[1], FeatureRepository(), grow=False)


def test_blank_iom_gives_zero_maps():
    fmap, rmap = build_maps(np.zeros((94, 94), int), FeatureRepository())
    assert not fmap.any() and not rmap.any()


def test_global_beta_uses_first_prototype():
    repo = FeatureRepository(global_beta=True)
    repo.add([1] + [0] * 8)
    repo.add([4] * 9)
    assert np.all(repo.betas == repo[1].beta_v4)


def test_repository_text_roundtrip(tmp_path, catalog_ioms):
    repo = FeatureRepository()
    build_maps(catalog_ioms[3], repo, stimulus=4)
    repo.save(tmp_path / "f.txt")
    back = FeatureRepository.load(tmp_path / "f.txt")
    assert back.to_text() == repo.to_text()
    assert [p.beta_v4 for p in back.prototypes] == [p.beta_v4 for p in repo.prototypes]


def test_map_csv_roundtrip(tmp_path, catalog_ioms):
    repo = FeatureRepository()
    fmap, rmap = build_maps(catalog_ioms[0], repo)
    save_map_csv(tmp_path / "f.csv", fmap)
    save_map_csv(tmp_path / "r.csv", rmap)
    assert np.array_equal(load_map_csv(tmp_path / "f.csv", int), fmap)
    assert np.array_equal(load_map_csv(tmp_path / "r.csv"), rmap)
