import numpy as np
import pytest

from cortexwaves.it import (Decision, ObjectRepository, StoredObject, it_response, recognize,
                            response_grid, store_object)

from oracles import grid_oracle


def test_store_parameters():
    repo = ObjectRepository()
    oid = store_object(repo, np.ones((2, 2), int))
    obj = repo[oid]
    assert (oid, obj.dist_it, obj.beta_it) == (1, 4, 0.25)
    assert store_object(repo, np.ones((2, 2), int)) == 2
    assert np.array_equal(repo[1].obj_map, repo[2].obj_map)
    with pytest.raises(ValueError):
        repo.store(np.zeros((2, 2), int))
    with pytest.raises(ValueError):
        repo[1].obj_map[0, 0] = 5


def test_response_examples(rng):
    fmap = rng.integers(0, 40, size=(31, 31))
    obj = StoredObject.from_map(1, fmap)
    assert it_response(obj, fmap) == 1.0
    assert it_response(obj, np.zeros_like(fmap)) == pytest.approx(np.exp(-1))
    other = StoredObject.from_map(2, rng.integers(0, 90, size=(31, 31)))
    assert it_response(other, np.zeros_like(fmap)) == it_response(obj, np.zeros_like(fmap))


def test_grid_radius_zero_is_the_plain_response(rng):
    fmap = rng.integers(0, 10, size=(6, 7))
    obj = StoredObject.from_map(1, fmap)
    inp = rng.integers(0, 10, size=(6, 7))
    g = response_grid(obj, inp, radius=0)
    assert g.values.shape == (1, 1)
    assert g.values[0, 0] == it_response(obj, inp)


def test_grid_matches_double_loop_and_pointwise(rng):
    for _ in range(5):
        obj_map = rng.integers(0, 6, size=(7, 8))
        obj_map[0, 0] = 3
        obj = StoredObject.from_map(1, obj_map)
        inp = rng.integers(0, 6, size=(7, 8))
        g = response_grid(obj, inp, radius=3)
        assert np.allclose(g.values, grid_oracle(obj_map, inp, 3), rtol=1e-12, atol=0)
        for dy in range(-3, 4):
            for dx in range(-3, 4):
                assert g.values[dy + 3, dx + 3] == it_response(obj, inp, (dx, dy))


def test_shift_oracle(rng):
    obj_map = np.zeros((20, 20), int)
    obj_map[4:14, 5:15] = rng.integers(1, 30, size=(10, 10))
    obj = StoredObject.from_map(1, obj_map)
    # the input seen at offset (dx, dy) = (2, 1) is the object itself
    inp = np.roll(np.roll(obj_map, 1, axis=0), 2, axis=1)
    g = response_grid(obj, inp, radius=5)
    assert g.argmax == (2, 1)
    assert g.max == 1.0 == it_response(obj, inp, (2, 1))


def test_argmax_ties_go_to_smallest_offset():
    obj = StoredObject.from_map(1, np.array([[0, 0, 0], [0, 1, 0], [0, 0, 0]]))
    g = response_grid(obj, np.zeros((3, 3), int), radius=1)
    assert np.all(g.values == g.max)
    assert g.argmax == (-1, -1)


def test_indicator_metric():
    obj = StoredObject.from_map(1, np.array([[5, 0], [0, 9]]), indicator=True)
    assert obj.dist_it == 2 and obj.beta_it == 0.5
    assert it_response(obj, np.array([[5, 0], [0, 1]]), indicator=True) == pytest.approx(np.exp(-0.5))


def test_recognize_threshold():
    assert recognize(1.0) is Decision.RECOGNIZED
    assert recognize(0.53) is Decision.NOVEL
    assert recognize(0.67, 0.67) is Decision.RECOGNIZED
    assert recognize(np.nextafter(0.67, 0), 0.67) is Decision.NOVEL
    with pytest.raises(ValueError):
        recognize(0.5, 1.5)


def test_repository_roundtrip(tmp_path, rng):
    repo = ObjectRepository()
    for _ in range(3):
        repo.store(rng.integers(0, 50, size=(31, 31)))
    repo.save(tmp_path / "o.txt")
    back = ObjectRepository.load(tmp_path / "o.txt")
    assert back.to_text() == repo.to_text()
    assert [o.beta_it for o in back] == [o.beta_it for o in repo]
