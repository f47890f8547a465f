import numpy as np
import pytest

from ddetest.streams import stable_key, stable_seed, substream


def test_substream_is_pure_function_of_path():
    a = substream(42, "boot", 7, 0).normal(size=16)
    b = substream(42, "boot", 7, 0).normal(size=16)
    assert np.array_equal(a, b)


def test_distinct_paths_give_distinct_streams():
    a = substream(42, "boot", 7, 0).normal(size=16)
    b = substream(42, "boot", 8, 0).normal(size=16)
    c = substream(43, "boot", 7, 0).normal(size=16)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_no_cross_type_collisions():
    # int 7 and string "7" must hash differently
    assert stable_key(7) != stable_key("7")
    assert stable_key(1, 23) != stable_key(12, 3)


def test_stable_seed_range():
    s = stable_seed("campaign", 0)
    assert 0 <= s < 2**63


def test_key_is_stable_across_calls():
    # regression anchor: the derivation must never change silently between
    # runs, or archived reports lose replayability
    assert stable_key("anchor") == stable_key("anchor")
    assert substream("anchor").integers(0, 10**9) == substream("anchor").integers(0, 10**9)


def test_rejects_unhashable_parts():
    with pytest.raises(TypeError):
        stable_key([1, 2])
