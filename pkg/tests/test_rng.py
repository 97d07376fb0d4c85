import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spacings_lab.rng import ReplicateStreams, map_chunks


def test_uniforms_strictly_inside_unit_interval():
    u = ReplicateStreams(1, 7).block(0, 20000)
    assert u.shape == (20000, 7)
    assert np.all((u > 0) & (u < 1))


def test_replicates_are_order_independent():
    s = ReplicateStreams(42, 5, stream_id=3)
    whole = s.block(0, 100)
    np.testing.assert_array_equal(whole[37], s.replicate(37))
    np.testing.assert_array_equal(whole[50:], s.block(50, 50))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 13), st.integers(0, 10**6))
def test_any_replicate_matches_its_block_row(seed, width, index):
    s = ReplicateStreams(seed, width)
    np.testing.assert_array_equal(s.block(index, 3)[1], s.replicate(index + 1))


def test_streams_and_seeds_differ():
    a = ReplicateStreams(5, 4, 0).block(0, 10)
    b = ReplicateStreams(5, 4, 1).block(0, 10)
    c = ReplicateStreams(6, 4, 0).block(0, 10)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_uniform_moments():
    u = ReplicateStreams(9, 2).block(0, 200000).ravel()
    se = np.sqrt(1 / 12 / u.size)
    assert abs(u.mean() - 0.5) < 4 * se


def test_map_chunks_thread_count_does_not_change_result():
    s = ReplicateStreams(11, 3)

    def work(start, count):
        return s.block(start, count)

    one = np.concatenate(map_chunks(work, 1001, 64, 1))
    many = np.concatenate(map_chunks(work, 1001, 64, 4))
    np.testing.assert_array_equal(one, many)
    np.testing.assert_array_equal(one, s.block(0, 1001))


@pytest.mark.parametrize("bad", [dict(seed=-1, width=2), dict(seed=1, width=0)])
def test_invalid_arguments(bad):
    with pytest.raises(ValueError):
        ReplicateStreams(**bad)
