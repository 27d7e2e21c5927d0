import numpy as np
from hypothesis import given, strategies as st

from flexmimo.rng import HARDENING, RngStream, hash64, to_unit_open

u64 = st.integers(min_value=0, max_value=2**64 - 1)


@given(u64, st.integers(0, 7), st.integers(-2**40, 2**40), st.integers(-2**40, 2**40))
def test_uniforms_are_pure(seed, tag, a, b):
    rng = RngStream(seed, tag)
    assert rng.uniforms(a, b)[0] == RngStream(seed, tag).uniforms(a, b)[0]


def test_uniforms_open_interval():
    u = to_unit_open(np.array([0, 2**64 - 1], dtype=np.uint64))
    assert 0.0 < u[0] < u[1] < 1.0


def test_uniform_moments():
    u = RngStream(3, 1).uniforms(np.arange(200_000))
    assert abs(u.mean() - 0.5) < 0.005
    assert abs(u.var() - 1.0 / 12.0) < 0.002


def test_tags_give_distinct_streams():
    c = np.arange(1000)
    a = RngStream(5, 1).uniforms(c)
    b = RngStream(5, 2).uniforms(c)
    assert not np.any(a == b)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.1


def test_generator_blocks_are_reproducible_and_distinct():
    rng = RngStream(11, HARDENING)
    x = rng.generator(0).standard_normal(5)
    assert np.array_equal(x, RngStream(11, HARDENING).generator(0).standard_normal(5))
    assert not np.array_equal(x, rng.generator(1).standard_normal(5))


def test_hash_broadcasts():
    h = hash64(np.arange(3)[:, None], np.arange(4)[None, :])
    assert h.shape == (3, 4)
    assert len(np.unique(h)) == 12
