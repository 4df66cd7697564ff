"""Integer encoder: binary expansion, decode at x = 2, the deliberate
many-to-one collisions, and overflow handling."""

import pytest

from bfvlab import BfvParams, Plaintext, Polynomial, RingParams, integer_decode, integer_encode

from conftest import make_rng


@pytest.fixture
def params():
    return BfvParams(ring=RingParams(d=64, q=2**30), t=256)


def test_encode_frozen_examples(params):
    assert integer_encode(0, params).poly.is_zero()
    assert integer_encode(1, params).poly.to_coeff_list()[:3] == [1, 0, 0]
    assert integer_encode(3, params).poly.to_coeff_list()[:3] == [1, 1, 0]
    assert integer_encode(2, params).poly.to_coeff_list()[:3] == [0, 1, 0]
    assert integer_encode(4, params).poly.to_coeff_list()[:4] == [0, 0, 1, 0]
    assert integer_encode(-3, params).poly.to_coeff_list()[:3] == [-1, -1, 0]


def test_decode_frozen_examples(params):
    x_plus_2 = Plaintext(Polynomial([2, 1] + [0] * 62, params.t))
    two_x = Plaintext(Polynomial([0, 2] + [0] * 62, params.t))
    assert integer_decode(x_plus_2, params) == 4
    assert integer_decode(two_x, params) == 4
    assert x_plus_2.poly != two_x.poly


def test_roundtrip_exhaustive_small_range(params):
    for n in range(-1000, 1001):
        assert integer_decode(integer_encode(n, params), params) == n


def test_roundtrip_full_stated_range(params):
    # every |n| <= 10**5
    for n in range(-(10**5), 10**5 + 1):
        assert integer_decode(integer_encode(n, params), params) == n


def test_decode_is_additive_without_coefficient_wrap(params):
    rng = make_rng(61)
    for _ in range(500):
        a = int(rng.integers(-(2**20), 2**20))
        b = int(rng.integers(-(2**20), 2**20))
        pa, pb = integer_encode(a, params), integer_encode(b, params)
        total = Plaintext(pa.poly + pb.poly)
        assert integer_decode(total, params) == a + b


def test_encode_overflow():
    tight = BfvParams(ring=RingParams(d=8, q=2**30), t=256)
    assert integer_decode(integer_encode(255, tight), tight) == 255
    assert integer_decode(integer_encode(-255, tight), tight) == -255
    with pytest.raises(OverflowError):
        integer_encode(256, tight)
    with pytest.raises(OverflowError):
        integer_encode(-256, tight)


def test_encode_needs_room_for_a_bit_value():
    # centered residues mod 2 are {-1, 0}, so no nonzero value encodes
    binary_t = BfvParams(ring=RingParams(d=8, q=2**30), t=2)
    with pytest.raises(ValueError):
        integer_encode(-1, binary_t)
    with pytest.raises(ValueError):
        integer_encode(5, binary_t)
    assert integer_decode(integer_encode(0, binary_t), binary_t) == 0
