import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from uwc.channel import WiretapChannel, identity_channel, make_channel

CHANNELS = Path(__file__).resolve().parent.parent / "channels"


def symbols(prefix, k):
    return tuple(f"{prefix}{i}" for i in range(1, k + 1))


def random_channel(rng: random.Random, n_in: int, n_out: int, in_prefix="a", out_prefix="b"):
    A, B = symbols(in_prefix, n_in), symbols(out_prefix, n_out)
    image = {a: set(rng.sample(B, rng.randint(1, n_out))) for a in A}
    return make_channel(A, B, image)


def random_wiretap(rng: random.Random, n_in: int, n_b: int, n_c: int, injective_main=False):
    eaves = random_channel(rng, n_in, n_c, out_prefix="c")
    if injective_main:
        main = identity_channel(symbols("a", n_in))
    else:
        main = random_channel(rng, n_in, n_b)
    return WiretapChannel(main, eaves)


@st.composite
def channels(draw, max_in=4, max_out=4, out_prefix="b"):
    n_in = draw(st.integers(1, max_in))
    n_out = draw(st.integers(1, max_out))
    A, B = symbols("a", n_in), symbols(out_prefix, n_out)
    image = {}
    for a in A:
        subset = draw(st.sets(st.sampled_from(B), min_size=1))
        image[a] = subset
    return make_channel(A, B, image)


@st.composite
def wiretap_channels(draw, max_in=4, max_out=3, injective_main=False):
    eaves = draw(channels(max_in, max_out, out_prefix="c"))
    A = eaves.input.symbols
    if injective_main:
        main = identity_channel(A)
    else:
        B = symbols("b", draw(st.integers(1, max_out)))
        main = make_channel(A, B, {a: draw(st.sets(st.sampled_from(B), min_size=1)) for a in A})
    return WiretapChannel(main, eaves)


@pytest.fixture
def channel_dir():
    return CHANNELS
