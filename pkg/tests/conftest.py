from __future__ import annotations

import warnings

import pytest

import tannerflip as tf
from tannerflip.gf2 import BitMatrix

warnings.filterwarnings(
    "ignore", message="delta\\*d0", category=UserWarning
)


def ext_hamming_inner() -> tf.InnerCode:
    """The [8,4,4] extended Hamming code."""
    return tf.InnerCode.from_parity_check(
        BitMatrix.from_rows(
            [
                [1, 1, 1, 1, 1, 1, 1, 1],
                [0, 1, 0, 1, 0, 1, 0, 1],
                [0, 0, 1, 1, 0, 0, 1, 1],
                [0, 0, 0, 0, 1, 1, 1, 1],
            ]
        )
    )


def two_block_inner_6_3() -> tf.InnerCode:
    """[6,2,3] code spanned by 111000 and 000111."""
    return tf.InnerCode.from_parity_check(
        BitMatrix.from_rows(
            [
                [1, 1, 0, 0, 0, 0],
                [0, 1, 1, 0, 0, 0],
                [0, 0, 0, 1, 1, 0],
                [0, 0, 0, 0, 1, 1],
            ]
        )
    )


@pytest.fixture(scope="session")
def k32_code() -> tf.TannerCode:
    """The unique simple (2,3)-biregular graph on 3+2 vertices, repetition inner."""
    graph = tf.gen_random_biregular(2, 3, 3, seed=0)
    return tf.TannerCode(graph, tf.repetition_code(3))


@pytest.fixture(scope="session")
def k32_params() -> tf.DecoderParams:
    return tf.derive_params(c=2, d=3, alpha=1 / 3, delta=1.0, d0=3, n=3)


@pytest.fixture(scope="session")
def big_code() -> tf.TannerCode:
    """(12,8) random graph at n=2000 with the [8,4,4] inner code."""
    graph = tf.gen_random_biregular(12, 8, 2000, seed=1)
    return tf.TannerCode(graph, ext_hamming_inner())


@pytest.fixture(scope="session")
def big_params() -> tf.DecoderParams:
    return tf.derive_params(c=12, d=8, alpha=0.02, delta=0.8, d0=4, n=2000)


@pytest.fixture(scope="session")
def small_expander_code() -> tuple[tf.TannerCode, tf.DecoderParams]:
    """Exhaustively verified (12,8,2/30,0.75)-expander at n=30, [8,4,4] inner."""
    graph = tf.gen_random_biregular(12, 8, 30, seed=12)
    assert tf.verify_expansion(graph, 2 / 30, 0.75).verified
    code = tf.TannerCode(graph, ext_hamming_inner())
    params = tf.derive_params(c=12, d=8, alpha=2 / 30, delta=0.75, d0=4, n=30)
    return code, params
