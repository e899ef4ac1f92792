import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from quadphi.dense import (DimensionError, add, as_matrix, count_products, identity, matmul,
                           naive_matmul, one_norm, scale)


def test_identity_and_zero_products(rng):
    m = rng.standard_normal((3, 3))
    assert np.array_equal(matmul(np.eye(3), m), m)
    assert np.array_equal(matmul(np.zeros((3, 3)), m), np.zeros((3, 3)))


def test_matmul_matches_triple_loop(rng):
    a, b = rng.standard_normal((2, 5, 5))
    err = np.abs(matmul(a, b) - naive_matmul(a, b)).max()
    assert err <= 1e-15 * one_norm(a) * one_norm(b)


def test_matmul_associates_against_reference(rng):
    for _ in range(10):
        a, b, c = rng.standard_normal((3, 8, 8))
        left = matmul(matmul(a, b), c)
        right = matmul(a, matmul(b, c))
        ref = naive_matmul(naive_matmul(a, b), c)
        tol = 1e-14 * one_norm(a) * one_norm(b) * one_norm(c)
        assert np.abs(left - ref).max() <= tol
        assert np.abs(right - ref).max() <= tol


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        matmul(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        add(np.eye(2), np.eye(3))


@pytest.mark.parametrize("a, expected", [
    (np.zeros((3, 3)), 0.0),
    (np.eye(4), 1.0),
    (np.array([[1.0, -2.0], [3.0, 4.0]]), 6.0),
])
def test_one_norm(a, expected):
    assert one_norm(a) == expected


def test_scale_add_identity():
    assert np.array_equal(scale(identity(2), 0.25), np.diag([0.25, 0.25]))
    m = np.arange(9.0).reshape(3, 3)
    assert np.array_equal(add(m, scale(m, -1)), np.zeros((3, 3)))
    assert one_norm(identity(3)) == 1.0


def test_results_are_read_only(rng):
    out = matmul(np.eye(2), rng.standard_normal((2, 2)))
    with pytest.raises(ValueError):
        out[0, 0] = 1.0


@pytest.mark.parametrize("bad", [np.ones((2, 3)), np.ones(3), np.array([[np.nan]]),
                                 np.array([[1.0, np.inf], [0.0, 1.0]])])
def test_as_matrix_rejects(bad):
    with pytest.raises(ValueError):
        as_matrix(bad)


square8 = arrays(np.float64, (6, 6), elements=st.floats(-1e3, 1e3, allow_nan=False))


@settings(max_examples=50, deadline=None)
@given(square8, square8)
def test_one_norm_submultiplicative(a, b):
    assert one_norm(matmul(a, b)) <= one_norm(a) * one_norm(b) * (1 + 1e-12)


def test_counter_counts_once_per_call(rng):
    a = rng.standard_normal((4, 4))
    with count_products() as outer:
        matmul(a, a)
        with count_products() as inner:
            matmul(a, a)
            matmul(a, a)
    assert (outer.count, inner.count) == (3, 2)
    matmul(a, a)
    assert outer.count == 3


def test_counter_thread_safe():
    a = np.eye(2)
    with count_products() as c:
        threads = [threading.Thread(target=lambda: [matmul(a, a) for _ in range(200)])
                   for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
    assert c.count == 1600
