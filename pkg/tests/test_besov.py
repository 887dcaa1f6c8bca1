import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wbnn.besov import INF, BesovParams, besov_seq_norm, hilbert_target, level_weights, sobolev_line
from wbnn.exceptions import EmbeddingError, ParameterError, RegionError
from wbnn.wavelet import CoefficientTree


def tree_from(rng, j0=0, J=5):
    return CoefficientTree(j0, rng.standard_normal(2 ** j0), [rng.standard_normal(2 ** j) for j in range(j0, J + 1)])


def single_alpha():
    return CoefficientTree(0, [1.0], [np.zeros(1), np.zeros(2), np.zeros(4)])


@pytest.mark.parametrize("p,q,s", [(1, 1, 0.5), (2, 2, 1.0), (INF, INF, 0.3), (0.5, 3, 1.5), (2, INF, 2.0)])
def test_single_alpha_is_one(p, q, s):
    assert besov_seq_norm(single_alpha(), BesovParams(p, q, s)) == pytest.approx(1.0, abs=1e-15)


def test_single_beta_l2():
    betas = [np.zeros(1), np.zeros(2), np.array([0.5, 0, 0, 0])]
    tree = CoefficientTree(0, [0.0], betas)
    assert besov_seq_norm(tree, BesovParams(2, 2, 0.0)) == pytest.approx(0.5, abs=1e-15)


def test_hand_computed_weights():
    # p=1, q=1, s=1: level weight 2^(j/2); sum |alpha| + sum_j 2^(j/2) sum_k |beta_jk|
    tree = CoefficientTree(0, [2.0], [np.array([1.0]), np.array([1.0, -1.0])])
    expect = 2.0 + 1.0 + math.sqrt(2) * 2.0
    assert besov_seq_norm(tree, BesovParams(1, 1, 1)) == pytest.approx(expect, rel=1e-15)
    # sup forms; p = inf: weight 2^(j(s+1/2)), level 1 gives 2^1.5 * 1
    assert besov_seq_norm(tree, BesovParams(INF, INF, 1)) == pytest.approx(2 ** 1.5)
    assert besov_seq_norm(tree, BesovParams(1, INF, 1)) == pytest.approx(2 * math.sqrt(2))


def test_l2_equals_direct_norm():
    rng = np.random.default_rng(0)
    for _ in range(20):
        t = tree_from(rng, j0=int(rng.integers(0, 3)))
        direct = math.sqrt(np.sum(t.alphas ** 2) + np.sum(t.flat_betas() ** 2))
        assert abs(besov_seq_norm(t, BesovParams(2, 2, 0)) - direct) < 1e-12


def test_level_weights_formula():
    w = level_weights([0, 1, 2], BesovParams(1, 1, 1.5))
    np.testing.assert_allclose(w, [1, 2, 4])


def test_tau():
    assert BesovParams(2, INF, 1.0).tau == 0.5
    assert BesovParams(INF, 2, 0.7).tau == 0.7


def test_validity_window():
    assert BesovParams(2, 2, 1).is_valid_for(4)
    assert not BesovParams(2, 2, 4).is_valid_for(4)
    assert not BesovParams(0.5, 2, 0.9).is_valid_for(4)  # needs s > 1/p - 1 = 1
    assert BesovParams(0.5, 2, 1.1).is_valid_for(4)
    with pytest.raises(ParameterError):
        BesovParams(2, 2, 5).check_valid_for(4)
    with pytest.raises(ParameterError):
        BesovParams(0, 2, 1)


@pytest.mark.parametrize("params,rho,sigma", [((1, 1, 1), 2, 0.5), ((2, 2, 1), 2, 1.0), ((1, INF, 1.25), INF, 0.25)])
def test_sobolev_line_examples(params, rho, sigma):
    out = sobolev_line(BesovParams(*params), rho, max(params[1], 2))
    assert out.s == pytest.approx(sigma)
    assert out.tau == pytest.approx(BesovParams(*params).tau)


def test_sobolev_line_rejects_non_embedding():
    with pytest.raises(EmbeddingError):
        sobolev_line(BesovParams(2, 2, 1), 1, 2)
    with pytest.raises(EmbeddingError):
        sobolev_line(BesovParams(2, 2, 1), 2, 1)


def test_hilbert_target_examples():
    assert hilbert_target(BesovParams(2, 2, 1), 4) == BesovParams(2, 2, 1.0)
    assert hilbert_target(BesovParams(1, 2, 0.75), 4) == BesovParams(2, 2, 0.25)
    with pytest.raises(RegionError, match="p <= 2"):
        hilbert_target(BesovParams(3, 2, 1), 4)
    with pytest.raises(RegionError, match="q <= 2"):
        hilbert_target(BesovParams(2, 3, 1), 4)
    with pytest.raises(RegionError):
        hilbert_target(BesovParams(0.1, 2, 6), 4)


index = st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0, INF])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.5, 1.0, 2.0, 3.0]), st.sampled_from([0.5, 1.0, 2.0, INF]),
       st.floats(-0.5, 2.0), st.sampled_from([1.0, 2.0, 4.0, INF]), st.sampled_from([1.0, 2.0, 4.0, INF]))
def test_embedding_constant_one(seed, p, q, s, drho, deta):
    rng = np.random.default_rng(seed)
    t = tree_from(rng, J=4)
    src = BesovParams(p, q, s)
    rho = INF if math.isinf(drho) else p * drho
    eta = INF if math.isinf(deta) or math.isinf(q) else q * deta
    dst = sobolev_line(src, rho, eta)
    assert besov_seq_norm(t, dst) <= besov_seq_norm(t, src) * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), index, index, st.floats(-1, 2),
       st.one_of(st.just(0.0), st.floats(1e-6, 5), st.floats(-5, -1e-6)))
def test_homogeneity(seed, p, q, s, c):
    t = tree_from(np.random.default_rng(seed), J=3)
    params = BesovParams(p, q, s)
    assert besov_seq_norm(t.scaled(c), params) == pytest.approx(abs(c) * besov_seq_norm(t, params), rel=1e-12, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1.0, 1.5, 2.0, INF]), st.sampled_from([1.0, 2.0, INF]),
       st.floats(-1, 2))
def test_triangle(seed, p, q, s):
    rng = np.random.default_rng(seed)
    x, y = tree_from(rng, J=3), tree_from(rng, J=3)
    params = BesovParams(p, q, s)
    assert besov_seq_norm(x + y, params) <= besov_seq_norm(x, params) + besov_seq_norm(y, params) + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), index, index, st.floats(-1, 2), st.floats(0, 1))
def test_monotone_in_s(seed, p, q, s, ds):
    t = tree_from(np.random.default_rng(seed), J=4)
    assert besov_seq_norm(t, BesovParams(p, q, s)) <= besov_seq_norm(t, BesovParams(p, q, s + ds)) * (1 + 1e-12)
