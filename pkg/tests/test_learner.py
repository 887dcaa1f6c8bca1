from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wbnn import activation, corpus
from wbnn.besov import BesovParams
from wbnn.exceptions import ParameterError, ShapeError
from wbnn.learner import (LearnConfig, benchmark_compression, compression_sweep, error_concentration, learn,
                          mise_profile, relative_mise, swarm_learn)
from wbnn.wavelet import SampleGrid, analyze, make_daubechies, no_wrap_j0, synthesize


def corpus_case(name, n=1024, rule=None, j0=0):
    e = corpus.get(name)
    g = corpus.sample(e, n)
    return e, g, LearnConfig(corpus.register_besov(e), rule or activation.identity(), 4, j0)


# ---- mise_profile ------------------------------------------------------------

def test_mise_identical():
    g = SampleGrid((0, 2), np.arange(8.0))
    mise, sup, prof = mise_profile(g, g)
    assert mise == 0 and sup == 0 and np.all(prof == 0)


def test_mise_constant_offset():
    g = SampleGrid((-1.0, 2.0), np.sin(np.arange(16.0)))
    mise, sup, _ = mise_profile(g, SampleGrid(g.domain, g.values + 0.3))
    assert mise == pytest.approx(0.09 * 3.0, rel=1e-14)
    assert sup == pytest.approx(0.3)


def test_mise_naive_loop():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = SampleGrid((0, 1.5), rng.standard_normal(64))
        b = SampleGrid((0, 1.5), rng.standard_normal(64))
        naive = 0.0
        for u, v in zip(a.values, b.values):
            naive += (u - v) ** 2 * (1.5 / 64)
        assert abs(mise_profile(a, b)[0] - naive) < 1e-14 * max(1.0, naive) * 10


def test_mise_shape_mismatch():
    with pytest.raises(ShapeError):
        mise_profile(SampleGrid((0, 1), np.zeros(4)), SampleGrid((0, 1), np.zeros(8)))


def test_relative_mise_normalizations():
    g = SampleGrid((0, 2), np.full(4, 2.0))
    assert relative_mise(1.0, g) == pytest.approx(0.25)
    assert relative_mise(1.0, g, "energy") == pytest.approx(1 / 8)
    assert relative_mise(1.0, g, "none") == 1.0
    with pytest.raises(ParameterError):
        relative_mise(1.0, g, "peak")


# ---- learn ------------------------------------------------------------------

@pytest.mark.parametrize("name", corpus.IDS)
def test_identity_reconstructs(name):
    _, g, cfg = corpus_case(name)
    rep = learn(g, cfg)
    assert rep.mise <= 1e-20 and rep.compression_pct == 0.0
    assert rep.kept_count == rep.active_count


def test_full_top_k_equals_identity():
    _, g, cfg = corpus_case("double_chirp")
    ident = learn(g, cfg)
    full = learn(g, replace(cfg, rule=activation.top_k(ident.active_count)))
    np.testing.assert_array_equal(full.learned_grid.values, ident.learned_grid.values)


def test_full_compression_is_projection():
    e, g, cfg = corpus_case("lambda_tear", j0=3)
    rep = learn(g, replace(cfg, rule=activation.compress(100)))
    f = make_daubechies(4)
    tree = analyze(g, f, 3)
    proj = synthesize(tree.replace(betas=[np.zeros_like(b) for b in tree.betas]), f)
    np.testing.assert_allclose(rep.learned_grid.values, proj.values, atol=1e-12)
    # orthogonality: residual is the energy of the dropped betas
    assert rep.mise == pytest.approx(np.sum(tree.flat_betas() ** 2), rel=1e-9)


def test_lambda_tear_beats_weierstrass_at_85():
    _, lt, cfg_lt = corpus_case("lambda_tear", rule=activation.compress(85))
    _, w, cfg_w = corpus_case("weierstrass", rule=activation.compress(85))
    assert learn(lt, cfg_lt).relative_mise() < learn(w, cfg_w).relative_mise()


def test_config_validation():
    _, g, cfg = corpus_case("lambda_tear")
    with pytest.raises(ParameterError):
        learn(g, replace(cfg, besov=BesovParams(2, 2, 5.0)))
    with pytest.raises(ShapeError):
        learn(SampleGrid((0, 1), np.zeros(16)), replace(cfg, j0=4))


def test_report_bookkeeping():
    _, g, cfg = corpus_case("sinusoidal_density", rule=activation.compress(90))
    rep = learn(g, cfg)
    assert rep.kept_count + rep.zeroed_count == rep.active_count
    assert len(rep.kept_set()) == rep.kept_count
    assert rep.compression_pct == pytest.approx(100 * rep.zeroed_count / rep.active_count)
    assert rep.besov_norm_learned <= rep.besov_norm_target


# ---- sweep -------------------------------------------------------------------

@pytest.mark.parametrize("name", corpus.IDS)
def test_sweep_monotone(name):
    _, g, cfg = corpus_case(name)
    rows = compression_sweep(g, cfg, [0, 50, 85, 98, 99, 100])
    rel = [r[1] for r in rows]
    assert rel[0] < 1e-20
    assert all(a <= b * (1 + 1e-12) + 1e-300 for a, b in zip(rel, rel[1:]))


def test_sweep_pcts_close_to_requested():
    _, g, cfg = corpus_case("lambda_tear")
    for pct, _, rep in compression_sweep(g, cfg, [10, 50, 99]):
        assert abs(rep.compression_pct - pct) <= 100 / rep.active_count + 1e-9


def test_benchmark_compression_consistent_with_learn():
    e, g, cfg = corpus_case("double_chirp")
    bench = learn(g, replace(cfg, rule=activation.compress(90))).mise
    pct = benchmark_compression(g, cfg, bench)
    assert pct >= 90 - 100 / 1024
    # one more killed coefficient crosses the benchmark
    tree = analyze(g, cfg.filter, cfg.j0)
    k_kept = round(tree.active_count * (1 - pct / 100))
    over = learn(g, replace(cfg, rule=activation.top_k(max(k_kept - 1, 0))), tree)
    assert over.mise > bench


# ---- error concentration -----------------------------------------------------

def test_concentration_trivial_cases():
    x = np.linspace(0, 1, 100, endpoint=False)
    prof = np.where(np.abs(x - 0.5) <= 0.05, 1.0, 0.0)
    assert error_concentration(prof, [0.5], 0.05, x) == 1.0
    frac = error_concentration(np.ones(1000), [0.5], 0.05, np.linspace(0, 1, 1000, endpoint=False))
    assert frac == pytest.approx(0.1, abs=0.002)
    assert error_concentration(np.zeros(10), [0.5], 0.1) == 1.0
    with pytest.raises(ParameterError):
        error_concentration(np.ones(4), [0.5], 0.0)


def test_lambda_tear_concentration_at_99():
    e = corpus.get("lambda_tear")
    g = corpus.sample(e)
    cfg = LearnConfig(corpus.register_besov(e), activation.compress(99), 4, no_wrap_j0(g, make_daubechies(4)))
    assert error_concentration(learn(g, cfg), e.singular_points, 0.05) > 0.5


# ---- swarm -------------------------------------------------------------------

def test_swarm_equal_offsets_identical():
    _, g, cfg = corpus_case("sinusoidal_density", rule=activation.compress(90))
    reps = swarm_learn(g, cfg, [0, 0, 0])
    for r in reps[1:]:
        np.testing.assert_array_equal(r.learned_grid.values, reps[0].learned_grid.values)


def test_swarm_zero_compression_identical():
    _, g, cfg = corpus_case("lambda_tear", rule=activation.compress(0))
    reps = swarm_learn(g, cfg)
    for r in reps[1:]:
        np.testing.assert_array_equal(r.learned_grid.values, reps[0].learned_grid.values)


def test_swarm_distinct_at_98():
    _, g, cfg = corpus_case("sinusoidal_density", rule=activation.compress(98))
    reps = swarm_learn(g, cfg)
    sets = [r.kept_set() for r in reps]
    assert len({r.kept_count for r in reps}) == 1
    assert all(sets[i] != sets[j] for i in range(3) for j in range(i + 1, 3))


def test_swarm_order_and_parallel_invariance():
    _, g, cfg = corpus_case("double_chirp", rule=activation.compress(95))
    offs = [-0.25, 0.0, 0.25]
    seq = swarm_learn(g, cfg, offs)
    par = swarm_learn(g, cfg, offs, max_workers=3)
    rev = swarm_learn(g, cfg, offs[::-1])[::-1]
    for a, b, c in zip(seq, par, rev):
        np.testing.assert_array_equal(a.learned_grid.values, b.learned_grid.values)
        np.testing.assert_array_equal(a.learned_grid.values, c.learned_grid.values)


def test_swarm_rejects_invalid_member():
    _, g, cfg = corpus_case("sinusoidal_density")
    with pytest.raises(ParameterError):
        swarm_learn(g, cfg, [-1.0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 100))
def test_learn_error_matches_dropped_energy(seed, pct):
    # orthonormal basis: MISE equals the squared norm of the zeroed betas
    rng = np.random.default_rng(seed)
    v = np.zeros(256)
    v[40:216] = np.cumsum(rng.standard_normal(176)) / 10
    g = SampleGrid((0, 1), v)
    cfg = LearnConfig(BesovParams(2, 2, 1.0), activation.compress(pct), 3, 0)
    rep = learn(g, cfg)
    dropped = rep.analysed.flat_betas() - rep.learned.flat_betas()
    assert rep.mise == pytest.approx(np.sum(dropped ** 2), rel=1e-8, abs=1e-18)
