import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zeromodules import matrixcore as mc
from zeromodules import polyoracle as po
from zeromodules import zeromod as zm
from zeromodules.exceptions import NotObservable
from zeromodules.randsys import RandomSystemConfig, random_rational_system, random_system, random_systems
from zeromodules.statespace import StateSpace, dual, eval_grid, evaluate

cfg = RandomSystemConfig(max_n=8, max_p=4, max_q=4)
seeds = st.integers(0, 2**32 - 1)


# ---- triples


def test_max_triple_allpass(allpass):
    T = zm.max_zero_triple(allpass)
    s = T.Pi[0, 0]
    assert abs(abs(s) - 1) < 1e-14
    assert np.allclose(T.H / s, [[2]]) and np.allclose(T.Lambda, [[1]])
    assert T.residual < 1e-12


def test_max_triple_empty_when_output_is_state():
    S = StateSpace(-np.eye(2), np.ones((2, 1)), np.eye(2), np.zeros((2, 1)))
    assert zm.max_zero_triple(S).r == 0


def test_max_triple_row_minimum_norm(row):
    T = zm.max_zero_triple(row)
    s = T.Pi[0, 0]
    # u1 = -1 is forced; (lambda, u2) = (-1/2, 1/2) is the min-norm point of -lambda + u2 = 1
    assert np.allclose(T.H / s, [[-1], [0.5]])
    assert np.allclose(T.Lambda, [[-0.5]])
    assert T.Lambda[0, 0] == pytest.approx(T.H[1, 0] / s - 1)


def test_fzk_triple_ignores_unreachable_mode(row):
    assert zm.fzk_triple(row).r == zm.max_zero_triple(row).r
    pad = StateSpace(np.diag([-1.0, -2.0]), [[0, 1], [0, 0]], [[1, 1]], [[1, 0]])
    T0, T1 = zm.fzk_triple(row), zm.fzk_triple(pad)
    assert T1.r == T0.r == 1
    assert np.allclose(mc.eigenvalues(T1.Lambda), mc.eigenvalues(T0.Lambda))
    S = StateSpace(-np.eye(2), np.zeros((2, 1)), np.eye(2), np.zeros((2, 1)))
    assert zm.fzk_triple(S).r == 0


def test_observability_required():
    S = StateSpace(np.diag([-1.0, -2.0]), [[1], [1]], [[1, 0]], [[1]])
    with pytest.raises(NotObservable):
        zm.max_zero_triple(S)
    rep = zm.zero_report(S, force=True)
    assert rep.hypothesis_violated


# ---- kernel generators / partition


def test_kernel_generators_examples(allpass, row, const_row):
    R0, a0 = zm.kernel_generators(allpass, zm.fzk_triple(allpass))
    assert R0.shape == (1, 0)
    T = zm.fzk_triple(row)
    R0, a0 = zm.kernel_generators(row, T)
    assert np.allclose(np.abs(R0), [[0], [1]])
    assert np.allclose(row.B @ R0, T.Pi @ a0)
    assert np.allclose(np.abs(a0), [[1]])
    R0, a0 = zm.kernel_generators(const_row, zm.fzk_triple(const_row))
    assert np.allclose(np.abs(R0), np.ones((2, 1)) / np.sqrt(2))
    assert np.allclose(const_row.D @ R0, 0)
    assert a0.shape == (0, 1)


def test_partition_examples(allpass, row, const_row):
    ks = zm.kernel_structure(row)
    assert ks.nk == 1 and ks.nf == 0 and ks.kernel_indices == [1]
    assert np.allclose(ks.Lambda_k, [[-0.5]])
    ks = zm.kernel_structure(allpass)
    assert ks.nk == 0 and np.allclose(ks.Lambda_f, [[1]]) and ks.kernel_indices == []
    ks = zm.kernel_structure(const_row)
    assert ks.kernel_indices == [0] and ks.nf == 0


@given(seeds)
def test_partition_invariants(seed):
    s = random_system(np.random.default_rng(seed), cfg)
    ks = zm.kernel_structure(s)
    sc = max(1.0, s.scale())
    BD = np.vstack([s.B, s.D]) @ ks.R0
    target = np.vstack([ks.triple.Pi @ ks.alpha0, np.zeros((s.p, ks.m))])
    assert np.linalg.norm(BD - target) <= 1e-8 * sc
    assert np.allclose(ks.R0.conj().T @ ks.R0, np.eye(ks.m), atol=1e-12)
    assert sum(ks.kernel_indices) == ks.nk
    assert np.linalg.norm(ks.alpha0[ks.nk:]) == 0
    assert zm.pencil_residual(s, ks.triple.Pi, ks.triple.H, ks.triple.Lambda) <= 1e-8 * sc
    if ks.nk:
        R = mc.staircase(ks.Lambda_k, ks.alpha_k)[0]
        assert R.shape[1] == ks.nk


# ---- reports


def test_report_examples(allpass, row, column):
    rep = zm.zero_report(allpass)
    assert np.allclose(rep.finite_zeros, [1]) and rep.dims() == (1, 0, 0, 0)
    assert rep.mcmillan == 1 and rep.identity_holds
    rep = zm.zero_report(row)
    assert rep.finite_zeros == [] and rep.dims() == (0, 0, 1, 0) and rep.identity_holds
    rep = zm.zero_report(column)
    assert rep.dims() == (0, 0, 0, 1) and rep.identity_holds


def test_report_json_sorted_pairs():
    S = StateSpace(np.diag([-1.0, -2.0]), np.eye(2), np.eye(2), np.diag([1.0, 1.0]))
    js = zm.report_to_json(zm.zero_report(S))
    assert js["finite_zeros"] == sorted(js["finite_zeros"])
    assert all(len(z) == 2 for z in js["finite_zeros"])


def test_k0_examples(row, const_row):
    ks = zm.kernel_structure(row)
    K0 = zm.k0_function(ks)
    for z in eval_grid(row, K0):
        assert np.linalg.norm(evaluate(row, z) @ evaluate(K0, z)) < 1e-14
    ks = zm.kernel_structure(StateSpace([[-1]], [[1]], [[1]], [[1]]))
    assert zm.k0_function(ks).shape == (1, 0)
    K0 = zm.k0_function(zm.kernel_structure(const_row))
    assert K0.n == 0 and np.allclose(np.abs(K0.D), np.ones((2, 1)) / np.sqrt(2))


def test_pencil_residual_examples(row):
    T = zm.max_zero_triple(row)
    assert zm.pencil_residual(row, T.Pi, T.H, T.Lambda) <= 1e-8
    H = T.H + 1.0
    sv = np.linalg.svd(np.vstack([row.B, row.D]), compute_uv=False).min()
    assert zm.pencil_residual(row, T.Pi, H, T.Lambda) >= sv - 1e-12
    assert zm.pencil_residual(row, np.zeros((1, 0)), np.zeros((2, 0)), np.zeros((0, 0))) == 0.0


def test_counting_identity_100_random():
    for s in random_systems(123, 100, cfg):
        rep = zm.zero_report(s)
        assert rep.identity_holds, rep.dims()


@given(seeds)
def test_annihilation_and_rank(seed):
    s = random_system(np.random.default_rng(seed), cfg)
    K0 = zm.k0_function(zm.kernel_structure(s))
    sc = max(1.0, s.scale()) * max(1.0, K0.scale())
    rng = np.random.default_rng(seed + 1)
    for z in eval_grid(s, K0):
        FK = evaluate(s, z) @ evaluate(K0, z)
        assert mc.norm2(FK) <= 1e-8 * sc
    # away from zeros and poles the columns of K0 fill ker F(lambda)
    lam = complex(rng.uniform(-2, 2), rng.uniform(-3, 3))
    Fl, Kl = evaluate(s, lam), evaluate(K0, lam)
    assert mc.numerical_rank(np.hstack([Fl.conj().T, Kl]), mc.Tolerance(rank_tol=1e-8)) == s.q


@given(seeds)
def test_kernel_trivial_iff_no_constant_kernel_in_fzk(seed):
    g = np.random.default_rng(seed)
    s = random_system(g, cfg)
    ks = zm.kernel_structure(s)
    fzk = zm.fzk_subspace(s)
    cap = mc.intersect(fzk, zm.constant_kernel(s))
    assert (ks.nk == 0) == (cap.dim == 0)


@given(seeds)
def test_left_right_similarity_of_finite_zero_matrices(seed):
    s = random_system(np.random.default_rng(seed), cfg)
    a = zm.kernel_structure(s).Lambda_f
    b = zm.kernel_structure(dual(s)).Lambda_f
    assert a.shape == b.shape
    ca, cb = np.poly(a) if a.size else np.ones(1), np.poly(b) if b.size else np.ones(1)
    assert np.max(np.abs(ca - cb)) <= 1e-6 * max(1.0, np.max(np.abs(ca)))


@given(seeds)
def test_kernel_indices_feedback_invariant(seed):
    g = np.random.default_rng(seed)
    s = random_system(g, cfg)
    base = sorted(zm.kernel_structure(s).kernel_indices)
    L = g.standard_normal((s.q, s.n))
    M = g.standard_normal((s.n, s.p))
    assert sorted(zm.kernel_structure(zm.feedback_system(s, L)).kernel_indices) == base
    assert sorted(zm.kernel_structure(zm.injection_system(s, M), force=True).kernel_indices) == base


@settings(max_examples=15)
@given(seeds)
def test_matches_exact_oracle(seed):
    s, exact = random_rational_system(np.random.default_rng(seed))
    rep = zm.zero_report(s)
    orc = po.oracle(exact, s)
    assert sorted(rep.kernel_indices) == orc.kernel_degrees
    assert po.match_multisets(rep.finite_zeros, orc.smm.zero_multiset()) <= 1e-6
    assert rep.dim_WIm == sum(orc.left_kernel_degrees)
