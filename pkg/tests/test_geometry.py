import numpy as np
from hypothesis import given, strategies as st

from zeromodules import geometry as geo
from zeromodules import matrixcore as mc
from zeromodules import zeromod as zm
from zeromodules.randsys import RandomSystemConfig, random_system
from zeromodules.statespace import StateSpace, constant

cfg = RandomSystemConfig(max_n=6, max_p=3, max_q=3, p_complex=0.3)
seeds = st.integers(0, 2**32 - 1)


def test_vstar_examples(allpass, row):
    S = StateSpace(-np.eye(2), np.ones((2, 1)), np.eye(2), np.zeros((2, 1)))
    assert geo.vstar(S).dim == 0
    assert geo.vstar(allpass).dim == 1
    assert geo.vstar(row).dim == 1


def test_cstar_and_rstar_examples(allpass, row):
    S = StateSpace([[-1]], [[0]], [[1]], [[1]])
    assert geo.cstar(S).dim == 0 and geo.rstar(S).dim == 0
    assert geo.cstar(allpass).dim == 0
    assert geo.cstar(row).dim == 1
    assert geo.rstar(allpass).dim == 0
    assert geo.rstar(row).dim == 1


def test_left_profile_examples(allpass):
    vl, cl = geo.left_profile(allpass)
    assert vl.dim == 1 and cl.dim == 0
    vl, cl = geo.left_profile(constant(np.eye(2)))
    assert vl.dim == 0 and cl.dim == 0 and vl.basis.shape[0] == 0


def test_profile_invariants_on_worked_example(row):
    p = geo.profile(row)
    assert p.rstar.is_subspace_of(p.vstar) and p.rstar.is_subspace_of(p.cstar)
    assert p.cstar.is_subspace_of(p.reach)
    assert p.dims() == {"vstar": 1, "cstar": 1, "rstar": 1, "reach": 1, "vstar_left": 0, "cstar_left": 0}


@given(seeds)
def test_profile_lattice_relations(seed):
    s = random_system(np.random.default_rng(seed), cfg)
    p = geo.profile(s)
    assert p.rstar.equals(mc.intersect(p.vstar, p.cstar))
    assert p.rstar.is_subspace_of(p.vstar)
    assert p.rstar.is_subspace_of(p.cstar)
    assert p.cstar.is_subspace_of(p.reach)


@given(seeds)
def test_duality_complements(seed):
    s = random_system(np.random.default_rng(seed), cfg)
    p = geo.profile(s)
    for a, b in ((mc.ortho_complement(p.vstar), p.cstar_left), (mc.ortho_complement(p.cstar), p.vstar_left)):
        assert a.dim == b.dim
        assert max(mc.principal_angles(a, b), default=0.0) <= 1e-7


@given(seeds)
def test_monotone_recursions(seed):
    s = random_system(np.random.default_rng(seed), cfg)
    vd = [V.dim for V in geo.vstar_sequence(s)]
    cd = [C.dim for C in geo.cstar_sequence(s)]
    assert all(a > b for a, b in zip(vd, vd[1:])) and len(vd) <= s.n + 1
    assert all(a < b for a, b in zip(cd, cd[1:])) and len(cd) <= s.n + 1


@given(seeds)
def test_feedback_certificate_for_vstar(seed):
    s = random_system(np.random.default_rng(seed), cfg)
    V = geo.vstar(s)
    K, res = geo.friend_feedback(s, V)
    if V.dim:
        P = V.basis
        sc = max(1.0, s.scale()) * max(1.0, np.linalg.norm(K, 2))
        AK = (s.A + s.B @ K) @ P
        assert np.linalg.norm(AK - P @ (P.conj().T @ AK)) <= 1e-8 * sc
        assert np.linalg.norm((s.C + s.D @ K) @ P) <= 1e-8 * sc
    # the zero triple is the same certificate in another form
    T = zm.max_zero_triple(s)
    assert T.r == V.dim


@given(seeds)
def test_injection_certificate_for_cstar(seed):
    s = random_system(np.random.default_rng(seed), cfg)
    Cs = geo.cstar(s)
    L, res = geo.friend_injection(s, Cs)
    sc = max(1.0, s.scale()) * max(1.0, np.linalg.norm(L, 2))
    Pr = Cs.projector()
    I = np.eye(s.n)
    if Cs.dim:
        AL = (s.A + L @ s.C) @ Cs.basis
        assert np.linalg.norm((I - Pr) @ AL) <= 1e-8 * sc
    assert np.linalg.norm((I - Pr) @ (s.B + L @ s.D)) <= 1e-8 * sc


@given(seeds, st.floats(-6, 6))
def test_subspaces_invariant_under_input_scaling(seed, log_s):
    g = np.random.default_rng(seed)
    s = random_system(g, cfg)
    T = np.diag(10.0 ** (log_s * g.random(s.q))) @ np.linalg.qr(g.standard_normal((s.q, s.q)))[0]
    t = StateSpace(s.A, s.B @ T, s.C, s.D @ T)
    for f in (geo.vstar, geo.cstar):
        a, b = f(s), f(t)
        assert a.dim == b.dim and max(mc.principal_angles(a, b), default=0.0) <= 1e-7


@given(seeds)
def test_subspaces_covariant_under_state_change(seed):
    from zeromodules.statespace import transform
    g = np.random.default_rng(seed)
    s = random_system(g, cfg)
    T = g.standard_normal((s.n, s.n)) + 3 * np.eye(s.n)
    t = transform(s, T)
    Ti = np.linalg.inv(T)
    for f in (geo.vstar, geo.cstar):
        a, b = f(s), f(t)
        mapped = mc.image(Ti @ a.basis) if a.dim else a
        assert b.dim == a.dim and max(mc.principal_angles(mapped, b), default=0.0) <= 1e-7
