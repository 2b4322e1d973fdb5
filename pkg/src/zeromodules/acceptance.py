"""End-to-end acceptance criteria, shared by the test gate and scripts/run_acceptance.py.

Each ``criterion_k`` returns a :class:`~zeromodules.checks.Check`; the random
sweep behind criteria 2 and 4-7, 9, 10 is built once by :func:`build_sweep`.
"""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from . import innerfact as inf
from . import matrixcore as mc
from . import polyoracle as po
from . import zeromod as zm
from .checks import Check
from .exceptions import HypothesisViolated
from .randsys import RandomSystemConfig, random_rational_system, random_systems
from .statespace import (
    StateSpace,
    eval_grid,
    evaluate,
    is_minimal,
    mcmillan_degree,
    reachable_subspace,
)

R2 = np.sqrt(2.0)


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 0
    count: int = 200
    oracle_seed: int = 1
    oracle_count: int = 50
    inner_seed: int = 5
    inner_count: int = 20
    points: int = 10
    trials: int = 10
    system: RandomSystemConfig = field(default_factory=RandomSystemConfig)


@dataclass
class Sweep:
    systems: list[StateSpace]
    reports: list[zm.ZeroReport]
    factorizations: list[inf.Factorization]
    report_seconds: float
    factor_seconds: float


def build_sweep(cfg: AcceptanceConfig = AcceptanceConfig()) -> Sweep:
    systems = random_systems(cfg.seed, cfg.count, cfg.system)
    t0 = time.perf_counter()
    reports = [zm.zero_report(s) for s in systems]
    t1 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisViolated)
        facs = [inf.squaring(s) for s in systems]
    t2 = time.perf_counter()
    return Sweep(systems, reports, facs, t1 - t0, t2 - t1)


def _max_angle(S1, S2) -> float:
    if S1.dim != S2.dim:
        return np.inf
    return max(mc.principal_angles(S1, S2), default=0.0)


def _charpoly(M) -> np.ndarray:
    return np.poly(M) if M.size else np.ones(1)


# ------------------------------------------------------------------ criteria


def criterion_1() -> Check:
    """Worked example F = [1, 1/(z+1)]."""
    t0 = time.perf_counter()
    F = StateSpace([[-1]], [[0, 1]], [[1]], [[1, 0]])
    rf = inf.right_factor(F)
    e_sigma = abs(rf.cert.sigma[0, 0] - (R2 - 1))
    e_pole = float(np.max(np.abs(mc.eigenvalues(rf.K.A) + R2)))
    e_fr = max(abs(evaluate(rf.F_r, z)[0, 0] - (z - R2) / (z + 1)) for z in eval_grid(rf.F_r))
    zeros = zm.zero_report(rf.F_r).finite_zeros
    e_zero = abs(zeros[0] - R2) if len(zeros) == 1 else np.inf
    dt = time.perf_counter() - t0
    ok = e_sigma <= 1e-10 and e_pole <= 1e-9 and e_fr <= 1e-9 and e_zero <= 1e-9 and dt < 1.0
    return Check("C1 worked example", ok,
                 f"dsigma={e_sigma:.1e} dpole={e_pole:.1e} dF_r={e_fr:.1e} dzero={e_zero:.1e} {dt:.3f}s",
                 "1e-10/1e-9/1e-9, <1s")


def criterion_2(sw: Sweep) -> Check:
    bad = [i for i, r in enumerate(sw.reports) if not r.identity_holds]
    nonmin = sum(not is_minimal(s) for s in sw.systems)
    rankdef = sum(np.linalg.matrix_rank(s.D) < min(s.p, s.q) for s in sw.systems)
    ok = not bad and nonmin == 0 and rankdef > 0 and sw.report_seconds < 30
    return Check("C2 counting identity", ok,
                 f"{len(sw.reports) - len(bad)}/{len(sw.reports)} exact, {rankdef} rank-deficient D, "
                 f"{sw.report_seconds:.1f}s", "all, <30s")


def criterion_3(cfg: AcceptanceConfig = AcceptanceConfig()) -> Check:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.oracle_seed)
    worst, idx_bad = 0.0, 0
    for _ in range(cfg.oracle_count):
        s, exact = random_rational_system(rng)
        rep = zm.zero_report(s)
        orc = po.oracle(exact)
        worst = max(worst, po.match_multisets(rep.finite_zeros, orc.smm.zero_multiset()))
        idx_bad += sorted(rep.kernel_indices) != orc.kernel_degrees
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and idx_bad == 0 and dt < 60
    return Check("C3 exact oracle agreement", ok,
                 f"zero err {worst:.1e}, index mismatches {idx_bad}, {dt:.1f}s", "1e-6, 0, <60s")


def criterion_4(sw: Sweep) -> Check:
    worst = {"K_inner": 0.0, "KL_unitary": 0.0, "FK": 0.0}
    for fac in sw.factorizations:
        d = inf.certificate_defects(fac)
        for k in worst:
            worst[k] = max(worst[k], d[k]["defect"] / d[k]["scale"])
    ok = all(v <= 1e-8 for v in worst.values())
    return Check("C4 inner certificates", ok,
                 " ".join(f"{k}={v:.1e}" for k, v in worst.items()), "1e-8 x scale")


def criterion_5(sw: Sweep) -> Check:
    worst, deg_bad, n = 0.0, 0, 0
    for fac in sw.factorizations:
        if not fac.hypotheses["lhp"]:
            continue
        n += 1
        d = inf.certificate_defects(fac)["F_rl_reconstruction"]
        worst = max(worst, d["defect"] / d["scale"])
        deg_bad += mcmillan_degree(fac.F_rl) != mcmillan_degree(fac.sys)
    ok = worst <= 1e-7 and deg_bad == 0 and n > 0
    return Check("C5 reconstruction and degree", ok,
                 f"{n} LHP systems, err {worst:.1e}, degree drops {deg_bad}", "1e-7 x scale, 0")


def criterion_6(sw: Sweep) -> Check:
    angle, coef = 0.0, 0.0
    for s, fac in zip(sw.systems, sw.factorizations):
        p = geo.profile(s)
        angle = max(angle, _max_angle(mc.ortho_complement(p.vstar), p.cstar_left),
                    _max_angle(mc.ortho_complement(p.cstar), p.vstar_left))
        a, b = _charpoly(fac.right.ks.Lambda_f), _charpoly(fac.left.ks.Lambda_f)
        coef = max(coef, np.max(np.abs(a - b)) if a.shape == b.shape else np.inf)
    ok = angle <= 1e-7 and coef <= 1e-6
    return Check("C6 left/right duality", ok, f"angle {angle:.1e}, charpoly {coef:.1e}", "1e-7, 1e-6")


def criterion_7(sw: Sweep) -> Check:
    a1, dim_cap, a3 = 0.0, 0, 0.0
    for s, fac in zip(sw.systems, sw.factorizations):
        p, pr = geo.profile(s), geo.profile(fac.right.F_r)
        a1 = max(a1, _max_angle(pr.vstar, p.vstar))
        dim_cap = max(dim_cap, mc.intersect(pr.vstar, pr.cstar).dim)
        a3 = max(a3, _max_angle(mc.join(p.rstar, pr.cstar), p.cstar))
    ok = a1 <= 1e-7 and dim_cap == 0 and a3 <= 1e-7
    return Check("C7 reduction subspace identities", ok,
                 f"V* angle {a1:.1e}, dim(V*^C*) {dim_cap}, R*vC* angle {a3:.1e}", "1e-7, 0, 1e-7")


def criterion_8(cfg: AcceptanceConfig = AcceptanceConfig()) -> Check:
    worst, tall_bad, tall_n, built = 0.0, 0, 0, 0
    for s in random_systems(cfg.inner_seed, 4 * cfg.inner_count, cfg.system):
        if built == cfg.inner_count:
            break
        rf = inf.right_factor(s)
        if rf.K.n == 0:
            continue
        Q = inf.square_extension_system(rf)
        want = mc.eigenvalues(Q.A - Q.B @ Q.D.conj().T @ Q.C)
        got1 = zm.zero_report(Q).finite_zeros
        got2 = mc.eigenvalues(inf.inner_zero_structure(Q).Lambda)
        worst = max(worst, po.match_multisets(got1, want), po.match_multisets(got2, want))
        built += 1
        K = rf.K
        if reachable_subspace(inf.inner_complement(K)).dim == K.n:
            tall_n += 1
            rep = zm.zero_report(K)
            tall_bad += rep.dim_Z != 0 or rep.dim_Wker != 0 or inf.inner_zero_structure(K).r != 0
    ok = worst <= 1e-6 and built == cfg.inner_count and tall_bad == 0 and tall_n > 0
    return Check("C8 inner zero structure", ok,
                 f"{built} square, err {worst:.1e}; {tall_n} tall, {tall_bad} nontrivial", "1e-6, 0")


def _sample_points(rng, count, poles, zeros):
    avoid = np.concatenate([np.asarray(poles, complex), np.asarray(zeros, complex)])
    out = []
    while len(out) < count:
        z = complex(rng.uniform(-2, 2), rng.uniform(-3, 3))
        if avoid.size == 0 or np.min(np.abs(avoid - z)) > 1e-3:
            out.append(z)
    return out


def criterion_9(sw: Sweep, cfg: AcceptanceConfig = AcceptanceConfig()) -> Check:
    rng = np.random.default_rng(cfg.seed)
    worst, rank_bad = 0.0, 0
    for s, rep, fac in zip(sw.systems, sw.reports, sw.factorizations):
        K0 = zm.k0_function(fac.right.ks)
        sc = inf.realization_scale(s) * inf.realization_scale(K0)
        poles = np.concatenate([mc.eigenvalues(s.A), mc.eigenvalues(K0.A)])
        for lam in _sample_points(rng, cfg.points, poles, rep.finite_zeros):
            Fl, Kl = evaluate(s, lam), evaluate(K0, lam)
            worst = max(worst, mc.norm2(Fl @ Kl) / sc)
            rank_bad += mc.numerical_rank(np.hstack([Fl.conj().T, Kl])) != s.q
    ok = worst <= 1e-9 and rank_bad == 0
    return Check("C9 row/kernel orthogonality", ok, f"||F K0|| {worst:.1e}, rank failures {rank_bad}",
                 "1e-9 x scale, 0")


def criterion_10(sw: Sweep, cfg: AcceptanceConfig = AcceptanceConfig()) -> Check:
    rng = np.random.default_rng(cfg.seed + 10)
    bad = 0
    for s, rep in zip(sw.systems, sw.reports):
        base = sorted(rep.kernel_indices)
        for _ in range(cfg.trials):
            Sf = zm.feedback_system(s, rng.standard_normal((s.q, s.n)))
            Si = zm.injection_system(s, rng.standard_normal((s.n, s.p)))
            bad += sorted(zm.kernel_structure(Sf, force=True).kernel_indices) != base
            bad += sorted(zm.kernel_structure(Si, force=True).kernel_indices) != base
    total = 2 * cfg.trials * len(sw.systems)
    return Check("C10 feedback/injection invariance", bad == 0, f"{total - bad}/{total} identical", "exact")


def run_all(cfg: AcceptanceConfig = AcceptanceConfig()) -> list[Check]:
    sw = build_sweep(cfg)
    return [
        criterion_1(),
        criterion_2(sw),
        criterion_3(cfg),
        criterion_4(sw),
        criterion_5(sw),
        criterion_6(sw),
        criterion_7(sw),
        criterion_8(cfg),
        criterion_9(sw, cfg),
        criterion_10(sw, cfg),
    ]
