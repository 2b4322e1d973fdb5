"""Per-system verification suite: each check returns a named pass/fail with its measured value."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from . import innerfact as inf
from . import matrixcore as mc
from . import zeromod as zm
from .exceptions import HypothesisViolated, PoleHit
from .matrixcore import Tolerance
from .statespace import StateSpace, eval_grid, evaluate, is_minimal, para_conjugate


@dataclass
class Check:
    name: str
    passed: bool
    value: float | str
    limit: float | str = ""

    def line(self) -> str:
        v = f"{self.value:.3e}" if isinstance(self.value, float) else str(self.value)
        lim = f"{self.limit:.1e}" if isinstance(self.limit, float) else str(self.limit)
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<34} {v:>12}  {lim}"


@dataclass
class Factors:
    """The factor functions a verification run is judged on (computed or loaded)."""

    K: StateSpace
    L: StateSpace
    F_r: StateSpace
    K_left: StateSpace
    L_left: StateSpace
    F_rl: StateSpace
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_factorization(cls, fac: inf.Factorization) -> "Factors":
        return cls(fac.K, fac.L, fac.F_r, fac.K_left, fac.L_left, fac.F_rl)


def sample_points(rng: np.random.Generator, count: int, avoid: list[StateSpace], exclusion: float = 1e-3):
    """Random points in the box [-2, 2] x [-3, 3], away from the poles of ``avoid``."""
    poles = np.concatenate([np.linalg.eigvals(s.A) for s in avoid if s.n] or [np.zeros(0)])
    out = []
    while len(out) < count:
        z = complex(rng.uniform(-2, 2), rng.uniform(-3, 3))
        if poles.size == 0 or np.min(np.abs(poles - z)) > exclusion:
            out.append(z)
    return out


def _max_over(points, fn) -> float:
    worst = 0.0
    for z in points:
        try:
            worst = max(worst, fn(z))
        except PoleHit:
            continue
    return worst


def verify_system(sys: StateSpace, factors: Factors | None = None, samples: int = 10, seed: int = 0,
                  tol: Tolerance | None = None) -> list[Check]:
    t = mc.DEFAULT_TOL if tol is None else tol
    out: list[Check] = []
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisViolated)
        fac = inf.squaring(sys, t)
    fs = Factors.from_factorization(fac) if factors is None else factors
    F = sys
    pts = eval_grid(F, fs.K, fs.L, fs.F_rl, fs.L_left) + sample_points(rng, samples, [F, fs.K, fs.L])
    ws = [z for z in pts if z.real == 0.0]

    sc = inf.realization_scale(F, fs.K)
    v = _max_over(pts, lambda z: mc.norm2(evaluate(F, z) @ evaluate(fs.K, z)))
    out.append(Check("annihilation F K = 0", v <= 1e-8 * sc, v, 1e-8 * sc))
    sc = inf.realization_scale(F, fs.K_left)
    v = _max_over(pts, lambda z: mc.norm2(evaluate(fs.K_left, z) @ evaluate(F, z)))
    out.append(Check("annihilation K_left F = 0", v <= 1e-8 * sc, v, 1e-8 * sc))

    KL = inf._hcat_shared(fs.K, fs.L)
    for name, S, fn in (("inner K^H K = I", fs.K, inf.inner_defect),
                        ("unitary [K, L]", KL, inf.inner_defect),
                        ("co-inner K_left", fs.K_left, inf.coinner_defect)):
        sc = inf.realization_scale(S)
        v = fn(S, ws)
        out.append(Check(name, v <= 1e-8 * sc, v, 1e-8 * sc))

    Ls, Lls = para_conjugate(fs.L), para_conjugate(fs.L_left)
    sc = inf.realization_scale(F, fs.F_r, fs.L)
    v = _max_over(pts, lambda z: mc.norm2(evaluate(F, z) - evaluate(fs.F_r, z) @ evaluate(Ls, z)))
    out.append(Check("reconstruction F = F_r L*", v <= 1e-7 * sc, v, 1e-7 * sc))
    sc = inf.realization_scale(F, fs.F_rl, fs.L, fs.L_left)
    v = _max_over(pts, lambda z: mc.norm2(
        evaluate(F, z) - evaluate(Lls, z) @ evaluate(fs.F_rl, z) @ evaluate(Ls, z)))
    out.append(Check("reconstruction F = L_left* F_rl L*", v <= 1e-7 * sc, v, 1e-7 * sc))

    rep = zm.zero_report(fac.sys, t)
    out.append(Check("counting identity", rep.identity_holds,
                     f"{rep.mcmillan}={'+'.join(map(str, rep.dims()))}", "exact"))

    prof = geo.profile(fac.sys, t)
    pr = geo.profile(fac.F_r, t)
    out.append(_angle_check("V*(F_r) = V*(F)", pr.vstar, prof.vstar, t))
    cap = mc.intersect(pr.vstar, pr.cstar, t)
    out.append(Check("V*(F_r) meet C*(F_r) = 0", cap.dim == 0, f"dim {cap.dim}", "0"))
    out.append(_angle_check("R*(F) join C*(F_r) = C*(F)", mc.join(prof.rstar, pr.cstar, t), prof.cstar, t))
    if is_minimal(fac.sys, t):
        out.append(_angle_check("complement V* = C*_left", mc.ortho_complement(prof.vstar), prof.cstar_left, t))
        out.append(_angle_check("complement C* = V*_left", mc.ortho_complement(prof.cstar), prof.vstar_left, t))

    base = sorted(rep.kernel_indices)
    same = True
    for _ in range(samples):
        m = fac.sys
        Lf = rng.standard_normal((m.q, m.n))
        Li = rng.standard_normal((m.n, m.p))
        for S in (zm.feedback_system(m, Lf), zm.injection_system(m, Li)):
            same &= sorted(zm.kernel_structure(S, t, force=True).kernel_indices) == base
    out.append(Check("kernel indices feedback-invariant", same, str(base), f"{samples} trials"))
    return out


def _angle_check(name, S1, S2, tol: Tolerance) -> Check:
    if S1.dim != S2.dim:
        return Check(name, False, f"dim {S1.dim} vs {S2.dim}", "equal dims")
    a = max(mc.principal_angles(S1, S2), default=0.0)
    return Check(name, a <= tol.angle_tol, float(a), tol.angle_tol)
