"""Kernel inner functions, their square inner extensions and the reductions F_r, F_rl.

Right-side objects are built from the kernel structure of F.  Left-side objects
are obtained by running the same construction on the transposed system and
transposing the results back, so that K_left F = 0 and F = L_left* F_rl L*.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import matrixcore as mc
from . import zeromod as zm
from .exceptions import HypothesisViolated, NotInner, NotObservable, PoleHit, RiccatiFailure
from .matrixcore import Tolerance
from .statespace import (
    StateSpace,
    dual,
    evaluate,
    eval_grid,
    imag_axis_grid,
    is_minimal,
    is_observable,
    mcmillan_degree,
    minimal_realization,
    para_conjugate,
    reachable_subspace,
)


@dataclass(frozen=True, eq=False)
class InnerCertificate:
    sigma: np.ndarray
    beta_k: np.ndarray
    grid_defect: float
    stable: bool
    riccati_residual: float = 0.0


@dataclass(frozen=True, eq=False)
class RightFactor:
    """Everything produced by the right-hand pipeline for one realization."""

    sys: StateSpace
    ks: zm.KernelStructure
    K: StateSpace
    L: StateSpace
    F_r: StateSpace
    cert: InnerCertificate
    L0: np.ndarray
    closed_loop: np.ndarray
    reach_dim_before: int
    reach_dim_after: int

    @property
    def mirrored_zero_matrix(self) -> np.ndarray:
        """-sigma^{-1} (Lambda_k + alpha_k beta_k)^H sigma."""
        s = self.cert.sigma
        if s.shape[0] == 0:
            return np.zeros((0, 0), complex)
        return -np.linalg.solve(s, self.closed_loop.conj().T @ s)


@dataclass(frozen=True, eq=False)
class Factorization:
    K: StateSpace
    L: StateSpace
    F_r: StateSpace
    K_left: StateSpace
    L_left: StateSpace
    F_rl: StateSpace
    right: RightFactor
    left: RightFactor
    sys: StateSpace
    hypotheses: dict = field(default_factory=dict)
    predicted_zeros: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))


def _inner_defect(K: StateSpace, points) -> float:
    if K.q == 0:
        return 0.0
    I = np.eye(K.q)
    return max((mc.norm2(evaluate(K, z).conj().T @ evaluate(K, z) - I) for z in points), default=0.0)


def inner_defect(K: StateSpace, points=None) -> float:
    """max over imaginary-axis points of ||K(iw)^H K(iw) - I||."""
    return _inner_defect(K, imag_axis_grid(K) if points is None else points)


def coinner_defect(K: StateSpace, points=None) -> float:
    """max over imaginary-axis points of ||K(iw) K(iw)^H - I||."""
    pts = imag_axis_grid(K) if points is None else points
    if K.p == 0:
        return 0.0
    I = np.eye(K.p)
    return max((mc.norm2(evaluate(K, z) @ evaluate(K, z).conj().T - I) for z in pts), default=0.0)


def kernel_inner(sys: StateSpace, ks: zm.KernelStructure, tol: Tolerance | None = None):
    """Tall inner K_beta whose columns generate ker F.

    Solves  s F + F^H s - s G s + Q = 0  with F = Lambda_k - alpha_k R0^H H_k,
    G = alpha_k alpha_k^H and Q = H_k^H (I - R0 R0^H) H_k, then
    beta_k = -alpha_k^H s - R0^H H_k.
    """
    t = mc.DEFAULT_TOL if tol is None else tol
    R0, Hk, Lk, ak = ks.R0, ks.H_k, ks.Lambda_k, ks.alpha_k
    nk, m = ks.nk, ks.m
    if nk == 0:
        K = StateSpace(np.zeros((0, 0)), np.zeros((0, m)), np.zeros((sys.q, 0)), R0)
        cert = InnerCertificate(np.zeros((0, 0), complex), np.zeros((m, 0), complex),
                                _inner_defect(K, imag_axis_grid()), True)
        return K, cert
    Fr = Lk - ak @ R0.conj().T @ Hk
    G = ak @ ak.conj().T
    Pperp = np.eye(sys.q) - R0 @ R0.conj().T
    Q = Hk.conj().T @ Pperp @ Hk
    Q = (Q + Q.conj().T) / 2
    sigma = mc.solve_care(Fr, G, Q, t)
    res = mc.norm2(mc.care_residual(Fr, G, Q, sigma))
    if res > mc.care_residual_bound(Fr, G, Q, sigma, t) * 10:
        raise RiccatiFailure(f"Riccati residual {res:.3e} too large")
    ev = np.linalg.eigvalsh(sigma)
    if ev.min() <= 0:
        raise RiccatiFailure("Riccati solution is not positive definite")
    beta = -ak.conj().T @ sigma - R0.conj().T @ Hk
    Acl = Lk + ak @ beta
    Hb = Hk + R0 @ beta
    K = StateSpace(Acl, ak, Hb, R0)
    stable = bool(np.max(np.linalg.eigvals(Acl).real) < 0)
    cert = InnerCertificate(sigma, beta, _inner_defect(K, imag_axis_grid(K)), stable, res)
    return K, cert


def square_inner_extension(K: StateSpace, cert: InnerCertificate) -> StateSpace:
    """L_beta with [K_beta, L_beta] square inner:

    L = L0 - (H_k + R0 beta_k)(zI - Acl)^{-1} sigma^{-1} (H_k + R0 beta_k)^H L0.
    """
    R0 = K.D
    L0 = mc.unitary_completion(R0)
    if K.n == 0:
        return StateSpace(np.zeros((0, 0)), np.zeros((0, L0.shape[1])), np.zeros((K.p, 0)), L0)
    Hb = K.C
    BL = -np.linalg.solve(cert.sigma, Hb.conj().T @ L0)
    return StateSpace(K.A, BL, Hb, L0)


def right_factor(sys: StateSpace, tol: Tolerance | None = None, force: bool = False) -> RightFactor:
    """Kernel inner K, its complement L and F_r = F L with realization

    F_r ~ (A, (B + Pi_k sigma^{-1} H_k^H) L0, C, D L0).
    """
    zm.require_observable(sys, tol, force)
    ks = zm.kernel_structure(sys, tol, force=True)
    K, cert = kernel_inner(sys, ks, tol)
    L = square_inner_extension(K, cert)
    L0 = L.D
    if ks.nk:
        Bplus = sys.B + ks.Pi_k @ np.linalg.solve(cert.sigma, ks.H_k.conj().T)
    else:
        Bplus = sys.B
    F_r = StateSpace(sys.A, Bplus @ L0, sys.C, sys.D @ L0)
    return RightFactor(
        sys=sys,
        ks=ks,
        K=K,
        L=L,
        F_r=F_r,
        cert=cert,
        L0=L0,
        closed_loop=np.array(K.A),
        reach_dim_before=reachable_subspace(sys, tol).dim,
        reach_dim_after=reachable_subspace(F_r, tol).dim,
    )


def right_reduce(sys: StateSpace, tol: Tolerance | None = None, force: bool = False) -> StateSpace:
    return right_factor(sys, tol, force).F_r


def left_factor(sys: StateSpace, tol: Tolerance | None = None, force: bool = False) -> RightFactor:
    """Right pipeline on the transposed system; transpose the outputs to get left objects."""
    return right_factor(dual(sys), tol, force)


def left_reduce(sys: StateSpace, tol: Tolerance | None = None, force: bool = False) -> StateSpace:
    """F_l = L_left F."""
    return dual(left_factor(sys, tol, force).F_r)


def _eigs_in_closed_lhp(A, tol: Tolerance) -> bool:
    if A.shape[0] == 0:
        return True
    return bool(np.max(np.linalg.eigvals(A).real) <= tol.residual_tol * max(1.0, mc.norm2(A)))


def _stabilizable(A, B, tol: Tolerance) -> bool:
    """rank [A - lambda I, B] = n for every eigenvalue with Re lambda >= 0."""
    n = A.shape[0]
    for lam in np.linalg.eigvals(A):
        if lam.real >= -tol.residual_tol:
            if mc.numerical_rank(np.hstack([A - lam * np.eye(n), B]), tol, scale=mc.norm2(A)) < n:
                return False
    return True


def degree_hypotheses(sys: StateSpace, tol: Tolerance | None = None) -> dict:
    """Conditions under which the squaring preserves the McMillan degree.

    (a) spectrum of A in the closed left half plane, or
    (b) A and -A^H spectrally disjoint, (A, Cbar^H) stabilizable and
        (Bbar^H, A) detectable, with Cbar = C P + D B^H, Bbar = Q B + C^H D,
        A P + P A^H + B B^H = 0 and Q A + A^H Q + C^H C = 0.
    """
    t = mc.DEFAULT_TOL if tol is None else tol
    A, B, C, D = sys.A, sys.B, sys.C, sys.D
    flags = {"lhp": _eigs_in_closed_lhp(A, t), "disjoint": False,
             "stabilizable": False, "detectable": False}
    try:
        P = mc.solve_lyapunov(A.conj().T, B @ B.conj().T, t)
        Q = mc.solve_lyapunov(A, C.conj().T @ C, t)
        flags["disjoint"] = True
    except Exception:
        P = Q = None
    if P is not None:
        Cbar = C @ P + D @ B.conj().T
        Bbar = Q @ B + C.conj().T @ D
        flags["stabilizable"] = _stabilizable(A, Cbar.conj().T, t)
        flags["detectable"] = _stabilizable(A.conj().T, Bbar, t)
    flags["holds"] = flags["lhp"] or (flags["disjoint"] and flags["stabilizable"] and flags["detectable"])
    return flags


def squaring(sys: StateSpace, tol: Tolerance | None = None) -> Factorization:
    """F = L_left* F_rl L* with F_rl = L_left F L square.

    The input is first reduced to a minimal realization.  F_rl is realized as
    (A, (B + Pi_k s^{-1} H_k^H) L0, L0'(C + H'_k^H s'^{-1} Pi'_k), L0' D L0);
    the left quantities come from the transposed system.
    """
    t = mc.DEFAULT_TOL if tol is None else tol
    m = minimal_realization(sys, t)
    rf = right_factor(m, t)
    lf = left_factor(m, t)
    # left objects in untransposed form
    K_left = dual(lf.K)
    L_left = dual(lf.L)
    C_l = dual(lf.F_r).C
    L0l = lf.L0.T
    F_rl = StateSpace(m.A, rf.F_r.B, C_l, L0l @ m.D @ rf.L0)
    hyp = degree_hypotheses(m, t)
    hyp["minimal_input"] = is_minimal(sys, t)
    if not hyp["holds"]:
        warnings.warn("degree-preservation hypotheses fail; McMillan degree of F_rl may drop",
                      HypothesisViolated, stacklevel=2)
    predicted = np.concatenate([
        mc.eigenvalues(rf.ks.Lambda_f),
        mc.eigenvalues(rf.mirrored_zero_matrix),
        -np.conj(mc.eigenvalues(lf.closed_loop)),
    ])
    return Factorization(
        K=rf.K, L=rf.L, F_r=rf.F_r, K_left=K_left, L_left=L_left, F_rl=F_rl,
        right=rf, left=lf, sys=m, hypotheses=hyp, predicted_zeros=predicted,
    )


def inner_complement(Q: StateSpace, tol: Tolerance | None = None) -> StateSpace:
    """Complement Qt = Dt + C (zI - A)^{-1} Bt with [Q, Qt] square inner.

    P A + A^H P + C^H C = 0, [D, Dt] unitary, Bt = -P^{-1} C^H Dt.
    """
    P = mc.solve_lyapunov(Q.A, Q.C.conj().T @ Q.C, tol)
    Dt = mc.unitary_completion(Q.D) if Q.q else np.eye(Q.p)
    Bt = -np.linalg.solve(P, Q.C.conj().T @ Dt) if Q.n else np.zeros((0, Dt.shape[1]))
    return StateSpace(Q.A, Bt, Q.C, Dt)


def inner_zero_structure(Q: StateSpace, tol: Tolerance | None = None) -> zm.ZeroTriple:
    """Maximal pencil solution of a tall inner Q with stable A and observable (C, A).

    P Im(Pi) is the orthogonal complement of <A | Bt>, H = -D^H C Pi and
    (A - B D^H C) Pi = Pi Lambda.
    """
    t = mc.DEFAULT_TOL if tol is None else tol
    if inner_defect(Q) > 1e-8:
        raise NotInner(f"inner defect {inner_defect(Q):.3e}")
    if not is_observable(Q, t):
        raise NotObservable("(C_Q, A_Q) not observable")
    if Q.n and np.max(np.linalg.eigvals(Q.A).real) >= 0:
        raise NotInner("A_Q is not asymptotically stable")
    n = Q.n
    if n == 0:
        return zm.ZeroTriple(np.zeros((0, 0), complex), np.zeros((Q.q, 0), complex),
                             np.zeros((0, 0), complex), 0.0)
    P = mc.solve_lyapunov(Q.A, Q.C.conj().T @ Q.C, t)
    Qt = inner_complement(Q, t)
    reach = reachable_subspace(Qt, t)
    comp = mc.ortho_complement(reach)
    if comp.dim == 0:
        return zm.ZeroTriple(np.zeros((n, 0), complex), np.zeros((Q.q, 0), complex),
                             np.zeros((0, 0), complex), 0.0)
    X = np.linalg.solve(P, comp.basis)
    Pi = mc.normalize_columns(np.linalg.qr(X)[0])
    H = -Q.D.conj().T @ Q.C @ Pi
    Az = Q.A - Q.B @ Q.D.conj().T @ Q.C
    Lam = Pi.conj().T @ Az @ Pi
    return zm.ZeroTriple(Pi, H, Lam, zm.pencil_residual(Q, Pi, H, Lam))


def realization_scale(*systems: StateSpace) -> float:
    """max(1, ||[A B; C D]||) over the given realizations.

    Floating-point evaluation of a realization carries an error proportional to
    this norm, so certificate thresholds are stated relative to it.
    """
    return max([1.0] + [s.scale() for s in systems])


def certificate_defects(fac: Factorization) -> dict:
    """Raw grid defects of a factorization together with the scale each is judged against."""
    F = fac.sys
    pts = eval_grid(F, fac.K, fac.L, fac.F_rl, fac.L_left, fac.K_left)
    ws = [z for z in pts if z.real == 0.0]
    KL = _hcat_shared(fac.K, fac.L)
    KLl = _vcat_shared(fac.K_left, fac.L_left)
    out = {
        "K_inner": (inner_defect(fac.K, ws), realization_scale(fac.K)),
        "KL_unitary": (inner_defect(KL, ws), realization_scale(KL)),
        "FK": (max((mc.norm2(evaluate(F, z) @ evaluate(fac.K, z)) for z in pts), default=0.0),
               realization_scale(F, fac.K)),
        "K_left_coinner": (coinner_defect(fac.K_left, ws), realization_scale(fac.K_left)),
        "KL_left_unitary": (coinner_defect(KLl, ws), realization_scale(KLl)),
        "K_left_F": (max((mc.norm2(evaluate(fac.K_left, z) @ evaluate(F, z)) for z in pts), default=0.0),
                     realization_scale(F, fac.K_left)),
        "F_r_reconstruction": (reconstruction_error_r(fac.right, pts), realization_scale(F, fac.F_r, fac.L)),
        "F_rl_reconstruction": (reconstruction_error(fac, pts),
                                realization_scale(F, fac.F_rl, fac.L, fac.L_left)),
    }
    return {k: {"defect": float(d), "scale": float(sc)} for k, (d, sc) in out.items()}


def _cond(s: np.ndarray) -> float:
    return float(np.linalg.cond(s)) if s.size else 1.0


def factorization_to_json(fac: Factorization) -> dict:
    """Certificates and hypothesis flags; the StateSpace objects are written separately."""
    sides = {}
    for name, rf in (("right", fac.right), ("left", fac.left)):
        sides[name] = {
            "sigma": rf.cert.sigma,
            "sigma_condition": _cond(rf.cert.sigma),
            "beta_k": rf.cert.beta_k,
            "grid_defect": rf.cert.grid_defect,
            "stable": rf.cert.stable,
            "riccati_residual": rf.cert.riccati_residual,
            "kernel_indices": list(rf.ks.kernel_indices),
            "reach_dim_before": rf.reach_dim_before,
            "reach_dim_after": rf.reach_dim_after,
        }
    return {
        **sides,
        "defects": certificate_defects(fac),
        "hypotheses": {k: bool(v) for k, v in fac.hypotheses.items()},
        "predicted_zeros_F_rl": [[float(z.real), float(z.imag)] for z in fac.predicted_zeros],
        "mcmillan": {"F": mcmillan_degree(fac.sys), "F_rl": mcmillan_degree(fac.F_rl)},
    }


def _hcat_shared(K: StateSpace, L: StateSpace) -> StateSpace:
    if K.q == 0:
        return L
    if L.q == 0:
        return K
    if K.n == L.n and np.allclose(K.A, L.A) and np.allclose(K.C, L.C):
        return StateSpace(K.A, np.hstack([K.B, L.B]), K.C, np.hstack([K.D, L.D]))
    from .statespace import hconcat
    return hconcat(K, L)


def _vcat_shared(K: StateSpace, L: StateSpace) -> StateSpace:
    """[K; L] for left factors sharing (A, B)."""
    return dual(_hcat_shared(dual(K), dual(L)))


def square_extension_system(rf: RightFactor) -> StateSpace:
    """[K_beta, L_beta] as one realization."""
    return _hcat_shared(rf.K, rf.L)


def reconstruction_error_r(rf: RightFactor, points=None) -> float:
    """max over grid of ||F - F_r L*||."""
    F = rf.sys
    pts = eval_grid(F, rf.F_r, rf.L) if points is None else points
    Ls = para_conjugate(rf.L)
    err = 0.0
    for z in pts:
        try:
            G = evaluate(rf.F_r, z) @ evaluate(Ls, z)
        except PoleHit:
            continue
        err = max(err, mc.norm2(evaluate(F, z) - G))
    return err


def reconstruction_error(fac: Factorization, points=None) -> float:
    """max over grid of ||F - L_left* F_rl L*||."""
    F = fac.sys
    pts = eval_grid(F, fac.F_rl, fac.L, fac.L_left) if points is None else points
    Ls = para_conjugate(fac.L)
    Lls = para_conjugate(fac.L_left)
    err = 0.0
    for z in pts:
        try:
            G = evaluate(Lls, z) @ evaluate(fac.F_rl, z) @ evaluate(Ls, z)
        except PoleHit:
            continue
        err = max(err, mc.norm2(evaluate(F, z) - G))
    return err
