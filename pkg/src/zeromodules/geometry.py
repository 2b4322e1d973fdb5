"""Output-nulling subspaces V*, C*, R* of a realization and their left counterparts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matrixcore as mc
from .matrixcore import Subspace, Tolerance
from .statespace import StateSpace, dual, reachable_subspace


@dataclass(frozen=True, eq=False)
class GeometricProfile:
    vstar: Subspace
    cstar: Subspace
    rstar: Subspace
    reach: Subspace
    vstar_left: Subspace
    cstar_left: Subspace

    def dims(self) -> dict:
        return {
            "vstar": self.vstar.dim,
            "cstar": self.cstar.dim,
            "rstar": self.rstar.dim,
            "reach": self.reach.dim,
            "vstar_left": self.vstar_left.dim,
            "cstar_left": self.cstar_left.dim,
        }


def input_normalized(sys: StateSpace, tol: Tolerance | None = None) -> StateSpace:
    """Same (A, C) with [B; D] replaced by an orthonormal basis of its column space.

    V*, C* and R* depend on the inputs only through Im [B; D], so this input
    change leaves them unchanged while putting both halves of the system matrix
    on a comparable scale for the rank decisions.
    """
    BD = np.vstack([sys.B, sys.D])
    if BD.size == 0:
        return sys
    U = mc.image(BD, tol).basis
    return StateSpace(sys.A, U[: sys.n], sys.C, U[sys.n:])


def vstar_sequence(sys: StateSpace, tol: Tolerance | None = None) -> list[Subspace]:
    """Descending recursion V_0 = C^n, V_{k+1} = {x : exists u, Ax+Bu in V_k, Cx+Du = 0}.

    x is admissible iff [W^H A; C] x lies in Im [W^H B; D], W spanning V_k^perp.
    """
    sys = input_normalized(sys, tol)
    n = sys.n
    seq = [Subspace.full(n)]
    if n == 0:
        return seq
    scale_bd = max(mc.norm2(np.vstack([sys.B, sys.D])), 0.0)
    scale_ac = max(mc.norm2(np.vstack([sys.A, sys.C])), 0.0)
    ref = max(scale_bd, scale_ac)
    while True:
        V = seq[-1]
        W = mc.ortho_complement(V).basis
        Wh = W.conj().T
        BD = np.vstack([Wh @ sys.B, sys.D])
        AC = np.vstack([Wh @ sys.A, sys.C])
        Z = mc.left_kernel(BD, tol, scale=ref).basis
        if Z.shape[1] == 0:
            nxt = Subspace.full(n)
        else:
            nxt = mc.kernel(Z.conj().T @ AC, tol, scale=ref)
        # guard monotonicity against roundoff
        nxt = mc.intersect(V, nxt, tol) if nxt.dim <= V.dim else V
        if nxt.dim == V.dim:
            return seq
        seq.append(nxt)


def vstar(sys: StateSpace, tol: Tolerance | None = None) -> Subspace:
    """Maximal output-nulling controlled invariant subspace."""
    return vstar_sequence(sys, tol)[-1]


def cstar_sequence(sys: StateSpace, tol: Tolerance | None = None) -> list[Subspace]:
    """Ascending recursion C_0 = {0}, C_{k+1} = {Ax+Bu : x in C_k, Cx+Du = 0}."""
    sys = input_normalized(sys, tol)
    n = sys.n
    seq = [Subspace.zero(n)]
    if n == 0:
        return seq
    ref = mc.norm2(sys.system_matrix())
    while True:
        S = seq[-1].basis
        M = np.hstack([sys.C @ S, sys.D])
        N = mc.kernel(M, tol, scale=ref).basis
        nxt = mc.image(np.hstack([sys.A @ S, sys.B]) @ N, tol, scale=ref)
        nxt = mc.join(seq[-1], nxt, tol)
        if nxt.dim == seq[-1].dim:
            return seq
        seq.append(nxt)
        if nxt.dim == n:
            return seq


def cstar(sys: StateSpace, tol: Tolerance | None = None) -> Subspace:
    """Minimal input-containing (output-nulling reachable) subspace."""
    return cstar_sequence(sys, tol)[-1]


def rstar(sys: StateSpace, tol: Tolerance | None = None) -> Subspace:
    return mc.intersect(vstar(sys, tol), cstar(sys, tol), tol)


def left_profile(sys: StateSpace, tol: Tolerance | None = None) -> tuple[Subspace, Subspace]:
    """Left V* and C*, as column subspaces S with row space {s^H : s in S}.

    Computed on the transposed system and conjugated back.
    """
    d = dual(sys)
    return vstar(d, tol).conj(), cstar(d, tol).conj()


def profile(sys: StateSpace, tol: Tolerance | None = None) -> GeometricProfile:
    v = vstar(sys, tol)
    c = cstar(sys, tol)
    vl, cl = left_profile(sys, tol)
    return GeometricProfile(
        vstar=v,
        cstar=c,
        rstar=mc.intersect(v, c, tol),
        reach=reachable_subspace(sys, tol),
        vstar_left=vl,
        cstar_left=cl,
    )


def friend_feedback(sys: StateSpace, V: Subspace) -> tuple[np.ndarray, float]:
    """A feedback K with (A+BK)V in V in ker(C+DK), plus the certificate residual.

    Least-squares solve of [-V, B; 0, D][L; U] = [-AV; -CV], then K = U V^H.
    """
    n, q = sys.n, sys.q
    if V.dim == 0:
        return np.zeros((q, n), dtype=complex), 0.0
    P = V.basis
    M = np.block([[-P, sys.B], [np.zeros((sys.p, V.dim)), sys.D]])
    rhs = np.vstack([-sys.A @ P, -sys.C @ P])
    sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    U = sol[V.dim:]
    K = U @ P.conj().T
    Acl = sys.A + sys.B @ K
    inv_res = mc.norm2(Acl @ P - P @ (P.conj().T @ Acl @ P))
    out_res = mc.norm2((sys.C + sys.D @ K) @ P)
    return K, max(inv_res, out_res)


def friend_injection(sys: StateSpace, S: Subspace) -> tuple[np.ndarray, float]:
    """An output injection L with (A+LC)S in S and Im(B+LD) in S, plus residual."""
    n = sys.n
    if S.dim == n:
        return np.zeros((n, sys.p), dtype=complex), 0.0
    W = mc.ortho_complement(S).basis
    Wh = W.conj().T
    M = np.hstack([sys.C @ S.basis, sys.D])
    rhs = -Wh @ np.hstack([sys.A @ S.basis, sys.B])
    Y = np.linalg.lstsq(M.T, rhs.T, rcond=None)[0].T
    L = W @ Y
    res = mc.norm2(Wh @ np.hstack([(sys.A + L @ sys.C) @ S.basis, sys.B + L @ sys.D]))
    return L, res
