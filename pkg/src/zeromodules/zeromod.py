"""Zero pencil solutions, kernel generators and the zero-module dimension report.

The pencil equation is

    [A B; C D] [Pi; H] = [Pi Lambda; 0]

whose maximal solution spans V*.  Restricting Pi to V* cap <A|B>, adjoining the
kernel generators (R0, alpha0) and splitting off the reachable part of
(Lambda, alpha0) separates the finite zeros from the kernel structure.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from . import matrixcore as mc
from .exceptions import InfeasibleColumn, NotObservable
from .matrixcore import Subspace, Tolerance
from .statespace import (
    StateSpace,
    is_observable,
    is_reachable,
    mcmillan_degree,
    reachable_subspace,
)


@dataclass(frozen=True, eq=False)
class ZeroTriple:
    Pi: np.ndarray
    H: np.ndarray
    Lambda: np.ndarray
    residual: float

    @property
    def r(self) -> int:
        return self.Pi.shape[1]


@dataclass(frozen=True, eq=False)
class KernelStructure:
    """Kernel generators and the staircase split of the fzk triple.

    Coordinates are such that Lambda_fzk = [[Lambda_k, Lambda_kf], [0, Lambda_f]]
    and alpha0 = [alpha_k; 0] with (Lambda_k, alpha_k) reachable.
    """

    triple: ZeroTriple
    R0: np.ndarray
    alpha0: np.ndarray
    Pi_k: np.ndarray
    Pi_f: np.ndarray
    H_k: np.ndarray
    H_f: np.ndarray
    Lambda_k: np.ndarray
    Lambda_kf: np.ndarray
    Lambda_f: np.ndarray
    alpha_k: np.ndarray
    kernel_indices: list[int]

    @property
    def m(self) -> int:
        return self.R0.shape[1]

    @property
    def nk(self) -> int:
        return self.Lambda_k.shape[0]

    @property
    def nf(self) -> int:
        return self.Lambda_f.shape[0]


@dataclass
class ZeroReport:
    finite_zeros: list[complex]
    virtual_zeros: list[complex]
    dim_Z: int
    dim_Zinf: int
    dim_Wker: int
    dim_WIm: int
    mcmillan: int
    n: int
    kernel_indices: list[int]
    subspace_dims: dict
    observable: bool
    reachable: bool
    identity_holds: bool
    hypothesis_violated: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def minimal(self) -> bool:
        return self.observable and self.reachable

    def dims(self) -> tuple[int, int, int, int]:
        return (self.dim_Z, self.dim_Zinf, self.dim_Wker, self.dim_WIm)


def _scale(sys: StateSpace) -> float:
    return sys.scale()


def pencil_residual(sys: StateSpace, Pi, H, Lambda) -> float:
    """Frobenius norm of [A B; C D][Pi; H] - [Pi Lambda; 0]."""
    Pi, H, Lambda = (np.asarray(M, dtype=complex) for M in (Pi, H, Lambda))
    if Pi.shape[1] == 0:
        return 0.0
    top = sys.A @ Pi + sys.B @ H - Pi @ Lambda
    bot = sys.C @ Pi + sys.D @ H
    return float(np.sqrt(np.linalg.norm(top) ** 2 + np.linalg.norm(bot) ** 2))


def require_observable(sys: StateSpace, tol: Tolerance | None = None, force: bool = False) -> bool:
    """Return the observability flag; raise NotObservable unless forced."""
    obs = is_observable(sys, tol)
    if not obs and not force:
        raise NotObservable("(C, A) is not observable; pass force=True to proceed")
    return obs


def solve_triple(sys: StateSpace, V: Subspace, tol: Tolerance | None = None) -> ZeroTriple:
    """Minimum-norm (Lambda, H) for the fixed orthonormal Pi spanning V.

    Each column solves [-Pi, B; 0, D][lambda; u] = [-A Pi e_i; -C Pi e_i].
    """
    t = mc.DEFAULT_TOL if tol is None else tol
    Pi = np.array(V.basis)
    r = Pi.shape[1]
    if r == 0:
        return ZeroTriple(Pi, np.zeros((sys.q, 0), complex), np.zeros((0, 0), complex), 0.0)
    M = np.block([[-Pi, sys.B], [np.zeros((sys.p, r)), sys.D]])
    rhs = np.vstack([-sys.A @ Pi, -sys.C @ Pi])
    sol = np.linalg.pinv(M, rcond=t.rank_tol) @ rhs
    Lam, H = sol[:r], sol[r:]
    res = pencil_residual(sys, Pi, H, Lam)
    bound = t.residual_tol * _scale(sys) * max(1.0, mc.norm2(sol))
    if res > bound:
        raise InfeasibleColumn(f"pencil residual {res:.3e} exceeds {bound:.3e}")
    return ZeroTriple(Pi, H, Lam, res)


def max_zero_triple(sys: StateSpace, tol: Tolerance | None = None, force: bool = False) -> ZeroTriple:
    """Maximal solution of the pencil equation, Im Pi = V*."""
    require_observable(sys, tol, force)
    return solve_triple(sys, geo.vstar(sys, tol), tol)


def fzk_subspace(sys: StateSpace, tol: Tolerance | None = None) -> Subspace:
    return mc.intersect(geo.vstar(sys, tol), reachable_subspace(sys, tol), tol)


def fzk_triple(sys: StateSpace, tol: Tolerance | None = None, force: bool = False) -> ZeroTriple:
    """Pencil solution with Im Pi = V* cap <A|B>."""
    require_observable(sys, tol, force)
    return solve_triple(sys, fzk_subspace(sys, tol), tol)


def kernel_generators(sys: StateSpace, T: ZeroTriple, tol: Tolerance | None = None):
    """Maximal (R0, alpha0) with [B; D] R0 = [Pi alpha0; 0], R0 orthonormal."""
    r = T.r
    M = np.block([[sys.B, -T.Pi], [sys.D, np.zeros((sys.p, r))]])
    N = mc.kernel(M, tol, scale=_scale(sys)).basis
    if N.shape[1] == 0:
        return np.zeros((sys.q, 0), complex), np.zeros((r, 0), complex)
    R, alpha = N[: sys.q], N[sys.q:]
    U, s, Vh = np.linalg.svd(R, full_matrices=False)
    R0 = U
    alpha0 = alpha @ Vh.conj().T @ np.diag(1.0 / s)
    # deterministic phases
    R0n = mc.normalize_columns(R0)
    phase = np.array([R0n[:, j] @ R0[:, j].conj() for j in range(R0.shape[1])])
    alpha0 = alpha0 * phase[np.newaxis, :]
    return R0n, alpha0


def staircase_partition(T: ZeroTriple, R0, alpha0, tol: Tolerance | None = None) -> KernelStructure:
    """Unitary similarity exposing the reachable part of (Lambda_fzk, alpha0)."""
    Lam = T.Lambda
    r = T.r
    m = R0.shape[1]
    scale = max(mc.norm2(Lam), mc.norm2(alpha0), 1.0)
    Tk, blocks = mc.staircase(Lam, alpha0, tol, scale=scale)
    nk = Tk.shape[1]
    Tf = mc.ortho_complement(Subspace(Tk)).basis if nk < r else np.zeros((r, 0), complex)
    U = np.hstack([Tk, Tf])
    Lt = U.conj().T @ Lam @ U
    at = U.conj().T @ alpha0
    Pi = T.Pi @ U
    H = T.H @ U
    Lt[nk:, :nk] = 0.0
    at[nk:, :] = 0.0
    triple = ZeroTriple(Pi, H, Lt, T.residual)
    return KernelStructure(
        triple=triple,
        R0=np.array(R0),
        alpha0=at,
        Pi_k=Pi[:, :nk],
        Pi_f=Pi[:, nk:],
        H_k=H[:, :nk],
        H_f=H[:, nk:],
        Lambda_k=Lt[:nk, :nk],
        Lambda_kf=Lt[:nk, nk:],
        Lambda_f=Lt[nk:, nk:],
        alpha_k=at[:nk, :],
        kernel_indices=mc.indices_from_blocks(blocks, m),
    )


def kernel_structure(sys: StateSpace, tol: Tolerance | None = None, force: bool = False) -> KernelStructure:
    T = fzk_triple(sys, tol, force)
    R0, alpha0 = kernel_generators(sys, T, tol)
    return staircase_partition(T, R0, alpha0, tol)


def k0_function(ks: KernelStructure) -> StateSpace:
    """K0(z) = R0 + H_k (zI - Lambda_k)^{-1} alpha_k; its columns generate ker F."""
    return StateSpace(ks.Lambda_k, ks.alpha_k, ks.H_k, ks.R0)


def _sorted_zeros(w) -> list[complex]:
    return sorted((complex(x) for x in w), key=lambda z: (z.real, z.imag))


def zero_report(sys: StateSpace, tol: Tolerance | None = None, force: bool = False) -> ZeroReport:
    """Finite zeros and the four zero-module dimensions, with the counting identity."""
    obs = require_observable(sys, tol, force)
    prof = geo.profile(sys, tol)
    ks = kernel_structure(sys, tol, force=True)
    reach = prof.reach
    vc = mc.join(prof.vstar, prof.cstar, tol)
    dim_WIm = reach.dim - mc.intersect(reach, vc, tol).dim
    dim_Zinf = prof.cstar.dim - prof.rstar.dim
    dim_Wker = ks.nk
    dim_Z = ks.nf
    mcm = mcmillan_degree(sys, tol)
    reachable = reach.dim == sys.n
    notes = []
    if ks.nk != prof.rstar.dim:
        notes.append(f"size(Lambda_k)={ks.nk} differs from dim R*={prof.rstar.dim}")
    total = dim_Z + dim_Zinf + dim_Wker + dim_WIm
    if not obs:
        notes.append("hypothesis violated: (C, A) not observable")
    return ZeroReport(
        finite_zeros=_sorted_zeros(mc.eigenvalues(ks.Lambda_f)),
        virtual_zeros=_sorted_zeros(mc.eigenvalues(ks.Lambda_k)),
        dim_Z=dim_Z,
        dim_Zinf=dim_Zinf,
        dim_Wker=dim_Wker,
        dim_WIm=dim_WIm,
        mcmillan=mcm,
        n=sys.n,
        kernel_indices=list(ks.kernel_indices),
        subspace_dims=prof.dims(),
        observable=obs,
        reachable=reachable,
        identity_holds=(mcm == total),
        hypothesis_violated=not obs,
        notes=notes,
    )


def report_to_json(rep: ZeroReport) -> dict:
    def c(z):
        return [float(z.real), float(z.imag)]

    return {
        "finite_zeros": [c(z) for z in rep.finite_zeros],
        "virtual_zeros": [c(z) for z in rep.virtual_zeros],
        "dim_Z": rep.dim_Z,
        "dim_Zinf": rep.dim_Zinf,
        "dim_Wker": rep.dim_Wker,
        "dim_WIm": rep.dim_WIm,
        "mcmillan": rep.mcmillan,
        "n": rep.n,
        "kernel_indices": list(rep.kernel_indices),
        "subspace_dims": dict(rep.subspace_dims),
        "observable": rep.observable,
        "reachable": rep.reachable,
        "minimal": rep.minimal,
        "identity_holds": rep.identity_holds,
        "hypothesis_violated": rep.hypothesis_violated,
        "notes": list(rep.notes),
    }


def constant_kernel(sys: StateSpace, tol: Tolerance | None = None) -> Subspace:
    """{B eta : D eta = 0} as a state subspace."""
    N = mc.kernel(sys.D, tol, scale=_scale(sys)).basis if sys.q else np.zeros((0, 0))
    return mc.image(sys.B @ N, tol, scale=_scale(sys))


def feedback_system(sys: StateSpace, L) -> StateSpace:
    """(A+BL, B, C+DL, D)."""
    L = np.asarray(L, dtype=complex)
    return StateSpace(sys.A + sys.B @ L, sys.B, sys.C + sys.D @ L, sys.D)


def injection_system(sys: StateSpace, L) -> StateSpace:
    """(A+LC, B+LD, C, D)."""
    L = np.asarray(L, dtype=complex)
    return StateSpace(sys.A + L @ sys.C, sys.B + L @ sys.D, sys.C, sys.D)


__all__ = [
    "ZeroTriple",
    "KernelStructure",
    "ZeroReport",
    "pencil_residual",
    "max_zero_triple",
    "fzk_triple",
    "kernel_generators",
    "staircase_partition",
    "kernel_structure",
    "k0_function",
    "zero_report",
    "report_to_json",
    "constant_kernel",
    "feedback_system",
    "injection_system",
    "is_reachable",
]
