"""State-space realizations F(z) = D + C (zI - A)^{-1} B and their algebra."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrixcore as mc
from .exceptions import DimensionMismatch, PoleHit
from .matrixcore import Subspace, Tolerance


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Complex realization (A, B, C, D) with n states, q inputs and p outputs.

    n = 0 is allowed and represents the constant transfer function D.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        D = mc.as_matrix(self.D)
        p, q = D.shape
        A = mc.as_matrix(self.A)
        if A.size == 0:
            A = np.zeros((0, 0), dtype=complex)
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionMismatch(f"A must be square, got {A.shape}")
        B = mc.as_matrix(self.B, n, q)
        C = mc.as_matrix(self.C, p, n)
        for name, M in zip("ABCD", (A, B, C, D)):
            M = np.array(M, dtype=complex)
            M.setflags(write=False)
            object.__setattr__(self, name, M)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return self.D.shape[0]

    @property
    def q(self) -> int:
        return self.D.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.p, self.q

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def system_matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])

    def scale(self) -> float:
        return max(1.0, mc.norm2(self.system_matrix()))

    def __repr__(self):
        return f"StateSpace(n={self.n}, p={self.p}, q={self.q})"


def constant(D) -> StateSpace:
    D = mc.as_matrix(D)
    return StateSpace(np.zeros((0, 0)), np.zeros((0, D.shape[1])), np.zeros((D.shape[0], 0)), D)


def evaluate(sys: StateSpace, z: complex, tol: Tolerance | None = None) -> np.ndarray:
    """D + C (zI - A)^{-1} B at a single complex point."""
    t = mc.DEFAULT_TOL if tol is None else tol
    if sys.n == 0:
        return np.array(sys.D)
    w = np.linalg.eigvals(sys.A)
    if np.min(np.abs(w - z)) < t.residual_tol:
        raise PoleHit(f"z = {z} is within {t.residual_tol:g} of a pole")
    X = np.linalg.solve(z * np.eye(sys.n) - sys.A, sys.B)
    return sys.D + sys.C @ X


def eval_grid(*systems: StateSpace, exclusion: float = 1e-6) -> list[complex]:
    """Default evaluation points: 0, +-1+-i and 17 points i*omega, omega in [1e-2, 1e2].

    Points within ``exclusion`` of an eigenvalue of any given system are dropped.
    """
    pts = [0j, 1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]
    pts += [1j * w for w in np.logspace(-2, 2, 17)]
    poles = np.concatenate([np.linalg.eigvals(s.A) for s in systems if s.n] or [np.zeros(0)])
    if poles.size == 0:
        return pts
    return [z for z in pts if np.min(np.abs(poles - z)) >= exclusion]


def imag_axis_grid(*systems: StateSpace, exclusion: float = 1e-6) -> list[complex]:
    """The purely imaginary subset of the default grid (including 0)."""
    return [z for z in eval_grid(*systems, exclusion=exclusion) if z.real == 0.0]


def para_conjugate(sys: StateSpace) -> StateSpace:
    """Realization of F*(z) = F(-conj z)^H."""
    return StateSpace(-sys.A.conj().T, -sys.C.conj().T, sys.B.conj().T, sys.D.conj().T)


def dual(sys: StateSpace) -> StateSpace:
    """Transposed system (A^T, C^T, B^T, D^T); its transfer function is F(z)^T."""
    return StateSpace(sys.A.T, sys.C.T, sys.B.T, sys.D.T)


def series(sys1: StateSpace, sys2: StateSpace) -> StateSpace:
    """Realization of the product F1(z) F2(z) (sys2 acts first)."""
    if sys1.q != sys2.p:
        raise DimensionMismatch(f"cannot multiply {sys1.shape} by {sys2.shape}")
    n1, n2 = sys1.n, sys2.n
    A = np.block([[sys1.A, sys1.B @ sys2.C], [np.zeros((n2, n1)), sys2.A]])
    B = np.vstack([sys1.B @ sys2.D, sys2.B])
    C = np.hstack([sys1.C, sys1.D @ sys2.C])
    return StateSpace(A, B, C, sys1.D @ sys2.D)


def hconcat(sys1: StateSpace, sys2: StateSpace) -> StateSpace:
    """Realization of [F1(z), F2(z)] with block-diagonal state."""
    if sys1.p != sys2.p:
        raise DimensionMismatch("row counts differ")
    n1, n2 = sys1.n, sys2.n
    A = np.block([[sys1.A, np.zeros((n1, n2))], [np.zeros((n2, n1)), sys2.A]])
    B = np.block([[sys1.B, np.zeros((n1, sys2.q))], [np.zeros((n2, sys1.q)), sys2.B]])
    return StateSpace(A, B, np.hstack([sys1.C, sys2.C]), np.hstack([sys1.D, sys2.D]))


def shared_state_hconcat(sys1: StateSpace, sys2: StateSpace) -> StateSpace:
    """[F1, F2] when both realizations share (C, A)."""
    return StateSpace(sys1.A, np.hstack([sys1.B, sys2.B]), sys1.C, np.hstack([sys1.D, sys2.D]))


def transform(sys: StateSpace, T: np.ndarray) -> StateSpace:
    """Similarity x = T x'."""
    Ti = np.linalg.inv(T)
    return StateSpace(Ti @ sys.A @ T, Ti @ sys.B, sys.C @ T, sys.D)


def reachable_subspace(sys: StateSpace, tol: Tolerance | None = None) -> Subspace:
    """<A|B> = Im[B, AB, A^2 B, ...] by staircase growth."""
    T, _ = mc.staircase(sys.A, sys.B, tol, scale=max(mc.norm2(sys.A), mc.norm2(sys.B)))
    return Subspace(T)


def unobservable_subspace(sys: StateSpace, tol: Tolerance | None = None) -> Subspace:
    """Largest A-invariant subspace inside ker C."""
    T, _ = mc.staircase(sys.A.conj().T, sys.C.conj().T, tol,
                        scale=max(mc.norm2(sys.A), mc.norm2(sys.C)))
    return mc.ortho_complement(Subspace(T))


def is_reachable(sys: StateSpace, tol: Tolerance | None = None) -> bool:
    return reachable_subspace(sys, tol).dim == sys.n


def is_observable(sys: StateSpace, tol: Tolerance | None = None) -> bool:
    return unobservable_subspace(sys, tol).dim == 0


def is_minimal(sys: StateSpace, tol: Tolerance | None = None) -> bool:
    return is_reachable(sys, tol) and is_observable(sys, tol)


def restrict(sys: StateSpace, T: np.ndarray) -> StateSpace:
    """Compress onto orthonormal columns T (exact when Im T is A-invariant or
    its complement is A-invariant and annihilated by C)."""
    Th = T.conj().T
    return StateSpace(Th @ sys.A @ T, Th @ sys.B, sys.C @ T, sys.D)


def minimal_realization(sys: StateSpace, tol: Tolerance | None = None) -> StateSpace:
    """Kalman reduction: reachable part first, then remove unobservable states."""
    R = reachable_subspace(sys, tol)
    reach = restrict(sys, R.basis) if R.dim < sys.n else sys
    N = unobservable_subspace(reach, tol)
    if N.dim == 0:
        return reach
    O = mc.ortho_complement(N)
    return restrict(reach, O.basis)


def mcmillan_degree(sys: StateSpace, tol: Tolerance | None = None) -> int:
    return minimal_realization(sys, tol).n


def max_grid_error(sys1: StateSpace, sys2: StateSpace, points=None) -> float:
    """max_z || F1(z) - F2(z) || over the grid."""
    pts = eval_grid(sys1, sys2) if points is None else points
    return max((mc.norm2(evaluate(sys1, z) - evaluate(sys2, z)) for z in pts), default=0.0)
