"""Dense complex linear algebra used by every other module.

Subspaces are carried as orthonormal bases; rank decisions are made against a
singular-value threshold relative to the largest singular value (or to a
caller-supplied scale when the matrix is a block of a larger computation).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .exceptions import (
    DimensionMismatch,
    ImaginaryAxisEigenvalue,
    NoStabilizingSolution,
    SpectraOverlap,
)


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    rank_tol is relative to the largest singular value, residual_tol is the
    absolute threshold used for equation certificates, angle_tol decides
    subspace equality and intersection (radians).
    """

    rank_tol: float = 1e-10
    residual_tol: float = 1e-8
    angle_tol: float = 1e-7

    def __post_init__(self):
        if not (self.rank_tol > 0 and self.residual_tol > 0 and self.angle_tol > 0):
            raise ValueError("tolerances must be strictly positive")

    @classmethod
    def from_scalar(cls, tol: float) -> "Tolerance":
        """Scale all thresholds from a single rank tolerance (CLI ``--tol``)."""
        return cls(rank_tol=tol, residual_tol=100.0 * tol, angle_tol=max(1e-7, 1e3 * tol))


DEFAULT_TOL = Tolerance()


def _tol(tol: Tolerance | None) -> Tolerance:
    return DEFAULT_TOL if tol is None else tol


def as_matrix(M, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Promote to a 2-D complex array and validate finiteness and shape."""
    M = np.array(M, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    elif M.ndim == 1:
        M = M.reshape(1, -1) if M.size else M.reshape(0, 0)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {M.shape}")
    if rows is not None and M.shape[0] != rows:
        if M.size == 0:
            M = np.zeros((rows, cols if cols is not None else M.shape[1]), dtype=complex)
        else:
            raise DimensionMismatch(f"expected {rows} rows, got {M.shape[0]}")
    if cols is not None and M.shape[1] != cols:
        if M.size == 0:
            M = np.zeros((M.shape[0], cols), dtype=complex)
        else:
            raise DimensionMismatch(f"expected {cols} columns, got {M.shape[1]}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


def _frozen(M: np.ndarray) -> np.ndarray:
    M = np.array(M, dtype=complex)
    M.setflags(write=False)
    return M


def normalize_columns(Q: np.ndarray) -> np.ndarray:
    """Fix the phase of each column: its first largest-modulus entry is real positive."""
    Q = np.array(Q, dtype=complex)
    for j in range(Q.shape[1]):
        col = Q[:, j]
        mags = np.abs(col)
        if mags.size == 0 or mags.max() == 0:
            continue
        k = int(np.argmax(mags > mags.max() * (1 - 1e-9)))
        Q[:, j] = col * (np.conj(col[k]) / mags[k])
    return Q


def norm2(M) -> float:
    M = np.asarray(M)
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def numerical_rank(M, tol: Tolerance | None = None, scale: float | None = None) -> int:
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    ref = max(s[0], scale or 0.0)
    if ref == 0.0:
        return 0
    return int(np.sum(s > _tol(tol).rank_tol * ref))


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of C^n represented by an orthonormal basis (n x dim)."""

    basis: np.ndarray
    tol: float = DEFAULT_TOL.rank_tol
    ambient_dim: int = field(init=False)

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=complex)
        if B.ndim != 2:
            raise DimensionMismatch("basis must be 2-D")
        object.__setattr__(self, "basis", _frozen(B))
        object.__setattr__(self, "ambient_dim", B.shape[0])

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0), dtype=complex))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n, dtype=complex))

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def contains(self, vectors, tol: Tolerance | None = None) -> bool:
        """True if every column of ``vectors`` lies in the subspace (relative residual)."""
        V = np.asarray(vectors, dtype=complex)
        if V.size == 0:
            return True
        resid = V - self.basis @ (self.basis.conj().T @ V)
        return norm2(resid) <= _tol(tol).residual_tol * max(1.0, norm2(V))

    def is_subspace_of(self, other: "Subspace", tol: Tolerance | None = None) -> bool:
        _check_ambient(self, other)
        if self.dim == 0:
            return True
        if self.dim > other.dim:
            return False
        return max(principal_angles(self, other)) < _tol(tol).angle_tol

    def equals(self, other: "Subspace", tol: Tolerance | None = None) -> bool:
        _check_ambient(self, other)
        if self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        return max(principal_angles(self, other)) < _tol(tol).angle_tol

    def conj(self) -> "Subspace":
        return Subspace(self.basis.conj(), self.tol)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def _check_ambient(S1: Subspace, S2: Subspace):
    if S1.ambient_dim != S2.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {S1.ambient_dim} vs {S2.ambient_dim}"
        )


def image(M, tol: Tolerance | None = None, scale: float | None = None) -> Subspace:
    """Column space of ``M`` at the numerical rank threshold."""
    t = _tol(tol)
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if M.size == 0:
        return Subspace.zero(n)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    ref = max(s[0], scale or 0.0)
    r = int(np.sum(s > t.rank_tol * ref)) if ref > 0 else 0
    return Subspace(normalize_columns(U[:, :r]), t.rank_tol)


def kernel(M, tol: Tolerance | None = None, scale: float | None = None) -> Subspace:
    """Right null space of ``M``."""
    t = _tol(tol)
    M = np.asarray(M, dtype=complex)
    ncols = M.shape[1]
    if ncols == 0:
        return Subspace.zero(0)
    if M.shape[0] == 0:
        return Subspace.full(ncols)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    ref = max(s[0] if s.size else 0.0, scale or 0.0)
    r = int(np.sum(s > t.rank_tol * ref)) if ref > 0 else 0
    return Subspace(normalize_columns(Vh[r:].conj().T), t.rank_tol)


def left_kernel(M, tol: Tolerance | None = None, scale: float | None = None) -> Subspace:
    """Subspace of vectors w with w^H M = 0."""
    return kernel(np.asarray(M, dtype=complex).conj().T, tol, scale)


def ortho_complement(S: Subspace) -> Subspace:
    n = S.ambient_dim
    if S.dim == 0:
        return Subspace.full(n)
    if S.dim == n:
        return Subspace.zero(n)
    Q, _ = np.linalg.qr(S.basis, mode="complete")
    return Subspace(normalize_columns(Q[:, S.dim:]), S.tol)


def join(S1: Subspace, S2: Subspace, tol: Tolerance | None = None) -> Subspace:
    _check_ambient(S1, S2)
    return image(np.hstack([S1.basis, S2.basis]), tol, scale=1.0)


def intersect(S1: Subspace, S2: Subspace, tol: Tolerance | None = None) -> Subspace:
    """Directions of S2 whose sine-distance to S1 is below the angle tolerance."""
    _check_ambient(S1, S2)
    t = _tol(tol)
    n = S1.ambient_dim
    if S1.dim == 0 or S2.dim == 0:
        return Subspace.zero(n)
    Q1, Q2 = S1.basis, S2.basis
    if S2.dim > S1.dim:
        Q1, Q2 = Q2, Q1
    R = Q2 - Q1 @ (Q1.conj().T @ Q2)
    _, s, Vh = np.linalg.svd(R, full_matrices=True)
    sines = np.zeros(Q2.shape[1])
    sines[: s.size] = s
    k = int(np.sum(sines < t.angle_tol))
    if k == 0:
        return Subspace.zero(n)
    V = Vh.conj().T[:, Q2.shape[1] - k:]
    X = Q2 @ V
    Qx, _ = np.linalg.qr(X)
    return Subspace(normalize_columns(Qx), t.rank_tol)


def principal_angles(S1: Subspace, S2: Subspace) -> list[float]:
    """Principal angles (ascending), accurate for small angles via sines."""
    _check_ambient(S1, S2)
    if S1.dim == 0 or S2.dim == 0:
        return []
    Q1, Q2 = S1.basis, S2.basis
    if Q2.shape[1] > Q1.shape[1]:
        Q1, Q2 = Q2, Q1
    k = Q2.shape[1]
    cos = np.clip(np.linalg.svd(Q1.conj().T @ Q2, compute_uv=False), 0.0, 1.0)[::-1]
    R = Q2 - Q1 @ (Q1.conj().T @ Q2)
    sin = np.zeros(k)
    sv = np.linalg.svd(R, compute_uv=False)
    sin[: sv.size] = sv
    sin = np.clip(np.sort(sin), 0.0, 1.0)
    cos = np.sort(cos)[::-1]
    angles = np.where(cos**2 < 0.5, np.arccos(cos), np.arcsin(sin))
    return sorted(float(a) for a in angles)


def eigenvalues(M) -> np.ndarray:
    """Eigenvalues in nonincreasing real-part order (ties by imaginary part)."""
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return np.zeros(0, dtype=complex)
    w = np.linalg.eigvals(M)
    order = np.lexsort((-w.imag, -w.real))
    return w[order]


def ordered_schur(M, select: str = "stable"):
    """Complex Schur form with the selected half-plane eigenvalues leading.

    Returns (U, T, k) with M = U T U^H and k the number of selected eigenvalues.
    """
    if select not in ("stable", "unstable"):
        raise ValueError("select must be 'stable' or 'unstable'")
    M = np.asarray(M, dtype=complex)
    sort = "lhp" if select == "stable" else "rhp"
    T, U, k = sla.schur(M, output="complex", sort=sort)
    return U, T, int(k)


def solve_sylvester(A, B, Q, tol: Tolerance | None = None) -> np.ndarray:
    """Solve AX + XB = Q (Bartels-Stewart)."""
    t = _tol(tol)
    A, B, Q = (np.asarray(M, dtype=complex) for M in (A, B, Q))
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((A.shape[0], B.shape[0]), dtype=complex)
    scale = max(1.0, norm2(A) + norm2(B))
    sep = np.min(np.abs(np.add.outer(np.linalg.eigvals(A), np.linalg.eigvals(B))))
    if sep < t.residual_tol * scale:
        raise SpectraOverlap(f"min |eig(A)+eig(B)| = {sep:.3e}")
    return sla.solve_sylvester(A, B, Q)


def solve_lyapunov(A, Q, tol: Tolerance | None = None) -> np.ndarray:
    """Hermitian P with P A + A^H P + Q = 0."""
    t = _tol(tol)
    A, Q = np.asarray(A, dtype=complex), np.asarray(Q, dtype=complex)
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    w = np.linalg.eigvals(A)
    sep = np.min(np.abs(np.add.outer(w.conj(), w)))
    if sep < t.residual_tol * max(1.0, 2 * norm2(A)):
        raise SpectraOverlap(f"A and -A^H share eigenvalues (gap {sep:.3e})")
    P = sla.solve_continuous_lyapunov(A.conj().T, -Q)
    return (P + P.conj().T) / 2


def care_residual(F, G, Q, X) -> np.ndarray:
    return X @ F + F.conj().T @ X - X @ G @ X + Q


def solve_care(F, G, Q, tol: Tolerance | None = None, refine_steps: int = 5) -> np.ndarray:
    """Stabilizing solution of  X F + F^H X - X G X + Q = 0  (G, Q hermitian PSD).

    Hamiltonian Schur method with stable-subspace selection, followed by at most
    ``refine_steps`` Newton-Kleinman iterations kept only while the residual drops.
    """
    t = _tol(tol)
    F, G, Q = (np.asarray(M, dtype=complex) for M in (F, G, Q))
    n = F.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    Hm = np.block([[F, -G], [-Q, -F.conj().T]])
    hscale = max(1.0, norm2(Hm))
    w = np.linalg.eigvals(Hm)
    if np.min(np.abs(w.real)) < t.residual_tol * hscale:
        raise ImaginaryAxisEigenvalue(
            f"Hamiltonian eigenvalue within {np.min(np.abs(w.real)):.3e} of the imaginary axis"
        )
    U, _, k = ordered_schur(Hm, "stable")
    if k != n:
        raise NoStabilizingSolution(f"stable invariant subspace has dimension {k}, need {n}")
    U1, U2 = U[:n, :n], U[n:, :n]
    if np.linalg.cond(U1) > 1.0 / t.rank_tol:
        raise NoStabilizingSolution("stable invariant subspace is not complementary")
    X = np.linalg.solve(U1.T, U2.T).T
    X = (X + X.conj().T) / 2

    res = norm2(care_residual(F, G, Q, X))
    for _ in range(refine_steps):
        if res == 0.0:
            break
        Acl = F - G @ X
        try:
            Xn = solve_lyapunov(Acl, X @ G @ X + Q, t)
        except SpectraOverlap:
            break
        rn = norm2(care_residual(F, G, Q, Xn))
        if not rn < res:
            break
        X, res = Xn, rn

    cl = np.linalg.eigvals(F - G @ X)
    if np.max(cl.real) >= 0:
        raise NoStabilizingSolution("closed loop F - G X is not asymptotically stable")
    return X


def care_residual_bound(F, G, Q, X, tol: Tolerance | None = None) -> float:
    t = _tol(tol)
    nx = norm2(X)
    return t.residual_tol * (nx * (2 * norm2(F) + norm2(G) * nx) + norm2(Q) + 1e-300)


def unitary_completion(R: np.ndarray) -> np.ndarray:
    """Columns L with [R, L] unitary, for R with orthonormal columns (Householder QR)."""
    R = np.asarray(R, dtype=complex)
    q, m = R.shape
    if m == 0:
        return np.eye(q, dtype=complex)
    if m == q:
        return np.zeros((q, 0), dtype=complex)
    Qf, _ = np.linalg.qr(R, mode="complete")
    return normalize_columns(Qf[:, m:])


def staircase(A, B, tol: Tolerance | None = None, scale: float | None = None):
    """Controllability staircase of (A, B).

    Returns (T, blocks): T has orthonormal columns spanning the reachable
    subspace, ordered block by block; ``blocks`` lists the staircase block
    sizes (a nonincreasing sequence).
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    n = A.shape[0]
    if n == 0 or B.size == 0:
        return np.zeros((n, 0), dtype=complex), []
    if scale is None:
        scale = max(norm2(A), norm2(B))
    first = image(B, tol, scale=scale)
    T = first.basis
    last = first.basis
    blocks = []
    while last.shape[1] > 0:
        blocks.append(last.shape[1])
        if T.shape[1] >= n:
            break
        Z = A @ last
        Z = Z - T @ (T.conj().T @ Z)
        Z = Z - T @ (T.conj().T @ Z)
        nxt = image(Z, tol, scale=scale)
        last = nxt.basis
        T = np.hstack([T, last])
    return T, blocks


def indices_from_blocks(blocks: list[int], m: int) -> list[int]:
    """Conjugate partition of staircase block sizes, padded with zeros to m entries."""
    idx = [sum(1 for b in blocks if b > j) for j in range(m)]
    return sorted(idx)
