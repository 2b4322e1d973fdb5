import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from zeromodules import matrixcore as mc
from zeromodules.exceptions import DimensionMismatch, ImaginaryAxisEigenvalue, SpectraOverlap
from zeromodules.matrixcore import Subspace, Tolerance

rng = np.random.default_rng(7)


def span(*cols, n):
    return mc.image(np.array(cols, dtype=float).T.reshape(n, -1))


def e(i, n):
    v = np.zeros(n)
    v[i] = 1
    return v


# ---- image / kernel


def test_image_of_zero_matrix_is_trivial():
    assert mc.image(np.zeros((3, 2))).dim == 0


def test_image_of_identity_is_full_and_unitary():
    S = mc.image(np.eye(3))
    assert S.dim == 3
    assert np.allclose(S.basis.conj().T @ S.basis, np.eye(3))


def test_image_of_rank_one_outer_product():
    S = mc.image([[1, 2], [2, 4]])
    assert S.dim == 1
    v = np.array([1, 2]) / np.sqrt(5)
    assert abs(abs(np.vdot(S.basis[:, 0], v)) - 1) < 1e-12


def test_kernel_examples():
    assert mc.kernel(np.eye(2)).dim == 0
    assert mc.kernel(np.zeros((2, 3))).dim == 3
    K = mc.kernel([[1, 1]])
    assert K.dim == 1
    assert abs(abs(np.vdot(K.basis[:, 0], np.array([1, -1]) / np.sqrt(2))) - 1) < 1e-12


def test_kernel_basis_annihilated():
    M = rng.standard_normal((3, 6))
    K = mc.kernel(M)
    assert np.linalg.norm(M @ K.basis) <= 1e-8 * np.linalg.norm(M, 2)


small_matrices = st.integers(1, 12).flatmap(
    lambda r: st.integers(1, 12).flatmap(
        lambda c: st.integers(0, min(r, c)).map(lambda k: (r, c, k))))


@given(small_matrices, st.integers(0, 2**32 - 1))
def test_rank_nullity(shape, seed):
    r, c, k = shape
    g = np.random.default_rng(seed)
    M = g.standard_normal((r, k)) @ g.standard_normal((k, c))
    assert mc.image(M).dim + mc.kernel(M).dim == c
    assert mc.image(M).dim == k


# ---- lattice operations


def test_coordinate_lattice_examples():
    e1, e2 = span(e(0, 2), n=2), span(e(1, 2), n=2)
    assert mc.intersect(e1, e2).dim == 0
    assert mc.join(e1, e2).dim == 2
    S12 = span(e(0, 3), e(1, 3), n=3)
    S23 = span(e(1, 3), e(2, 3), n=3)
    cap = mc.intersect(S12, S23)
    assert cap.dim == 1
    assert cap.equals(span(e(1, 3), n=3))


def test_ambient_mismatch_raises():
    with pytest.raises(DimensionMismatch):
        mc.intersect(Subspace.full(2), Subspace.full(3))
    with pytest.raises(DimensionMismatch):
        mc.join(Subspace.full(2), Subspace.full(3))


def random_subspace(g, n, k):
    return mc.image(g.standard_normal((n, k)) + 1j * g.standard_normal((n, k)))


@given(st.integers(1, 10), st.data())
def test_complement_is_involution(n, data):
    k = data.draw(st.integers(0, n))
    g = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    S = random_subspace(g, n, k) if k else Subspace.zero(n)
    CC = mc.ortho_complement(mc.ortho_complement(S))
    assert CC.dim == S.dim
    assert max(mc.principal_angles(CC, S), default=0.0) < 1e-7


@given(st.integers(1, 9), st.data())
def test_modularity_integer_identity(n, data):
    g = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    k1 = data.draw(st.integers(1, n))
    k2 = data.draw(st.integers(1, n))
    shared = data.draw(st.integers(0, min(k1, k2)))
    common = g.standard_normal((n, shared))
    S1 = mc.image(np.hstack([common, g.standard_normal((n, k1 - shared))]))
    S2 = mc.image(np.hstack([common, g.standard_normal((n, k2 - shared))]))
    assert S1.dim + S2.dim == mc.intersect(S1, S2).dim + mc.join(S1, S2).dim


def test_principal_angles_small_angle_accuracy():
    eps = 1e-9
    S1 = mc.image(np.array([[1.0], [0.0]]))
    S2 = mc.image(np.array([[1.0], [eps]]))
    assert abs(mc.principal_angles(S1, S2)[0] - eps) < 1e-15


def test_subspace_containment():
    S = span(e(0, 3), e(1, 3), n=3)
    assert span(e(1, 3), n=3).is_subspace_of(S)
    assert not span(e(2, 3), n=3).is_subspace_of(S)


# ---- Sylvester / Lyapunov / Riccati


def test_sylvester_examples():
    assert np.allclose(mc.solve_sylvester([[2]], [[3]], [[10]]), [[2]])
    assert np.allclose(mc.solve_sylvester(np.eye(2), np.eye(2), np.zeros((2, 2))), 0)
    # back-substitution on (A + 2I) X = Q: x2 = 1, 3 x1 + x2 = 3
    X = mc.solve_sylvester([[1, 1], [0, 1]], [[2]], [[3], [3]])
    assert np.allclose(X, [[2 / 3], [1]])


def test_sylvester_overlap_raises():
    with pytest.raises(SpectraOverlap):
        mc.solve_sylvester([[1]], [[-1]], [[1]])


def test_lyapunov_examples():
    assert np.allclose(mc.solve_lyapunov([[-1]], [[2]]), [[1]])
    assert np.allclose(mc.solve_lyapunov(-np.eye(2), np.zeros((2, 2))), 0)
    assert np.allclose(mc.solve_lyapunov([[-1]], [[4]]), [[2]])


def test_lyapunov_overlap_raises():
    with pytest.raises(SpectraOverlap):
        mc.solve_lyapunov([[0, 1], [-1, 0]], np.eye(2))


def test_care_examples():
    s = mc.solve_care([[-1]], [[1]], [[1]])
    assert abs(s[0, 0] - (np.sqrt(2) - 1)) < 1e-12
    assert np.allclose(mc.solve_care(-np.eye(2), np.eye(2), np.zeros((2, 2))), 0)
    s = mc.solve_care([[0]], [[1]], [[1]])
    assert abs(s[0, 0] - 1) < 1e-12
    assert abs((0 - 1 * s[0, 0]) - (-1)) < 1e-12


def test_care_imaginary_axis_raises():
    with pytest.raises(ImaginaryAxisEigenvalue):
        mc.solve_care([[0]], [[0]], [[0]])


def _rand_stable(g, n, cplx=True):
    A = g.standard_normal((n, n)) + (1j * g.standard_normal((n, n)) if cplx else 0)
    return A - (np.linalg.eigvals(A).real.max() + 0.5) * np.eye(n)


def test_solver_residuals_randomized():
    g = np.random.default_rng(2024)
    t = mc.DEFAULT_TOL
    for _ in range(200):
        n = int(g.integers(1, 9))
        A = _rand_stable(g, n)
        Bm = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
        Q = Bm @ Bm.conj().T
        P = mc.solve_lyapunov(A, Q)
        res = mc.norm2(P @ A + A.conj().T @ P + Q)
        assert res <= t.residual_tol * (2 * mc.norm2(A) * mc.norm2(P)) + t.residual_tol * mc.norm2(Q)
        assert np.allclose(P, P.conj().T)
        assert np.linalg.eigvalsh(P).min() >= -1e-10 * mc.norm2(P)

        m = int(g.integers(1, 5))
        Bs = _rand_stable(g, m)
        Qs = g.standard_normal((n, m))
        X = mc.solve_sylvester(A, Bs, Qs)
        res = mc.norm2(A @ X + X @ Bs - Qs)
        assert res <= t.residual_tol * (mc.norm2(A) + mc.norm2(Bs)) * mc.norm2(X) + t.residual_tol * mc.norm2(Qs)

        F = g.standard_normal((n, n))
        Bg = g.standard_normal((n, int(g.integers(1, n + 1))))
        Cq = g.standard_normal((int(g.integers(1, n + 1)), n))
        G, Qc = Bg @ Bg.T, Cq.T @ Cq
        try:
            Xc = mc.solve_care(F, G, Qc)
        except Exception:
            # (F, Bg) or (Cq, F) may fail stabilizability by chance; skip
            continue
        assert mc.norm2(mc.care_residual(F, G, Qc, Xc)) <= mc.care_residual_bound(F, G, Qc, Xc)
        assert np.linalg.eigvals(F - G @ Xc).real.max() < 0


def test_care_stabilizing_solution_dominates_other_selections():
    g = np.random.default_rng(11)
    for _ in range(30):
        n = int(g.integers(1, 5))
        F = g.standard_normal((n, n))
        B = g.standard_normal((n, 1))
        C = g.standard_normal((1, n))
        G, Q = B @ B.T, C.T @ C
        X = mc.solve_care(F, G, Q)
        assert np.linalg.eigvals(F - G @ X).real.max() < 0
        # any other hermitian solution (sign-flipped Schur selection) is not stabilizing
        Hm = np.block([[F, -G], [-Q, -F.T]])
        U, _, _ = mc.ordered_schur(Hm, "unstable")
        Xa = np.linalg.solve(U[:n, :n].T, U[n:, :n].T).T
        assert np.linalg.eigvals(F - G @ Xa).real.min() > 0
        assert np.linalg.eigvalsh((X - Xa + (X - Xa).conj().T) / 2).min() >= -1e-8


# ---- eigenvalues / Schur


def test_eigenvalue_examples():
    w = mc.eigenvalues([[0, 1], [-1, 0]])
    assert np.allclose(sorted(w, key=lambda z: z.imag), [-1j, 1j])
    assert np.allclose(mc.eigenvalues(np.diag([1, 2])), [2, 1])


def test_ordered_schur_puts_stable_first():
    U, T, k = mc.ordered_schur([[-1, 5], [0, 2]], "stable")
    assert k == 1
    assert abs(T[0, 0] + 1) < 1e-12
    assert np.allclose(U @ T @ U.conj().T, [[-1, 5], [0, 2]])


@given(arrays(np.float64, (4, 4), elements=st.floats(-5, 5)))
def test_eigenvalues_sorted_by_real_part(M):
    w = mc.eigenvalues(M)
    assert np.all(np.diff(w.real) <= 1e-9 * (1 + np.abs(w).max()))


def test_tolerance_validation_and_scaling():
    with pytest.raises(ValueError):
        Tolerance(rank_tol=0)
    t = Tolerance.from_scalar(1e-8)
    assert t.rank_tol == 1e-8 and t.residual_tol == pytest.approx(1e-6)


def test_unitary_completion():
    R = np.array([[1], [-1]]) / np.sqrt(2)
    L = mc.unitary_completion(R)
    U = np.hstack([R, L])
    assert np.allclose(U.conj().T @ U, np.eye(2))
    assert np.allclose(L, np.array([[1], [1]]) / np.sqrt(2))


def test_staircase_indices():
    A = np.diag([1.0, 2.0, 3.0], 0) + np.diag([1.0, 1.0], -1)
    B = np.array([[1.0], [0], [0]])
    T, blocks = mc.staircase(A, B)
    assert T.shape[1] == 3 and blocks == [1, 1, 1]
    assert mc.indices_from_blocks(blocks, 1) == [3]
    assert mc.indices_from_blocks([2, 1], 3) == [0, 1, 2]
