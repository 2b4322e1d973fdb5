"""Exact polynomial-matrix oracle over the rationals.

Everything here uses ``fractions.Fraction``; floating point enters only when
irreducible factors are expanded into numerical roots for comparison with the
state-space pipeline.  sympy is used only for factoring over Q and for
high-precision root finding of the irreducible factors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .exceptions import DimensionMismatch, NonRationalEntries

Rat = Fraction


def to_rat(x) -> Fraction:
    """Exact rational from int, Fraction, "p/q" string or an integral float."""
    if isinstance(x, bool):
        raise NonRationalEntries(f"boolean entry {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise NonRationalEntries(f"cannot parse {x!r} as a rational") from e
    if isinstance(x, (float, np.floating)):
        if np.isfinite(x) and float(x).is_integer():
            return Fraction(int(x))
        raise NonRationalEntries(f"non-integral float {x!r} is not treated as rational")
    if isinstance(x, (complex, np.complexfloating)):
        if x.imag == 0:
            return to_rat(x.real)
        raise NonRationalEntries(f"complex entry {x!r}")
    if isinstance(x, (np.integer,)):
        return Fraction(int(x))
    raise NonRationalEntries(f"unsupported entry {x!r}")


def rat_matrix(M) -> list[list[Fraction]]:
    return [[to_rat(x) for x in row] for row in M]


# ---------------------------------------------------------------- polynomials


class Poly:
    """Univariate polynomial with Fraction coefficients, ascending degree."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def const(cls, a) -> "Poly":
        return cls([a])

    @classmethod
    def z(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, a=1) -> "Poly":
        return cls([0] * k + [a])

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    @property
    def lc(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        other = _poly(other)
        n = max(len(self.c), len(other.c))
        return Poly([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.c])

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        other = _poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = _poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return Poly(), self
        q = [Fraction(0)] * (dq + 1)
        inv = 1 / other.lc
        for k in range(dq, -1, -1):
            a = r[k + other.deg] * inv
            q[k] = a
            if a:
                for j, b in enumerate(other.c):
                    r[k + j] -= a * b
        return Poly(q), Poly(r[: other.deg] if other.deg > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def derivative(self) -> "Poly":
        return Poly([k * a for k, a in enumerate(self.c)][1:])

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, Fraction) else Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + (a if isinstance(x, Fraction) else complex(a))
        return acc

    def to_float(self) -> np.ndarray:
        return np.array([float(a) for a in self.c])

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.deg, -1, -1):
            a = self.c[k]
            if a == 0:
                continue
            s = str(a)
            if k == 0:
                terms.append(s)
            else:
                mono = "z" if k == 1 else f"z^{k}"
                terms.append(mono if a == 1 else "-" + mono if a == -1 else f"{s}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def _poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (the gcd of two zero polynomials is 0)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_gcd_list(polys) -> Poly:
    g = Poly()
    for p in polys:
        g = poly_gcd(g, p)
        if g.deg == 0:
            return g
    return g


# ------------------------------------------------------- rational linear algebra


def rref(M: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = [list(r) for r in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    piv = []
    i = 0
    for j in range(cols):
        k = next((k for k in range(i, rows) if R[k][j] != 0), None)
        if k is None:
            continue
        R[i], R[k] = R[k], R[i]
        inv = 1 / R[i][j]
        R[i] = [a * inv for a in R[i]]
        for k in range(rows):
            if k != i and R[k][j] != 0:
                f = R[k][j]
                R[k] = [a - f * b for a, b in zip(R[k], R[i])]
        piv.append(j)
        i += 1
        if i == rows:
            break
    return R, piv


def rank_q(M) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def nullspace_q(M, cols: int | None = None) -> list[list[Fraction]]:
    """Basis vectors of {x : M x = 0} over Q."""
    ncols = cols if cols is not None else (len(M[0]) if M else 0)
    if not M:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(M)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pj in enumerate(piv):
            x[pj] = -R[r][f]
        basis.append(x)
    return basis


# ------------------------------------------------------------ polynomial matrices


class PolyMatrix:
    """Dense matrix of Poly entries."""

    def __init__(self, entries, rows: int | None = None, cols: int | None = None):
        E = [[_poly(x) if not isinstance(x, Poly) else x for x in row] for row in entries]
        self.rows = len(E) if rows is None else rows
        self.cols = (len(E[0]) if E else 0) if cols is None else cols
        if any(len(r) != self.cols for r in E) or len(E) != self.rows:
            raise DimensionMismatch("ragged polynomial matrix")
        self.e = E

    @classmethod
    def zeros(cls, r: int, c: int) -> "PolyMatrix":
        return cls([[Poly() for _ in range(c)] for _ in range(r)], r, c)

    @classmethod
    def identity(cls, k: int) -> "PolyMatrix":
        return cls([[Poly.const(int(i == j)) for j in range(k)] for i in range(k)], k, k)

    @classmethod
    def from_rational(cls, M) -> "PolyMatrix":
        R = rat_matrix(M)
        return cls([[Poly.const(a) for a in row] for row in R], len(R), len(R[0]) if R else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.e[i][j]

    def copy(self) -> "PolyMatrix":
        return PolyMatrix([list(r) for r in self.e], self.rows, self.cols)

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix([[self.e[i][j] for i in range(self.rows)] for j in range(self.cols)],
                          self.cols, self.rows)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch("incompatible polynomial matrix product")
            out = [[sum((self.e[i][k] * other.e[k][j] for k in range(self.cols)), Poly())
                    for j in range(other.cols)] for i in range(self.rows)]
            return PolyMatrix(out, self.rows, other.cols)
        return PolyMatrix([[a * other for a in r] for r in self.e], self.rows, self.cols)

    def __add__(self, other):
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.e, other.e)],
                          self.rows, self.cols)

    def __sub__(self, other):
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.e, other.e)],
                          self.rows, self.cols)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows and \
            self.cols == other.cols and self.e == other.e

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.e for a in r)

    def col(self, j: int) -> list[Poly]:
        return [self.e[i][j] for i in range(self.rows)]

    def submatrix(self, rows, cols) -> "PolyMatrix":
        return PolyMatrix([[self.e[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def hstack(self, other) -> "PolyMatrix":
        return PolyMatrix([r + s for r, s in zip(self.e, other.e)], self.rows, self.cols + other.cols)

    @property
    def degree(self) -> int:
        return max((a.deg for r in self.e for a in r), default=-1)

    def col_degrees(self) -> list[int]:
        return [max((a.deg for a in self.col(j)), default=-1) for j in range(self.cols)]

    def coeff_matrix(self, k: int) -> list[list[Fraction]]:
        return [[a.coeff(k) for a in r] for r in self.e]

    def leading_col_matrix(self) -> list[list[Fraction]]:
        """V_h: column j holds the coefficient of z^{deg column j}."""
        d = self.col_degrees()
        return [[self.e[i][j].coeff(d[j]) for j in range(self.cols)] for i in range(self.rows)]

    def evaluate(self, x):
        if isinstance(x, Fraction):
            return [[a(x) for a in r] for r in self.e]
        return np.array([[a(complex(x)) for a in r] for r in self.e], dtype=complex).reshape(self.rows, self.cols)

    def det(self) -> Poly:
        """Bareiss fraction-free elimination over Q[z]."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return Poly.const(1)
        M = [list(r) for r in self.e]
        sign = 1
        prev = Poly.const(1)
        for k in range(n - 1):
            if M[k][k].is_zero():
                sw = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
                if sw is None:
                    return Poly()
                M[k], M[sw] = M[sw], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).exact_div(prev)
            prev = M[k][k]
        d = M[n - 1][n - 1]
        return d if sign > 0 else -d

    def minors(self, k: int):
        for rs in combinations(range(self.rows), k):
            for cs in combinations(range(self.cols), k):
                yield self.submatrix(rs, cs).det()

    def rank(self) -> int:
        """Normal rank, from an exact evaluation at a few rational points."""
        if self.rows == 0 or self.cols == 0:
            return 0
        best = 0
        bound = max(self.degree, 0) * min(self.rows, self.cols) + 1
        # a full-rank matrix can drop rank at no more than `bound` points
        for t in range(bound + 1):
            best = max(best, rank_q(self.evaluate(Fraction(t))))
            if best == min(self.rows, self.cols):
                break
        return best

    def __repr__(self):
        return "PolyMatrix([" + "; ".join(", ".join(map(repr, r)) for r in self.e) + "])"


# ---------------------------------------------------------- state space to N/d


def ss_to_rational(A, B, C, D) -> tuple[PolyMatrix, Poly]:
    """F = N / d with d = det(zI - A), via the Faddeev-LeVerrier recursion.

    adj(zI - A) = sum_{k=1}^{n} M_k z^{n-k},  M_1 = I,
    M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k.
    """
    Dq = rat_matrix(D)
    p = len(Dq)
    q = len(Dq[0]) if p else 0
    Aq = rat_matrix(A) if len(A) else []
    n = len(Aq)
    Bq = rat_matrix(B) if n else []
    Cq = rat_matrix(C) if n else [[] for _ in range(p)]
    if n == 0:
        return PolyMatrix.from_rational(Dq) if p else PolyMatrix.zeros(0, q), Poly.const(1)

    def mm(X, Y):
        return [[sum((X[i][k] * Y[k][j] for k in range(len(Y))), Fraction(0)) for j in range(len(Y[0]))]
                for i in range(len(X))]

    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    Ms = [I]
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    AM = mm(Aq, I)
    c[n - 1] = -sum(AM[i][i] for i in range(n))
    for k in range(2, n + 1):
        Mk = [[AM[i][j] + (c[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        Ms.append(Mk)
        AM = mm(Aq, Mk)
        c[n - k] = -sum(AM[i][i] for i in range(n)) / k
    d = Poly(c)
    CMB = [mm(mm(Cq, Mk), Bq) if q else [[] for _ in range(p)] for Mk in Ms]
    N = [[d * Dq[i][j] + Poly([CMB[n - 1 - e][i][j] for e in range(n)]) for j in range(q)] for i in range(p)]
    # coefficient of z^e in the adjugate term is M_{n-e}; CMB index n-1-e holds M_{n-e}
    return PolyMatrix(N, p, q), d


# ------------------------------------------------------------------ Smith form


def smith_form(N: PolyMatrix) -> list[Poly]:
    """Invariant factors (monic, dividing chain) by elementary row/column reduction."""
    M = [list(r) for r in N.e]
    r, c = N.rows, N.cols
    out = []
    t = 0
    while t < min(r, c):
        while True:
            cand = [(M[i][j].deg, i, j) for i in range(t, r) for j in range(t, c) if not M[i][j].is_zero()]
            if not cand:
                return out
            _, i0, j0 = min(cand)
            M[t], M[i0] = M[i0], M[t]
            for row in M:
                row[t], row[j0] = row[j0], row[t]
            piv = M[t][t]
            clean = True
            for i in range(t + 1, r):
                if M[i][t].is_zero():
                    continue
                qt, rem = divmod(M[i][t], piv)
                M[i] = [a - qt * b for a, b in zip(M[i], M[t])]
                clean &= rem.is_zero()
            for j in range(t + 1, c):
                if M[t][j].is_zero():
                    continue
                qt, rem = divmod(M[t][j], piv)
                for row in M:
                    row[j] = row[j] - qt * row[t]
                clean &= rem.is_zero()
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if not (M[i][j] % piv).is_zero()), None)
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        out.append(M[t][t].monic())
        t += 1
    return out


def determinantal_divisors(N: PolyMatrix) -> list[Poly]:
    """d_k = monic gcd of all k x k minors, k = 1..rank (independent Smith cross-check)."""
    out = []
    for k in range(1, min(N.rows, N.cols) + 1):
        g = poly_gcd_list(N.minors(k))
        if g.is_zero():
            break
        out.append(g)
    return out


def invariant_factors_from_divisors(ds: list[Poly]) -> list[Poly]:
    prev = Poly.const(1)
    out = []
    for d in ds:
        out.append(d.exact_div(prev).monic())
        prev = d
    return out


def _to_sympy(p: Poly):
    import sympy

    z = sympy.Symbol("z")
    return sympy.Poly([sympy.Rational(a.numerator, a.denominator) for a in reversed(p.c)] or [0], z,
                      domain="QQ")


def _from_sympy(sp) -> Poly:
    return Poly([Fraction(int(a.p), int(a.q)) for a in reversed(sp.all_coeffs())])


def factor_over_q(p: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors over Q with multiplicity (constant polynomials give [])."""
    if p.deg <= 0:
        return []
    _, facs = _to_sympy(p).factor_list()
    out = [(_from_sympy(f).monic(), int(k)) for f, k in facs]
    out.sort(key=lambda fk: (fk[0].deg, [float(a) for a in fk[0].c]))
    return out


@dataclass(frozen=True)
class Factor:
    """An irreducible factor of a zero or pole polynomial.  ``root`` is set when it is linear."""

    poly: Poly
    multiplicity: int

    @property
    def root(self) -> Fraction | None:
        return -self.poly.c[0] if self.poly.deg == 1 else None

    def numeric_roots(self, digits: int = 30) -> np.ndarray:
        if self.root is not None:
            return np.array([complex(self.root)])
        rts = _to_sympy(self.poly).nroots(n=digits)
        return np.array([complex(r) for r in rts])


@dataclass(frozen=True)
class SmithMcMillan:
    epsilons: list
    psis: list
    zeros: list
    poles: list
    normal_rank: int

    def zero_multiset(self) -> np.ndarray:
        return expand_factors(self.zeros)

    def pole_multiset(self) -> np.ndarray:
        return expand_factors(self.poles)


def _merge_factors(polys: list[Poly]) -> list[Factor]:
    acc: dict[Poly, int] = {}
    for p in polys:
        for f, k in factor_over_q(p):
            acc[f] = acc.get(f, 0) + k
    out = [Factor(f, k) for f, k in acc.items()]
    out.sort(key=lambda F: (F.poly.deg, [float(a) for a in F.poly.c]))
    return out


def expand_factors(factors: list[Factor]) -> np.ndarray:
    parts = [np.repeat(F.numeric_roots(), F.multiplicity) for F in factors]
    return np.concatenate(parts) if parts else np.zeros(0, complex)


def smith_mcmillan(N: PolyMatrix, d: Poly) -> SmithMcMillan:
    """Smith-McMillan form of N / d: eps_i / psi_i with eps_i = e_i/g_i, psi_i = d/g_i, g_i = gcd(e_i, d)."""
    if d.is_zero():
        raise ZeroDivisionError("zero denominator")
    inv = smith_form(N)
    eps, psi = [], []
    for e in inv:
        g = poly_gcd(e, d)
        eps.append(e.exact_div(g).monic())
        psi.append(d.exact_div(g).monic())
    return SmithMcMillan(
        epsilons=eps,
        psis=psi,
        zeros=_merge_factors(eps),
        poles=_merge_factors(psi),
        normal_rank=len(inv),
    )


# ------------------------------------------------------- minimal polynomial bases


def _unimodular_kernel(N: PolyMatrix) -> PolyMatrix:
    """Columns of a unimodular U with N U = [*, 0] spanning ker N over Q[z]."""
    p, q = N.rows, N.cols
    M = [list(r) for r in N.e]
    U = [[Poly.const(int(i == j)) for j in range(q)] for i in range(q)]

    def swap(X, a, b):
        for row in X:
            row[a], row[b] = row[b], row[a]

    def axpy(X, dst, src, f):
        for row in X:
            row[dst] = row[dst] - f * row[src]

    col = 0
    for i in range(p):
        if col >= q:
            break
        while True:
            nz = [(M[i][j].deg, j) for j in range(col, q) if not M[i][j].is_zero()]
            if not nz:
                break
            _, jm = min(nz)
            swap(M, col, jm)
            swap(U, col, jm)
            rest = False
            for j in range(col + 1, q):
                if M[i][j].is_zero():
                    continue
                qt, rem = divmod(M[i][j], M[i][col])
                axpy(M, j, col, qt)
                axpy(U, j, col, qt)
                rest |= not rem.is_zero()
            if not rest:
                break
        if not M[i][col].is_zero():
            col += 1
    return PolyMatrix([row[col:] for row in U], q, q - col)


def column_reduce(V: PolyMatrix) -> PolyMatrix:
    """Unimodular column operations until V_h has full column rank.

    Among the columns involved in a dependency of V_h, the one of largest degree
    is reduced; ties go to the lexicographically larger leading column.
    """
    cols = [V.col(j) for j in range(V.cols)]
    k = len(cols)
    while True:
        W = PolyMatrix([[cols[j][i] for j in range(k)] for i in range(V.rows)], V.rows, k)
        Vh = W.leading_col_matrix()
        ns = nullspace_q(Vh, k)
        if not ns:
            break
        c = ns[0]
        degs = W.col_degrees()
        inv = [j for j in range(k) if c[j] != 0]
        dmax = max(degs[j] for j in inv)
        tied = [j for j in inv if degs[j] == dmax]
        js = max(tied, key=lambda j: tuple(Vh[i][j] for i in range(V.rows)))
        new = list(cols[js])
        for j in inv:
            if j == js:
                continue
            f = Poly.monomial(dmax - degs[j], c[j] / c[js])
            new = [a + f * b for a, b in zip(new, cols[j])]
        cols[js] = new
    return PolyMatrix([[cols[j][i] for j in range(k)] for i in range(V.rows)], V.rows, k)


def _normalize_column(col: list[Poly]) -> list[Poly]:
    first = next((a for a in col if not a.is_zero()), None)
    if first is None:
        return col
    s = 1 / first.lc
    return [a * s for a in col]


def minimal_kernel_basis(N: PolyMatrix) -> PolyMatrix:
    """Minimal polynomial basis of the right null space of N, column degrees ascending.

    Each column is scaled so that its first nonzero entry is monic.
    """
    V = column_reduce(_unimodular_kernel(N))
    cols = [_normalize_column(V.col(j)) for j in range(V.cols)]
    degs = [max((a.deg for a in c), default=-1) for c in cols]
    order = sorted(range(len(cols)), key=lambda j: degs[j])
    return PolyMatrix([[cols[j][i] for j in order] for i in range(N.cols)], N.cols, len(cols))


def minimal_left_kernel_basis(N: PolyMatrix) -> PolyMatrix:
    """Rows spanning the left null space, returned as columns of the transposed problem."""
    return minimal_kernel_basis(N.T)


def degmin(V: PolyMatrix) -> int:
    return sum(max(d, 0) for d in V.col_degrees())


def basis_degrees(V: PolyMatrix) -> list[int]:
    return sorted(max(d, 0) for d in V.col_degrees())


def forney_iv(V: PolyMatrix) -> bool:
    """V(z0) full column rank for every z0 and V_h full column rank."""
    k = V.cols
    if k == 0:
        return True
    if rank_q(V.leading_col_matrix()) < k:
        return False
    g = poly_gcd_list(V.minors(k))
    return not g.is_zero() and g.deg == 0


def kernel_dims_below(N: PolyMatrix, d: int) -> int:
    """dim {v polynomial, deg v < d, N v = 0}, from the exact rank of a block Toeplitz matrix."""
    if d <= 0:
        return 0
    s = max(N.degree, 0)
    q = N.cols
    rows = []
    for k in range(s + d):
        for i in range(N.rows):
            row = []
            for t in range(d):
                row.extend(N.e[i][j].coeff(k - t) for j in range(q))
            rows.append(row)
    return d * q - rank_q(rows)


def forney_iii(N: PolyMatrix, V: PolyMatrix, dmax: int | None = None) -> bool:
    """dim V_d = sum_l (d - nu_l)^+ for d = 1 .. dmax."""
    nus = basis_degrees(V)
    top = (max(nus, default=0) + 1) if dmax is None else dmax
    return all(kernel_dims_below(N, d) == sum(max(d - nu, 0) for nu in nus) for d in range(1, top + 1))


def annihilates(N: PolyMatrix, V: PolyMatrix) -> bool:
    return (N * V).is_zero()


# --------------------------------------------------------- float comparison layer


def match_multisets(a, b) -> float:
    """Largest distance under the optimal pairing; inf if the sizes differ."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, complex).ravel()
    b = np.asarray(b, complex).ravel()
    if a.size != b.size:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def check_at(N: PolyMatrix, d: Poly, sys, z: Fraction = Fraction(2)) -> float:
    """|| N(z)/d(z) - F(z) || at an exact rational point, as a spot check."""
    from .statespace import evaluate

    Nz = np.array([[complex(a) for a in r] for r in N.evaluate(z)], dtype=complex).reshape(N.rows, N.cols)
    dz = complex(d(z))
    return float(np.linalg.norm(Nz / dz - evaluate(sys, complex(z)), 2)) if Nz.size else 0.0


@dataclass(frozen=True)
class OracleReport:
    N: PolyMatrix
    d: Poly
    smm: SmithMcMillan
    kernel_basis: PolyMatrix
    left_kernel_basis: PolyMatrix
    spot_error: float

    @property
    def kernel_degrees(self) -> list[int]:
        return basis_degrees(self.kernel_basis)

    @property
    def left_kernel_degrees(self) -> list[int]:
        return basis_degrees(self.left_kernel_basis)


def oracle(exact: dict, sys=None) -> OracleReport:
    """Full exact analysis of a rational realization given as {"A","B","C","D"} rational arrays."""
    N, d = ss_to_rational(exact["A"], exact["B"], exact["C"], exact["D"])
    smm = smith_mcmillan(N, d)
    kb = minimal_kernel_basis(N)
    lkb = minimal_left_kernel_basis(N)
    spot = check_at(N, d, sys) if sys is not None and not _is_pole(d, Fraction(2)) else 0.0
    return OracleReport(N, d, smm, kb, lkb, spot)


def _is_pole(d: Poly, z: Fraction) -> bool:
    return d(z) == 0
