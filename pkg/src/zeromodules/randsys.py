"""Seeded generators of random test realizations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .statespace import StateSpace, is_minimal


@dataclass(frozen=True)
class RandomSystemConfig:
    max_n: int = 8
    max_p: int = 4
    max_q: int = 4
    p_rank_deficient: float = 0.4
    p_stable: float = 0.5
    p_complex: float = 0.0
    p_strictly_proper: float = 0.1


def random_system(rng: np.random.Generator, cfg: RandomSystemConfig = RandomSystemConfig(),
                  n: int | None = None, p: int | None = None, q: int | None = None,
                  stable: bool | None = None) -> StateSpace:
    """A random minimal realization.  D is rank-deficient with probability p_rank_deficient."""
    while True:
        nn = int(rng.integers(1, cfg.max_n + 1)) if n is None else n
        pp = int(rng.integers(1, cfg.max_p + 1)) if p is None else p
        qq = int(rng.integers(1, cfg.max_q + 1)) if q is None else q
        cplx = rng.random() < cfg.p_complex

        def g(*shape):
            M = rng.standard_normal(shape)
            if cplx:
                M = M + 1j * rng.standard_normal(shape)
            return M

        A = g(nn, nn)
        B = g(nn, qq)
        C = g(pp, nn)
        if rng.random() < cfg.p_strictly_proper:
            D = np.zeros((pp, qq))
        elif rng.random() < cfg.p_rank_deficient and min(pp, qq) > 0:
            r = int(rng.integers(0, min(pp, qq)))
            D = g(pp, r) @ g(r, qq) if r else np.zeros((pp, qq))
        else:
            D = g(pp, qq)
        st = rng.random() < cfg.p_stable if stable is None else stable
        if st:
            w = np.linalg.eigvals(A)
            A = A - (w.real.max() + 0.1 + rng.random()) * np.eye(nn)
        sys = StateSpace(A, B, C, D)
        if is_minimal(sys):
            return sys


def random_systems(seed: int, count: int, cfg: RandomSystemConfig = RandomSystemConfig(), **kw) -> list[StateSpace]:
    rng = np.random.default_rng(seed)
    return [random_system(rng, cfg, **kw) for _ in range(count)]


def random_rational_system(rng: np.random.Generator, max_n: int = 4, max_p: int = 3, max_q: int = 3,
                           lo: int = -3, hi: int = 3):
    """Small-integer realization; returns (StateSpace, exact Fraction mirror dict)."""
    while True:
        n = int(rng.integers(1, max_n + 1))
        p = int(rng.integers(1, max_p + 1))
        q = int(rng.integers(1, max_q + 1))
        A = rng.integers(lo, hi + 1, (n, n))
        B = rng.integers(lo, hi + 1, (n, q))
        C = rng.integers(lo, hi + 1, (p, n))
        if rng.random() < 0.4:
            r = int(rng.integers(0, min(p, q)))
            D = rng.integers(-1, 2, (p, r)) @ rng.integers(-1, 2, (r, q)) if r else np.zeros((p, q), int)
        else:
            D = rng.integers(-2, 3, (p, q))
        sys = StateSpace(A.astype(float), B.astype(float), C.astype(float), D.astype(float))
        if not is_minimal(sys):
            continue
        exact = {k: [[Fraction(int(x)) for x in row] for row in M] for k, M in zip("ABCD", (A, B, C, D))}
        return sys, exact
