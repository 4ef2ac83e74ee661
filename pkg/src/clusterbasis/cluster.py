"""Labelled seeds of geometric type and their mutations.

Directions are 1-based throughout this module, as in ``mu_1 .. mu_n``.  A seed
keeps each cluster variable as a Laurent polynomial in the initial variables,
so every exchange ends with an exact division by the old variable; a
remainder raises :class:`~clusterbasis.laurent.InexactDivisionError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .kernels import mutate_matrix_array
from .laurent import LaurentPoly, VarContext


class SeedError(ValueError):
    pass


class RankError(ValueError):
    """The extended exchange matrix does not have full column rank."""


class SeparationMismatch(AssertionError):
    """The two forms of the separation formula disagree."""


def mutate_matrix(B, k: int) -> np.ndarray:
    """Mutate an ``m x n`` extended exchange matrix in direction ``k``."""
    B = np.asarray(B, dtype=np.int64)
    if B.ndim != 2 or B.shape[0] < B.shape[1]:
        raise SeedError(f"expected an m x n matrix with m >= n, got shape {B.shape}")
    n = B.shape[1]
    if not 1 <= k <= n:
        raise IndexError(f"direction {k} out of range 1..{n}")
    return mutate_matrix_array(B, k - 1)


@dataclass(frozen=True)
class Seed:
    ctx: VarContext
    matrix: Tuple[Tuple[int, ...], ...]
    cluster: Tuple[LaurentPoly, ...]

    @property
    def n(self) -> int:
        return len(self.cluster)

    @property
    def m(self) -> int:
        return len(self.matrix)

    @property
    def B(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64).reshape(self.m, self.n)

    def coefficient(self, k: int) -> LaurentPoly:
        """``y_k`` read off the bottom block as a monomial in frozen variables."""
        e = [0] * self.ctx.size
        for r in range(self.n, self.m):
            e[r] = self.matrix[r][k - 1]
        return LaurentPoly.monomial(self.ctx, e)

    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.matrix],
            "cluster": [x.to_text() for x in self.cluster],
        }


def initial_seed(B_tilde, ctx: Optional[VarContext] = None) -> Seed:
    """Seed with cluster ``x1..xn`` and extended matrix ``B_tilde``.

    With no context given, an identity bottom block selects principal
    coefficients ``y1..yn``; otherwise the frozen variables are
    ``x{n+1}..x{m}``.
    """
    B = np.asarray(B_tilde, dtype=np.int64)
    if B.ndim != 2 or B.shape[0] < B.shape[1]:
        raise SeedError(f"expected an m x n matrix with m >= n, got shape {B.shape}")
    m, n = B.shape
    top = B[:n]
    if not np.array_equal(np.sign(top), -np.sign(top.T)):
        raise SeedError("top block is not sign-skew-symmetric")
    if ctx is None:
        if m == 2 * n and np.array_equal(B[n:], np.eye(n, dtype=np.int64)):
            ctx = VarContext.principal(n)
        else:
            ctx = VarContext.geometric(n, m)
    if ctx.n_cluster != n or ctx.size != m:
        raise SeedError("variable context does not fit the matrix")
    cluster = tuple(LaurentPoly.var(ctx, ctx.names[i]) for i in range(n))
    return Seed(ctx, tuple(tuple(int(v) for v in row) for row in B), cluster)


def principal_seed(T) -> Seed:
    """Seed of a triangulation with principal coefficients."""
    from .surface import extend_principal, signed_adjacency

    return initial_seed(extend_principal(signed_adjacency(T)))


def _monomial_product(seed: Seed, col: Sequence[int], sign: int) -> LaurentPoly:
    n = seed.n
    frozen = [0] * seed.ctx.size
    out = LaurentPoly.one(seed.ctx)
    for i, b in enumerate(col):
        b *= sign
        if b <= 0:
            continue
        if i < n:
            out = out * seed.cluster[i] ** b
        else:
            frozen[i] = b
    return out.shift(frozen)


def mutate_seed(seed: Seed, k: int) -> Seed:
    """Seed mutation in direction ``k``."""
    n = seed.n
    if not 1 <= k <= n:
        raise IndexError(f"direction {k} out of range 1..{n}")
    B = seed.B
    col = [int(v) for v in B[:, k - 1]]
    exchange = _monomial_product(seed, col, 1) + _monomial_product(seed, col, -1)
    new_x = exchange.exact_divide(seed.cluster[k - 1])
    cluster = list(seed.cluster)
    cluster[k - 1] = new_x
    Bp = mutate_matrix(B, k)
    return Seed(seed.ctx, tuple(tuple(int(v) for v in row) for row in Bp), tuple(cluster))


def mutate_path(seed: Seed, path: Sequence[int]) -> List[Seed]:
    """All seeds visited along ``path``, starting with ``seed`` itself."""
    trace = [seed]
    for k in path:
        trace.append(mutate_seed(trace[-1], int(k)))
    return trace


def variable_by_mutation_path(seed: Seed, path: Sequence[int], slot: int) -> LaurentPoly:
    """Cluster variable in ``slot`` (1-based) after mutating along ``path``."""
    if not 1 <= slot <= seed.n:
        raise IndexError(f"slot {slot} out of range 1..{seed.n}")
    s = seed
    for k in path:
        s = mutate_seed(s, int(k))
    return s.cluster[slot - 1]


def random_paths(n: int, count: int, max_length: int, seed: int = 0) -> List[List[int]]:
    """Reproducible random mutation paths without immediate backtracking."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        length = int(rng.integers(1, max_length + 1))
        path: List[int] = []
        while len(path) < length:
            k = int(rng.integers(1, n + 1))
            if n > 1 and path and path[-1] == k:
                continue
            path.append(k)
        out.append(path)
    return out


# ---------------------------------------------------------------------------
# exact linear algebra


def integer_rank(M) -> int:
    """Rank by fraction-free (Bareiss) elimination."""
    A = [[int(v) for v in row] for row in np.asarray(M, dtype=object).tolist()]
    if not A or not A[0]:
        return 0
    rows, cols = len(A), len(A[0])
    rank, prev = 0, 1
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if A[r][c]), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        for r in range(rank + 1, rows):
            for j in range(c + 1, cols):
                A[r][j] = (A[r][j] * A[rank][c] - A[r][c] * A[rank][j]) // prev
            A[r][c] = 0
        prev = A[rank][c]
        rank += 1
        if rank == rows:
            break
    return rank


def solve_exact(A, b) -> Optional[List[Fraction]]:
    """Solution of ``A z = b`` over the rationals if one exists.

    ``A`` must have independent columns, so the solution is unique.
    """
    M = [[Fraction(int(v)) for v in row] + [Fraction(int(t))] for row, t in zip(np.asarray(A, dtype=object).tolist(), b)]
    rows = len(M)
    cols = len(M[0]) - 1 if M else 0
    piv_cols = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            return None
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, rows):
        if M[i][-1] != 0:
            return None
    return [M[i][-1] for i in range(cols)]


# ---------------------------------------------------------------------------
# separation of additions


def _trop_of_f(F: LaurentPoly, bottom: np.ndarray) -> List[int]:
    """Exponent vector of Trop(F(y)) with y_j = prod_i u_i^{bottom[i, j]}."""
    n = F.ctx.n_cluster
    best = None
    for e in F.terms:
        c = np.array(e[n:], dtype=object)
        v = bottom.astype(object).dot(c) if bottom.size else np.zeros(0, dtype=object)
        best = v if best is None else np.minimum(best, v)
    return [int(a) for a in best]


def separation_specialize(
    X: LaurentPoly,
    F: LaurentPoly,
    g: Sequence[int],
    B_full,
    mode: str = "y-substitution",
) -> LaurentPoly:
    """Transport a principal-coefficient element to the coefficients of ``B_full``.

    The result lives in the context ``x1..xm``.  Both forms are computed and
    compared; ``mode`` only names the one the caller regards as primary.
    """
    if mode not in ("y-substitution", "F-hat"):
        raise ValueError(f"unknown mode {mode!r}")
    Bf = np.asarray(B_full, dtype=np.int64)
    n = X.ctx.n_cluster
    if Bf.ndim != 2 or Bf.shape[1] != n or Bf.shape[0] < n:
        raise SeedError(f"B_full must be m x {n}")
    if integer_rank(Bf) != n:
        raise RankError("extended exchange matrix is rank deficient")
    m = Bf.shape[0]
    target = VarContext.geometric(n, m)
    bottom = Bf[n:]
    trop = [0] * n + _trop_of_f(F, bottom)
    trop_inv = LaurentPoly.monomial(target, [-a for a in trop])

    def mono(e):
        return LaurentPoly.monomial(target, [int(a) for a in e])

    # X(x; y) with y_j = prod_{i>n} x_i^{b_ij}
    assign: Dict[str, LaurentPoly] = {}
    for i in range(n):
        assign[X.ctx.names[i]] = LaurentPoly.var(target, target.names[i])
    for j in range(n):
        e = [0] * n + [int(v) for v in bottom[:, j]]
        assign[X.ctx.names[n + j]] = mono(e)
    first = X.substitute(assign, target) * trop_inv

    # F(y_hat) x^g with y_hat_j = prod_{i<=m} x_i^{b_ij}
    hat = {F.ctx.names[n + j]: mono(Bf[:, j]) for j in range(n)}
    for i in range(n):
        hat[F.ctx.names[i]] = LaurentPoly.one(target)
    xg = mono(list(g) + [0] * (m - n))
    second = F.substitute(hat, target) * trop_inv * xg

    if first != second:
        raise SeparationMismatch(f"{first} != {second}")
    return first if mode == "y-substitution" else second


# ---------------------------------------------------------------------------
# leading terms


@dataclass(frozen=True)
class LeadingTermReport:
    ok: bool
    leaders: Tuple[Optional[Tuple[int, ...]], ...]
    failures: Tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.ok else "fail",
            "leaders": [list(l) if l is not None else None for l in self.leaders],
            "failures": list(self.failures),
        }


def leading_term(u: LaurentPoly) -> Tuple[Optional[Tuple[int, ...]], int]:
    """The unique term free of coefficient variables, and how many there are."""
    n = u.ctx.n_cluster
    free = [e for e in u.terms if not any(e[n:])]
    return (free[0] if len(free) == 1 else None), len(free)


def offsets_over_columns(u: LaurentPoly, lead: Sequence[int], B_tilde) -> List[str]:
    """Problems found when writing each offset from ``lead`` over B-tilde columns."""
    Bt = np.asarray(B_tilde, dtype=np.int64)
    problems = []
    for e in u.terms:
        diff = [a - b for a, b in zip(e, lead)]
        if not any(diff):
            continue
        z = solve_exact(Bt, diff)
        if z is None:
            problems.append(f"offset {diff} is not in the span of the columns")
        elif any(v < 0 for v in z):
            problems.append(f"offset {diff} needs negative weights {[str(v) for v in z]}")
    return problems


def assert_distinct_leading_terms(us: Sequence[LaurentPoly], B_tilde) -> LeadingTermReport:
    Bt = np.asarray(B_tilde, dtype=np.int64)
    failures: List[str] = []
    if integer_rank(Bt) != Bt.shape[1]:
        return LeadingTermReport(False, (), ("columns of B-tilde are dependent",))
    leaders: List[Optional[Tuple[int, ...]]] = []
    for idx, u in enumerate(us):
        lead, count = leading_term(u)
        leaders.append(lead)
        if lead is None:
            failures.append(f"element {idx}: {count} terms free of coefficient variables")
            continue
        failures.extend(f"element {idx}: {p}" for p in offsets_over_columns(u, lead, Bt))
    n = Bt.shape[1]
    seen: Dict[Tuple[int, ...], int] = {}
    for idx, lead in enumerate(leaders):
        if lead is None:
            continue
        key = tuple(lead[:n])
        if key in seen:
            failures.append(f"elements {seen[key]} and {idx} share leading exponent {list(key)}")
        else:
            seen[key] = idx
    return LeadingTermReport(not failures, tuple(leaders), tuple(failures))
