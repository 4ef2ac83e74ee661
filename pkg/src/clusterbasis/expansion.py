"""Laurent expansions of arcs and loops from (good) perfect matchings."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .cluster import solve_exact
from .laurent import LaurentPoly, VarContext, g_degree, is_g_homogeneous
from .snakegraph import (
    build_band_graph,
    build_snake_graph,
    good_matchings,
    matching_lattice,
)
from .surface import (
    CurveError,
    CurvePath,
    CurveWord,
    Triangulation,
    canonical_path,
    curve_key,
    resolve,
)


class ExpansionError(AssertionError):
    """A structural property of an expansion failed."""


@dataclass(frozen=True)
class ExpansionResult:
    laurent: LaurentPoly
    f_poly: LaurentPoly
    g: Optional[Tuple[int, ...]]
    kind: str
    curve: dict
    triangulation: str
    kinks: int = 0

    def to_json(self) -> dict:
        return {
            "laurent": self.laurent.to_text(),
            "f_polynomial": self.f_poly.to_text(factor=False),
            "g_vector": list(self.g) if self.g is not None else None,
            "kind": self.kind,
            "curve": self.curve,
            "kinks": self.kinks,
            "triangulation": self.triangulation,
        }


def context_for(T: Triangulation) -> VarContext:
    return VarContext.principal(T.n)


def crossing_monomial(T: Triangulation, w) -> LaurentPoly:
    """Product of ``x_tau`` over the crossings, with multiplicity."""
    path = w if isinstance(w, CurvePath) else resolve(T, w)
    ctx = context_for(T)
    e = [0] * ctx.size
    for a in path.crossings:
        e[T.arc_index(a)] += 1
    return LaurentPoly.monomial(ctx, e)


def _x_exponents(T: Triangulation, labels) -> List[int]:
    e = [0] * T.n
    for lab in labels:
        if T.is_arc(lab):
            e[T.arc_index(lab)] += 1
    return e


def _sum_matchings(T, snake, matchings, crossings, drop: Optional[str] = None) -> LaurentPoly:
    ctx = context_for(T)
    n = T.n
    cross = _x_exponents(T, crossings)
    if drop is not None and T.is_arc(drop):
        cross[T.arc_index(drop)] += 1
    diag = [T.arc_index(t.diagonal) for t in snake.tiles]
    terms: Dict[Tuple[int, ...], int] = {}
    for P in matchings:
        xe = _x_exponents(T, (snake.labels[e] for e in P.edges))
        ye = [0] * n
        for t in P.height:
            ye[diag[t - 1]] += 1
        key = tuple(a - c for a, c in zip(xe, cross)) + tuple(ye)
        terms[key] = terms.get(key, 0) + 1
    return LaurentPoly(ctx, terms)


def arc_laurent(T: Triangulation, path: CurvePath) -> LaurentPoly:
    """Matching formula for a resolved open path, in the orientation given."""
    ctx = context_for(T)
    if not path.crossings:
        if T.is_arc(path.edge):
            return LaurentPoly.var(ctx, ctx.names[T.arc_index(path.edge)])
        return LaurentPoly.one(ctx)
    G = build_snake_graph(T, path)
    return _sum_matchings(T, G, matching_lattice(G).matchings, path.crossings)


def loop_laurent(T: Triangulation, path: CurvePath) -> LaurentPoly:
    """Good-matching formula for a closed path, cut at its first triangle."""
    B = build_band_graph(T, path)
    return _sum_matchings(T, B.snake, good_matchings(B), path.crossings, drop=B.cut_label)


class ExpansionCache:
    """Memo table safe to share between threads.

    Two threads may compute the same entry; whichever stores first wins and
    both return equal values.
    """

    def __init__(self):
        self._data: Dict[tuple, ExpansionResult] = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._data.get(key)

    def put(self, key, value):
        with self._lock:
            return self._data.setdefault(key, value)

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self):
        return len(self._data)


CACHE = ExpansionCache()


def _finish(T, laurent, kind, path, kinks) -> ExpansionResult:
    ctx = laurent.ctx
    f = laurent.specialize(ctx.names[: ctx.n_cluster], 1)
    B = _top(T)
    g = is_g_homogeneous(laurent, B) if not laurent.is_zero() else None
    return ExpansionResult(laurent, f, g, kind, path.word().to_json(), T.digest, kinks)


def _top(T):
    from .surface import signed_adjacency

    return signed_adjacency(T)


def expand_arc(T: Triangulation, w, kinks: int = 0, monogon: bool = False) -> ExpansionResult:
    """``x_gamma`` for an arc or generalised arc.

    ``kinks`` counts contractible kinks (each flips the sign); ``monogon``
    marks a curve cutting out a contractible monogon, whose value is 0.
    """
    if kinks < 0:
        raise ValueError("kinks must be non-negative")
    path = canonical_path(T, w)
    if path.kind != "open":
        raise CurveError("expand_arc needs an open word")
    key = (T.digest, "arc", curve_key(T, path), kinks, monogon)
    hit = CACHE.get(key)
    if hit is not None:
        return hit
    ctx = context_for(T)
    if monogon:
        laurent = LaurentPoly.zero(ctx)
    else:
        laurent = arc_laurent(T, path)
        if kinks % 2:
            laurent = -laurent
    return CACHE.put(key, _finish(T, laurent, "arc", path, kinks))


def expand_loop(T: Triangulation, w, kinks: int = 0, contractible: bool = False) -> ExpansionResult:
    """``x_zeta`` for a closed loop; contractible loops give ``-2``."""
    if kinks < 0:
        raise ValueError("kinks must be non-negative")
    ctx = context_for(T)
    if contractible:
        laurent = LaurentPoly.const(ctx, -2)
        word = w.to_json() if isinstance(w, CurveWord) else {"kind": "closed", "crossings": []}
        f = laurent
        return ExpansionResult(laurent, f, tuple([0] * T.n), "loop", word, T.digest, kinks)
    path = canonical_path(T, w)
    if path.kind != "closed":
        raise CurveError("expand_loop needs a closed word")
    key = (T.digest, "loop", curve_key(T, path), kinks)
    hit = CACHE.get(key)
    if hit is not None:
        return hit
    laurent = loop_laurent(T, path)
    if kinks % 2:
        laurent = -laurent
    return CACHE.put(key, _finish(T, laurent, "loop", path, kinks))


def f_polynomial(r: ExpansionResult) -> LaurentPoly:
    """Specialisation ``x_i -> 1``; arcs must have constant term 1."""
    if r.kind == "arc" and not r.laurent.is_zero():
        zero = r.f_poly.ctx.zero_exponents()
        if r.f_poly.coefficient(zero) != 1:
            raise ExpansionError(f"F-polynomial {r.f_poly} does not have constant term 1")
    return r.f_poly


def g_vector(r: ExpansionResult, B) -> Tuple[int, ...]:
    """Degree of the unique coefficient-free term, checked against every term."""
    p = r.laurent
    n = p.ctx.n_cluster
    free = [e for e in p.terms if not any(e[n:])]
    if len(free) != 1:
        raise ExpansionError(f"expected one coefficient-free term, found {len(free)}")
    g = g_degree(free[0], B)
    if is_g_homogeneous(p, B) != g:
        raise ExpansionError("expansion is not homogeneous for the g-grading")
    return g


@dataclass(frozen=True)
class OffsetReport:
    ok: bool
    terms: int
    failures: Tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"status": "pass" if self.ok else "fail", "terms": self.terms, "failures": list(self.failures)}


def verify_offsets(r, B_tilde) -> OffsetReport:
    """Every term is the leading term shifted by B-tilde times its y-exponents.

    Each offset is also solved for over the columns exactly, so a term with
    the right shape but the wrong x-part is caught.
    """
    p = r.laurent if isinstance(r, ExpansionResult) else r
    Bt = np.asarray(B_tilde, dtype=np.int64)
    n = p.ctx.n_cluster
    failures: List[str] = []
    free = [e for e in p.terms if not any(e[n:])]
    if len(free) != 1:
        return OffsetReport(False, len(p), (f"{len(free)} coefficient-free terms",))
    lead = free[0]
    for e in p.terms:
        diff = [a - b for a, b in zip(e, lead)]
        if not any(diff):
            continue
        c = list(e[n:])
        if any(v < 0 for v in c):
            failures.append(f"term {e} has a negative coefficient-variable exponent")
            continue
        predicted = Bt.astype(object).dot(np.array(c, dtype=object))
        if [int(v) for v in predicted] != diff:
            failures.append(f"offset {diff} is not B-tilde times {c}")
            continue
        z = solve_exact(Bt, diff)
        if z is None or any(v < 0 for v in z):
            failures.append(f"offset {diff} has no non-negative decomposition")
    return OffsetReport(not failures, len(p), tuple(failures))
