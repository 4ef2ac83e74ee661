"""Chebyshev polynomials, bangles and bracelets, and the verification suites.

Every ``verify_*`` function returns a :class:`CheckResult` rather than
raising, so that suites can run many instances and report them together.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cluster import assert_distinct_leading_terms
from .expansion import (
    ExpansionResult,
    context_for,
    expand_arc,
    expand_loop,
    g_vector,
    verify_offsets,
)
from .families import Annulus, CatalogCurve, Polygon, _interleave, parse_family
from .laurent import LaurentPoly, VarContext
from .snakegraph import build_band_graph, good_matchings
from .surface import (
    CurveWord,
    Triangulation,
    canonical_word,
    concatenate_closed,
    crossing_counts,
    flip,
    resolve,
    signed_adjacency,
)

CHEB_CTX = VarContext(("x", "Y"), 1)
_T_Y_CTX = VarContext(("t", "Y"), 1)


@dataclass(frozen=True)
class CheckResult:
    check: str
    instance: str
    ok: bool
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "instance": self.instance,
            "status": "pass" if self.ok else "fail",
            "witness": self.witness,
        }


# ---------------------------------------------------------------------------
# Chebyshev polynomials


_CHEB: List[LaurentPoly] = [LaurentPoly.const(CHEB_CTX, 2), LaurentPoly.var(CHEB_CTX, "x")]


def chebyshev_T(k: int) -> LaurentPoly:
    """Normalised Chebyshev polynomial ``T_k`` in ``x`` with parameter ``Y``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    x = LaurentPoly.var(CHEB_CTX, "x")
    Y = LaurentPoly.var(CHEB_CTX, "Y")
    while len(_CHEB) <= k:
        _CHEB.append(x * _CHEB[-1] - Y * _CHEB[-2])
    return _CHEB[k]


def chebyshev_coefficients(k: int) -> Dict[Tuple[int, int], int]:
    """``T_k`` as ``{(power of x, power of Y): coefficient}``."""
    return {(e[0], e[1]): c for e, c in chebyshev_T(k).items()}


def chebyshev_text(k: int) -> str:
    """``T_k`` written with descending powers of ``x``."""
    parts = []
    for (a, b), c in sorted(chebyshev_coefficients(k).items(), reverse=True):
        mono = "*".join(
            s for s in (f"x^{a}" if a > 1 else ("x" if a == 1 else ""), f"Y^{b}" if b > 1 else ("Y" if b == 1 else "")) if s
        )
        mag = abs(c)
        body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


def verify_chebyshev_identity(k: int) -> bool:
    """``T_k(t + Y/t) == t^k + Y^k / t^k`` in Laurent variables ``t, Y``."""
    t = LaurentPoly.var(_T_Y_CTX, "t")
    Y = LaurentPoly.var(_T_Y_CTX, "Y")
    arg = t + Y * t ** -1
    lhs = chebyshev_T(k).substitute({"x": arg, "Y": Y}, _T_Y_CTX)
    rhs = t ** k + Y ** k * t ** (-k) if k else LaurentPoly.const(_T_Y_CTX, 2)
    return lhs == rhs


@dataclass(frozen=True)
class ChebyshevTerm:
    """``coeff * Y^power * T_index``; ``T_0`` stands for the constant 1 here."""

    index: int
    coeff: int
    power: int


def monomial_to_chebyshev(k: int) -> List[ChebyshevTerm]:
    """``x^k`` as a positive combination of ``T_k, T_{k-2}, ...``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return [ChebyshevTerm(k - 2 * i, comb(k, i), i) for i in range(k // 2 + 1)]


def resubstitute(terms: Sequence[ChebyshevTerm]) -> LaurentPoly:
    Y = LaurentPoly.var(CHEB_CTX, "Y")
    out = LaurentPoly.zero(CHEB_CTX)
    for term in terms:
        base = chebyshev_T(term.index) if term.index else LaurentPoly.one(CHEB_CTX)
        out = out + base * Y ** term.power * term.coeff
    return out


def evaluate_chebyshev(k: int, x: LaurentPoly, Y: LaurentPoly) -> LaurentPoly:
    """``T_k`` with ``x`` and ``Y`` replaced by Laurent polynomials."""
    return chebyshev_T(k).substitute({"x": x, "Y": Y}, x.ctx)


# ---------------------------------------------------------------------------
# bracelets


def bracelet_word(T: Triangulation, w, k: int) -> CurveWord:
    """``Brac_k``: the loop ``w`` run ``k`` times."""
    return canonical_word(T, concatenate_closed(T, w, k))


def loop_coefficient(T: Triangulation, w) -> LaurentPoly:
    """``Y_zeta``: product of ``y_tau`` over the crossings of the loop."""
    ctx = context_for(T)
    e = [0] * ctx.size
    for a, c in crossing_counts(T, w).items():
        e[T.n + T.arc_index(a)] += c
    return LaurentPoly.monomial(ctx, e)


def verify_bracelet_chebyshev(T: Triangulation, w, k: int) -> CheckResult:
    zeta = expand_loop(T, w).laurent
    lhs = expand_loop(T, bracelet_word(T, w, k)).laurent
    rhs = evaluate_chebyshev(k, zeta, loop_coefficient(T, w))
    word = " ".join(resolve(T, w).crossings)
    return CheckResult(
        "chebyshev",
        f"{T.name or T.digest} ({word}) k={k}",
        lhs == rhs,
        {"bracelet_terms": len(lhs), "difference": (lhs - rhs).to_text(factor=False)},
    )


def good_counts(T: Triangulation, w, upto: int) -> List[int]:
    """``|Good(Brac_j)|`` for ``j = 0..upto`` with the value 2 at ``j = 0``."""
    counts = [2]
    for j in range(1, upto + 1):
        counts.append(len(good_matchings(build_band_graph(T, bracelet_word(T, w, j)))))
    return counts


def verify_good_count_inequality(T: Triangulation, w, k: int) -> CheckResult:
    """Recurrence ``g_{k+1} = g_1 g_k - g_{k-1}`` (``g_0 = 2``) and ``g_{k+1} < g_1 g_k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    g = good_counts(T, w, k + 1)
    recurrence = g[k + 1] == g[1] * g[k] - g[k - 1]
    strict = g[k + 1] < g[1] * g[k]
    return CheckResult(
        "counts",
        f"{T.name or T.digest} k={k}",
        recurrence and strict,
        {"counts": g, "recurrence": recurrence, "strict": strict, "boundary_value": 2},
    )


# ---------------------------------------------------------------------------
# Ptolemy relations


def _is_y_monomial(p: LaurentPoly) -> bool:
    if not p.is_monomial():
        return False
    e, c = p.as_monomial()
    n = p.ctx.n_cluster
    return c == 1 and not any(e[:n]) and all(a >= 0 for a in e[n:])


def solve_ptolemy(lhs: LaurentPoly, A: LaurentPoly, B: LaurentPoly) -> List[Tuple[LaurentPoly, LaurentPoly]]:
    """All pairs of y-monomials ``(Y1, Y2)`` with ``lhs = Y1*A + Y2*B``."""
    solutions = []
    seen = set()
    ctx = lhs.ctx
    for el, _ in lhs.items():
        for ea, _ in A.items():
            y1 = LaurentPoly.monomial(ctx, [a - b for a, b in zip(el, ea)])
            if not _is_y_monomial(y1) or y1 in seen:
                continue
            seen.add(y1)
            rest = lhs - y1 * A
            if rest.is_zero() or B.is_zero():
                continue
            ex, cx = next(iter(rest.items()))
            eb, cb = next(iter(B.items()))
            if cb == 0 or cx % cb:
                continue
            y2 = LaurentPoly.monomial(ctx, [a - b for a, b in zip(ex, eb)], cx // cb)
            if _is_y_monomial(y2) and y2 * B == rest:
                solutions.append((y1, y2))
    return solutions


def _ptolemy_result(name, lhs, A, B, witness) -> CheckResult:
    sols = solve_ptolemy(lhs, A, B)
    distinct = {(s[0], s[1]) for s in sols}
    if A == B:
        distinct = {tuple(sorted(s, key=lambda p: p.to_text())) for s in distinct}
    ok = len(distinct) == 1
    one = LaurentPoly.one(lhs.ctx)
    if ok:
        y1, y2 = next(iter(distinct))
        exactly_one = (y1 == one) != (y2 == one)
        ok = exactly_one
        witness = dict(witness, Y=y1.to_text(), Y_prime=y2.to_text(), exactly_one_is_1=exactly_one)
    else:
        witness = dict(witness, solutions=len(distinct))
    return CheckResult("ptolemy", name, ok, witness)


def _value(T: Triangulation, w) -> LaurentPoly:
    return expand_arc(T, w).laurent


def verify_ptolemy(T: Triangulation, arc: str) -> CheckResult:
    """Exchange relation at the flip of ``arc``, from snake-graph expansions."""
    _, quad = flip(T, arc)
    a, b, c, d = quad.sides
    t1 = quad.old_triangles[0]
    eta = _value(T, CurveWord("open", (), None, None, arc))
    theta = _value(T, CurveWord("open", (arc,), None, t1))

    def side(e):
        return _value(T, CurveWord("open", (), None, None, e))

    lhs = eta * theta
    A = side(a) * side(c)
    B = side(b) * side(d)
    return _ptolemy_result(
        f"{T.name or T.digest} flip {arc}", lhs, A, B, {"sides": [a, b, c, d]}
    )


def polygon_quadrilaterals(P: Polygon):
    """Every quadrilateral ``i < j < k < l`` of marked points."""
    return list(combinations(range(P.n), 4))


def verify_ptolemy_polygon(P: Polygon, quad) -> CheckResult:
    """Ptolemy relation for the quadrilateral with corners ``quad``."""
    T = P.triangulation()
    i, j, k, l = quad

    def val(u, v):
        if (v - u) % P.n in (1, P.n - 1):
            return LaurentPoly.one(context_for(T))
        return _value(T, P.arc_word(u, v))

    lhs = val(i, k) * val(j, l)
    A = val(i, j) * val(k, l)
    B = val(j, k) * val(l, i)
    return _ptolemy_result(f"{P.name} quadrilateral {quad}", lhs, A, B, {"corners": list(quad)})


def annulus_quadrilaterals(Ann: Annulus, window: int = 1):
    """Embedded quadrilaterals with corners among lifted marked points.

    Corners are taken in a window of the strip; a quadrilateral qualifies
    when its six chords meet neither their own translates nor each other
    (apart from the two diagonals) anywhere on the surface.
    """
    pts = [("T", a) for a in range(-window * Ann.p, (window + 1) * Ann.p)] + [
        ("B", b) for b in range(-window * Ann.q, (window + 1) * Ann.q)
    ]
    pts.sort(key=Ann._bkey)
    seen = set()
    out = []
    for quad in combinations(pts, 4):
        chords = [(quad[0], quad[1]), (quad[1], quad[2]), (quad[2], quad[3]), (quad[3], quad[0]),
                  (quad[0], quad[2]), (quad[1], quad[3])]
        curves = [CatalogCurve(CurveWord("open", ()), "arc", ("chord", u, v)) for u, v in chords]
        ok = True
        for x in range(6):
            if Ann.crosses(curves[x], curves[x]):
                ok = False
                break
            for y in range(x + 1, 6):
                if {x, y} == {4, 5}:
                    continue
                if Ann.crosses(curves[x], curves[y]):
                    ok = False
                    break
            if not ok:
                break
        if not ok or _diagonals_cross_more(Ann, curves[4], curves[5]):
            continue
        key = _quad_key(Ann, quad)
        if key in seen:
            continue
        seen.add(key)
        out.append(quad)
    return out


def _diagonals_cross_more(Ann: Annulus, c1, c2) -> bool:
    """True when the two diagonals cross more than once on the surface."""
    g1, g2 = c1.geometry, c2.geometry
    count = 0
    for m in range(-6, 7):
        v1 = (g2[1][0], g2[1][1] + (Ann.p if g2[1][0] == "T" else Ann.q) * m)
        v2 = (g2[2][0], g2[2][1] + (Ann.p if g2[2][0] == "T" else Ann.q) * m)
        if _interleave((Ann._bkey(g1[1]), Ann._bkey(g1[2])), (Ann._bkey(v1), Ann._bkey(v2))):
            count += 1
    return count != 1


def _quad_key(Ann: Annulus, quad):
    # normalise by the deck transformation so translates count once
    best = None
    for m in range(-4, 5):
        shifted = tuple(
            (s, i + (Ann.p if s == "T" else Ann.q) * m) for s, i in quad
        )
        key = tuple(sorted(shifted))
        best = key if best is None or key < best else best
    return best


def verify_ptolemy_annulus(Ann: Annulus, quad) -> CheckResult:
    T = Ann.triangulation()

    def val(u, v):
        w = Ann.chord_word(u, v)
        if not w.crossings and not T.is_arc(w.edge):
            return LaurentPoly.one(context_for(T))
        return _value(T, w)

    q0, q1, q2, q3 = quad
    lhs = val(q0, q2) * val(q1, q3)
    A = val(q0, q1) * val(q2, q3)
    B = val(q1, q2) * val(q3, q0)
    return _ptolemy_result(
        f"{Ann.name} quadrilateral {quad}", lhs, A, B, {"corners": [list(p) for p in quad]}
    )


# ---------------------------------------------------------------------------
# basis elements


@dataclass(frozen=True)
class BasisBound:
    """Limits for enumeration: word length, total degree and bracelet size.

    ``max_word_length=None`` means no limit (fine for polygons, whose arcs
    are finite in number).
    """

    max_word_length: Optional[int]
    max_degree: int
    max_k: int

    @classmethod
    def coerce(cls, bound, family) -> "BasisBound":
        if isinstance(bound, BasisBound):
            return bound
        b = int(bound)
        if b < 0:
            raise ValueError("bound must be non-negative")
        return cls(None if isinstance(family, Polygon) else b, b, b)


@dataclass(frozen=True)
class BasisElement:
    """A compatible collection with its product expansion and g-vector.

    ``parts`` holds ``(curve, multiplicity, kind)`` where ``kind`` is
    ``"arc"``, ``"bangle"`` (multiplicity = number of copies) or
    ``"bracelet"`` (multiplicity = winding).
    """

    parts: Tuple[Tuple[CatalogCurve, int, str], ...]
    laurent: LaurentPoly
    g: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(m for _, m, _ in self.parts)

    def describe(self) -> List[dict]:
        return [
            {"curve": c.word.to_json(), "multiplicity": m, "kind": kind} for c, m, kind in self.parts
        ]


def _curve_value(T: Triangulation, c: CatalogCurve) -> ExpansionResult:
    if c.kind == "arc":
        return expand_arc(T, c.word)
    return expand_loop(T, c.word)


def enumerate_basis_elements(family, bound, variant: str = "B0") -> List[BasisElement]:
    """Products over compatible collections, up to the given bound.

    ``variant`` is ``"B0"`` (loops enter as bangles, i.e. powers) or ``"B"``
    (at most one bracelet ``Brac_k``).
    """
    if isinstance(family, str):
        family = parse_family(family)
    if variant not in ("B0", "B"):
        raise ValueError("variant must be 'B0' or 'B'")
    bound = BasisBound.coerce(bound, family)
    T = family.triangulation()
    B = signed_adjacency(T)
    if isinstance(family, Annulus):
        catalog = family.catalog(bound.max_word_length, max_winding=1)
    else:
        catalog = family.catalog(bound.max_word_length)
    arcs = [c for c in catalog if c.kind == "arc" and c.length >= 0]
    # only arcs can be cluster variables: boundary segments never appear here
    arcs = [c for c in arcs if c.word.crossings or T.is_arc(c.word.edge)]
    loops = [c for c in catalog if c.kind == "loop" and c.winding == 1]

    pieces: List[Tuple[CatalogCurve, str, int]] = []  # (curve, kind, k)
    for c in arcs:
        pieces.append((c, "arc", 1))
    for z in loops:
        if variant == "B0":
            pieces.append((z, "bangle", 1))
        else:
            for k in range(1, bound.max_k + 1):
                w = bracelet_word(T, z.word, k)
                pieces.append((CatalogCurve(w, "loop", z.geometry, k), "bracelet", k))

    cache: Dict[int, LaurentPoly] = {}

    def value(i: int) -> LaurentPoly:
        if i not in cache:
            cache[i] = _curve_value(T, pieces[i][0]).laurent
        return cache[i]

    def compatible(i: int, j: int) -> bool:
        ci, ki, _ = pieces[i]
        cj, kj, _ = pieces[j]
        if ki == "bracelet" and kj == "bracelet":
            return False
        if i == j:
            return ki != "bracelet"
        return not family.crosses(ci, cj)

    out: List[BasisElement] = []
    ctx = context_for(T)

    def rec(start: int, chosen: List[Tuple[int, int]], degree: int):
        parts = []
        poly = LaurentPoly.one(ctx)
        for i, mult in chosen:
            c, kind, k = pieces[i]
            poly = poly * value(i) ** mult
            parts.append((c, mult * k if kind != "bracelet" else k, kind))
        g = tuple(
            int(v)
            for v in np.sum(
                [np.array(g_vector(_curve_value(T, pieces[i][0]), B), dtype=np.int64) * m for i, m in chosen]
                or [np.zeros(T.n, dtype=np.int64)],
                axis=0,
            )
        )
        out.append(BasisElement(tuple(parts), poly, g))
        for i in range(start, len(pieces)):
            k = pieces[i][2]
            if any(not compatible(i, j) for j, _ in chosen):
                continue
            max_mult = 1 if pieces[i][1] == "bracelet" else bound.max_degree
            for mult in range(1, max_mult + 1):
                if pieces[i][1] == "bangle" and mult > bound.max_k:
                    break
                extra = k if pieces[i][1] == "bracelet" else mult
                if degree + extra > bound.max_degree:
                    break
                if mult > 1 and not compatible(i, i):
                    break
                rec(i + 1, chosen + [(i, mult)], degree + extra)

    rec(0, [], 0)
    return out


def verify_g_injectivity(elements: Sequence[BasisElement], B_tilde=None) -> CheckResult:
    """All g-vectors distinct, plus the leading-term certificate."""
    seen: Dict[Tuple[int, ...], int] = {}
    collisions = []
    for idx, el in enumerate(elements):
        if el.g in seen:
            collisions.append([seen[el.g], idx, list(el.g)])
        else:
            seen[el.g] = idx
    witness = {"elements": len(elements), "collisions": collisions}
    ok = not collisions
    if B_tilde is not None:
        rep = assert_distinct_leading_terms([el.laurent for el in elements], B_tilde)
        witness["leading_terms"] = "pass" if rep.ok else list(rep.failures[:5])
        ok = ok and rep.ok
    return CheckResult("g-injectivity", f"{len(elements)} elements", ok, witness)


def verify_element_structure(el_or_poly, B_tilde) -> CheckResult:
    """Unique coefficient-free term and non-negative offsets over B-tilde."""
    p = el_or_poly.laurent if isinstance(el_or_poly, BasisElement) else el_or_poly
    rep = verify_offsets(p, B_tilde)
    return CheckResult("leading-term", p.to_text()[:60], rep.ok, rep.to_json())


def anti_arc_word(P: Polygon, arc: str) -> CurveWord:
    """The arc whose g-vector is ``-e_i`` for ``arc = tau_i``.

    Both endpoints of ``tau_i`` step back by one marked point.
    """
    return P.anti_arc(arc, turn=-1)
