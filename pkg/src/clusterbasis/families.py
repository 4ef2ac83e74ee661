"""Standard triangulations of polygons and annuli, with curve catalogs.

Polygons are triangulated as a fan from vertex ``p0``.  Annuli are handled in
their universal cover, the strip ``0 <= y <= 1``: outer marked points sit at
``(a/p, 1)`` and inner ones at ``(b/q, 0)`` for all integers ``a, b``, and the
deck transformation is the shift ``x -> x + 1``.  A curve is remembered by a
lift, which makes crossing words and compatibility easy to compute exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Dict, List, Optional, Tuple

from .surface import (
    CurveError,
    CurveWord,
    Triangulation,
    build_triangulation,
    canonical_word,
    curve_key,
    resolve,
)


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogCurve:
    """A catalog entry: a crossing word plus the geometric data behind it.

    ``kind`` is ``"arc"`` or ``"loop"``; ``winding`` is the number of times a
    loop runs around the core (bracelets have ``winding > 1``).
    """

    word: CurveWord
    kind: str
    geometry: tuple
    winding: int = 0

    @property
    def length(self) -> int:
        return self.word.length


def _interleave(u, v) -> bool:
    lo, hi = min(u), max(u)
    if len({u[0], u[1], v[0], v[1]}) < 4:
        return False
    return (lo < v[0] < hi) != (lo < v[1] < hi)


# ---------------------------------------------------------------------------
# polygons


class Polygon:
    def __init__(self, n: int):
        if n < 4:
            raise FamilyError("a polygon needs at least 4 vertices to carry an arc")
        self.n = n
        self.name = f"polygon({n})"

    def point(self, i: int) -> str:
        return f"p{i % self.n}"

    def edge_name(self, i: int, j: int) -> str:
        i, j = sorted((i % self.n, j % self.n))
        if j - i == 1:
            return f"b{i}"
        if i == 0 and j == self.n - 1:
            return f"b{self.n - 1}"
        if i == 0:
            return f"t{j - 1}"
        raise FamilyError(f"({i},{j}) is not an edge of the fan triangulation")

    def triangulation(self) -> Triangulation:
        n = self.n
        arcs = [f"t{i - 1}" for i in range(2, n - 1)]
        boundary = [f"b{i}" for i in range(n)]
        triangles, vertices = [], []
        for i in range(1, n - 1):
            triangles.append([self.edge_name(0, i + 1), self.edge_name(i, i + 1), self.edge_name(0, i)])
            vertices.append([self.point(0), self.point(i + 1), self.point(i)])
        data = {"arcs": arcs, "boundary": boundary, "triangles": triangles, "vertices": vertices}
        return build_triangulation(data, name=self.name)

    def diagonals(self) -> List[Tuple[int, int]]:
        n = self.n
        return [(a, b) for a in range(n) for b in range(a + 2, n) if not (a == 0 and b == n - 1)]

    def arc_word(self, a: int, b: int) -> CurveWord:
        a, b = sorted((a % self.n, b % self.n))
        if (a, b) not in self.diagonals():
            raise FamilyError(f"({a},{b}) is not a diagonal")
        if a == 0:
            e = self.edge_name(0, b)
            return CurveWord("open", (), (self.point(0), self.point(b)), None, e)
        crossings = tuple(self.edge_name(0, c) for c in range(a + 1, b))
        return CurveWord("open", crossings, (self.point(a), self.point(b)), a - 1)

    def catalog(self, bound: Optional[int] = None) -> List[CatalogCurve]:
        T = self.triangulation()
        out = []
        for a, b in self.diagonals():
            w = self.arc_word(a, b)
            if bound is not None and w.length > bound:
                continue
            out.append(CatalogCurve(canonical_word(T, w), "arc", ("diag", a, b)))
        return _sorted_catalog(T, out)

    def crosses(self, c1: CatalogCurve, c2: CatalogCurve) -> bool:
        _, a1, b1 = c1.geometry
        _, a2, b2 = c2.geometry
        return _interleave((a1, b1), (a2, b2))

    def anti_arc(self, arc: str, turn: int = -1) -> CurveWord:
        """Arc joining the neighbours of the endpoints of ``arc``.

        Each endpoint is moved one step around the boundary; ``turn`` picks
        the direction (``+1`` or ``-1``).
        """
        T = self.triangulation()
        if not T.is_arc(arc):
            raise FamilyError(f"{arc!r} is not an arc")
        u, v = (int(p[1:]) for p in T.endpoints(arc))
        return self.arc_word((u + turn) % self.n, (v + turn) % self.n)


# ---------------------------------------------------------------------------
# annuli


class Annulus:
    def __init__(self, p: int, q: int):
        if p < 1 or q < 1:
            raise FamilyError("an annulus needs at least one marked point on each boundary")
        self.p, self.q = p, q
        self.name = f"annulus({p},{q})"
        # walk round the strip from (0,0): the bridging arcs of the standard
        # triangulation, and for each step the triangle it sweeps out
        pos = [(0, 0)]
        steps = []
        a, b = 0, 0
        for _ in range(p + q):
            if Fraction(a + 1, p) <= Fraction(b + 1, q):
                steps.append(("top", a, b))
                a += 1
            else:
                steps.append(("bottom", a, b))
                b += 1
            pos.append((a, b))
        assert pos[-1] == (p, q)
        self.lifts = pos[:-1]
        self.steps = steps
        self._arc_of = {self._key(ab): f"t{i + 1}" for i, ab in enumerate(self.lifts)}

    def _key(self, ab):
        a, b = ab
        m = b // self.q
        return a - self.p * m, b - self.q * m

    def arc_name(self, ab) -> str:
        return self._arc_of[self._key(ab)]

    def triangulation(self) -> Triangulation:
        p, q = self.p, self.q
        triangles, vertices = [], []
        for kind, a, b in self.steps:
            if kind == "top":
                triangles.append([f"o{a % p}", self.arc_name((a + 1, b)), self.arc_name((a, b))])
                vertices.append([f"O{a % p}", f"O{(a + 1) % p}", f"I{b % q}"])
            else:
                triangles.append([self.arc_name((a, b + 1)), f"i{b % q}", self.arc_name((a, b))])
                vertices.append([f"O{a % p}", f"I{(b + 1) % q}", f"I{b % q}"])
        data = {
            "arcs": [f"t{i + 1}" for i in range(p + q)],
            "boundary": [f"o{a}" for a in range(p)] + [f"i{b}" for b in range(q)],
            "triangles": triangles,
            "vertices": vertices,
        }
        return build_triangulation(data, name=self.name)

    # -- coordinates --------------------------------------------------------

    def _xy(self, pt):
        side, i = pt
        return (Fraction(i, self.p), Fraction(1)) if side == "T" else (Fraction(i, self.q), Fraction(0))

    def _bkey(self, pt):
        """Position of a boundary point of the strip in its cyclic order."""
        x, y = self._xy(pt)
        return (0, x) if y == 1 else (1, -x)

    def _point_name(self, pt):
        side, i = pt
        return f"O{i % self.p}" if side == "T" else f"I{i % self.q}"

    def _arc_lifts(self, lo: Fraction, hi: Fraction):
        """All lifts ``(arc_index, a, b)`` of T-arcs meeting ``lo <= x <= hi``."""
        out = []
        mlo, mhi = floor(lo) - 2, floor(hi) + 2
        for s, (a, b) in enumerate(self.lifts):
            for m in range(mlo, mhi + 1):
                out.append((s, a + self.p * m, b + self.q * m))
        return out

    # -- crossing words of chords and loops ------------------------------------

    def chord_word(self, P1, P2) -> CurveWord:
        """Crossing word of the straight chord between two lifted marked points."""
        (x1, y1), (x2, y2) = self._xy(P1), self._xy(P2)
        k1, k2 = self._bkey(P1), self._bkey(P2)
        hits = []
        for s, a, b in self._arc_lifts(min(x1, x2), max(x1, x2)):
            ends = (self._bkey(("T", a)), self._bkey(("B", b)))
            if not _interleave((k1, k2), ends):
                continue
            if y1 != y2:
                # straight segments: order by the parameter along the chord
                xt, xb = Fraction(a, self.p), Fraction(b, self.q)
                # chord: x = x1 + t (x2 - x1), y = y1 + t (y2 - y1)
                # arc:   x = xb + y (xt - xb)
                dy = y2 - y1
                denom = (x2 - x1) - dy * (xt - xb)
                t = (xb + y1 * (xt - xb) - x1) / denom
                key = t
            elif y1 == 1:
                key = (Fraction(a, self.p), Fraction(b, self.q))
                if x2 < x1:
                    key = (-key[0], -key[1])
            else:
                key = (Fraction(b, self.q), Fraction(a, self.p))
                if x2 < x1:
                    key = (-key[0], -key[1])
            hits.append((key, s, a, b))
        hits.sort()
        names = tuple(f"t{s + 1}" for _, s, _, _ in hits)
        ends = (self._point_name(P1), self._point_name(P2))
        if not hits:
            edge = self._edge_between(P1, P2)
            return CurveWord("open", (), ends, None, edge)
        start = self._triangle_at(P1, hits[0][2], hits[0][3])
        return CurveWord("open", names, ends, start)

    def _edge_between(self, P1, P2) -> str:
        (s1, i1), (s2, i2) = P1, P2
        if s1 != s2:
            a, b = (i1, i2) if s1 == "T" else (i2, i1)
            return self.arc_name((a, b))
        lo = min(i1, i2)
        if abs(i1 - i2) != 1:
            raise FamilyError("chord without crossings is not an edge")
        return f"o{lo % self.p}" if s1 == "T" else f"i{lo % self.q}"

    def _triangles_lifted(self, m: int):
        for s, (kind, a, b) in enumerate(self.steps):
            a += self.p * m
            b += self.q * m
            if kind == "top":
                yield s, {(a + 1, b): ("T", a), (a, b): ("T", a + 1)}
            else:
                yield s, {(a, b + 1): ("B", b), (a, b): ("B", b + 1)}

    def _triangle_at(self, P, a, b) -> int:
        x = self._xy(P)[0]
        found = []
        for m in range(floor(x) - 2, floor(x) + 3):
            for s, opp in self._triangles_lifted(m):
                if opp.get((a, b)) == P:
                    found.append(s)
        if len(found) != 1:  # pragma: no cover - geometry guarantees uniqueness
            raise CurveError("could not locate the starting triangle of a chord")
        return found[0]

    def loop_word(self, k: int = 1) -> CurveWord:
        """The core loop, run ``k`` times round."""
        names = tuple(f"t{s + 1}" for s in range(len(self.lifts)))
        return CurveWord("closed", names * k, None, len(self.steps) - 1)

    # -- catalog and compatibility ---------------------------------------------

    def catalog(self, bound: Optional[int] = None, max_winding: Optional[int] = None) -> List[CatalogCurve]:
        if bound is None:
            raise FamilyError("annulus catalogs are infinite; give a complexity bound")
        T = self.triangulation()
        p, q = self.p, self.q
        out: List[CatalogCurve] = []
        width = (bound + 3) * q + q
        for a in range(p):
            centre = (a * q) // p
            for b in range(centre - width, centre + width + 1):
                w = self.chord_word(("T", a), ("B", b))
                if w.length <= bound:
                    out.append(CatalogCurve(w, "arc", ("chord", ("T", a), ("B", b))))
        for side, count in (("T", p), ("B", q)):
            for i in range(count):
                for span in range(2, count + 1):
                    w = self.chord_word((side, i), (side, i + span))
                    if w.length <= bound:
                        out.append(CatalogCurve(w, "arc", ("chord", (side, i), (side, i + span))))
        k = 1
        n = len(self.lifts)
        while k * n <= bound and (max_winding is None or k <= max_winding):
            out.append(CatalogCurve(self.loop_word(k), "loop", ("loop",), k))
            k += 1
        out = [CatalogCurve(canonical_word(T, c.word), c.kind, c.geometry, c.winding) for c in out]
        return _sorted_catalog(T, out)

    def crosses(self, c1: CatalogCurve, c2: CatalogCurve) -> bool:
        g1, g2 = c1.geometry, c2.geometry
        if g1[0] == "loop" and g2[0] == "loop":
            return False
        if g1[0] == "loop" or g2[0] == "loop":
            chord = g2 if g1[0] == "loop" else g1
            return chord[1][0] != chord[2][0]
        u = (self._bkey(g1[1]), self._bkey(g1[2]))
        xs1 = [self._xy(g1[1])[0], self._xy(g1[2])[0]]
        xs2 = [self._xy(g2[1])[0], self._xy(g2[2])[0]]
        lo = floor(min(xs1) - max(xs2)) - 1
        hi = floor(max(xs1) - min(xs2)) + 1
        for m in range(lo, hi + 1):
            v1 = (g2[1][0], g2[1][1] + (self.p if g2[1][0] == "T" else self.q) * m)
            v2 = (g2[2][0], g2[2][1] + (self.p if g2[2][0] == "T" else self.q) * m)
            if _interleave(u, (self._bkey(v1), self._bkey(v2))):
                return True
        return False


def _sorted_catalog(T: Triangulation, curves: List[CatalogCurve]) -> List[CatalogCurve]:
    seen: Dict[tuple, CatalogCurve] = {}
    for c in curves:
        resolve(T, c.word)
        seen.setdefault(curve_key(T, c.word), c)
    return sorted(seen.values(), key=lambda c: (c.kind != "arc", c.length, curve_key(T, c.word)))


_FAMILY = re.compile(r"^\s*(polygon|annulus)\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$")


def parse_family(text: str):
    """``"polygon(5)"`` or ``"annulus(2,2)"`` to a family model."""
    m = _FAMILY.match(text)
    if not m:
        raise FamilyError(f"unsupported family {text!r}")
    kind, a, b = m.group(1), int(m.group(2)), m.group(3)
    if kind == "polygon":
        if b is not None:
            raise FamilyError("polygon takes one parameter")
        return Polygon(a)
    if b is None:
        raise FamilyError("annulus takes two parameters")
    return Annulus(a, int(b))


def catalog_arcs(family, complexity_bound: int) -> List[CurveWord]:
    """Distinct curve words of length at most ``complexity_bound``."""
    if isinstance(family, str):
        family = parse_family(family)
    if complexity_bound < 0:
        raise FamilyError("complexity bound must be non-negative")
    return [c.word for c in family.catalog(complexity_bound)]
