"""Triangulated unpunctured marked surfaces and curves given by crossing words.

Triangles are stored as clockwise triples of edge names.  In a triangle
``(e0, e1, e2)`` with corners ``(V0, V1, V2)`` the edge ``e_i`` runs from
``V_i`` to ``V_{i+1}`` when the triangle is traversed clockwise, so the corner
opposite ``e_i`` is ``V_{i+2}``.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np



class SurfaceError(ValueError):
    """Invalid triangulation data."""


class CurveError(ValueError):
    """Crossing word that does not describe a curve in the triangulation."""


class AmbiguousCurveError(CurveError):
    pass


@dataclass(frozen=True)
class Triangulation:
    arcs: Tuple[str, ...]
    boundary: Tuple[str, ...]
    triangles: Tuple[Tuple[str, str, str], ...]
    vertices: Tuple[Tuple[str, str, str], ...]
    name: str = field(default="", compare=False)

    @property
    def n(self) -> int:
        return len(self.arcs)

    def arc_index(self, arc: str) -> int:
        try:
            return self._arc_pos[arc]
        except KeyError:
            raise KeyError(f"{arc!r} is not an arc of the triangulation") from None

    def is_arc(self, e: str) -> bool:
        return e in self._arc_pos

    def is_boundary(self, e: str) -> bool:
        return e in self._boundary_set

    @cached_property
    def _arc_pos(self) -> Dict[str, int]:
        return {a: i for i, a in enumerate(self.arcs)}

    @cached_property
    def _boundary_set(self):
        return frozenset(self.boundary)

    @cached_property
    def incidence(self) -> Dict[str, Tuple[Tuple[int, int], ...]]:
        """Edge name -> ((triangle, position), ...)."""
        inc: Dict[str, List[Tuple[int, int]]] = {}
        for t, tri in enumerate(self.triangles):
            for pos, e in enumerate(tri):
                inc.setdefault(e, []).append((t, pos))
        return {e: tuple(v) for e, v in inc.items()}

    def endpoints(self, e: str) -> Tuple[str, str]:
        t, pos = self.incidence[e][0]
        vs = self.vertices[t]
        return vs[pos], vs[(pos + 1) % 3]

    def opposite_corner(self, t: int, e: str) -> str:
        pos = self.triangles[t].index(e)
        return self.vertices[t][(pos + 2) % 3]

    def other_triangle(self, t: int, arc: str) -> int:
        inc = self.incidence[arc]
        if len(inc) != 2:
            raise CurveError(f"{arc!r} is not an interior arc")
        (t1, _), (t2, _) = inc
        if t == t1:
            return t2
        if t == t2:
            return t1
        raise CurveError(f"triangle {t} does not contain {arc!r}")

    def rotated(self, t: int, e: str) -> Tuple[str, str, str]:
        """Clockwise triple of triangle ``t`` starting at edge ``e``."""
        tri = self.triangles[t]
        i = tri.index(e)
        return tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]

    @cached_property
    def points(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for vs in self.vertices:
            for v in vs:
                seen.setdefault(v, None)
        return tuple(seen)

    @cached_property
    def digest(self) -> str:
        payload = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    def canonical_triangles(self):
        """Triangles with their corners, rotated to start at the least edge."""
        out = []
        for tri, vs in zip(self.triangles, self.vertices):
            i = tri.index(min(tri))
            out.append((tri[i:] + tri[:i], vs[i:] + vs[:i]))
        return tuple(sorted(out))

    def same_as(self, other: "Triangulation") -> bool:
        """Equal as labelled combinatorial triangulations."""
        return (
            self.arcs == other.arcs
            and set(self.boundary) == set(other.boundary)
            and self.canonical_triangles() == other.canonical_triangles()
        )

    def to_json(self) -> dict:
        return {
            "arcs": list(self.arcs),
            "boundary": list(self.boundary),
            "triangles": [list(t) for t in self.triangles],
            "vertices": [list(v) for v in self.vertices],
        }


# ---------------------------------------------------------------------------
# construction and validation


def _glue_corners(arcs, boundary, triangles) -> List[List[int]]:
    parent = list(range(3 * len(triangles)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    inc: Dict[str, List[Tuple[int, int]]] = {}
    for t, tri in enumerate(triangles):
        for pos, e in enumerate(tri):
            inc.setdefault(e, []).append((t, pos))
    for e, occ in inc.items():
        if len(occ) == 2:
            (t1, i1), (t2, i2) = occ
            # edge runs V_i -> V_{i+1} in both triangles, in opposite directions
            union(3 * t1 + i1, 3 * t2 + (i2 + 1) % 3)
            union(3 * t1 + (i1 + 1) % 3, 3 * t2 + i2)
    return [[find(3 * t + k) for k in range(3)] for t in range(len(triangles))]


def build_triangulation(data: dict, name: str = "") -> Triangulation:
    """Validate a surface description and return a :class:`Triangulation`.

    ``data`` has keys ``arcs``, ``boundary``, ``triangles`` (clockwise triples)
    and optionally ``vertices`` naming the three corners of each triangle.
    """
    try:
        arcs = tuple(str(a) for a in data["arcs"])
        boundary = tuple(str(b) for b in data["boundary"])
        triangles = tuple(tuple(str(e) for e in tri) for tri in data["triangles"])
    except (KeyError, TypeError) as exc:
        raise SurfaceError(f"malformed surface description: {exc}") from None
    name = name or str(data.get("name", ""))

    if not arcs:
        raise SurfaceError("a triangulation needs at least one arc")
    edges = arcs + boundary
    if len(set(edges)) != len(edges):
        raise SurfaceError("edge identifiers must be unique across arcs and boundary")
    known = set(edges)
    counts: Dict[str, int] = {e: 0 for e in edges}
    for tri in triangles:
        if len(tri) != 3:
            raise SurfaceError(f"triangle {tri} does not have three sides")
        if len(set(tri)) != 3:
            raise SurfaceError(f"triangle {tri} repeats an edge (self-folded or degenerate)")
        for e in tri:
            if e not in known:
                raise SurfaceError(f"triangle {tri} uses unknown edge {e!r}")
            counts[e] += 1
    for a in arcs:
        if counts[a] != 2:
            raise SurfaceError(f"arc {a!r} lies in {counts[a]} triangles; expected 2")
    for b in boundary:
        if counts[b] != 1:
            raise SurfaceError(f"boundary segment {b!r} lies in {counts[b]} triangles; expected 1")

    # connectivity of the triangle adjacency graph
    adj: Dict[int, set] = {t: set() for t in range(len(triangles))}
    owner: Dict[str, List[int]] = {}
    for t, tri in enumerate(triangles):
        for e in tri:
            owner.setdefault(e, []).append(t)
    for ts in owner.values():
        for a in ts:
            adj[a].update(ts)
    seen = {0}
    stack = [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != len(triangles):
        raise SurfaceError("triangle complex is disconnected")

    roots = _glue_corners(arcs, boundary, triangles)

    # every marked point sits on the boundary: its link is a single fan ending
    # in two boundary-segment ends
    bnd_ends: Dict[int, int] = {}
    for t, tri in enumerate(triangles):
        for pos, e in enumerate(tri):
            if e in boundary:
                for k in (pos, (pos + 1) % 3):
                    r = roots[t][k]
                    bnd_ends[r] = bnd_ends.get(r, 0) + 1
    classes = sorted({r for rs in roots for r in rs})
    for r in classes:
        if bnd_ends.get(r, 0) != 2:
            raise SurfaceError(
                "non-manifold gluing: a vertex is not a boundary marked point "
                "(interior vertex or pinched fan)"
            )

    given = data.get("vertices")
    if given is not None:
        given = tuple(tuple(str(v) for v in vs) for vs in given)
        if len(given) != len(triangles) or any(len(v) != 3 for v in given):
            raise SurfaceError("'vertices' must give three corners per triangle")
        name_of: Dict[int, str] = {}
        for t in range(len(triangles)):
            for k in range(3):
                r = roots[t][k]
                if name_of.setdefault(r, given[t][k]) != given[t][k]:
                    raise SurfaceError("corner names are inconsistent with the gluing")
        if len(set(name_of.values())) != len(name_of):
            raise SurfaceError("distinct marked points share a name")
        vertices = given
    else:
        label = {r: f"v{i}" for i, r in enumerate(classes)}
        vertices = tuple(tuple(label[r] for r in rs) for rs in roots)

    return Triangulation(arcs, boundary, triangles, vertices, name=name)


def load_triangulation(path) -> Triangulation:
    with open(path) as fh:
        data = json.load(fh)
    return build_triangulation(data)


FIXTURES = ("square", "pentagon", "hexagon", "annulus11", "annulus22")


def fixture_path(name: str):
    """Path of a bundled JSON fixture, by stem (``"pentagon"``) or file name."""
    stem = name[:-5] if name.endswith(".json") else name
    path = resources.files("clusterbasis") / "fixtures" / f"{stem}.json"
    if not path.is_file():
        raise SurfaceError(f"no bundled fixture named {name!r}")
    return path


def load_fixture(name: str) -> Triangulation:
    return load_triangulation(fixture_path(name))


# ---------------------------------------------------------------------------
# exchange matrices


def signed_adjacency(T: Triangulation) -> np.ndarray:
    """``B_T``: +1 for each triangle in which arc j follows arc i clockwise."""
    n = T.n
    B = np.zeros((n, n), dtype=np.int64)
    for tri in T.triangles:
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            if T.is_arc(a) and T.is_arc(b):
                i, j = T.arc_index(a), T.arc_index(b)
                B[i, j] += 1
                B[j, i] -= 1
    return B


def extend_principal(B) -> np.ndarray:
    """Stack the identity under a square exchange matrix."""
    B = np.asarray(B, dtype=np.int64)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"principal extension needs a square matrix, got shape {B.shape}")
    return np.vstack([B, np.eye(B.shape[0], dtype=np.int64)])


# ---------------------------------------------------------------------------
# flips


@dataclass(frozen=True)
class Quadrilateral:
    """Sides of the quadrilateral around a flipped arc, in cyclic order."""

    sides: Tuple[str, str, str, str]
    old_triangles: Tuple[int, int]


def flip(T: Triangulation, arc: str) -> Tuple[Triangulation, Quadrilateral]:
    """Replace ``arc`` by the other diagonal of its quadrilateral.

    The new diagonal keeps the identifier (and slot) of the old one.
    """
    if T.is_boundary(arc):
        raise SurfaceError(f"{arc!r} is a boundary segment and cannot be flipped")
    if not T.is_arc(arc):
        raise SurfaceError(f"unknown arc {arc!r}")
    (t1, _), (t2, _) = T.incidence[arc]
    k, a, b = T.rotated(t1, arc)
    _, c, d = T.rotated(t2, arc)
    v1 = T.vertices[t1]
    i1 = T.triangles[t1].index(arc)
    u, v, w = v1[i1], v1[(i1 + 1) % 3], v1[(i1 + 2) % 3]
    i2 = T.triangles[t2].index(arc)
    z = T.vertices[t2][(i2 + 2) % 3]
    triangles = list(T.triangles)
    vertices = list(T.vertices)
    triangles[t1] = (k, b, c)
    vertices[t1] = (z, w, u)
    triangles[t2] = (k, d, a)
    vertices[t2] = (w, z, v)
    new = Triangulation(T.arcs, T.boundary, tuple(triangles), tuple(vertices), name=T.name)
    return new, Quadrilateral((a, b, c, d), (t1, t2))


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class CurveWord:
    """A curve recorded by the arcs of ``T`` it crosses, in order.

    ``start_triangle`` pins down the triangle the curve starts in (open words)
    or the triangle between the last and first crossing (closed words); it
    can be omitted when endpoints make it unique.  Open words with no
    crossings name the edge of ``T`` they run along in ``edge``.
    """

    kind: str
    crossings: Tuple[str, ...]
    endpoints: Optional[Tuple[str, str]] = None
    start_triangle: Optional[int] = None
    edge: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("open", "closed"):
            raise CurveError(f"curve kind must be 'open' or 'closed', not {self.kind!r}")
        object.__setattr__(self, "crossings", tuple(self.crossings))
        if self.endpoints is not None:
            object.__setattr__(self, "endpoints", tuple(self.endpoints))
        if self.kind == "closed" and not self.crossings:
            raise CurveError("closed words must be nonempty")

    @property
    def length(self) -> int:
        return len(self.crossings)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "crossings": list(self.crossings)}
        if self.kind == "open" and self.endpoints is not None:
            out["endpoints"] = list(self.endpoints)
        if self.start_triangle is not None:
            out["start_triangle"] = self.start_triangle
        if self.edge is not None:
            out["edge"] = self.edge
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CurveWord":
        try:
            kind = data["kind"]
            crossings = tuple(str(c) for c in data.get("crossings", ()))
        except (KeyError, TypeError) as exc:
            raise CurveError(f"malformed curve description: {exc}") from None
        endpoints = data.get("endpoints")
        return cls(
            kind=kind,
            crossings=crossings,
            endpoints=tuple(str(p) for p in endpoints) if endpoints else None,
            start_triangle=data.get("start_triangle"),
            edge=data.get("edge"),
        )


@dataclass(frozen=True)
class CurvePath:
    """Fully resolved curve: ``triangles[j]`` lies between crossings j and j+1.

    Open paths have ``d + 1`` triangles, closed paths ``d`` (cyclically).
    """

    kind: str
    crossings: Tuple[str, ...]
    triangles: Tuple[int, ...]
    endpoints: Optional[Tuple[str, str]] = None
    edge: Optional[str] = None

    @property
    def length(self) -> int:
        return len(self.crossings)

    def word(self) -> CurveWord:
        return CurveWord(
            self.kind,
            self.crossings,
            self.endpoints if self.kind == "open" else None,
            self.triangles[0] if self.triangles else None,
            self.edge,
        )


def _walk(T: Triangulation, start: int, crossings: Sequence[str]) -> Optional[Tuple[int, ...]]:
    tris = [start]
    t = start
    for j, a in enumerate(crossings):
        if not T.is_arc(a):
            raise CurveError(f"{a!r} is not an arc of the triangulation")
        if a not in T.triangles[t]:
            return None
        if j and crossings[j - 1] == a:
            return None
        t = T.other_triangle(t, a)
        tris.append(t)
    return tuple(tris)


def resolve(T: Triangulation, w: CurveWord) -> CurvePath:
    """Attach the triangle sequence to a crossing word, validating it."""
    if w.kind == "open":
        if not w.crossings:
            if w.edge is None:
                raise CurveError("an open word with no crossings must name its edge")
            if w.edge not in T.incidence:
                raise CurveError(f"unknown edge {w.edge!r}")
            ends = T.endpoints(w.edge)
            if w.endpoints is not None and sorted(w.endpoints) != sorted(ends):
                raise CurveError(f"endpoints {w.endpoints} do not match edge {w.edge!r}")
            return CurvePath("open", (), (), ends, w.edge)
        a1 = w.crossings[0]
        if not T.is_arc(a1):
            raise CurveError(f"{a1!r} is not an arc of the triangulation")
        if w.start_triangle is not None:
            starts = [w.start_triangle]
        else:
            starts = [t for t, _ in T.incidence[a1]]
        found = []
        for s in starts:
            if not 0 <= s < len(T.triangles):
                raise CurveError(f"start triangle {s} out of range")
            tris = _walk(T, s, w.crossings)
            if tris is None:
                continue
            ends = (
                T.opposite_corner(tris[0], w.crossings[0]),
                T.opposite_corner(tris[-1], w.crossings[-1]),
            )
            if w.endpoints is not None and ends != tuple(w.endpoints):
                continue
            found.append(CurvePath("open", w.crossings, tris, ends))
        if not found:
            raise CurveError(f"crossing word {w.crossings} is not realised by a curve")
        # a palindromic word read from either end is one curve, not two
        found = list({_open_key(T, p): p for p in reversed(found)}.values())
        if len(found) > 1:
            raise AmbiguousCurveError(
                f"crossing word {w.crossings} is realised by several curves; "
                "give endpoints or start_triangle"
            )
        return found[0]

    d = len(w.crossings)
    if d < 2:
        raise CurveError("a closed word needs at least two crossings")
    a1, ad = w.crossings[0], w.crossings[-1]
    if a1 == ad:
        raise CurveError("cyclically consecutive crossings must be distinct arcs")
    if w.start_triangle is not None:
        starts = [w.start_triangle]
    else:
        starts = [t for t, _ in T.incidence[a1]] if T.is_arc(a1) else []
    found: Dict[tuple, CurvePath] = {}
    for s in starts:
        if ad not in T.triangles[s]:
            continue
        tris = _walk(T, s, w.crossings)
        if tris is None or tris[-1] != s:
            continue
        path = CurvePath("closed", w.crossings, tris[:-1])
        found[_closed_key(T, path)] = path
    if not found:
        raise CurveError(f"closed word {w.crossings} is not realised by a loop")
    if len(found) > 1:
        raise AmbiguousCurveError(
            f"closed word {w.crossings} is realised by several loops; give start_triangle"
        )
    return next(iter(found.values()))


def _closed_rotations(T: Triangulation, path: CurvePath):
    d = path.length
    arcs = [T.arc_index(a) for a in path.crossings]
    tris = list(path.triangles)
    # forward: tris[j] precedes arcs[j]
    for r in range(d):
        yield (tuple(arcs[r:] + arcs[:r]), tuple(tris[r:] + tris[:r])), r, False
    # reversed orientation: triangle after arcs[j] is tris[j+1]
    rarcs = arcs[::-1]
    rtris = [tris[(j + 1) % d] for j in range(d)][::-1]
    for r in range(d):
        yield (tuple(rarcs[r:] + rarcs[:r]), tuple(rtris[r:] + rtris[:r])), r, True


def _closed_key(T: Triangulation, path: CurvePath):
    return min(key for key, _, _ in _closed_rotations(T, path))


def _open_key(T: Triangulation, path: CurvePath):
    fwd = (tuple(T.arc_index(a) for a in path.crossings), path.triangles)
    rev = (tuple(T.arc_index(a) for a in reversed(path.crossings)), path.triangles[::-1])
    return min(fwd, rev)


def canonical_path(T: Triangulation, w) -> CurvePath:
    """Canonical representative: least rotation / orientation of the word."""
    path = w if isinstance(w, CurvePath) else resolve(T, w)
    if path.kind == "open":
        if not path.crossings:
            return path
        fwd = (tuple(T.arc_index(a) for a in path.crossings), path.triangles)
        rev = (tuple(T.arc_index(a) for a in reversed(path.crossings)), path.triangles[::-1])
        if rev < fwd:
            return CurvePath(
                "open",
                tuple(reversed(path.crossings)),
                path.triangles[::-1],
                (path.endpoints[1], path.endpoints[0]),
            )
        return path
    key = _closed_key(T, path)
    arcs, tris = key
    return CurvePath("closed", tuple(T.arcs[i] for i in arcs), tris)


def canonical_word(T: Triangulation, w) -> CurveWord:
    return canonical_path(T, w).word()


def curve_key(T: Triangulation, w) -> tuple:
    """Hashable identity of a curve up to orientation (and rotation)."""
    p = canonical_path(T, w)
    if p.kind == "open" and not p.crossings:
        return ("edge", p.edge)
    return (p.kind, tuple(T.arc_index(a) for a in p.crossings), p.triangles)


def crossing_counts(T: Triangulation, w) -> Dict[str, int]:
    path = w if isinstance(w, CurvePath) else resolve(T, w)
    out: Dict[str, int] = {}
    for a in path.crossings:
        out[a] = out.get(a, 0) + 1
    return out


def concatenate_closed(T: Triangulation, w, k: int) -> CurvePath:
    """The closed path running ``k`` times around ``w``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    path = w if isinstance(w, CurvePath) else resolve(T, w)
    if path.kind != "closed":
        raise CurveError("only closed words can be concatenated")
    return CurvePath("closed", path.crossings * k, path.triangles * k)


def flip_path(T: Triangulation, path: CurvePath, arc: str) -> Tuple[Triangulation, CurvePath]:
    """Flip ``arc`` and rewrite the open path ``path`` in the new triangulation.

    The curve is cut into maximal runs inside the quadrilateral around
    ``arc``.  Each run keeps its entry and exit; it crosses the new diagonal
    exactly when entry and exit lie in different new triangles.
    """
    if path.kind != "open" or not path.crossings:
        raise CurveError("only open paths with crossings can be carried through a flip")
    new, quad = flip(T, arc)
    t1, t2 = quad.old_triangles
    i1 = T.triangles[t1].index(arc)
    i2 = T.triangles[t2].index(arc)
    side_of = {(t1, (i1 + 1) % 3): "a", (t1, (i1 + 2) % 3): "b",
               (t2, (i2 + 1) % 3): "c", (t2, (i2 + 2) % 3): "d"}
    corner_of = {(t1, i1): "u", (t1, (i1 + 1) % 3): "v", (t1, (i1 + 2) % 3): "w",
                 (t2, i2): "v", (t2, (i2 + 1) % 3): "u", (t2, (i2 + 2) % 3): "z"}
    # where each side / corner of the quadrilateral sits after the flip
    new_side = {"b": t1, "c": t1, "d": t2, "a": t2}
    new_corner = {"w": (t1, t2), "z": (t1, t2), "u": (t1,), "v": (t2,)}

    d = path.length
    tris = path.triangles
    ends: List[Tuple[Optional[str], Optional[str]]] = []
    for j in range(d + 1):
        ends.append((path.crossings[j - 1] if j else None, path.crossings[j] if j < d else None))

    def label(j: int, which: int):
        t = tris[j]
        e = ends[j][which]
        if e is not None:
            return ("side", side_of[(t, T.triangles[t].index(e))])
        other = ends[j][1 - which]
        return ("corner", corner_of[(t, (T.triangles[t].index(other) + 2) % 3)])

    def options(lab):
        kind, q = lab
        return (new_side[q],) if kind == "side" else new_corner[q]

    out_tris: List[int] = []
    out_cross: List[str] = []
    j = 0
    while j <= d:
        t = tris[j]
        if t not in (t1, t2):
            if j:
                out_cross.append(path.crossings[j - 1])
            out_tris.append(t)
            j += 1
            continue
        k = j
        while k < d and path.crossings[k] == arc:
            k += 1
        entry, exit_ = label(j, 0), label(k, 1)
        if j:
            out_cross.append(path.crossings[j - 1])
        a_opts, b_opts = options(entry), options(exit_)
        common = [x for x in a_opts if x in b_opts]
        if common:
            if len(common) == 2:
                if d != k - j or entry[0] != "corner":  # pragma: no cover
                    raise CurveError("run meets both new triangles at both ends")
                return new, CurvePath("open", (), (), path.endpoints, arc)
            out_tris.append(common[0])
        else:
            out_tris.extend([a_opts[0], b_opts[0]])
            out_cross.append(arc)
        j = k + 1
    if not out_cross:
        # the curve now runs along a side of its only triangle
        t = out_tris[0]
        corners = ("z", "w", "u") if t == t1 else ("w", "z", "v")
        p0 = corners.index(label(0, 0)[1])
        p1 = corners.index(label(d, 1)[1])
        edge = new.triangles[t][p0] if (p0 + 1) % 3 == p1 else new.triangles[t][p1]
        return new, CurvePath("open", (), (), path.endpoints, edge)
    result = CurvePath("open", tuple(out_cross), tuple(out_tris), path.endpoints)
    if _walk(new, result.triangles[0], result.crossings) != result.triangles:  # pragma: no cover
        raise CurveError("flip bookkeeping lost the curve")
    return new, result


def realizing_flips(T: Triangulation, w) -> Tuple[List[int], int]:
    """Flip sequence after which the arc ``w`` belongs to the triangulation.

    Each step flips an arc crossed by the curve whose flip lowers the number
    of crossings, trying the arcs in the order the curve meets them.
    Returns ``(directions, slot)``, both 1-based: the arc ends up in ``slot``.
    """
    path = w if isinstance(w, CurvePath) else resolve(T, w)
    if path.kind != "open":
        raise CurveError("only arcs are realised by flip sequences")
    directions: List[int] = []
    cur = T
    while path.crossings:
        for a in dict.fromkeys(path.crossings):
            nxt, np_ = flip_path(cur, path, a)
            if np_.length < path.length:
                directions.append(cur.arc_index(a) + 1)
                cur, path = nxt, np_
                break
        else:
            raise CurveError("no flip lowers the number of crossings")
    if not cur.is_arc(path.edge):
        raise CurveError("boundary segments are not cluster variables")
    return directions, cur.arc_index(path.edge) + 1
