"""Snake graphs, band graphs and their lattices of perfect matchings.

Tiles are unit squares placed on the integer grid.  Each tile is cut by its
diagonal from the NW to the SE corner; the lower-left half is the triangle the
curve leaves and the upper-right half the triangle it enters.  Tile ``j + 1``
is glued on top of tile ``j`` or to its right, along the third side of the
triangle between the two crossings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from . import kernels
from .surface import CurveError, CurvePath, Triangulation, resolve

N, E, S, W = 0, 1, 2, 3
SIDE_NAMES = ("N", "E", "S", "W")
Point = Tuple[int, int]


class SnakeGraphError(ValueError):
    pass


@dataclass(frozen=True)
class Tile:
    index: int
    diagonal: str
    sides: Tuple[str, str, str, str]
    rel: int
    position: Point

    def side(self, name: str) -> str:
        return self.sides[SIDE_NAMES.index(name)]


@dataclass(frozen=True)
class SnakeGraph:
    tiles: Tuple[Tile, ...]
    directions: Tuple[str, ...]
    edges: Tuple[Tuple[Point, Point], ...]
    labels: Tuple[str, ...]
    tile_edges: Tuple[Tuple[int, int, int, int], ...]

    @property
    def d(self) -> int:
        return len(self.tiles)

    @cached_property
    def glue_labels(self) -> Tuple[str, ...]:
        out = []
        for j, direction in enumerate(self.directions):
            out.append(self.tiles[j].sides[N if direction == "above" else E])
        return tuple(out)

    @cached_property
    def interior(self) -> FrozenSet[int]:
        seen: Dict[int, int] = {}
        for te in self.tile_edges:
            for e in te:
                seen[e] = seen.get(e, 0) + 1
        return frozenset(e for e, c in seen.items() if c > 1)

    @cached_property
    def vertices(self) -> Tuple[Point, ...]:
        return tuple(sorted({p for e in self.edges for p in e}))

    @cached_property
    def tile_array(self) -> np.ndarray:
        return np.array(self.tile_edges, dtype=np.int64).reshape(-1, 4)

    def is_horizontal(self, e: int) -> bool:
        (x1, y1), (x2, y2) = self.edges[e]
        return y1 == y2

    @cached_property
    def boundary_cycle(self) -> Tuple[int, ...]:
        """Boundary edges in cyclic order, starting with the S edge of tile 1."""
        bnd = [e for e in range(len(self.edges)) if e not in self.interior]
        at: Dict[Point, List[int]] = {}
        for e in bnd:
            for p in self.edges[e]:
                at.setdefault(p, []).append(e)
        if any(len(v) != 2 for v in at.values()) or len(at) != len(self.vertices):
            raise SnakeGraphError("boundary of the snake graph is not a simple cycle")
        start = self.tile_edges[0][S]
        cycle = [start]
        p = self.edges[start][1]
        while True:
            nxt = [e for e in at[p] if e != cycle[-1]][0]
            if nxt == start:
                break
            cycle.append(nxt)
            a, b = self.edges[nxt]
            p = b if a == p else a
        if len(cycle) != len(bnd):  # pragma: no cover
            raise SnakeGraphError("boundary walk did not visit every boundary edge")
        return tuple(cycle)

    def weight_labels(self, edges) -> List[str]:
        return [self.labels[e] for e in sorted(edges)]


def _edge_key(p: Point, q: Point):
    return (p, q) if p <= q else (q, p)


def _assemble(diagonals, sides_per_tile, rels, directions) -> SnakeGraph:
    """Place tiles on the grid and merge shared edges."""
    pos: List[Point] = [(0, 0)]
    for dname in directions:
        x, y = pos[-1]
        pos.append((x, y + 1) if dname == "above" else (x + 1, y))
    edge_index: Dict[Tuple[Point, Point], int] = {}
    edges: List[Tuple[Point, Point]] = []
    labels: List[str] = []
    tile_edges = []
    tiles = []
    for j, ((x, y), sides) in enumerate(zip(pos, sides_per_tile)):
        geo = (
            ((x, y + 1), (x + 1, y + 1)),
            ((x + 1, y), (x + 1, y + 1)),
            ((x, y), (x + 1, y)),
            ((x, y), (x, y + 1)),
        )
        idx = []
        for (p, q), lab in zip(geo, sides):
            key = _edge_key(p, q)
            if key in edge_index:
                e = edge_index[key]
                if labels[e] != lab:
                    raise SnakeGraphError(
                        f"tile {j + 1} disagrees with its neighbour on the glued edge "
                        f"({labels[e]!r} vs {lab!r})"
                    )
            else:
                e = len(edges)
                edge_index[key] = e
                edges.append(key)
                labels.append(lab)
            idx.append(e)
        tile_edges.append(tuple(idx))
        tiles.append(Tile(j + 1, diagonals[j], tuple(sides), rels[j], (x, y)))
    return SnakeGraph(tuple(tiles), tuple(directions), tuple(edges), tuple(labels), tuple(tile_edges))


def _tiles_from_path(T: Triangulation, tris: Sequence[int], crossings: Sequence[str]):
    d = len(crossings)
    sides_per_tile, rels, directions = [], [], []
    for j in range(d):
        a = crossings[j]
        _, u, v = T.rotated(tris[j], a)
        _, u2, v2 = T.rotated(tris[j + 1], a)
        rel = 1 if j % 2 == 0 else -1
        if rel == 1:
            sides = (u2, v2, u, v)
        else:
            sides = (v2, u2, v, u)
        sides_per_tile.append(sides)
        rels.append(rel)
        if j + 1 < d:
            nxt = crossings[j + 1]
            tri = T.triangles[tris[j + 1]]
            if nxt not in tri:
                raise CurveError("consecutive crossings do not share a triangle")
            third_pos = [k for k, e in enumerate(T.rotated(tris[j + 1], a)) if e not in (a, nxt)]
            if len(third_pos) != 1:
                raise CurveError("consecutive crossings must be distinct arcs")
            # upper triangle (a, u2, v2): u2 sits at N for rel +1, at E for rel -1
            first_slot = third_pos[0] == 1
            if rel == 1:
                directions.append("above" if first_slot else "right")
            else:
                directions.append("right" if first_slot else "above")
    return list(crossings), sides_per_tile, rels, directions


def build_snake_graph(T: Triangulation, w) -> SnakeGraph:
    """Snake graph of an open curve with at least one crossing."""
    path = w if isinstance(w, CurvePath) else resolve(T, w)
    if path.kind != "open":
        raise CurveError("snake graphs are built from open words")
    if not path.crossings:
        raise CurveError("a curve without crossings has no snake graph")
    return _assemble(*_tiles_from_path(T, path.triangles, path.crossings))


def snake_from_shape(directions: Sequence[str]) -> SnakeGraph:
    """Abstract snake graph with the given gluing directions.

    Every edge gets its own label ``e<k>`` and tile ``j`` the diagonal
    ``d<j>``.
    """
    d = len(directions) + 1
    for dname in directions:
        if dname not in ("right", "above"):
            raise SnakeGraphError(f"unknown direction {dname!r}")
    pos = [(0, 0)]
    for dname in directions:
        x, y = pos[-1]
        pos.append((x, y + 1) if dname == "above" else (x + 1, y))
    names: Dict[Tuple[Point, Point], str] = {}
    sides_per_tile = []
    for x, y in pos:
        geo = (
            ((x, y + 1), (x + 1, y + 1)),
            ((x + 1, y), (x + 1, y + 1)),
            ((x, y), (x + 1, y)),
            ((x, y), (x, y + 1)),
        )
        sides = []
        for p, q in geo:
            key = _edge_key(p, q)
            names.setdefault(key, f"e{len(names)}")
            sides.append(names[key])
        sides_per_tile.append(tuple(sides))
    rels = [1 if j % 2 == 0 else -1 for j in range(d)]
    return _assemble([f"d{j + 1}" for j in range(d)], sides_per_tile, rels, list(directions))


def all_shapes(d: int):
    """Every snake shape with ``d`` tiles."""
    for dirs in product(("right", "above"), repeat=d - 1):
        yield list(dirs)


# ---------------------------------------------------------------------------
# matchings


@dataclass(frozen=True)
class Matching:
    """A perfect matching, as indices into the snake graph's edge list.

    ``height`` lists the (1-based) tiles enclosed by ``P xor P_-``.
    """

    edges: FrozenSet[int]
    mask: int
    height: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.height)


def _mask(edges) -> int:
    m = 0
    for e in edges:
        m |= 1 << e
    return m


def _edges_of(mask: int) -> FrozenSet[int]:
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return frozenset(out)


def minimal_matching(G: SnakeGraph) -> Matching:
    cyc = G.boundary_cycle
    edges = frozenset(cyc[0::2])
    return Matching(edges, _mask(edges), ())


def maximal_matching(G: SnakeGraph) -> Matching:
    cyc = G.boundary_cycle
    edges = frozenset(cyc[1::2])
    lat = matching_lattice(G)
    return lat.by_mask[_mask(edges)]


def _twist_closure_py(start: int, tiles) -> Tuple[List[int], List[int], List[Tuple[int, int, int]]]:
    h = [(1 << t[N]) | (1 << t[S]) for t in tiles]
    v = [(1 << t[E]) | (1 << t[W]) for t in tiles]
    index = {start: 0}
    masks, levels, edges = [start], [0], []
    head = 0
    while head < len(masks):
        m = masks[head]
        for t in range(len(tiles)):
            if m & h[t] == h[t]:
                nm = (m & ~h[t]) | v[t]
            elif m & v[t] == v[t]:
                nm = (m & ~v[t]) | h[t]
            else:
                continue
            j = index.get(nm)
            if j is None:
                j = len(masks)
                index[nm] = j
                masks.append(nm)
                levels.append(levels[head] + 1)
            if head < j:
                edges.append((head, j, t))
        head += 1
    order = sorted(range(len(masks)), key=lambda i: (levels[i], masks[i]))
    rank = {old: new for new, old in enumerate(order)}
    e2 = sorted(tuple(sorted((rank[i], rank[j]))) + (t,) for i, j, t in edges)
    return [masks[i] for i in order], [levels[i] for i in order], e2


def _left_masks(G: SnakeGraph) -> List[int]:
    vertical = {}
    for e, ((x1, y1), (x2, y2)) in enumerate(G.edges):
        if x1 == x2:
            vertical.setdefault(min(y1, y2), []).append((x1, e))
    out = []
    for tile in G.tiles:
        x, y = tile.position
        out.append(_mask(e for xe, e in vertical.get(y, []) if xe <= x))
    return out


def _enclosed_py(masks, base, left):
    out = []
    for m in masks:
        diff = m ^ base
        bits = 0
        for t, lm in enumerate(left):
            if bin(diff & lm).count("1") & 1:
                bits |= 1 << t
        out.append(bits)
    return out


@dataclass(frozen=True)
class MatchingLattice:
    """All perfect matchings with the twist covers between them.

    ``covers`` rows are ``(lower, upper, tile)`` with a 1-based tile index and
    positions into ``matchings``, which is sorted by height degree.
    """

    graph: SnakeGraph
    matchings: Tuple[Matching, ...]
    covers: Tuple[Tuple[int, int, int], ...]

    def __len__(self) -> int:
        return len(self.matchings)

    def __iter__(self):
        return iter(self.matchings)

    @cached_property
    def by_mask(self) -> Dict[int, Matching]:
        return {m.mask: m for m in self.matchings}


_LATTICE_CACHE: Dict[SnakeGraph, MatchingLattice] = {}


def matching_lattice(G: SnakeGraph) -> MatchingLattice:
    """Breadth-first twist closure from the minimal matching."""
    cached = _LATTICE_CACHE.get(G)
    if cached is not None:
        return cached
    start = minimal_matching(G).mask
    left = _left_masks(G)
    if len(G.edges) <= kernels.MAX_KERNEL_EDGES:
        masks, levels, edges = kernels.twist_closure(start, G.tile_array)
        heights = kernels.enclosed_tiles(masks, start, np.array(left, dtype=np.int64))
        masks = [int(m) for m in masks]
        levels = [int(v) for v in levels]
        heights = [int(h) for h in heights]
        edges = [tuple(int(v) for v in row) for row in edges]
    else:
        masks, levels, edges = _twist_closure_py(start, G.tile_edges)
        heights = _enclosed_py(masks, start, left)
    matchings = []
    for m, h in zip(masks, heights):
        tiles = tuple(t + 1 for t in range(G.d) if (h >> t) & 1)
        matchings.append(Matching(_edges_of(m), m, tiles))
    lattice = MatchingLattice(
        G, tuple(matchings), tuple((i, j, t + 1) for i, j, t in edges)
    )
    _LATTICE_CACHE[G] = lattice
    return lattice


def enumerate_matchings(G: SnakeGraph) -> List[Matching]:
    return list(matching_lattice(G).matchings)


def height_exponents(G: SnakeGraph, P: Matching) -> Dict[str, int]:
    """Height monomial as diagonal label -> exponent."""
    out: Dict[str, int] = {}
    for t in P.height:
        lab = G.tiles[t - 1].diagonal
        out[lab] = out.get(lab, 0) + 1
    return out


# ---------------------------------------------------------------------------
# band graphs


@dataclass(frozen=True)
class BandGraph:
    """Snake graph of the cut loop plus the data of the cut.

    ``first_cut`` and ``last_cut`` are the two copies of the cut edge in the
    snake graph; ``x``/``y`` lie on the first copy, ``x2``/``y2`` on the last.
    """

    snake: SnakeGraph
    cut_label: str
    first_cut: int
    last_cut: int
    x: Point
    y: Point
    x2: Point
    y2: Point

    @property
    def d(self) -> int:
        return self.snake.d

    @cached_property
    def glued_edges(self) -> Tuple[Tuple[Point, Point], ...]:
        """Edges of the band itself (the last cut copy is dropped)."""
        ident = {self.x2: self.x, self.y2: self.y}
        out = []
        for e, (p, q) in enumerate(self.snake.edges):
            if e == self.last_cut:
                continue
            out.append((ident.get(p, p), ident.get(q, q)))
        return tuple(out)

    @cached_property
    def glued_labels(self) -> Tuple[str, ...]:
        return tuple(l for e, l in enumerate(self.snake.labels) if e != self.last_cut)

    def band_edge_of(self, e: int) -> int:
        """Index in :attr:`glued_edges` of snake edge ``e`` (cut copies merge)."""
        if e == self.last_cut:
            e = self.first_cut
        return e if e < self.last_cut else e - 1


def build_band_graph(T: Triangulation, w) -> BandGraph:
    """Band graph of a closed curve, cut in its starting triangle."""
    path = w if isinstance(w, CurvePath) else resolve(T, w)
    if path.kind != "closed":
        raise CurveError("band graphs are built from closed words")
    tris = list(path.triangles) + [path.triangles[0]]
    G = _assemble(*_tiles_from_path(T, tris, path.crossings))
    a1, ad = path.crossings[0], path.crossings[-1]
    third = [e for e in T.triangles[path.triangles[0]] if e not in (a1, ad)]
    if len(third) != 1:
        raise CurveError("first and last crossing must be distinct sides of the start triangle")
    cut = third[0]
    t1, td = G.tiles[0], G.tiles[-1]
    if t1.sides[S] == cut:
        first = G.tile_edges[0][S]
    elif t1.sides[W] == cut:
        first = G.tile_edges[0][W]
    else:  # pragma: no cover
        raise SnakeGraphError("cut edge not found on the first tile")
    if td.sides[N] == cut:
        last = G.tile_edges[-1][N]
    elif td.sides[E] == cut:
        last = G.tile_edges[-1][E]
    else:  # pragma: no cover
        raise SnakeGraphError("cut edge not found on the last tile")
    x = t1.position
    (p, q) = G.edges[first]
    y = q if p == x else p
    x2 = (td.position[0] + 1, td.position[1] + 1)
    (p, q) = G.edges[last]
    y2 = q if p == x2 else p
    if x not in G.edges[first] or x2 not in G.edges[last]:  # pragma: no cover
        raise SnakeGraphError("cut edges are not placed at the outer corners")
    return BandGraph(G, cut, first, last, x, y, x2, y2)


def good_matchings(B: BandGraph) -> List[Matching]:
    """Good matchings, each given by its lift to the cut snake graph.

    A good matching of the band corresponds to exactly the snake matchings
    that use at least one copy of the cut edge; removing one copy descends.
    """
    lat = matching_lattice(B.snake)
    return [m for m in lat.matchings if B.first_cut in m.edges or B.last_cut in m.edges]


def band_lattice(B: BandGraph) -> MatchingLattice:
    """The good matchings with the twist covers among them."""
    lat = matching_lattice(B.snake)
    keep = [i for i, m in enumerate(lat.matchings) if B.first_cut in m.edges or B.last_cut in m.edges]
    pos = {old: new for new, old in enumerate(keep)}
    covers = tuple((pos[i], pos[j], t) for i, j, t in lat.covers if i in pos and j in pos)
    return MatchingLattice(B.snake, tuple(lat.matchings[i] for i in keep), covers)


def descend(B: BandGraph, P: Matching) -> Tuple[int, ...]:
    """Band-edge indices of the good matching obtained from a snake lift."""
    if B.first_cut not in P.edges and B.last_cut not in P.edges:
        raise SnakeGraphError("matching uses no copy of the cut edge")
    edges = set(P.edges)
    if B.last_cut in edges:
        edges.discard(B.last_cut)
    else:
        edges.discard(B.first_cut)
    return tuple(sorted(B.band_edge_of(e) for e in edges))


# ---------------------------------------------------------------------------
# posets


@dataclass(frozen=True)
class MatchingPoset:
    """Poset on tiles ``1..n``; ``relations`` holds covers ``(a, b)`` with a < b."""

    n: int
    relations: Tuple[Tuple[int, int], ...]

    def order_ideals(self) -> List[int]:
        """Down-closed tile sets as bitmasks (bit ``t - 1`` for tile ``t``)."""
        rel = [(a - 1, b - 1) for a, b in self.relations]
        return [int(v) for v in kernels.order_ideals(self.n, rel)]

    def is_acyclic(self) -> bool:
        succ: Dict[int, List[int]] = {i: [] for i in range(1, self.n + 1)}
        for a, b in self.relations:
            succ[a].append(b)
        state = {}

        def visit(u):
            state[u] = 1
            for v in succ[u]:
                if state.get(v) == 1 or (v not in state and not visit(v)):
                    return False
            state[u] = 2
            return True

        return all(visit(u) for u in succ if u not in state)


def build_poset(G: SnakeGraph) -> MatchingPoset:
    """Tile poset whose order ideals index the perfect matchings.

    Consecutive tiles ``j, j+1`` are comparable.  The first relation is
    ``1 < 2`` when tile 2 is to the right of tile 1 and ``1 > 2`` when it is
    above; afterwards the relation keeps its sense across a change of
    direction and reverses along a straight run.
    """
    rels = []
    up = None
    for j, dname in enumerate(G.directions):
        if j == 0:
            up = dname == "right"
        elif dname == G.directions[j - 1]:
            up = not up
        a, b = j + 1, j + 2
        rels.append((a, b) if up else (b, a))
    return MatchingPoset(G.d, tuple(rels))


def build_band_poset(B: BandGraph) -> MatchingPoset:
    """Tile poset of the snake graph plus one relation between tiles 1 and n."""
    base = build_poset(B.snake)
    pm = minimal_matching(B.snake)
    has_first = B.first_cut in pm.edges
    has_last = B.last_cut in pm.edges
    n = B.d
    if has_first and not has_last:
        extra = (n, 1)
    elif has_last and not has_first:
        extra = (1, n)
    else:
        raise SnakeGraphError("minimal matching must contain exactly one copy of the cut edge")
    poset = MatchingPoset(n, base.relations + (extra,))
    if not poset.is_acyclic():
        raise SnakeGraphError("band poset relations contain a cycle")
    return poset


# ---------------------------------------------------------------------------
# twist parity


@dataclass(frozen=True)
class ParityReport:
    ok: bool
    checked: int
    failures: Tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {"status": "pass" if self.ok else "fail", "checked": self.checked, "failures": list(self.failures)}


def verify_twist_parity(G) -> ParityReport:
    """Odd tiles twist horizontal to vertical going up; even tiles the reverse."""
    lat = band_lattice(G) if isinstance(G, BandGraph) else matching_lattice(G)
    snake = lat.graph
    failures = []
    for lo, hi, t in lat.covers:
        low, high = lat.matchings[lo], lat.matchings[hi]
        te = snake.tile_edges[t - 1]
        horiz = {te[N], te[S]}
        vert = {te[E], te[W]}
        if high.degree != low.degree + 1:
            failures.append(f"cover {lo}->{hi} does not raise the height by one")
            continue
        if t % 2 == 1:
            ok = horiz <= low.edges and vert <= high.edges
        else:
            ok = vert <= low.edges and horiz <= high.edges
        if not ok:
            failures.append(f"twist on tile {t} between {lo} and {hi} breaks the parity rule")
    return ParityReport(not failures, len(lat.covers), tuple(failures))


# ---------------------------------------------------------------------------
# DOT export


def snake_to_dot(G, name: str = "snake") -> str:
    """Graphviz rendering with fixed node positions and edge labels."""
    if isinstance(G, BandGraph):
        edges, labels = G.glued_edges, G.glued_labels
        cut = G.first_cut
        graph = G.snake
    else:
        edges, labels, cut, graph = G.edges, G.labels, None, G
    pts = sorted({p for e in edges for p in e})
    ids = {p: f"v{x}_{y}" for p, (x, y) in zip(pts, pts)}
    lines = [f"graph {name} {{", "  node [shape=point];"]
    for p in pts:
        lines.append(f'  {ids[p]} [pos="{p[0]},{p[1]}!"];')
    for i, ((p, q), lab) in enumerate(zip(edges, labels)):
        style = ", style=bold" if cut is not None and i == cut else ""
        lines.append(f'  {ids[p]} -- {ids[q]} [label="{lab}"{style}];')
    for t in graph.tiles:
        x, y = t.position
        lines.append(f'  {ids[(x, y + 1)]} -- {ids[(x + 1, y)]} [label="{t.diagonal}", style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_dot(lat: MatchingLattice, name: str = "lattice") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i, m in enumerate(lat.matchings):
        label = ",".join(str(t) for t in m.height) or "-"
        lines.append(f'  m{i} [label="{{{label}}}"];')
    for lo, hi, t in lat.covers:
        lines.append(f'  m{lo} -> m{hi} [label="{t}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
