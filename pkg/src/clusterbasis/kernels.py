"""Integer inner loops shared by the graph and seed code.

Every kernel exists twice: a numba-compiled loop (``*_nb``) and a vectorised
numpy version (``*_np``).  The public wrappers pick one according to
:func:`clusterbasis._accel.use_numba` and normalise the output so both paths
return identical arrays.

Edge sets and order ideals are packed into ``int64`` bitmasks, so snake graphs
are limited to ``MAX_KERNEL_EDGES`` edges here; callers fall back to plain
Python for anything larger.
"""

import numpy as np

from ._accel import njit, use_numba

MAX_KERNEL_EDGES = 62
MAX_KERNEL_POSET = 24


# --------------------------------------------------------------------------
# matrix mutation


@njit(cache=True)
def _mutate_matrix_nb(B, k):
    m, n = B.shape
    out = B.copy()
    for i in range(m):
        for j in range(n):
            if i == k or j == k:
                out[i, j] = -B[i, j]
            else:
                p = B[i, k] * B[k, j]
                if p > 0:
                    if B[i, k] > 0:
                        out[i, j] = B[i, j] + p
                    else:
                        out[i, j] = B[i, j] - p
    return out


def _mutate_matrix_np(B, k):
    col = B[:, k : k + 1]
    row = B[k : k + 1, :]
    prod = col * row
    out = B + np.sign(col) * np.maximum(prod, 0)
    out[k, :] = -B[k, :]
    out[:, k] = -B[:, k]
    return out


def mutate_matrix_array(B: np.ndarray, k: int) -> np.ndarray:
    """Mutate an ``m x n`` integer matrix in direction ``k`` (0-based)."""
    B = np.ascontiguousarray(B, dtype=np.int64)
    if use_numba():
        return _mutate_matrix_nb(B, np.int64(k))
    return _mutate_matrix_np(B, k)


# --------------------------------------------------------------------------
# twist closure of perfect matchings


@njit(cache=True)
def _twist_closure_nb(start, tiles):
    one = np.int64(1)
    ntiles = tiles.shape[0]
    hmask = np.empty(ntiles, dtype=np.int64)
    vmask = np.empty(ntiles, dtype=np.int64)
    for t in range(ntiles):
        hmask[t] = (one << tiles[t, 0]) | (one << tiles[t, 2])
        vmask[t] = (one << tiles[t, 1]) | (one << tiles[t, 3])

    index = {start: 0}
    masks = [start]
    levels = [0]
    esrc = [0]
    edst = [0]
    etile = [0]
    head = 0
    while head < len(masks):
        m = masks[head]
        for t in range(ntiles):
            h = hmask[t]
            v = vmask[t]
            if (m & h) == h:
                nm = (m & ~h) | v
            elif (m & v) == v:
                nm = (m & ~v) | h
            else:
                continue
            j = index.get(nm, -1)
            if j < 0:
                j = len(masks)
                index[nm] = j
                masks.append(nm)
                levels.append(levels[head] + 1)
            if head < j:
                esrc.append(head)
                edst.append(j)
                etile.append(t)
        head += 1

    nm_out = np.empty(len(masks), dtype=np.int64)
    lv_out = np.empty(len(masks), dtype=np.int64)
    for i in range(len(masks)):
        nm_out[i] = masks[i]
        lv_out[i] = levels[i]
    ne = len(esrc) - 1
    e_out = np.empty((ne, 3), dtype=np.int64)
    for i in range(ne):
        e_out[i, 0] = esrc[i + 1]
        e_out[i, 1] = edst[i + 1]
        e_out[i, 2] = etile[i + 1]
    return nm_out, lv_out, e_out


def _twist_closure_np(start, tiles):
    one = np.int64(1)
    hmask = (one << tiles[:, 0]) | (one << tiles[:, 2])
    vmask = (one << tiles[:, 1]) | (one << tiles[:, 3])

    index = {int(start): 0}
    masks = [int(start)]
    levels = [0]
    edges = []
    frontier = np.array([start], dtype=np.int64)
    level = 0
    while frontier.size:
        m = frontier[:, None]
        has_h = (m & hmask) == hmask
        has_v = (m & vmask) == vmask
        twisted = np.where(has_h, (m & ~hmask) | vmask, (m & ~vmask) | hmask)
        fi, ti = np.nonzero(has_h | has_v)
        targets = twisted[fi, ti]
        level += 1
        fresh = []
        for src, dst, t in zip(frontier[fi].tolist(), targets.tolist(), ti.tolist()):
            j = index.get(dst)
            if j is None:
                j = len(masks)
                index[dst] = j
                masks.append(dst)
                levels.append(level)
                fresh.append(dst)
            i = index[src]
            if i < j:
                edges.append((i, j, t))
        frontier = np.array(fresh, dtype=np.int64)

    e_out = np.array(edges, dtype=np.int64).reshape(-1, 3)
    return np.array(masks, dtype=np.int64), np.array(levels, dtype=np.int64), e_out


def _canonical_closure(masks, levels, edges):
    order = np.lexsort((masks, levels))
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    e = edges.copy()
    if e.size:
        e[:, 0] = rank[edges[:, 0]]
        e[:, 1] = rank[edges[:, 1]]
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        e[:, 0], e[:, 1] = lo, hi
        e = e[np.lexsort((e[:, 2], e[:, 1], e[:, 0]))]
    return masks[order], levels[order], e


def twist_closure(start: int, tiles: np.ndarray):
    """All edge masks reachable from ``start`` by tile twists.

    ``tiles`` is a ``(d, 4)`` array of edge indices in N, E, S, W order.
    Returns ``(masks, levels, edges)`` sorted by (level, mask); ``edges`` rows
    are ``(i, j, tile)`` with ``i < j`` indexing ``masks``.
    """
    tiles = np.ascontiguousarray(tiles, dtype=np.int64)
    if use_numba():
        raw = _twist_closure_nb(np.int64(start), tiles)
    else:
        raw = _twist_closure_np(np.int64(start), tiles)
    return _canonical_closure(*raw)


# --------------------------------------------------------------------------
# height monomials by enclosure parity


@njit(cache=True)
def _enclosed_tiles_nb(masks, base, left):
    out = np.zeros(masks.shape[0], dtype=np.int64)
    one = np.int64(1)
    for i in range(masks.shape[0]):
        diff = masks[i] ^ base
        bits = np.int64(0)
        for t in range(left.shape[0]):
            x = diff & left[t]
            c = 0
            while x:
                x &= x - 1
                c += 1
            if c & 1:
                bits |= one << t
        out[i] = bits
    return out


def _enclosed_tiles_np(masks, base, left):
    diff = (masks ^ base)[:, None] & left[None, :]
    odd = (np.bitwise_count(diff) & 1).astype(np.int64)
    weights = np.int64(1) << np.arange(left.shape[0], dtype=np.int64)
    return (odd * weights).sum(axis=1).astype(np.int64)


def enclosed_tiles(masks: np.ndarray, base: int, left: np.ndarray) -> np.ndarray:
    """Tile bitmask enclosed by ``mask ^ base`` for every mask.

    ``left[t]`` holds the vertical edges whose horizontal ray from the centre
    of tile ``t`` towards -x crosses; odd crossing parity means enclosed.
    """
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    left = np.ascontiguousarray(left, dtype=np.int64)
    if use_numba():
        return _enclosed_tiles_nb(masks, np.int64(base), left)
    return _enclosed_tiles_np(masks, np.int64(base), left)


# --------------------------------------------------------------------------
# order ideals


@njit(cache=True)
def _order_ideals_nb(n, lower, upper):
    total = np.int64(1) << n
    keep = np.zeros(total, dtype=np.bool_)
    count = 0
    for s in range(total):
        ok = True
        for r in range(lower.shape[0]):
            if (s >> upper[r]) & 1 and not (s >> lower[r]) & 1:
                ok = False
                break
        if ok:
            keep[s] = True
            count += 1
    out = np.empty(count, dtype=np.int64)
    c = 0
    for s in range(total):
        if keep[s]:
            out[c] = s
            c += 1
    return out


def _order_ideals_np(n, lower, upper):
    s = np.arange(np.int64(1) << n, dtype=np.int64)
    ok = np.ones(s.shape, dtype=bool)
    for lo, hi in zip(lower.tolist(), upper.tolist()):
        ok &= ((s >> hi) & 1) <= ((s >> lo) & 1)
    return s[ok]


def order_ideals(n: int, relations) -> np.ndarray:
    """Bitmasks of the down-closed subsets of ``{0..n-1}``.

    ``relations`` is an iterable of ``(a, b)`` meaning ``a < b``.
    """
    if n > MAX_KERNEL_POSET:
        raise ValueError(f"poset with {n} elements is too large for bitmask ideals")
    rel = np.array(list(relations), dtype=np.int64).reshape(-1, 2)
    lower = np.ascontiguousarray(rel[:, 0])
    upper = np.ascontiguousarray(rel[:, 1])
    if use_numba():
        return _order_ideals_nb(np.int64(n), lower, upper)
    return _order_ideals_np(n, lower, upper)
