import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from clusterbasis import _accel, kernels
from clusterbasis.snakegraph import _left_masks, build_poset, minimal_matching, snake_from_shape

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba unavailable")
shapes = st.lists(st.sampled_from(["right", "above"]), max_size=9)

WORKLOAD = r"""
import json, hashlib
from clusterbasis import _accel
from clusterbasis.families import Annulus, Polygon
from clusterbasis.bases import bracelet_word
from clusterbasis.expansion import expand_arc, expand_loop
from clusterbasis.snakegraph import matching_lattice, snake_from_shape, all_shapes, build_poset
from clusterbasis.cluster import mutate_matrix
out = []
for d in range(1, 7):
    for dirs in all_shapes(d):
        G = snake_from_shape(dirs)
        lat = matching_lattice(G)
        out.append([[sorted(m.edges), list(m.height)] for m in lat.matchings])
        out.append([list(c) for c in lat.covers])
        out.append(len(build_poset(G).order_ideals()))
A = Annulus(1, 1); T = A.triangulation()
out.append(expand_loop(T, bracelet_word(T, A.loop_word(), 3)).laurent.to_text())
P = Polygon(7); out.append(expand_arc(P.triangulation(), P.arc_word(1, 6)).laurent.to_text())
out.append(mutate_matrix([[0, 2, -1], [-2, 0, 3], [1, -3, 0], [1, 0, 0]], 2).tolist())
print(json.dumps({"numba": _accel.use_numba(),
                  "digest": hashlib.sha256(json.dumps(out).encode()).hexdigest()}))
"""


def _run(disable):
    env = dict(os.environ)
    env.pop("CLUSTERBASIS_DISABLE_NUMBA", None)
    if disable:
        env["CLUSTERBASIS_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def test_env_flag_switches_path_without_changing_results():
    plain = _run(disable=False)
    fallback = _run(disable=True)
    assert fallback["numba"] is False
    assert plain["numba"] is _accel.HAVE_NUMBA
    assert plain["digest"] == fallback["digest"]


def _closure_inputs(dirs):
    G = snake_from_shape(dirs)
    return G, np.int64(minimal_matching(G).mask), G.tile_array


@needs_numba
@given(shapes)
def test_twist_closure_paths_agree(dirs):
    G, start, tiles = _closure_inputs(dirs)
    nb = kernels._canonical_closure(*kernels._twist_closure_nb(start, tiles))
    npy = kernels._canonical_closure(*kernels._twist_closure_np(start, tiles))
    for a, b in zip(nb, npy):
        assert np.array_equal(a, b)


@needs_numba
@given(shapes)
def test_enclosed_tiles_paths_agree(dirs):
    G, start, tiles = _closure_inputs(dirs)
    masks = np.asarray(kernels.twist_closure(int(start), tiles)[0], dtype=np.int64)
    left = np.array(_left_masks(G), dtype=np.int64)
    assert np.array_equal(
        kernels._enclosed_tiles_nb(masks, start, left), kernels._enclosed_tiles_np(masks, start, left)
    )


@needs_numba
@given(shapes)
def test_order_ideal_paths_agree(dirs):
    G = snake_from_shape(dirs)
    rel = np.array([(a - 1, b - 1) for a, b in build_poset(G).relations], dtype=np.int64).reshape(-1, 2)
    lower, upper = np.ascontiguousarray(rel[:, 0]), np.ascontiguousarray(rel[:, 1])
    assert np.array_equal(
        kernels._order_ideals_nb(np.int64(G.d), lower, upper), kernels._order_ideals_np(G.d, lower, upper)
    )


@needs_numba
@given(st.integers(1, 5), st.integers(0, 3), st.data())
def test_matrix_mutation_paths_agree(n, extra, data):
    vals = data.draw(st.lists(st.integers(-3, 3), min_size=(n + extra) * n, max_size=(n + extra) * n))
    B = np.array(vals, dtype=np.int64).reshape(n + extra, n)
    k = data.draw(st.integers(0, n - 1))
    assert np.array_equal(kernels._mutate_matrix_nb(B, np.int64(k)), kernels._mutate_matrix_np(B, k))


def test_order_ideals_limit():
    with pytest.raises(ValueError):
        kernels.order_ideals(kernels.MAX_KERNEL_POSET + 1, [])


def test_fallback_decorator_is_transparent(monkeypatch):
    monkeypatch.setattr(_accel, "HAVE_NUMBA", False)
    assert not _accel.use_numba()

    @_accel.njit(cache=True)
    def f(x):
        return x + 1

    assert f(1) == 2
    assert _accel.njit(lambda x: x * 2)(3) == 6
