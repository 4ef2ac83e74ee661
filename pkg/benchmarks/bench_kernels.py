"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths are called directly, so the environment flag does not matter
here; the numba column is skipped when numba cannot be imported.
"""

import argparse
import time

import numpy as np

from clusterbasis import kernels
from clusterbasis._accel import HAVE_NUMBA
from clusterbasis.snakegraph import _left_masks, build_poset, minimal_matching, snake_from_shape


def best_of(fn, repeat):
    fn()  # warm-up (includes compilation for numba)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    zigzag = snake_from_shape(["right", "above"] * 7)
    straight = snake_from_shape(["right"] * 14)
    for name, G in (("zigzag-15", zigzag), ("straight-15", straight)):
        start = np.int64(minimal_matching(G).mask)
        tiles = G.tile_array
        masks, _, _ = kernels.twist_closure(int(start), tiles)
        left = np.array(_left_masks(G), dtype=np.int64)
        rel = [(a - 1, b - 1) for a, b in build_poset(G).relations]
        lower = np.array([a for a, _ in rel], dtype=np.int64)
        upper = np.array([b for _, b in rel], dtype=np.int64)
        yield f"twist_closure {name}", (
            lambda: kernels._twist_closure_nb(start, tiles),
            lambda: kernels._twist_closure_np(start, tiles),
        )
        yield f"enclosed_tiles {name}", (
            lambda: kernels._enclosed_tiles_nb(masks, start, left),
            lambda: kernels._enclosed_tiles_np(masks, start, left),
        )
        yield f"order_ideals {name}", (
            lambda: kernels._order_ideals_nb(np.int64(G.d), lower, upper),
            lambda: kernels._order_ideals_np(G.d, lower, upper),
        )
    rng = np.random.default_rng(0)
    B = rng.integers(-3, 4, size=(40, 20)).astype(np.int64)
    yield "mutate_matrix 40x20 (x200)", (
        lambda: [kernels._mutate_matrix_nb(B, np.int64(k % 20)) for k in range(200)],
        lambda: [kernels._mutate_matrix_np(B, k % 20) for k in range(200)],
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':40s} {'numba (ms)':>12s} {'numpy (ms)':>12s}")
    for name, (nb, npf) in cases():
        t_np = best_of(npf, args.repeat) * 1e3
        t_nb = best_of(nb, args.repeat) * 1e3 if HAVE_NUMBA else float("nan")
        print(f"{name:40s} {t_nb:12.3f} {t_np:12.3f}")


if __name__ == "__main__":
    main()
