import threading

import pytest
from hypothesis import given, strategies as st

from clusterbasis.bases import bracelet_word
from clusterbasis.expansion import (
    CACHE,
    ExpansionError,
    ExpansionCache,
    expand_arc,
    expand_loop,
    f_polynomial,
    g_vector,
    verify_offsets,
)
from clusterbasis.families import Annulus, Polygon
from clusterbasis.laurent import LaurentPoly
from clusterbasis.surface import CurveError, CurveWord, extend_principal, load_fixture, resolve, signed_adjacency

# (fixture, crossings, start triangle) -> (Laurent text, F-polynomial, g-vector)
FROZEN = {
    ("square", ("t1",), 0): ("(1 + y1)*x1^-1", "1 + y1", (-1,)),
    ("pentagon", ("t1",), 0): ("(x2 + y1)*x1^-1", "1 + y1", (-1, 1)),
    ("pentagon", ("t2",), 1): ("(1 + x1*y2)*x2^-1", "1 + y2", (0, -1)),
    ("pentagon", ("t1", "t2"), 0): ("(x2 + y1 + x1*y1*y2)*x1^-1*x2^-1", "1 + y1 + y1*y2", (-1, 0)),
    ("hexagon", ("t1", "t2", "t3"), 0): (
        "(x2*x3 + x3*y1 + x1*y1*y2 + x1*x2*y1*y2*y3)*x1^-1*x2^-1*x3^-1",
        "1 + y1 + y1*y2 + y1*y2*y3",
        (-1, 0, 0),
    ),
    ("annulus11", ("t1",), 0): ("(1 + x2^2*y1)*x1^-1", "1 + y1", (-1, 0)),
    ("annulus11", ("t2",), 0): ("(y2 + x1^2)*x2^-1", "1 + y2", (2, -1)),
    ("annulus11", ("t1", "t2", "t1"), 0): (
        "(y2 + x1^2 + 2*x2^2*y1*y2 + x2^4*y1^2*y2)*x1^-2*x2^-1",
        "1 + y2 + 2*y1*y2 + y1^2*y2",
        (0, -1),
    ),
}

LOOP_11 = ("(y2 + x1^2 + x2^2*y1*y2)*x1^-1*x2^-1", "1 + y2 + y1*y2", (1, -1))


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_arc_expansions(key):
    name, crossings, start = key
    T = load_fixture(name)
    r = expand_arc(T, CurveWord("open", crossings, None, start))
    text, f, g = FROZEN[key]
    assert (r.laurent.to_text(), r.f_poly.to_text(factor=False), r.g) == (text, f, g)
    assert g_vector(r, signed_adjacency(T)) == g
    assert f_polynomial(r).to_text(factor=False) == f


def test_frozen_loop_expansion():
    T = load_fixture("annulus11")
    r = expand_loop(T, Annulus(1, 1).loop_word())
    assert (r.laurent.to_text(), r.f_poly.to_text(factor=False), r.g) == LOOP_11
    assert len(r.laurent) == 3


def test_initial_arcs_are_variables():
    T = load_fixture("hexagon")
    for i, a in enumerate(T.arcs):
        r = expand_arc(T, CurveWord("open", (), None, None, a))
        assert r.laurent.to_text() == f"x{i + 1}"
    assert expand_arc(T, CurveWord("open", (), None, None, "b0")).laurent.to_text() == "1"


def test_kinks_monogons_and_contractible_loops():
    T = load_fixture("pentagon")
    w = CurveWord("open", ("t1",), None, 0)
    plain = expand_arc(T, w).laurent
    assert expand_arc(T, w, kinks=1).laurent == -plain
    assert expand_arc(T, w, kinks=2).laurent == plain
    assert expand_arc(T, w, monogon=True).laurent.is_zero()
    c = expand_loop(T, None, contractible=True)
    assert c.laurent == LaurentPoly.const(c.laurent.ctx, -2)
    with pytest.raises(ValueError):
        expand_arc(T, w, kinks=-1)
    with pytest.raises(CurveError):
        expand_loop(T, w)


@given(st.sampled_from([(1, 1), (2, 2), (1, 2), (2, 1)]), st.integers(1, 3), st.data())
def test_loop_expansion_is_rotation_invariant(pq, k, data):
    A = Annulus(*pq)
    T = A.triangulation()
    path = resolve(T, bracelet_word(T, A.loop_word(), k))
    r = data.draw(st.integers(0, path.length - 1))
    rotated = CurveWord("closed", path.crossings[r:] + path.crossings[:r], None, path.triangles[r])
    CACHE.clear()
    assert expand_loop(T, rotated).laurent == expand_loop(T, path.word()).laurent


@given(st.integers(4, 8), st.data())
def test_arc_expansion_ignores_orientation(n, data):
    P = Polygon(n)
    T = P.triangulation()
    a, b = data.draw(st.sampled_from(P.diagonals()))
    w = P.arc_word(a, b)
    if not w.crossings:
        return
    rev = CurveWord("open", tuple(reversed(w.crossings)), tuple(reversed(w.endpoints)))
    CACHE.clear()
    r1 = expand_arc(T, w)
    CACHE.clear()
    assert expand_arc(T, rev).laurent == r1.laurent
    assert r1.f_poly.coefficient(r1.f_poly.ctx.zero_exponents()) == 1


def test_offsets_certificate():
    T = load_fixture("annulus11")
    Bt = extend_principal(signed_adjacency(T))
    r = expand_loop(T, Annulus(1, 1).loop_word())
    assert verify_offsets(r, Bt).ok
    ctx = r.laurent.ctx
    x1 = LaurentPoly.var(ctx, "x1")
    y1 = LaurentPoly.var(ctx, "y1")
    assert not verify_offsets(x1 + x1 * y1, Bt).ok
    assert not verify_offsets(x1 + 1, Bt).ok


def test_g_vector_requires_one_free_term():
    T = load_fixture("pentagon")
    r = expand_arc(T, CurveWord("open", ("t1",), None, 0))
    bad = type(r)(r.laurent + 1, r.f_poly, None, "arc", {}, "")
    with pytest.raises(ExpansionError):
        g_vector(bad, signed_adjacency(T))
    with pytest.raises(ExpansionError):
        f_polynomial(type(r)(r.laurent, r.f_poly + 1, None, "arc", {}, ""))


def test_cache_is_shared_safely_between_threads():
    cache = ExpansionCache()
    T = load_fixture("annulus22")
    w = Annulus(2, 2).loop_word()
    results = []

    def work():
        hit = cache.get("loop")
        if hit is None:
            CACHE.clear()
            hit = cache.put("loop", expand_loop(T, w))
        results.append(hit)

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(cache) == 1
    assert all(r is results[0] for r in results)


def test_result_json_shape():
    T = load_fixture("square")
    data = expand_arc(T, CurveWord("open", ("t1",), None, 0)).to_json()
    assert data["laurent"] == "(1 + y1)*x1^-1"
    assert data["g_vector"] == [-1]
    assert data["triangulation"] == T.digest
