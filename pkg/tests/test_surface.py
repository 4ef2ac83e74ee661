import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from clusterbasis.families import Annulus, Polygon
from clusterbasis.surface import (
    AmbiguousCurveError,
    CurveError,
    CurveWord,
    SurfaceError,
    build_triangulation,
    canonical_word,
    concatenate_closed,
    crossing_counts,
    curve_key,
    extend_principal,
    flip,
    load_fixture,
    realizing_flips,
    resolve,
    signed_adjacency,
)

SQUARE = {
    "arcs": ["t1"],
    "boundary": ["b0", "b1", "b2", "b3"],
    "triangles": [["t1", "b1", "b0"], ["b3", "b2", "t1"]],
}


def test_fixtures_match_family_models(surfaces):
    for name, fam in (("square", Polygon(4)), ("pentagon", Polygon(5)), ("hexagon", Polygon(6)),
                      ("annulus11", Annulus(1, 1)), ("annulus22", Annulus(2, 2))):
        assert surfaces[name].digest == fam.triangulation().digest


def test_signed_adjacency_values(surfaces):
    assert signed_adjacency(surfaces["square"]).tolist() == [[0]]
    assert signed_adjacency(surfaces["pentagon"]).tolist() == [[0, 1], [-1, 0]]
    assert signed_adjacency(surfaces["hexagon"]).tolist() == [[0, 1, 0], [-1, 0, 1], [0, -1, 0]]
    # the Kronecker quiver; the opposite global sign is an equally valid convention
    assert signed_adjacency(surfaces["annulus11"]).tolist() == [[0, -2], [2, 0]]
    assert extend_principal([[0, 1], [-1, 0]]).tolist() == [[0, 1], [-1, 0], [1, 0], [0, 1]]


def test_signed_adjacency_is_skew(surfaces):
    for T in surfaces.values():
        B = signed_adjacency(T)
        assert np.array_equal(B, -B.T)


def test_corner_names_are_optional():
    T = build_triangulation(SQUARE)
    assert T.n == 1 and len(T.points) == 4
    assert sorted(T.endpoints("t1")) == sorted(T.endpoints("t1")[::-1])


@pytest.mark.parametrize(
    "mutation, message",
    [
        (lambda s: s.update(arcs=[]), "arc"),
        (lambda s: s.update(arcs=["t1", "t1"]), "unique"),
        (lambda s: s["triangles"][0].__setitem__(1, "zz"), "zz"),
        (lambda s: s["triangles"][0].__setitem__(1, "b0"), "repeats"),
        (lambda s: s["triangles"][1].__setitem__(2, "b1"), "triangle"),
    ],
)
def test_invalid_triangulations(mutation, message):
    spec = json.loads(json.dumps(SQUARE))
    mutation(spec)
    with pytest.raises(SurfaceError, match=message):
        build_triangulation(spec)


def test_inconsistent_corner_names():
    spec = dict(SQUARE, vertices=[["p0", "p2", "p1"], ["p0", "p3", "p1"]])
    with pytest.raises(SurfaceError):
        build_triangulation(spec)


def test_flip_quadrilateral(surfaces):
    T = surfaces["pentagon"]
    T2, quad = flip(T, "t1")
    assert quad.sides == ("b1", "b0", "t2", "b2")
    assert T2.arcs == T.arcs
    T3, _ = flip(T2, "t1")
    assert T3.same_as(T)
    with pytest.raises(SurfaceError):
        flip(T, "b0")


@given(st.sampled_from(["pentagon", "hexagon", "annulus11", "annulus22"]), st.lists(st.integers(0, 3), max_size=6))
def test_flip_twice_is_identity(name, arcs):
    T = load_fixture(name)
    for i in arcs:
        arc = T.arcs[i % T.n]
        once, _ = flip(T, arc)
        twice, _ = flip(once, arc)
        assert twice.same_as(T)
        assert np.array_equal(signed_adjacency(twice), signed_adjacency(T))
        T = once


def test_resolve_words(surfaces):
    P = surfaces["pentagon"]
    assert resolve(P, CurveWord("open", ("t1", "t2"))).endpoints == ("p1", "p4")
    with pytest.raises(CurveError):
        resolve(P, CurveWord("open", ("t1", "t1")))
    with pytest.raises(CurveError):
        resolve(P, CurveWord("open", ("zz",)))
    with pytest.raises(CurveError):
        resolve(P, CurveWord("closed", ("t1", "t2")))
    with pytest.raises(CurveError):
        CurveWord("spiral", ())
    A = surfaces["annulus11"]
    with pytest.raises(AmbiguousCurveError):
        resolve(A, CurveWord("open", ("t1", "t2")))
    assert resolve(A, CurveWord("open", ("t1", "t2"), None, 0)).triangles == (0, 1, 0)


def test_curve_word_json_round_trip():
    w = CurveWord("open", ("t1", "t2"), ("p1", "p4"), 0)
    assert CurveWord.from_json(json.loads(json.dumps(w.to_json()))) == w
    with pytest.raises(CurveError):
        CurveWord.from_json({"crossings": []})


def test_closed_words_are_canonical_up_to_rotation(surfaces):
    A = surfaces["annulus22"]
    loop = Annulus(2, 2).loop_word(1)
    path = resolve(A, loop)
    d = path.length
    for r in range(d):
        rotated = CurveWord("closed", path.crossings[r:] + path.crossings[:r], None, path.triangles[r])
        assert curve_key(A, rotated) == curve_key(A, loop)
    twice = concatenate_closed(A, loop, 2)
    assert twice.length == 2 * d
    assert crossing_counts(A, twice) == {a: 2 * c for a, c in crossing_counts(A, loop).items()}


def test_reversed_arc_is_the_same_curve(surfaces):
    H = surfaces["hexagon"]
    fwd = CurveWord("open", ("t1", "t2", "t3"), ("p1", "p5"))
    rev = CurveWord("open", ("t3", "t2", "t1"), ("p5", "p1"))
    assert canonical_word(H, fwd) == canonical_word(H, rev)


def test_realizing_flips(surfaces):
    H = surfaces["hexagon"]
    assert realizing_flips(H, Polygon(6).arc_word(1, 5)) == ([1, 2, 3], 3)
    with pytest.raises(CurveError):
        realizing_flips(H, Annulus(1, 1).loop_word())
