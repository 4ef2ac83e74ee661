import pytest

from clusterbasis.families import Annulus, CatalogCurve, FamilyError, Polygon, catalog_arcs, parse_family
from clusterbasis.surface import CurveWord, canonical_word


def test_parse_family():
    assert isinstance(parse_family("polygon(5)"), Polygon)
    assert isinstance(parse_family(" annulus( 2 , 3 ) "), Annulus)
    for bad in ("torus(1)", "polygon(5,2)", "annulus(1)", "polygon(3)"):
        with pytest.raises(FamilyError):
            parse_family(bad)


@pytest.mark.parametrize("n", range(4, 9))
def test_polygon_catalog_has_every_diagonal(n):
    P = Polygon(n)
    assert len(P.catalog()) == n * (n - 3) // 2
    assert len(catalog_arcs(P, 1)) == (n - 3) + (n - 3)


def test_annulus_catalog_frozen():
    A = Annulus(1, 1)
    cat = A.catalog(4)
    arcs = [c for c in cat if c.kind == "arc"]
    loops = [c for c in cat if c.kind == "loop"]
    assert sorted(c.length for c in arcs) == [0, 0, 1, 1, 3, 3]
    assert [c.word.crossings for c in loops] == [("t1", "t2"), ("t1", "t2", "t1", "t2")]
    with pytest.raises(FamilyError):
        A.catalog(None)
    with pytest.raises(FamilyError):
        catalog_arcs(A, -1)


def test_annulus_catalog_counts():
    assert len([c for c in Annulus(2, 2).catalog(6) if c.kind == "arc"]) == 20


def test_catalog_words_are_canonical_and_distinct():
    A = Annulus(2, 2)
    T = A.triangulation()
    cat = A.catalog(5)
    assert all(canonical_word(T, c.word) == c.word for c in cat)
    assert len({(c.word.crossings, c.word.start_triangle, c.word.edge) for c in cat}) == len(cat)


def test_polygon_crossing_rule():
    P = Polygon(6)
    d = {c.geometry[1:]: c for c in P.catalog()}
    assert P.crosses(d[(0, 3)], d[(1, 4)])
    assert not P.crosses(d[(0, 3)], d[(0, 2)])
    assert not P.crosses(d[(1, 3)], d[(3, 5)])


def test_annulus_crossing_rules():
    A = Annulus(1, 1)
    loop = CatalogCurve(A.loop_word(), "loop", ("loop",), 1)
    bridge = CatalogCurve(CurveWord("open", ()), "arc", ("chord", ("T", 0), ("B", 0)))
    peripheral = CatalogCurve(CurveWord("open", ()), "arc", ("chord", ("B", 0), ("B", 2)))
    assert A.crosses(loop, bridge)
    assert not A.crosses(loop, peripheral)
    assert not A.crosses(loop, loop)
    shifted = CatalogCurve(CurveWord("open", ()), "arc", ("chord", ("T", 0), ("B", 1)))
    far = CatalogCurve(CurveWord("open", ()), "arc", ("chord", ("T", 0), ("B", 3)))
    assert not A.crosses(bridge, shifted)
    assert A.crosses(bridge, far)


def test_anti_arc_requires_an_arc():
    with pytest.raises(FamilyError):
        Polygon(6).anti_arc("b0")
    assert Polygon(6).anti_arc("t2").endpoints == ("p2", "p5")
