"""Vertex enumeration, face dimensions, and the fast vertex oracle."""

from qsecfan import HPolytope, Rational, Scalar, VertexOracle, virtual_indices
from qsecfan.linalg import vec

from conftest import SQ2, cal_of

S = Scalar.coerce


def unit_square():
    return HPolytope(2, ((1, 0), (0, 1), (-1, 0), (0, -1)), (0, 0, 1, 1))


def test_square_vertices():
    P = unit_square()
    verts = [v for v, _ in P.vertices()]
    assert set(verts) == {(S(0), S(0)), (S(0), S(1)), (S(1), S(0)), (S(1), S(1))}
    assert P.dimension() == 2
    assert P.is_bounded()
    assert P.is_simple()
    assert P.facet_indices() == [0, 1, 2, 3]


def test_redundant_constraint_is_not_a_facet():
    P = HPolytope(2, ((1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)), (0, 0, 1, 1, 5))
    assert P.facet_indices() == [0, 1, 2, 3]
    assert P.facet_dim(4) == -1  # the face it cuts is empty


def test_lower_dimensional_and_empty():
    # segment: x >= 0, x <= 1, y = 0
    P = HPolytope(2, ((1, 0), (-1, 0), (0, 1), (0, -1)), (0, 1, 0, 0))
    assert P.dimension() == 1
    empty = HPolytope(1, ((1,), (-1,)), (0, -1))
    assert empty.is_empty()
    assert empty.dimension() == -1


def test_unbounded():
    P = HPolytope(2, ((1, 0), (0, 1)), (0, 0))
    assert not P.is_bounded()
    assert P.dimension() == 2
    assert P.vertices() == [((S(0), S(0)), frozenset({0, 1}))]


def test_irrational_vertex_coordinates(qex):
    b = vec([1, 1, 1, 1])
    P = HPolytope.from_parameter(qex, b)
    verts = {v for v, _ in P.vertices()}
    # the facets of columns 3 and 4 meet at an exact sqrt(2)-point
    assert (SQ2 - S(1), SQ2 - S(1)) in verts
    assert P.is_bounded() and P.is_simple()


def test_virtual_indices(qex, qex_t1):
    assert virtual_indices(qex, vec([1, 1, 1, 1])) == frozenset()
    # at this parameter of the deformed calibration constraint 4 is redundant
    assert virtual_indices(qex_t1, vec([0, 0, 1, 1])) == frozenset({4})
    P = HPolytope.from_parameter(qex_t1, vec([0, 0, 1, 1]))
    assert P.facet_dim(3) == -1


def test_non_simple_vertex():
    # square pyramid: the apex lies on four facets
    P = HPolytope(3, ((0, 0, 1), (-1, 0, -1), (1, 0, -1), (0, -1, -1), (0, 1, -1)),
                  (0, 1, 1, 1, 1))
    apex = next(t for v, t in P.vertices() if v == (S(0), S(0), S(1)))
    assert len(apex) == 4
    assert not P.is_simple()


def test_tight_constraint_on_non_facet_does_not_break_simplicity():
    # a redundant constraint through a vertex is ignored by is_simple
    P = HPolytope(2, ((1, 0), (0, 1), (1, 1), (-1, -1)), (0, 0, 0, 1))
    assert P.facet_dim(2) < 1
    assert P.is_simple()


def test_vertex_oracle_matches_enumeration(qex, fig5):
    for cal in (qex, fig5):
        oracle = VertexOracle(cal)
        for b in (vec([1] * cal.n), vec([Rational(i + 1, 3) for i in range(cal.n)])):
            P = HPolytope.from_parameter(cal, b)
            expected = set()
            for _, tight in P.vertices():
                expected.add(frozenset(i + 1 for i in tight))
            assert oracle.comb_key(b) == expected


def test_face_dim_of_vertex_tight_set():
    P = unit_square()
    for v, tight in P.vertices():
        assert P.face_dim(sorted(tight)) == 0


def test_json_shape():
    data = unit_square().to_json()
    assert data["dimension"] == 2 and data["bounded"]
    assert len(data["vertices"]) == 4
