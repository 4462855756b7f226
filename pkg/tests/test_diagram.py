from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diagram_oracle import oracle_diagram
from kslope.diagram import (
    DiagramPoint,
    build_diagram,
    q_axis_intercept,
    slope_sum_identity_check,
)
from kslope.errors import MissingPAxisPoint, MissingQAxisPoint


def F(*xs):
    return [Fraction(x) for x in xs]


class TestExamples:
    def test_collapse(self):
        dg = build_diagram([(0, 3), (1, 0), (2, 0)])
        assert dg.vertices == ((0, 3), (1, 0))
        assert dg.slopes == (3,)

    def test_collinear_point_sits_on_face(self):
        dg = build_diagram([(0, 2), (1, 1), (2, 0)])
        assert dg.vertices == ((0, 2), (2, 0))
        assert dg.slopes == (1,)
        m = dg.face_membership[1]
        assert m.kind == "face" and m.index == 1

    def test_single_origin(self):
        dg = build_diagram([(0, 0)])
        assert dg.vertices == ((0, 0),) and dg.slopes == () and dg.M == 0
        assert dg.is_trivial()

    @pytest.mark.parametrize(
        "pts, q0",
        [([(0, 3), (1, 0)], 3), ([(0, 0)], 0), ([(0, 2), (2, 0)], 2)],
    )
    def test_intercept_and_telescoping(self, pts, q0):
        dg = build_diagram(pts)
        assert q_axis_intercept(dg) == q0
        assert slope_sum_identity_check(dg) == q0


class TestPreconditions:
    def test_missing_q_axis(self):
        with pytest.raises(MissingQAxisPoint):
            build_diagram([(1, 2), (2, 0)])

    def test_missing_p_axis(self):
        with pytest.raises(MissingPAxisPoint):
            build_diagram([(0, 2), (1, 1)])

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            DiagramPoint(-1, Fraction(0))


class TestMembership:
    def test_interior_and_ray_points(self):
        pts = [(0, 4), (0, 6), (1, 1), (2, 3), (3, 0), (5, 0)]
        dg = build_diagram(pts)
        assert dg.vertices == ((0, 4), (1, 1), (3, 0))
        kinds = [(m.kind, m.index) for m in dg.face_membership]
        assert kinds[0] == ("vertex", 0)
        assert kinds[1] == ("face", 0)  # on the vertical ray above V_0
        assert kinds[3] == ("interior", None)
        assert kinds[5] == ("face", dg.M + 1)  # on the horizontal ray

    def test_masses_add_at_exact_coincidence_only(self):
        pts = [DiagramPoint(0, Fraction(2), 1.5), DiagramPoint(0, Fraction(2), 0.5), DiagramPoint(1, Fraction(1), 7.0),
               DiagramPoint(2, Fraction(0), 3.0)]
        dg = build_diagram(pts)
        assert dg.vertices == ((0, 2), (2, 0))
        assert dg.vertex_masses == (2.0, 3.0)

    def test_sentinel_slopes(self):
        dg = build_diagram([(0, 3), (1, 1), (3, 0)])
        ext = dg.extended_slopes()
        assert ext[0] == float("inf") and ext[-1] == 0
        assert dg.slope(1) == 2 and dg.slope(2) == Fraction(1, 2)


# random rational point sets that satisfy the axis preconditions
rationals = st.builds(Fraction, st.integers(0, 36), st.integers(1, 3))
point_sets = st.tuples(
    st.lists(st.tuples(st.integers(0, 12), rationals), max_size=10),
    rationals,
    st.integers(0, 12),
).map(lambda x: [(0, x[1]), (x[2], Fraction(0)), *x[0]])


@given(point_sets)
def test_matches_oracle(pts):
    dg = build_diagram(pts)
    verts, slopes = oracle_diagram(pts)
    assert list(dg.vertices) == verts
    assert list(dg.slopes) == slopes


@given(point_sets)
def test_structural_invariants(pts):
    dg = build_diagram(pts)
    ps = [p for p, _ in dg.vertices]
    qs = [q for _, q in dg.vertices]
    assert ps == sorted(set(ps)) and qs == sorted(set(qs), reverse=True)
    assert all(a > b > 0 for a, b in zip(dg.slopes, dg.slopes[1:])) and all(m > 0 for m in dg.slopes)
    assert ps[0] == 0 and qs[-1] == 0
    for a in range(1, dg.M + 1):
        (p0, q0), (p1, q1) = dg.vertices[a - 1], dg.vertices[a]
        assert q0 - q1 + dg.slope(a) * (p0 - p1) == 0
    for p, q in pts:
        for a in range(1, dg.M + 1):
            pa, qa = dg.vertices[a]
            assert q - qa + dg.slope(a) * (p - pa) >= 0
    assert slope_sum_identity_check(dg) == q_axis_intercept(dg)


@given(point_sets)
def test_idempotent(pts):
    dg = build_diagram(pts)
    again = build_diagram(list(dg.vertices))
    assert again.vertices == dg.vertices and again.slopes == dg.slopes
