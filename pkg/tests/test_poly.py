import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kslope.errors import DegreeExceedsLineBundle, RootClusterAmbiguity, ZeroPolynomial
from kslope.poly import (
    ComplexPoly,
    chart_swap,
    derivative,
    evaluate,
    roots_with_multiplicity,
    taylor_shift,
    vanishing_order,
)

small = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, small, small)
coeff_lists = st.lists(cplx, min_size=1, max_size=7)


def from_roots(planted):
    p = ComplexPoly([1])
    for r, m in planted:
        for _ in range(m):
            p = p * ComplexPoly([-r, 1])
    return p


class TestEvaluate:
    def test_zero_polynomial(self):
        assert evaluate(ComplexPoly([0]), 5 + 1j) == 0

    def test_root_by_construction(self):
        assert abs(evaluate(ComplexPoly([1, 0, 1]), 1j)) < 1e-15

    def test_real_quadratic(self):
        assert evaluate(ComplexPoly([2, -3, 1]), 1.5) == pytest.approx(-0.25)

    def test_array_input_matches_numpy(self):
        c = np.array([1 - 2j, 0.5, 3j, -1])
        z = np.linspace(-2, 2, 9) + 0.3j
        np.testing.assert_allclose(evaluate(ComplexPoly(c), z), np.polyval(c[::-1], z), rtol=1e-14)

    def test_call_is_evaluate(self):
        p = ComplexPoly([1, 2, 3])
        assert p(2.0) == evaluate(p, 2.0) == 17


class TestDerivative:
    @pytest.mark.parametrize(
        "coeffs, expected",
        [([7], [0]), ([0, 0, 1], [0, 2]), ([1, 1, 1, 1], [1, 2, 3])],
    )
    def test_power_rule(self, coeffs, expected):
        assert derivative(ComplexPoly(coeffs)) == ComplexPoly(expected)

    @given(coeff_lists, coeff_lists)
    def test_linear(self, a, b):
        p, q = ComplexPoly(a), ComplexPoly(b)
        lhs = derivative(p + q).coeffs
        rhs = (derivative(p) + derivative(q)).coeffs
        n = max(lhs.size, rhs.size)
        np.testing.assert_allclose(np.pad(lhs, (0, n - lhs.size)), np.pad(rhs, (0, n - rhs.size)), atol=1e-12)


class TestChartSwap:
    @pytest.mark.parametrize(
        "coeffs, expected",
        [([0, 0, 1], [1, 0, 0]), ([1], [0, 0, 1]), ([1, 2], [0, 2, 1])],
    )
    def test_examples(self, coeffs, expected):
        assert chart_swap(ComplexPoly(coeffs), 2) == ComplexPoly(expected)

    def test_degree_too_high(self):
        with pytest.raises(DegreeExceedsLineBundle):
            chart_swap(ComplexPoly([0, 0, 0, 1]), 2)

    def test_trailing_zeros_do_not_count(self):
        assert chart_swap(ComplexPoly([1, 1, 0, 0]), 1) == ComplexPoly([1, 1])

    @given(coeff_lists, st.integers(0, 3))
    def test_involution(self, c, extra):
        p = ComplexPoly(c)
        d = max(len(c) - 1, 0) + extra
        if d == 0:
            d = 1
        assert chart_swap(chart_swap(p, d), d) == p

    @given(coeff_lists, cplx)
    def test_same_section_in_other_chart(self, c, w):
        p = ComplexPoly(c)
        d = len(c)
        if abs(w) < 1e-2:
            w += 0.5
        assert evaluate(chart_swap(p, d), w) == pytest.approx(w**d * evaluate(p, 1 / w), rel=1e-9, abs=1e-9)


@given(coeff_lists, cplx, cplx)
def test_taylor_shift_reexpands(c, z0, x):
    p = ComplexPoly(c)
    assert evaluate(taylor_shift(p, z0), x) == pytest.approx(evaluate(p, z0 + x), rel=1e-9, abs=1e-8)


class TestVanishingOrder:
    def test_double_root_at_origin(self):
        assert vanishing_order(ComplexPoly([0, 0, 1]), 0) == (2, 1)

    def test_nonvanishing(self):
        assert vanishing_order(ComplexPoly([1, 1]), 0) == (0, 1)

    def test_planted(self):
        # (z-1)^2 (z+2) = z^3 - 3z + 2; its second Taylor coefficient at 1 is 3
        k, lead = vanishing_order(ComplexPoly([2, -3, 0, 1]), 1)
        assert k == 2
        assert lead == pytest.approx(3)

    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomial):
            vanishing_order(ComplexPoly([0, 0]), 1)

    # total degree stays within the d <= 12 range the tolerances are tuned for
    @given(
        st.lists(st.tuples(st.integers(-2, 2), st.integers(1, 2)), min_size=1, max_size=3),
        st.lists(st.tuples(st.integers(-2, 2), st.integers(1, 2)), min_size=1, max_size=3),
        st.integers(-2, 2),
    )
    def test_orders_add(self, a, b, z0):
        p, q = from_roots([(complex(r), m) for r, m in a]), from_roots([(complex(r), m) for r, m in b])
        kp, lp = vanishing_order(p, z0)
        kq, lq = vanishing_order(q, z0)
        kpq, lpq = vanishing_order(p * q, z0)
        assert kpq == kp + kq
        assert lpq == pytest.approx(lp * lq, rel=1e-9)


class TestRoots:
    def test_simple(self):
        [c] = roots_with_multiplicity(ComplexPoly([0, 1]))
        assert c.location == 0 and c.multiplicity == 1

    def test_double(self):
        [c] = roots_with_multiplicity(ComplexPoly([0, 0, 1]))
        assert abs(c.location) < 1e-12 and c.multiplicity == 2

    def test_cubic_factorisation(self):
        cl = roots_with_multiplicity(ComplexPoly([0, -1, 0, 1]))
        assert [round(c.location.real, 12) for c in cl] == [-1, 0, 1]
        assert all(c.multiplicity == 1 for c in cl)

    def test_constant_has_no_roots(self):
        assert roots_with_multiplicity(ComplexPoly([3, 0, 0])) == []

    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomial):
            roots_with_multiplicity(ComplexPoly([0]))

    def test_unresolved_pair_is_ambiguous(self):
        # 5e-4 apart: one eigenvalue group, but the order at its centre is 1
        p = from_roots([(1.0, 1), (1.0 + 5e-4, 1)])
        with pytest.raises(RootClusterAmbiguity):
            roots_with_multiplicity(p)

    def test_pair_below_order_tolerance_is_one_double_root(self):
        # 1e-6 apart the constant Taylor term is 2.5e-13, far below the 1e-8 order tolerance
        [c] = roots_with_multiplicity(from_roots([(1.0, 1), (1.0 + 1e-6, 1)]))
        assert c.multiplicity == 2
        assert abs(c.location - (1 + 5e-7)) < 1e-12

    def test_well_separated_pair_is_resolved(self):
        cl = roots_with_multiplicity(from_roots([(1.0, 1), (1.01, 1)]))
        assert [c.multiplicity for c in cl] == [1, 1]

    def test_scale_invariance(self):
        p = from_roots([(2.0, 2), (-1j, 1)])
        a = roots_with_multiplicity(p)
        b = roots_with_multiplicity(ComplexPoly(p.coeffs * 1e7))
        assert [(c.multiplicity) for c in a] == [c.multiplicity for c in b]
        for x, y in zip(a, b):
            assert cmath.isclose(x.location, y.location, abs_tol=1e-9)

    def test_split_ring_of_fourfold_root_is_regrouped(self):
        # the eigenvalues of the 4-fold root at 3i scatter by ~2e-3, wider than the grouping radius
        found = roots_with_multiplicity(from_roots([(2j, 3), (3j, 4)]))
        got = {round(c.location.imag): (c.multiplicity, c.location) for c in found}
        assert set(got) == {2, 3} and got[2][0] == 3 and got[3][0] == 4
        assert abs(got[3][1] - 3j) < 1e-6

    @given(
        st.lists(
            st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 4)),
            min_size=1,
            max_size=3,
            unique_by=lambda x: (x[0], x[1]),
        )
    )
    def test_planted_roots_recovered(self, planted):
        roots = [(complex(a, b), m) for a, b, m in planted]
        if sum(m for _, m in roots) > 8:
            roots = roots[:1]
        p = from_roots(roots)
        found = roots_with_multiplicity(p)
        assert sum(c.multiplicity for c in found) == p.degree
        for r, m in roots:
            match = [c for c in found if abs(c.location - r) < 1e-6]
            assert len(match) == 1 and match[0].multiplicity == m
