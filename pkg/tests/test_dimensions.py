from fractions import Fraction

import numpy as np
import pytest

from semistable_lab.dimensions import (
    RECURRENT,
    TRANSIENT,
    SpectrumSummary,
    classify_recurrence,
    dimension_report,
    double_point_dim,
    double_point_dim_case,
    graph_dim,
    range_dim,
)
from semistable_lab.errors import Dimension1Unsupported, InvalidSpectrum
from semistable_lab.spectral import decompose


def spectrum(alphas, mults):
    return SpectrumSummary(alphas=tuple(alphas), multiplicities=tuple(mults))


class TestSpectrumSummary:
    def test_from_decomposition_orders_alphas_decreasing(self):
        dec = decompose(np.diag([0.6, 1.5]))
        s = SpectrumSummary.from_decomposition(dec)
        assert s.alphas == pytest.approx((5.0 / 3.0, 2.0 / 3.0))
        assert s.multiplicities == (1, 1)
        assert s.sorted_alphas == pytest.approx((5.0 / 3.0, 2.0 / 3.0))

    def test_invalid_spectra_rejected(self):
        with pytest.raises(InvalidSpectrum):
            spectrum([2.5], [1])
        with pytest.raises(InvalidSpectrum):
            spectrum([1.0, 1.5], [1, 1])


class TestRangeDim:
    def test_first_branch_multi_d(self):
        assert range_dim(spectrum([1.25], [2]), 1.0) == pytest.approx(1.25)

    def test_second_branch_multi_d(self):
        expected = 1.0 + Fraction(2, 3) * (1 - Fraction(3, 5))
        got = range_dim(spectrum([5 / 3, 2 / 3], [1, 1]), 1.0)
        assert got == pytest.approx(float(expected))

    def test_scalar(self):
        assert range_dim(spectrum([0.5], [1]), 1.0) == pytest.approx(0.5)
        assert range_dim(spectrum([1.7], [1]), 1.0) == pytest.approx(1.0)

    def test_branch_continuity(self):
        s = spectrum([5 / 3, 2 / 3], [1, 1])
        s_star = 1.0 / (5 / 3)  # alpha1 * s == d1 boundary
        below = range_dim(s, s_star - 1e-13)
        above = range_dim(s, s_star + 1e-13)
        assert abs(below - above) < 1e-11

    def test_monotone_in_s(self):
        s = spectrum([1.4, 0.9], [1, 2])
        grid = np.linspace(0.0, 1.0, 41)
        vals = [range_dim(s, t) for t in grid]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_single_block_multi_d_never_overflows(self):
        # with p = 1 and d >= 2, alpha1 * s <= 2 <= d1, so the first branch
        # always applies and the missing-second-index guard stays unreachable
        rng = np.random.default_rng(12)
        for _ in range(30):
            a1 = rng.uniform(0.5, 2.0)
            m = int(rng.integers(2, 5))
            val = range_dim(spectrum([a1], [m]), float(rng.uniform(0, 1)))
            assert 0.0 <= val <= m


class TestGraphDim:
    def test_scalar_cases(self):
        assert graph_dim(spectrum([2.0], [1]), 1.0) == pytest.approx(1.5)
        assert graph_dim(spectrum([0.7], [1]), 1.0) == pytest.approx(1.0)

    def test_multi_d_second_branch(self):
        got = graph_dim(spectrum([5 / 3, 2 / 3], [1, 1]), 1.0)
        assert got == pytest.approx(1.4)

    def test_graph_at_least_range_when_range_small(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            a1 = rng.uniform(0.5, 2.0)
            a2 = rng.uniform(0.3, min(a1 - 0.05, 2.0))
            m1 = int(rng.integers(1, 3))
            m2 = int(rng.integers(1, 3))
            s = spectrum([a1, a2], [m1, m2])
            for t in rng.uniform(0.1, 1.0, size=3):
                assert graph_dim(s, t) >= range_dim(s, t) - 1e-12 or range_dim(
                    s, t
                ) > s.d - 1e-12

    def test_branch_continuity(self):
        s = spectrum([1.8, 0.9], [1, 1])
        s_star = 1.0 / 1.8
        assert graph_dim(s, s_star - 1e-13) == pytest.approx(
            graph_dim(s, s_star + 1e-13), abs=1e-11
        )


class TestDoublePoints:
    def test_equal_indices_d2(self):
        assert double_point_dim(spectrum([1.5], [2])) == pytest.approx(1.0)

    def test_brownian_d3(self):
        assert double_point_dim(spectrum([2.0], [3])) == pytest.approx(1.0)

    def test_d4_empty(self):
        value, case = double_point_dim_case(spectrum([1.5], [4]))
        assert value is None
        assert "empty" in case

    def test_negative_value_reported_empty(self):
        # exact-fraction oracle for the d=2 formula at (1.1, 0.9)
        a1, a2 = Fraction(11, 10), Fraction(9, 10)
        oracle = min(a1 * (2 - 1 / a1 - 1 / a2), 2 * a2 * (1 - 1 / a1))
        assert oracle < 0
        assert double_point_dim(spectrum([1.1, 0.9], [1, 1])) is None

    def test_mixed_d2_positive(self):
        a1, a2 = Fraction(18, 10), Fraction(12, 10)
        oracle = float(min(a1 * (2 - 1 / a1 - 1 / a2), 2 * a2 * (1 - 1 / a1)))
        got = double_point_dim(spectrum([1.8, 1.2], [1, 1]))
        assert got == pytest.approx(oracle, rel=1e-12)

    def test_dimension_one_unsupported(self):
        with pytest.raises(Dimension1Unsupported):
            double_point_dim(spectrum([1.5], [1]))


class TestRecurrence:
    @pytest.mark.parametrize(
        "alphas,mults,gaussian,expected",
        [
            ((1.0,), (1,), False, RECURRENT),
            ((1.5,), (1,), False, RECURRENT),
            ((0.5,), (1,), False, TRANSIENT),
            ((2.0,), (2,), True, RECURRENT),
            ((2.0,), (2,), False, TRANSIENT),
            ((5 / 3, 2 / 3), (1, 1), False, TRANSIENT),
            ((1.5,), (3,), False, TRANSIENT),
            ((2.0,), (3,), True, TRANSIENT),
        ],
    )
    def test_classification(self, alphas, mults, gaussian, expected):
        assert classify_recurrence(spectrum(alphas, mults), gaussian) == expected

    def test_equivalence_with_space_filling_range(self):
        rng = np.random.default_rng(8)
        cases = []
        for _ in range(60):
            if rng.random() < 0.5:
                cases.append((spectrum([rng.uniform(0.5, 2.0)], [1]), False))
            else:
                a1 = rng.uniform(0.7, 2.0)
                gaussian = bool(abs(a1 - 2.0) < 1e-12)
                cases.append((spectrum([a1], [2]), gaussian))
        cases.append((spectrum([2.0], [2]), True))
        for s, gaussian in cases:
            verdict = classify_recurrence(s, gaussian)
            filled = abs(range_dim(s, 1.0) - s.d) < 1e-9
            assert (verdict == RECURRENT) == filled


class TestDimensionReport:
    def test_bundle(self):
        s = spectrum([5 / 3, 2 / 3], [1, 1])
        rep = dimension_report(s, symmetric=True)
        assert rep.range_hausdorff_unit == rep.range_packing_unit
        assert rep.graph_hausdorff_unit == rep.graph_packing_unit
        assert rep.range_hausdorff_unit == pytest.approx(19 / 15)
        assert rep.graph_hausdorff_unit == pytest.approx(1.4)
        assert rep.recurrence == TRANSIENT
        assert 0.0 <= rep.range_hausdorff_unit <= s.d
        assert 1.0 <= rep.graph_hausdorff_unit <= s.d + 1
        assert "range" in rep.formula_case and "graph" in rep.formula_case

    def test_double_points_only_for_attested_symmetry(self):
        s = spectrum([1.5], [2])
        rep = dimension_report(s, symmetric=False)
        assert rep.double_point_dim is None
        rep2 = dimension_report(s, symmetric=True)
        assert rep2.double_point_dim == pytest.approx(1.0)
