import math

import numpy as np
import pytest

from semistable_lab.errors import (
    ClusterAmbiguous,
    DimensionMismatch,
    EigenRealPartBelowHalf,
    NonInvertible,
    RadiusTooSmall,
    RangeOverflow,
)
from semistable_lab.spectral import (
    anisotropy_norm,
    asymptotic_inverse,
    component_project,
    decompose,
    matrix_power,
    split_scale,
    theta,
)

from helpers import random_known_exponent


class TestDecompose:
    def test_diagonal_two_blocks(self):
        dec = decompose(np.diag([0.5, 0.75]))
        assert dec.p == 2
        assert [b.a for b in dec.blocks] == pytest.approx([0.5, 0.75])
        assert [b.alpha for b in dec.blocks] == pytest.approx([2.0, 4.0 / 3.0])
        assert [b.dim_block for b in dec.blocks] == [1, 1]

    def test_single_jordan_block(self):
        dec = decompose([[0.75, 1.0], [0.0, 0.75]])
        assert dec.p == 1
        blk = dec.blocks[0]
        assert blk.a == pytest.approx(0.75)
        assert blk.alpha == pytest.approx(4.0 / 3.0)
        assert blk.dim_block == 2
        assert blk.jordan_orders == (2,)
        assert blk.q == 2

    def test_complex_pair(self):
        dec = decompose([[1.0, -2.0], [2.0, 1.0]])
        assert dec.p == 1
        blk = dec.blocks[0]
        assert blk.a == pytest.approx(1.0)
        assert blk.dim_block == 2
        assert blk.q == 1

    def test_rejects_low_real_part(self):
        with pytest.raises(EigenRealPartBelowHalf):
            decompose(np.diag([0.4, 1.0]))

    def test_rejects_singular(self):
        with pytest.raises((NonInvertible, EigenRealPartBelowHalf)):
            decompose([[0.0, 0.0], [0.0, 1.0]])

    def test_ambiguous_gap(self):
        # separation sits between the effective threshold and twice it
        with pytest.raises(ClusterAmbiguous):
            decompose(np.diag([0.7, 0.7 + 3.0e-5]), tol_cluster=1e-8)

    def test_conjugation_covariance(self):
        rng = np.random.default_rng(11)
        D = np.diag([0.6, 0.6, 1.5])
        base = decompose(D)
        for _ in range(5):
            Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
            dec = decompose(Q @ D @ Q.T)
            assert [b.a for b in dec.blocks] == pytest.approx(
                [b.a for b in base.blocks], abs=1e-9
            )
            assert [b.dim_block for b in dec.blocks] == [
                b.dim_block for b in base.blocks
            ]
            assert [b.jordan_orders for b in dec.blocks] == [
                b.jordan_orders for b in base.blocks
            ]

    def test_projector_algebra_randomized(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            E, _ = random_known_exponent(rng)
            dec = decompose(E)
            d = dec.d
            total = np.zeros((d, d))
            for i in range(dec.p):
                P = dec.projector(i)
                assert np.linalg.norm(P @ P - P, 2) < 1e-10
                assert np.linalg.norm(E @ P - P @ E, 2) < 1e-10
                for j in range(i + 1, dec.p):
                    assert np.linalg.norm(P @ dec.projector(j), 2) < 1e-10
                total += P
            assert np.linalg.norm(total - np.eye(d), 2) < 1e-10


class TestMatrixPower:
    def test_identity_exponent(self):
        assert matrix_power(np.eye(2), 7.0) == pytest.approx(7.0 * np.eye(2))

    def test_diagonal(self):
        out = matrix_power(np.diag([0.5, 2.0]), 4.0)
        assert np.diag(out) == pytest.approx([2.0, 16.0])
        assert out[0, 1] == pytest.approx(0.0, abs=1e-14)

    def test_jordan_block_against_series_oracle(self):
        # 30-term series for exp(log(t) E) at t = e
        E = np.array([[0.75, 1.0], [0.0, 0.75]])
        term = np.eye(2)
        series = np.eye(2)
        for n in range(1, 30):
            term = term @ E / n
            series = series + term
        out = matrix_power(E, math.e)
        assert out == pytest.approx(series, rel=1e-13)
        expected = math.exp(0.75) * np.array([[1.0, 1.0], [0.0, 1.0]])
        assert out == pytest.approx(expected, rel=1e-12)

    def test_group_law_randomized(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            E, _ = random_known_exponent(rng)
            s, t = rng.uniform(0.1, 10.0, size=2)
            lhs = matrix_power(E, s * t)
            rhs = matrix_power(E, s) @ matrix_power(E, t)
            assert np.linalg.norm(lhs - rhs, 2) <= 1e-10 * np.linalg.norm(lhs, 2)

    def test_overflow(self):
        with pytest.raises(RangeOverflow):
            matrix_power(np.array([[400.0]]), 1e9)


class TestSplitScale:
    @pytest.mark.parametrize(
        "t,c,expected",
        [
            (5.0, 2.0, (2, 1.25)),
            (1.0, 3.0, (0, 1.0)),
            (0.3, 2.0, (-2, 1.2)),
        ],
    )
    def test_examples(self, t, c, expected):
        k, m = split_scale(t, c)
        assert k == expected[0]
        assert m == pytest.approx(expected[1], rel=1e-12)

    def test_randomized_roundtrip(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            t = float(np.exp(rng.uniform(-20, 20)))
            c = float(rng.uniform(1.1, 5.0))
            k, m = split_scale(t, c)
            assert 1.0 <= m < c
            assert c**k * m == pytest.approx(t, rel=1e-12)


class TestComponentsAndNorms:
    def test_project_diagonal(self):
        dec = decompose(np.diag([0.5, 0.75]))
        parts = component_project(dec, np.array([3.0, 4.0]))
        assert parts[0] == pytest.approx([3.0, 0.0])
        assert parts[1] == pytest.approx([0.0, 4.0])

    def test_project_zero(self):
        dec = decompose(np.diag([0.5, 0.75]))
        parts = component_project(dec, np.zeros(2))
        assert all(np.allclose(p, 0.0) for p in parts)

    def test_project_rotated_by_conjugation(self):
        phi = 0.7
        Q = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
        E = Q @ np.diag([0.5, 0.75]) @ Q.T
        dec = decompose(E)
        x = Q[:, 0]
        parts = component_project(dec, x)
        # explicit projector arithmetic: x lies in the first invariant subspace
        assert parts[0] == pytest.approx(x, abs=1e-12)
        assert np.linalg.norm(parts[1]) == pytest.approx(0.0, abs=1e-12)
        assert sum(parts) == pytest.approx(x, abs=1e-12)

    def test_project_dimension_mismatch(self):
        dec = decompose(np.diag([0.5, 0.75]))
        with pytest.raises(DimensionMismatch):
            component_project(dec, np.ones(3))

    def test_anisotropy_examples(self):
        dec = decompose(np.diag([0.5, 0.75]))
        assert anisotropy_norm(dec, np.array([2.0, 0.0])) == pytest.approx(4.0)
        assert anisotropy_norm(dec, np.array([0.0, 8.0])) == pytest.approx(16.0)
        assert anisotropy_norm(dec, np.array([2.0, 8.0])) == pytest.approx(20.0)

    def test_anisotropy_zero_iff_origin(self):
        dec = decompose(np.diag([0.5, 0.75]))
        assert anisotropy_norm(dec, np.zeros(2)) == 0.0
        assert anisotropy_norm(dec, np.array([1e-9, 0.0])) > 0.0


class TestAsymptoticInverse:
    def test_scalar_closed_form(self):
        # scalar exponent 1/alpha: t(r) = (r |x|)^alpha
        dec = decompose(np.array([[0.5]]))
        assert asymptotic_inverse(dec, 10.0, np.array([1.0])) == pytest.approx(100.0)
        dec2 = decompose(np.array([[2.0]]))
        assert asymptotic_inverse(dec2, 10.0, np.array([0.5])) == pytest.approx(
            (10.0 * 0.5) ** 0.5
        )

    def test_jordan_order_two_direction(self):
        dec = decompose([[0.75, 1.0], [0.0, 0.75]])
        alpha = 4.0 / 3.0
        # adapted-transpose refinement: e1 is entirely of order 2
        got = asymptotic_inverse(dec, math.e, np.array([1.0, 0.0]))
        expected = alpha**alpha * math.e**alpha * 1.0
        assert got == pytest.approx(expected, rel=1e-12)

    def test_radius_gate(self):
        dec = decompose(np.array([[0.5]]))
        with pytest.raises(RadiusTooSmall):
            asymptotic_inverse(dec, 0.9, np.array([1.0]))


class TestTheta:
    def test_scalar_exact(self):
        E = np.array([[2.0]])
        dec = decompose(E)
        for r in (2.0, 10.0, 1e6):
            th = theta(dec, E, r, np.array([1.0]))
            assert np.linalg.norm(th) == pytest.approx(1.0, abs=1e-12)

    def test_diagonal_no_log_corrections(self):
        E = np.diag([0.5, 0.75])
        dec = decompose(E)
        th = theta(dec, E, 1e4, np.array([1.0, 0.0]))
        assert np.linalg.norm(th) == pytest.approx(1.0, abs=1e-10)

    def test_jordan_monotone_approach(self):
        E = np.array([[0.75, 1.0], [0.0, 0.75]])
        dec = decompose(E)
        x = np.array([1.0, 0.0])
        devs = [
            abs(np.linalg.norm(theta(dec, E, r, x)) - 1.0)
            for r in np.logspace(2, 8, 7)
        ]
        assert devs[-1] < devs[0]
        assert all(b <= a * 1.05 for a, b in zip(devs, devs[1:]))

    def test_sphere_sup_converges_for_semisimple_spectra(self):
        rng = np.random.default_rng(13)
        Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        E = Q @ np.diag([0.6, 1.1, 1.7]) @ Q.T
        dec = decompose(E)
        dirs = rng.normal(size=(24, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        sups = []
        for r in np.logspace(2, 8, 7):
            sups.append(
                max(abs(np.linalg.norm(theta(dec, E, r, x)) - 1.0) for x in dirs)
            )
        assert all(b <= a * 1.05 for a, b in zip(sups, sups[1:]))
        assert sups[-1] < 0.1

    def test_radius_gate(self):
        E = np.diag([0.5, 0.75])
        dec = decompose(E)
        with pytest.raises(RadiusTooSmall):
            theta(dec, E, 1.0, np.array([1.0, 0.0]))
