import numpy as np
import pytest

from semistable_lab import (
    BrownianModel,
    SymmetricStableModel,
    envelope_scan,
    resolvent_scan,
)
from semistable_lab.errors import ModelNotStrict
from semistable_lab.models import SemistableModel, resolvent_re
from semistable_lab.spectral import anisotropy_norm

from helpers import axis_atomic, stable_like_atomic


class TestEnvelopeScan:
    def test_stable_ratio_is_identically_one(self):
        m = SymmetricStableModel(1.3)
        rep = envelope_scan(m, epsilon=0.0, r_grid=np.logspace(1, 5, 12), sphere_samples=4)
        assert np.allclose(rep.inf_ratio_F, 1.0, atol=1e-12)
        assert np.allclose(rep.sup_ratio_F, 1.0, atol=1e-12)
        assert rep.K1 == pytest.approx(1.0)
        assert rep.K2 == pytest.approx(1.0)
        assert rep.passed

    def test_symmetric_model_has_no_imaginary_envelope(self):
        m = axis_atomic([0.6, 1.5])
        rep = envelope_scan(m, r_grid=np.logspace(1, 4, 10), sphere_samples=64)
        assert max(rep.sup_ratio_G) == 0.0
        assert rep.K3 == 0.0

    def test_log_periodic_ratio_1d(self):
        # the ratio F(r)/r^alpha repeats when r is scaled by c^a (period of the
        # discrete orbit along a fixed direction)
        m = stable_like_atomic(1.0, c=2.0)
        m.validate()
        r = np.logspace(1, 4, 17)
        vals = np.real(m.psi(r.reshape(-1, 1))).ravel() / r
        shifted = (
            np.real(m.psi((2.0 * r).reshape(-1, 1))).ravel() / (2.0 * r)
        )
        assert shifted == pytest.approx(vals, rel=1e-6)
        assert vals.min() > 0.0

    def test_envelope_pass_on_two_block_model(self):
        m = axis_atomic([0.6, 1.5])
        rep = envelope_scan(
            m, epsilon=0.2, r_grid=np.logspace(1, 5, 16), sphere_samples=128, seed=2
        )
        assert rep.passed
        assert rep.K2 > 0.0
        slack = np.asarray(rep.r_grid) ** (rep.epsilon / 2.0)
        assert np.all(np.asarray(rep.sup_ratio_F) <= rep.K1 * slack + 1e-12)
        assert np.all(np.asarray(rep.inf_ratio_F) >= rep.K2 - 1e-12)

    def test_realized_lower_constant_stable_under_sample_doubling(self):
        m = axis_atomic([0.6, 1.5])
        grid = np.logspace(1, 5, 12)
        k2 = [
            envelope_scan(m, r_grid=grid, sphere_samples=n, seed=5).K2
            for n in (256, 512)
        ]
        assert abs(k2[1] - k2[0]) < 0.05 * abs(k2[0])

    def test_requires_strict_model(self):
        m = SemistableModel(c=2.0, E=[[1.0]], atoms=[([1.0], 1.0)])
        with pytest.raises(ModelNotStrict):
            envelope_scan(m)

    def test_deterministic_given_seed(self):
        m = axis_atomic([0.6, 1.5])
        grid = np.logspace(1, 4, 8)
        a = envelope_scan(m, r_grid=grid, sphere_samples=32, seed=9)
        b = envelope_scan(m, r_grid=grid, sphere_samples=32, seed=9)
        assert a.to_dict() == b.to_dict()


class TestResolventScan:
    def test_stable_alpha1_closed_form_ratio(self):
        # Re(1/(1+psi)) * gauge = r/(1+r) at alpha = 1
        m = SymmetricStableModel(1.0)
        m.validate()
        val = resolvent_re(m, np.array([100.0]), 1.0)
        gauge = anisotropy_norm(m.decomposition, np.array([100.0]))
        assert val * gauge == pytest.approx(100.0 / 101.0)

    def test_brownian_upper_envelope(self):
        m = BrownianModel(np.eye(2))
        rep = resolvent_scan(m, r_grid=np.logspace(1, 4, 10), sphere_samples=16)
        # Re(1/(1+psi)) * ||xi||^2 = r^2/(1+r^2/2) -> 2; always within (0, 2]
        assert max(rep.sup_resolvent_ratio) <= 2.0 + 1e-9
        assert rep.sup_resolvent_ratio[-1] == pytest.approx(2.0, rel=1e-4)
        assert rep.passed

    def test_lower_bound_with_epsilon_slack(self):
        m = axis_atomic([0.6, 1.5])
        rep = resolvent_scan(
            m, epsilon=0.2, r_grid=np.logspace(1, 5, 16), sphere_samples=128, seed=3
        )
        assert rep.passed
        slack = np.asarray(rep.r_grid) ** (-rep.epsilon)
        lower = slack / rep.K
        assert np.all(np.asarray(rep.inf_resolvent_ratio) >= lower - 1e-12)
        assert np.all(np.asarray(rep.sup_resolvent_ratio) <= rep.K + 1e-12)
