"""Transmission-weight laws: moments, exact polynomial expectations,
sampling."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustered_sir import (
    BetaSymmetric,
    DiscreteAtoms,
    DomainError,
    InfectiousPeriod,
    LaplaceSpec,
    bernoulli_endpoints,
    point_mass,
)

ALL_LAWS = [
    point_mass(0.5),
    point_mass(1.0),
    bernoulli_endpoints(0.5),
    bernoulli_endpoints(0.3),
    DiscreteAtoms([(0.2, 0.25), (0.6, 0.5), (0.9, 0.25)]),
    BetaSymmetric(0.05),
    BetaSymmetric(1.0),
    BetaSymmetric(50.0),
    InfectiousPeriod(LaplaceSpec.exponential(1.0)),
    InfectiousPeriod(LaplaceSpec.exponential(0.3)),
    InfectiousPeriod(LaplaceSpec.constant(2.0)),
]


class TestMoments:
    def test_point_mass(self):
        tm = point_mass(0.5).derived_moments()
        assert tm.e_t == 0.5
        assert tm.e_t2 == 0.25
        assert tm.e_t_1mt == 0.25
        assert tm.e_1mt2 == 0.25

    def test_bernoulli_endpoints(self):
        tm = bernoulli_endpoints(0.5).derived_moments()
        assert tm.e_t == 0.5
        assert tm.e_t2 == 0.5
        assert tm.e_t_1mt == 0.0
        assert tm.e_1mt2 == 0.5

    def test_beta_symmetric(self):
        alpha = 2.0
        law = BetaSymmetric(alpha)
        assert law.raw_moment(1) == pytest.approx(0.5, abs=1e-15)
        assert law.raw_moment(2) == pytest.approx(
            (alpha + 1) / (2 * (2 * alpha + 1)), abs=1e-14
        )

    def test_beta_moment_product_formula(self):
        alpha = 0.7
        law = BetaSymmetric(alpha)
        for m in range(1, 8):
            expected = np.prod([(alpha + j) / (2 * alpha + j) for j in range(m)])
            assert law.raw_moment(m) == pytest.approx(float(expected), rel=1e-13)

    def test_exponential_period_moments(self):
        # T = 1 - exp(-tau), tau ~ Exp(rate): E(T) = 1/(1+rate)
        rate = 2.0
        law = InfectiousPeriod(LaplaceSpec.exponential(rate))
        assert law.raw_moment(1) == pytest.approx(1.0 / (1.0 + rate), abs=1e-14)
        # E(T^2) = 1 - 2 L(1) + L(2)
        expected = 1.0 - 2 * rate / (rate + 1) + rate / (rate + 2)
        assert law.raw_moment(2) == pytest.approx(expected, abs=1e-14)

    def test_constant_period_is_point_mass(self):
        d = 1.5
        law = InfectiousPeriod(LaplaceSpec.constant(d))
        t = 1.0 - np.exp(-d)
        for m in range(1, 6):
            assert law.raw_moment(m) == pytest.approx(t**m, abs=1e-14)

    def test_uniform_equivalence(self):
        """Beta(1,1) and the unit-rate exponential period are the same law."""
        a = BetaSymmetric(1.0)
        b = InfectiousPeriod(LaplaceSpec.exponential(1.0))
        for m in range(1, 12):
            assert a.raw_moment(m) == pytest.approx(b.raw_moment(m), abs=1e-12)
        ta, tb = a.derived_moments(), b.derived_moments()
        assert ta.e_t == pytest.approx(tb.e_t, abs=1e-12)
        assert ta.e_t2 == pytest.approx(tb.e_t2, abs=1e-12)

    def test_derived_moment_identities(self):
        for law in ALL_LAWS:
            tm = law.derived_moments()
            assert tm.e_t_1mt == pytest.approx(tm.e_t - tm.e_t2, abs=1e-12)
            assert tm.e_1mt2 == pytest.approx(1 - 2 * tm.e_t + tm.e_t2, abs=1e-12)
            assert 0.0 <= tm.e_t2 <= tm.e_t <= 1.0 + 1e-15


class TestExpectationFunctional:
    @pytest.mark.parametrize("law", ALL_LAWS, ids=lambda l: type(l).__name__ + str(id(l) % 97))
    def test_exact_on_monomials(self, law):
        max_degree = 12
        nodes, weights = law.expectation_functional(max_degree)
        assert np.all(nodes >= -1e-12) and np.all(nodes <= 1 + 1e-12)
        assert np.sum(weights) == pytest.approx(1.0, abs=1e-12)
        for m in range(max_degree + 1):
            quad = float(np.dot(weights, nodes**m))
            exact = law.raw_moment(m) if m else 1.0
            assert quad == pytest.approx(exact, abs=1e-12)

    def test_custom_laplace_matches_builtin(self):
        rate = 0.8
        custom = InfectiousPeriod(LaplaceSpec(lambda z: rate / (rate + z)))
        builtin = InfectiousPeriod(LaplaceSpec.exponential(rate))
        for m in range(1, 9):
            assert custom.raw_moment(m) == pytest.approx(
                builtin.raw_moment(m), abs=1e-10
            )
        nodes, weights = custom.expectation_functional(8)
        for m in range(9):
            assert float(np.dot(weights, nodes**m)) == pytest.approx(
                custom.raw_moment(m) if m else 1.0, abs=1e-10
            )


class TestDomain:
    def test_point_mass_rejects_outside_unit(self):
        with pytest.raises(DomainError):
            point_mass(1.2)

    def test_bernoulli_rejects_bad_p(self):
        with pytest.raises(DomainError):
            bernoulli_endpoints(-0.1)

    def test_beta_rejects_nonpositive_alpha(self):
        with pytest.raises(DomainError):
            BetaSymmetric(0.0)

    def test_atoms_reject_bad_support(self):
        with pytest.raises(DomainError):
            DiscreteAtoms([(1.5, 1.0)])


class TestSampling:
    @pytest.mark.parametrize("law", ALL_LAWS, ids=lambda l: type(l).__name__ + str(id(l) % 97))
    def test_sample_range_and_mean(self, law):
        rng = np.random.default_rng(7)
        x = law.sample(rng, 200000)
        assert np.all((x >= 0) & (x <= 1))
        assert float(x.mean()) == pytest.approx(law.raw_moment(1), abs=0.01)

    @given(st.floats(0.05, 0.95))
    @settings(max_examples=20, deadline=None)
    def test_bernoulli_sample_support(self, p):
        rng = np.random.default_rng(3)
        x = bernoulli_endpoints(p).sample(rng, 1000)
        assert set(np.unique(x)).issubset({0.0, 1.0})
