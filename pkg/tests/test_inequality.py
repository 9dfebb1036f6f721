import numpy as np
import pytest

from qutrit_ch.atoms import ATOMS, N_ATOMS
from qutrit_ch.engine import (
    ExperimentProbabilities,
    experiment_probabilities,
    mix_with_noise,
)
from qutrit_ch.inequality import (
    JOINT_TERMS,
    SINGLE_TERMS,
    analytic_threshold,
    ch_coefficients,
    ch_decomposition,
    ch_lhs,
    deterministic_value,
)
from qutrit_ch.lhv import marginals_of
from qutrit_ch.presets import REFERENCE_NOISE_THRESHOLD, reference_settings


def exp_from_weights(weights):
    tables, alice, bob = marginals_of(weights)
    return ExperimentProbabilities(tables, alice, bob)


def test_term_lists_have_the_fixed_shape():
    assert len(JOINT_TERMS) == 12
    assert len(SINGLE_TERMS) == 4
    assert sum(sign for *_, sign in JOINT_TERMS) == 6.0
    assert all(sign == -1.0 for *_, sign in SINGLE_TERMS)


def test_lhs_on_uniform_tables_is_minus_two_thirds():
    uniform = ExperimentProbabilities(
        np.full((2, 2, 3, 3), 1.0 / 9.0),
        np.full((2, 3), 1.0 / 3.0),
        np.full((2, 3), 1.0 / 3.0),
    )
    assert abs(ch_lhs(uniform) + 2.0 / 3.0) < 1e-15


def test_lhs_is_affine_in_the_noise_fraction():
    exp = experiment_probabilities(reference_settings())
    lhs0 = ch_lhs(exp)
    lhs1 = ch_lhs(mix_with_noise(exp, 1.0))
    rng = np.random.default_rng(61)
    for f in rng.uniform(0, 1, 10):
        expected = (1 - f) * lhs0 + f * lhs1
        assert abs(ch_lhs(mix_with_noise(exp, f)) - expected) < 1e-12


def test_coefficients_equal_lhs_on_every_vertex():
    coeffs = ch_coefficients()
    for i in range(N_ATOMS):
        weights = np.zeros(N_ATOMS)
        weights[i] = 1.0
        assert ch_lhs(exp_from_weights(weights)) == coeffs[i]


def test_lhs_of_any_mixture_is_the_weighted_coefficient_sum():
    # this linearity is what makes the vertex expansion meaningful
    coeffs = ch_coefficients()
    rng = np.random.default_rng(67)
    for _ in range(20):
        weights = rng.dirichlet(np.ones(N_ATOMS))
        assert abs(ch_lhs(exp_from_weights(weights)) - coeffs @ weights) < 1e-12


def test_every_local_vertex_satisfies_the_bound():
    coeffs = ch_coefficients()
    assert coeffs.max() == 0.0
    assert np.all(np.isin(coeffs, (0.0, -1.0, -2.0)))


def test_deterministic_value_is_integral_and_bounded():
    values = [deterministic_value(atom) for atom in ATOMS]
    assert all(isinstance(v, int) for v in values)
    assert max(values) == 0
    assert min(values) == -2


def test_decomposition_parts_sum_to_the_functional():
    first, second, remainder = ch_decomposition()
    total = ch_coefficients()
    assert np.max(np.abs(first + second + remainder - total)) <= 1e-12


def test_decomposition_parts_are_themselves_bounded():
    first, second, remainder = ch_decomposition()
    # the two two-outcome pieces never go positive on any vertex; the
    # remainder can, which is exactly why the split is informative
    assert first.max() <= 0.0
    assert second.max() <= 0.0
    assert remainder.max() == 1.0
    assert remainder.min() == -1.0


def test_analytic_threshold_on_reference_settings():
    exp = experiment_probabilities(reference_settings())
    out = analytic_threshold(exp)
    assert out.violated
    assert abs(out.value - REFERENCE_NOISE_THRESHOLD) < 1e-12


def test_analytic_threshold_without_relabeling_reports_no_violation():
    exp = experiment_probabilities(reference_settings(relabeled=False))
    out = analytic_threshold(exp)
    assert not out.violated
    assert out.value == 0.0


def test_analytic_threshold_consistent_with_premixed_input():
    # thresholds measured before and after premixing with noise f are
    # related by 1 - t' = (1 - t) / (1 - f)
    exp = experiment_probabilities(reference_settings())
    t = analytic_threshold(exp).value
    f = 0.1
    t_prime = analytic_threshold(mix_with_noise(exp, f)).value
    assert abs((1 - t_prime) - (1 - t) / (1 - f)) < 1e-12


def test_analytic_threshold_degenerate_branch():
    # singles concentrated away from the penalized outcomes keep the
    # functional positive even on uniform tables, so no crossing exists
    alice = np.array([[0.0, 0.0, 1.0], [1 / 3, 1 / 3, 1 / 3]])
    bob = np.array([[1 / 3, 1 / 3, 1 / 3], [0.0, 0.0, 1.0]])
    exp = ExperimentProbabilities(np.full((2, 2, 3, 3), 1.0 / 9.0), alice, bob)
    out = analytic_threshold(exp)
    assert out.violated
    assert out.value == 1.0


def test_analytic_threshold_clips_into_unit_interval():
    exp = experiment_probabilities(reference_settings())
    out = analytic_threshold(exp)
    assert 0.0 <= out.value <= 1.0
