import numpy as np
import pytest
from scipy.optimize import linprog

from qutrit_ch.atoms import MARGINAL_MATRIX, N_ATOMS, atom_index
from qutrit_ch.engine import (
    ExperimentProbabilities,
    PERMUTATIONS,
    PhaseSettings,
    apply_relabeling,
    experiment_probabilities,
    mix_with_noise,
)
from qutrit_ch.lhv import (
    NoiseBound,
    lhv_feasible,
    lhv_weights,
    marginals_of,
    min_noise_bisection,
    min_noise_lp,
)
from qutrit_ch.presets import REFERENCE_NOISE_THRESHOLD, reference_settings


def random_settings(rng):
    return PhaseSettings(
        rng.uniform(0, 2 * np.pi, (2, 3)), rng.uniform(0, 2 * np.pi, (2, 3))
    )


def scipy_min_noise(exp0):
    t = exp0.tables.reshape(36)
    a = np.zeros((37, N_ATOMS + 1))
    a[:36, :N_ATOMS] = MARGINAL_MATRIX
    a[:36, N_ATOMS] = t - 1.0 / 9.0
    a[36, :N_ATOMS] = 1.0
    b = np.concatenate([t, [1.0]])
    c = np.zeros(N_ATOMS + 1)
    c[N_ATOMS] = 1.0
    bounds = [(0, None)] * N_ATOMS + [(0, 1)]
    out = linprog(c, A_eq=a, b_eq=b, bounds=bounds, method="highs")
    assert out.status == 0
    return float(out.fun)


def test_marginals_of_validates_shape():
    with pytest.raises(ValueError):
        marginals_of(np.zeros(80))


def test_marginals_of_point_mass():
    weights = np.zeros(N_ATOMS)
    weights[atom_index((2, 1, 3, 2))] = 1.0
    tables, alice, bob = marginals_of(weights)
    assert tables[0, 0, 1, 2] == 1.0
    assert tables[0, 1, 1, 1] == 1.0
    assert tables[1, 0, 0, 2] == 1.0
    assert tables[1, 1, 0, 1] == 1.0
    assert tables.sum() == 4.0
    assert np.array_equal(alice, [[0, 1, 0], [1, 0, 0]])
    assert np.array_equal(bob, [[0, 0, 1], [0, 1, 0]])


def test_uniform_weights_give_uniform_tables():
    tables, alice, bob = marginals_of(np.full(N_ATOMS, 1.0 / N_ATOMS))
    assert np.max(np.abs(tables - 1.0 / 9.0)) < 1e-15
    assert np.max(np.abs(alice - 1.0 / 3.0)) < 1e-15
    assert np.max(np.abs(bob - 1.0 / 3.0)) < 1e-15


def test_uniform_experiment_is_feasible_with_model_returned():
    uniform = ExperimentProbabilities(
        np.full((2, 2, 3, 3), 1.0 / 9.0),
        np.full((2, 3), 1.0 / 3.0),
        np.full((2, 3), 1.0 / 3.0),
    )
    weights = lhv_weights(uniform)
    assert weights is not None
    tables, _, _ = marginals_of(weights)
    assert np.max(np.abs(tables - 1.0 / 9.0)) < 1e-9


def test_reference_experiment_is_infeasible_at_zero_noise():
    exp0 = experiment_probabilities(reference_settings())
    assert not lhv_feasible(exp0)
    assert lhv_weights(exp0) is None


def test_min_noise_on_reference_matches_closed_form():
    exp0 = experiment_probabilities(reference_settings())
    bound = min_noise_lp(exp0)
    assert isinstance(bound, NoiseBound)
    assert bound.method == "simplex"
    assert abs(bound.f_min - REFERENCE_NOISE_THRESHOLD) < 1e-9


def test_feasibility_brackets_the_reported_threshold():
    exp0 = experiment_probabilities(reference_settings())
    f = min_noise_lp(exp0).f_min
    assert not lhv_feasible(mix_with_noise(exp0, f - 1e-4))
    assert lhv_feasible(mix_with_noise(exp0, f + 1e-4))


def test_certificate_reproduces_the_noisy_tables():
    exp0 = experiment_probabilities(reference_settings())
    bound = min_noise_lp(exp0)
    tables, alice, bob = marginals_of(bound.certificate)
    target = (1 - bound.f_min) * exp0.tables + bound.f_min / 9.0
    assert np.max(np.abs(tables - target)) <= 1e-7
    assert abs(bound.certificate.sum() - 1.0) <= 1e-7
    assert bound.certificate.min() >= -1e-7
    # singles were never constrained in the program, yet they come out
    # right because they are sums of matched joint probabilities
    assert np.max(np.abs(alice - exp0.alice_singles)) <= 1e-7
    assert np.max(np.abs(bob - exp0.bob_singles)) <= 1e-7


def test_min_noise_agrees_with_reference_solver_on_random_settings():
    rng = np.random.default_rng(79)
    for _ in range(20):
        exp0 = experiment_probabilities(random_settings(rng))
        mine = min_noise_lp(exp0).f_min
        assert abs(mine - scipy_min_noise(exp0)) < 1e-9


def test_bisection_and_direct_lp_agree():
    rng = np.random.default_rng(83)
    exp0 = experiment_probabilities(reference_settings())
    direct = min_noise_lp(exp0)
    bisect = min_noise_bisection(exp0)
    assert bisect.method == "bisection"
    # bisection accuracy is limited by the feasibility tolerance near the
    # boundary, not by the 2**-40 interval width
    assert abs(direct.f_min - bisect.f_min) < 1e-8
    for _ in range(3):
        exp0 = experiment_probabilities(random_settings(rng))
        assert abs(min_noise_lp(exp0).f_min - min_noise_bisection(exp0).f_min) < 1e-8


def test_threshold_is_invariant_under_outcome_relabelings():
    rng = np.random.default_rng(89)
    exp0 = experiment_probabilities(reference_settings())
    f = min_noise_lp(exp0).f_min
    for _ in range(10):
        relabel = tuple(PERMUTATIONS[i] for i in rng.integers(0, 6, size=4))
        relabeled = apply_relabeling(exp0, relabel)
        assert abs(min_noise_lp(relabeled).f_min - f) < 1e-7


def test_all_zero_phases_admit_an_explicit_local_model():
    settings = PhaseSettings(np.zeros((2, 3)), np.zeros((2, 3)))
    exp0 = experiment_probabilities(settings)
    # three strategies on the diagonal outcome classes reproduce the tables
    weights = np.zeros(N_ATOMS)
    for atom in ((1, 1, 1, 1), (2, 2, 3, 3), (3, 3, 2, 2)):
        weights[atom_index(atom)] = 1.0 / 3.0
    tables, _, _ = marginals_of(weights)
    assert np.max(np.abs(tables - exp0.tables)) < 1e-12
    assert lhv_feasible(exp0)
    assert min_noise_lp(exp0).f_min <= 1e-12


def test_premixed_input_shifts_the_threshold_affinely():
    exp0 = experiment_probabilities(reference_settings())
    f = min_noise_lp(exp0).f_min
    premix = 0.1
    f_prime = min_noise_lp(mix_with_noise(exp0, premix)).f_min
    assert abs((1 - f_prime) - (1 - f) / (1 - premix)) < 1e-9
