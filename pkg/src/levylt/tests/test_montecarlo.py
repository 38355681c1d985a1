import math

import numpy as np
import pytest
from scipy.stats import kstest

from levylt.analytic.localtime import mean_free, second_moment_gauss, w_gauss_fixed
from levylt.analytic.stable import stable_cdf, stable_density
from levylt.core.schemas import (
    ConfigurationError,
    EndpointSpec,
    MCConfig,
    PathSample,
    WalkModel,
)
from levylt.montecarlo import (
    SimulationPipeline,
    ensemble_profile,
    estimate_moments,
    estimate_onepoint_distribution,
    sample_terminal_positions,
)
from levylt.montecarlo.tasks import (
    brownian_bridge_path,
    brownian_estimator_spread,
    check_endpoint_support,
    default_epsilon,
    expected_bin_occupation,
    jackknife,
    lattice_aligned_edges,
    local_time_at,
    local_time_profile,
    path_rng,
    sample_batch,
    sample_increment,
    simulate_path,
    smeared_bin_mass,
    zero_bin_fraction,
)
from levylt.montecarlo.tasks.sampling import bridge_from_normals
from levylt.montecarlo.utils import RunningMoments


# --- sampling ---

def test_gaussian_increment_variance(gaussian):
    draws = sample_increment(0.01, gaussian, np.random.default_rng(1), 100000)
    error = 0.02 * math.sqrt(2.0 / len(draws))
    assert abs(draws.var() - 0.02) < 3.0 * error


@pytest.mark.parametrize("lam", [1.0, 1.5])
def test_increment_median_is_zero(lam):
    model = WalkModel(lam=lam)
    draws = sample_increment(1.0, model, np.random.default_rng(2), 100000)
    # Var(median) = 1 / (4 n P(0)²)
    error = 1.0 / (2.0 * math.sqrt(len(draws)) * stable_density(0.0, 1.0, model))
    assert abs(np.median(draws)) < 3.0 * error


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
def test_empirical_characteristic_function(levy15, p):
    draws = sample_increment(0.1, levy15, np.random.default_rng(3), 100000)
    cosines = np.cos(p * draws)
    error = cosines.std() / math.sqrt(len(draws))
    assert abs(cosines.mean() - math.exp(-0.1 * p ** 1.5)) < 3.0 * error


def test_increment_needs_positive_step(levy15):
    with pytest.raises(ConfigurationError):
        sample_increment(0.0, levy15, np.random.default_rng(0))


def test_paths_are_deterministic(levy15):
    first = simulate_path(1.0, 200, 0.3, levy15, seed=42, path_index=5)
    again = simulate_path(1.0, 200, 0.3, levy15, seed=42, path_index=5)
    other = simulate_path(1.0, 200, 0.3, levy15, seed=42, path_index=6)
    assert first.positions[0] == 0.3
    assert np.array_equal(first.positions, again.positions)
    assert not np.array_equal(first.positions, other.positions)
    assert first.n_steps == 200
    assert first.dt == pytest.approx(0.005)


def test_substreams_differ_per_index():
    a = path_rng(7, 0).standard_normal(4)
    b = path_rng(7, 1).standard_normal(4)
    assert not np.array_equal(a, b)


def test_bridge_endpoints_exact():
    path = brownian_bridge_path(1.0, 100, -0.2, 0.7, 1.0, seed=1)
    assert path.positions[0] == -0.2
    assert path.positions[-1] == 0.7


def test_bridge_statistics():
    rng = np.random.default_rng(4)
    n = 100000
    positions = bridge_from_normals(1.0, 0.0, 1.0, 1.0, rng.standard_normal((n, 9)))
    middle = positions[:, 5]
    # Var = 2D s(t − s)/t at s = t/2
    assert abs(middle.var() - 0.5) < 3.0 * 0.5 * math.sqrt(2.0 / n)
    assert abs(middle.mean() - 0.5) < 3.0 * math.sqrt(0.5 / n)
    quarter = positions[:, 3]
    assert abs(quarter.mean() - 0.3) < 3.0 * quarter.std() / math.sqrt(n)


def test_batch_bridge_matches_single_path():
    config = MCConfig(model=WalkModel(lam=2.0), n_steps=50, n_paths=10, endpoint=EndpointSpec.fixed(0.4), seed=9)
    positions, accepted = sample_batch(config, 3, 6)
    assert accepted.all()
    single = brownian_bridge_path(1.0, 50, 0.0, 0.4, 1.0, seed=9, path_index=4)
    assert np.allclose(positions[1], single.positions, rtol=0.0, atol=1e-14)


def test_fixed_endpoint_needs_window(levy15):
    config = MCConfig(model=levy15, endpoint=EndpointSpec.fixed(0.0))
    with pytest.raises(ConfigurationError):
        check_endpoint_support(config)
    epsilon = default_epsilon(config, 0.05)
    assert epsilon == pytest.approx(0.05)
    assert default_epsilon(config.model_copy(update={"endpoint": EndpointSpec.free()}), 0.05) is None


def test_acceptance_window_selects_endpoints(levy15):
    config = MCConfig(
        model=levy15, n_steps=20, n_paths=400, endpoint=EndpointSpec.fixed(0.0), epsilon=0.3, seed=2
    )
    positions, accepted = sample_batch(config, 0, 400)
    assert 0 < accepted.sum() < 400
    assert np.all(np.abs(positions[accepted, -1]) <= 0.3)


# --- profiles ---

def test_constant_path_profile(levy15):
    times = np.linspace(0.0, 2.0, 11)
    path = PathSample(times=times, positions=np.full(11, 0.1), model=levy15, seed=0)
    profile = local_time_profile(path, np.linspace(-1.0, 1.0, 9))
    assert profile.values[4] == pytest.approx(2.0 / 0.25)
    assert np.count_nonzero(profile.values) == 1
    assert profile.occupation() == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("lam", [1.0, 1.5, 2.0])
def test_profile_normalization(lam):
    path = simulate_path(1.0, 500, 0.0, WalkModel(lam=lam), seed=3)
    profile = local_time_profile(path, np.linspace(-0.5, 0.5, 41))
    assert profile.occupation() == pytest.approx(1.0, rel=1e-12)
    assert np.all(profile.values >= 0.0)


def test_profile_rejects_bad_edges(levy15):
    path = simulate_path(1.0, 10, 0.0, levy15, seed=0)
    with pytest.raises(ConfigurationError):
        local_time_profile(path, [0.0, 0.0, 1.0])


def test_local_time_at_counts_left_endpoints():
    positions = np.array([[0.0, 0.01, 0.5, 0.0], [1.0, 1.0, 1.0, 1.0]])
    values = local_time_at(positions, 0.0, 0.1, 0.25)
    assert values == pytest.approx([2 * 0.25 / 0.1, 0.0])


def test_zero_bin_fraction_grows_toward_cauchy():
    """Paths break up into isolated visits as λ decreases."""
    edges = np.linspace(-3.0, 3.0, 121)
    fractions = []
    for lam in (2.0, 1.5, 1.0):
        model = WalkModel(lam=lam)
        values = [
            zero_bin_fraction(local_time_profile(simulate_path(1.0, 1000, 0.0, model, seed=11, path_index=i), edges))
            for i in range(200)
        ]
        fractions.append(np.nanmean(values))
    assert fractions[0] < fractions[1] < fractions[2]


def test_discretization_bias_shrinks():
    model = WalkModel(lam=2.0)
    exact = mean_free(0.0, 0.0, 1.0, model)
    biases = [
        abs(expected_bin_occupation(-0.02, 0.02, 1.0, n, 0.0, model) - exact) for n in (50, 200, 800)
    ]
    assert all(b < a for a, b in zip(biases, biases[1:]))


# --- estimators ---

def test_lattice_aligned_edges():
    edges = lattice_aligned_edges(0.1, 3, stride=2)
    assert edges == pytest.approx([0.05, 0.25, 0.45, 0.65])
    with pytest.raises(ConfigurationError):
        lattice_aligned_edges(0.0, 3)


def test_jackknife_of_mean():
    samples = np.random.default_rng(5).normal(2.0, 1.0, 4000)
    estimate = jackknife(samples)
    assert estimate.mean == pytest.approx(samples.mean())
    assert estimate.std_error == pytest.approx(samples.std(ddof=1) / math.sqrt(4000), rel=0.5)
    with pytest.raises(ConfigurationError):
        jackknife(np.array([1.0]))


def test_running_moments_merge_in_any_grouping():
    samples = np.random.default_rng(6).normal(size=(1000, 3))
    whole = RunningMoments.from_samples(samples)
    merged = RunningMoments()
    for chunk in np.array_split(samples, 7):
        merged = merged.merge(RunningMoments.from_samples(chunk))
    assert merged.count == whole.count
    assert np.allclose(merged.mean, whole.mean)
    assert np.allclose(merged.variance, samples.var(axis=0, ddof=1))


def test_smeared_bin_mass_reduces_to_plain_mass():
    def density(L):
        return math.exp(-L)

    plain = smeared_bin_mass(density, 0.5, 1.0, 0.0, lambda L: 0.0, 30.0)
    assert plain == pytest.approx(math.exp(-0.5) - math.exp(-1.0), rel=1e-8)
    shifted = smeared_bin_mass(density, 0.6, 1.1, 0.1, lambda L: 0.0, 30.0)
    assert shifted == pytest.approx(plain, rel=1e-8)
    total = sum(smeared_bin_mass(density, lo, lo + 1.0, 0.0, lambda L: 0.2 * math.sqrt(L), 30.0)
                for lo in np.arange(-5.0, 40.0, 1.0))
    assert total == pytest.approx(1.0, rel=1e-6)


def test_estimator_spread_scaling():
    assert brownian_estimator_spread(0.0, 1e-3, 0.04, 1.0) == 0.0
    assert brownian_estimator_spread(4.0, 1e-3, 0.04, 1.0) == pytest.approx(
        2.0 * brownian_estimator_spread(1.0, 1e-3, 0.04, 1.0)
    )


# --- pipeline ---

def test_estimates_independent_of_worker_count(mc_settings, levy15):
    config = MCConfig(model=levy15, n_steps=100, n_paths=1200, seed=17)
    one = estimate_moments(config, 1, [0.0, 0.3], mc_settings, workers=1)
    three = estimate_moments(config, 1, [0.0, 0.3], mc_settings, workers=3)
    assert one == three


def test_seed_changes_estimate(mc_settings, levy15):
    config = MCConfig(model=levy15, n_steps=100, n_paths=600, seed=1)
    a = estimate_moments(config, 1, [0.0], mc_settings, workers=2)
    b = estimate_moments(config.model_copy(update={"seed": 2}), 1, [0.0], mc_settings, workers=2)
    assert a.mean != b.mean


@pytest.mark.parametrize("x", [0.0, 0.5, 1.0])
def test_mean_local_time_matches_analytic(mc_settings, gaussian, x):
    config = MCConfig(model=gaussian, n_steps=200, n_paths=10000, seed=21)
    estimate = estimate_moments(config, 1, [x], mc_settings)
    h = config.resolved_bin_width(mc_settings["montecarlo"]["bin_width_fraction"])
    expected = expected_bin_occupation(x - h / 2, x + h / 2, 1.0, 200, 0.0, gaussian)
    assert estimate.within(expected, 3.0)
    assert abs(expected - mean_free(x, 0.0, 1.0, gaussian)) < 0.15


@pytest.mark.slow
@pytest.mark.parametrize("x", [0.0, 0.5])
def test_levy_mean_local_time_matches_analytic(mc_settings, levy15, x):
    config = MCConfig(model=levy15, n_steps=1000, n_paths=20000, seed=33)
    estimate = estimate_moments(config, 1, [x], mc_settings)
    h = config.resolved_bin_width(mc_settings["montecarlo"]["bin_width_fraction"])
    exact = mean_free(x, 0.0, 1.0, levy15)
    bias = abs(expected_bin_occupation(x - h / 2, x + h / 2, 1.0, 1000, 0.0, levy15) - exact)
    assert estimate.within(exact, 3.0, slack=bias)


def test_profile_mean_integrates_to_time(mc_settings, levy15):
    config = MCConfig(model=levy15, n_steps=200, n_paths=1000, seed=4)
    profile, errors = ensemble_profile(config, np.linspace(-2.0, 2.0, 41), mc_settings)
    assert profile.occupation() == pytest.approx(1.0, rel=1e-12)
    assert errors.shape == profile.values.shape


def test_terminal_positions_follow_stable_law(mc_settings, levy15):
    config = MCConfig(model=levy15, n_steps=20, n_paths=10000, seed=8)
    positions = sample_terminal_positions(config, mc_settings)
    result = kstest(positions, np.vectorize(lambda x: stable_cdf(float(x), 1.0, levy15)))
    assert result.pvalue > 0.01


def test_atom_is_zero_at_initial_point(mc_settings, gaussian):
    config = MCConfig(model=gaussian, n_steps=100, n_paths=2000, seed=3)
    histogram = estimate_onepoint_distribution(config, mc_settings)
    assert histogram.atom.mean == 0.0
    assert histogram.accepted_paths == 2000
    assert len(histogram.density) == len(histogram.L_edges) - 1


@pytest.mark.slow
def test_free_atom_away_from_start(mc_settings, gaussian):
    """Paths never reaching x = 1: erf(1/2), up to the bin width and the crossings sampling misses."""
    config = MCConfig(model=gaussian, n_steps=1000, n_paths=20000, x=1.0, seed=12)
    histogram = estimate_onepoint_distribution(config, mc_settings)
    h = config.resolved_bin_width(mc_settings["montecarlo"]["bin_width_fraction"])
    # a sampled path overshoots a level by β √(2DΔt) on average, β = −ζ(1/2)/√(2π)
    overshoot = 0.5826 * math.sqrt(2.0 * config.dt)
    bias = math.erf((1.0 + 0.5 * h + overshoot) / 2.0) - math.erf((1.0 - 0.5 * h) / 2.0)
    assert histogram.atom.within(math.erf(0.5), 3.0, slack=bias)


@pytest.mark.slow
def test_coincident_second_moment(mc_settings, gaussian):
    config = MCConfig(model=gaussian, n_steps=1000, n_paths=20000, seed=5)
    estimate = estimate_moments(config, 2, [0.0], mc_settings)
    exact = second_moment_gauss(0.0, 0.0, 0.0, EndpointSpec.free(), 1.0, 1.0)
    h = config.resolved_bin_width(mc_settings["montecarlo"]["bin_width_fraction"])
    q = config.dt / h
    mean = mean_free(0.0, 0.0, 1.0, gaussian)
    # L̂ ≈ L + q + noise whose variance is linear in L
    noise = brownian_estimator_spread(mean, config.dt, h, 1.0) ** 2
    shifted = exact + 2.0 * q * mean + q * q + noise
    assert estimate.within(shifted, 3.0, slack=0.05 * exact)


@pytest.mark.slow
def test_bridge_histogram_against_smeared_density(mc_settings, gaussian):
    config = MCConfig(model=gaussian, n_steps=1000, n_paths=20000, endpoint=EndpointSpec.fixed(0.0), seed=6)
    pipeline = SimulationPipeline(config, mc_settings)
    histogram = estimate_onepoint_distribution(config, mc_settings)
    h = pipeline.bin_width
    edges = histogram.L_edges
    expected = np.array([
        smeared_bin_mass(
            lambda L: w_gauss_fixed(L, 0.0, 0.0, 0.0, 1.0, 1.0).density, lo, hi, config.dt / h,
            lambda L: brownian_estimator_spread(L, config.dt, h, 1.0), 8.0,
        ) / (hi - lo)
        for lo, hi in zip(edges[:-1], edges[1:])
    ])
    agree = np.abs(histogram.density - expected) <= 3.0 * histogram.std_error
    assert agree.mean() >= 0.95


@pytest.mark.asyncio
async def test_pipeline_async_entry_points(mc_settings, gaussian):
    pipeline = SimulationPipeline(MCConfig(model=gaussian, n_steps=50, n_paths=1000, seed=1), mc_settings)
    samples, n_paths = await pipeline.sample_local_times([0.0, 0.2])
    assert samples.shape == (1000, 2)
    assert n_paths == 1000
    positions = await pipeline.terminal_positions()
    assert positions.shape == (1000,)


def test_pipeline_paths_for_each_endpoint(mc_settings, levy15, gaussian):
    bridge = SimulationPipeline(
        MCConfig(model=gaussian, n_steps=40, n_paths=3, endpoint=EndpointSpec.fixed(0.5)), mc_settings
    ).paths()
    assert [path.positions[-1] for path in bridge] == [0.5, 0.5, 0.5]
    windowed = SimulationPipeline(
        MCConfig(model=levy15, n_steps=40, n_paths=3, endpoint=EndpointSpec.fixed(0.0), epsilon=0.2), mc_settings
    ).paths(2)
    assert len(windowed) == 2
    assert all(abs(path.positions[-1]) <= 0.2 for path in windowed)


def test_order_must_be_one_or_two(mc_settings, levy15):
    config = MCConfig(model=levy15, n_steps=10, n_paths=10)
    with pytest.raises(ConfigurationError):
        estimate_moments(config, 3, [0.0], mc_settings)
