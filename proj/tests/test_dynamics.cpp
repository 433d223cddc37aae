#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "darc/dynamics.hpp"
#include "darc/pipeline.hpp"
#include "support/fitting.hpp"

using namespace darc;

namespace {

RateSet mollow_rates(double gamma_0, double rabi = 0.3) {
  return run_pipeline(standard_spec(1.0, 1.0, rabi, 0.0, false, 50), FormFactor::flat(gamma_0))
      .rates;
}

// Detuned operating point: label relaxation is ~3x faster than the photon
// drift down the ladder, so long relaxation horizons stay well clear of the
// window bottom.
RateSet detuned_rates(double gamma_0) {
  return run_pipeline(standard_spec(1.21, 1.0, 0.28, 0.0, false, 50), FormFactor::flat(gamma_0))
      .rates;
}

RateSet dissipation_free_rates(double omega_gap = 0.3) {
  RateSet rates;
  rates.omega_L = 1.0;
  rates.omega_gap = omega_gap;
  return rates;
}

}  // namespace

TEST_CASE("reduced propagation: zero interval is the identity") {
  const RateSet rates = mollow_rates(1e-3);
  ReducedState state = ReducedState::populations(0.8, 0.2);
  state.s12[0] = {0.1, 0.05};
  state.s21[0] = {0.1, -0.05};
  const ReducedState next = evolve_reduced(state, rates, 0.0);
  CHECK(std::abs(next.s11.at(0) - state.s11.at(0)) < 1e-15);
  CHECK(std::abs(next.s12.at(0) - state.s12.at(0)) < 1e-15);
}

TEST_CASE("reduced propagation reaches the steady state") {
  const RateSet rates = mollow_rates(1e-3);
  ReducedState state = ReducedState::populations(1.0, 0.0);
  state.s12[0] = {0.4, 0.0};
  state.s12[2] = {0.1, 0.1};
  const ReducedState late = evolve_reduced(state, rates, 50.0 / rates.gamma_pop);
  CHECK(std::abs(late.s11.at(0) - rates.pi_1) < 1e-12);
  CHECK(std::abs(late.s22.at(0) - rates.pi_2) < 1e-12);
  CHECK(std::abs(late.s12.at(0)) < 1e-12);
  CHECK(std::abs(late.s12.at(2)) < 1e-12);
}

TEST_CASE("reduced propagation preserves hermiticity and normalization") {
  const RateSet rates = mollow_rates(2e-3);
  ReducedState state = ReducedState::populations(0.7, 0.3);
  state.s12[1] = {0.12, -0.07};
  state.s21[-1] = std::conj(state.s12.at(1));
  state.s11[2] = {0.03, 0.01};
  state.s11[-2] = std::conj(state.s11.at(2));
  state.s22[2] = {0.02, -0.04};
  state.s22[-2] = std::conj(state.s22.at(2));
  CHECK(state.hermiticity_residual() < 1e-15);

  const ReducedState next = evolve_reduced(state, rates, 123.4);
  CHECK(next.hermiticity_residual() < 1e-12);
  CHECK(std::abs(next.s11.at(0) + next.s22.at(0) - 1.0) < 1e-12);
}

TEST_CASE("population relaxation rate recovered from a reduced trajectory") {
  const RateSet rates = mollow_rates(1e-3);
  ReducedState state = ReducedState::populations(1.0, 0.0);

  std::vector<double> times, logs;
  const double dt = 0.2 / rates.gamma_pop;
  for (int k = 0; k < 25; ++k) {
    times.push_back(state.time);
    logs.push_back(std::log(std::abs(state.s11.at(0).real() - rates.pi_1)));
    state = evolve_reduced(state, rates, dt);
  }
  const double fitted = -testsupport::least_squares_slope(times, logs);
  CHECK(fitted == doctest::Approx(rates.gamma_pop).epsilon(1e-6));
}

TEST_CASE("full integrator: dissipation-free evolution is pure phase rotation") {
  const RateSet rates = dissipation_free_rates(0.3);
  const FullDressedState initial = FullDressedState::band_state(12, 6, 0.5);
  const double tau = 40.0;
  const FullDressedState final =
      evolve_full(initial, rates, 0.05, static_cast<long>(tau / 0.05));

  CHECK(final.band_population(6, 1) == doctest::Approx(initial.band_population(6, 1)).epsilon(1e-10));
  CHECK(final.band_population(6, 2) == doctest::Approx(initial.band_population(6, 2)).epsilon(1e-10));

  const std::complex<double> coherence = final.element(6, 1, 6, 2);
  const std::complex<double> expected =
      initial.element(6, 1, 6, 2) * std::exp(std::complex<double>(0.0, -0.3 * 40.0));
  CHECK(std::abs(coherence - expected) < 1e-8);
  CHECK(final.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("full integrator refuses an unstable step size") {
  const RateSet rates = mollow_rates(5e-3);
  const FullDressedState state = FullDressedState::band_state(20, 14);
  CHECK_THROWS_AS(evolve_full(state, rates, 2.0, 100), IntegratorError);
}

TEST_CASE("full integrator refuses horizons beyond the photon budget") {
  const RateSet rates = mollow_rates(5e-3);
  const FullDressedState state = FullDressedState::band_state(20, 14);
  // Drift is ~gamma_pop bands per unit time; half of 20 bands is the cap.
  const double horizon = 11.0 / rates.gamma_pop;
  CHECK_THROWS_WITH_AS(evolve_full(state, rates, 0.2, static_cast<long>(horizon / 0.2)),
                       doctest::Contains("photon budget"), IntegratorError);
}

TEST_CASE("full integrator relaxes to the steady populations") {
  const double gamma_0 = 5e-3;
  const RateSet rates = detuned_rates(gamma_0);
  const int n_bands = 30;
  FullDressedState state = FullDressedState::band_state(n_bands, 22);

  const double horizon = 15.0 / rates.gamma_pop;
  const double dt = 0.25;
  state = evolve_full(state, rates, dt, static_cast<long>(horizon / dt));

  const ReducedState reduced = reduce(state);
  const double trace = state.trace();
  // Far tail of the emission cascade reaches the window bottom: sub-1e-6 leak.
  CHECK(std::abs(trace - 1.0) < 1e-6);
  CHECK(std::abs(reduced.s11.at(0).real() / trace - rates.pi_1) < 1e-6);
  CHECK(std::abs(reduced.s22.at(0).real() / trace - rates.pi_2) < 1e-6);
  CHECK(state.hermiticity_residual() < 1e-10);
  CHECK(state.min_eigenvalue() > -1e-8);
}

TEST_CASE("full integrator reproduces both relaxation rates by trajectory fits") {
  const double gamma_0 = 5e-3;
  const RateSet rates = detuned_rates(gamma_0);
  const int n_bands = 30;

  SUBCASE("population rate") {
    FullDressedState state = FullDressedState::band_state(n_bands, 22);
    std::vector<double> times, logs;
    const double segment = 0.25 / rates.gamma_pop;
    const double dt = 0.25;
    for (int k = 0; k < 20; ++k) {
      const ReducedState reduced = reduce(state);
      times.push_back(state.time());
      logs.push_back(std::log(std::abs(reduced.s11.at(0).real() - rates.pi_1)));
      state = evolve_full(state, rates, dt, static_cast<long>(segment / dt));
    }
    const double fitted = -testsupport::least_squares_slope(times, logs);
    CHECK(fitted == doctest::Approx(rates.gamma_pop).epsilon(1e-3));
  }

  SUBCASE("coherence rate") {
    FullDressedState state = FullDressedState::band_state(n_bands, 22, 0.25 * 3.14159);
    std::vector<double> times, logs;
    const double segment = 0.2 / rates.gamma_coh;
    const double dt = 0.2;
    for (int k = 0; k < 20; ++k) {
      const ReducedState reduced = reduce(state);
      times.push_back(state.time());
      logs.push_back(std::log(std::abs(reduced.s12.at(0))));
      state = evolve_full(state, rates, dt, static_cast<long>(segment / dt));
    }
    const double fitted = -testsupport::least_squares_slope(times, logs);
    CHECK(fitted == doctest::Approx(rates.gamma_coh).epsilon(1e-3));
  }
}

TEST_CASE("full and reduced propagation agree on every tracked sector") {
  const double gamma_0 = 0.02;
  const RateSet rates = detuned_rates(gamma_0);
  const int n_bands = 34;

  // Superposition across two adjacent bands populates l = 0 and l = +/-1 in
  // all four families.
  FullDressedState state(n_bands);
  const int b = 24;
  const Eigen::Vector4d amps(0.55, 0.45, 0.5, 0.495);  // 1(b), 2(b), 1(b+1), 2(b+1)
  const int idx[4][2] = {{b, 1}, {b, 2}, {b + 1, 1}, {b + 1, 2}};
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      state.element(idx[u][0], idx[u][1], idx[v][0], idx[v][1]) = amps[u] * amps[v];

  ReducedState reduced = reduce(state, 2);
  const double dt = 0.013;
  const double horizon = 10.0 / rates.gamma_pop;
  const int segments = 5;
  const long steps = std::lround(horizon / segments / dt);
  for (int k = 0; k < segments; ++k) {
    const double tau = steps * dt;  // both propagators must cover the same interval
    state = evolve_full(state, rates, dt, steps);
    reduced = evolve_reduced(reduced, rates, tau);
    const ReducedState from_full = reduce(state, 2);
    for (int l = -2; l <= 2; ++l) {
      CAPTURE(k);
      CAPTURE(l);
      CHECK(std::abs(from_full.s11.at(l) - reduced.s11.at(l)) < 1e-6);
      CHECK(std::abs(from_full.s22.at(l) - reduced.s22.at(l)) < 1e-6);
      CHECK(std::abs(from_full.s12.at(l) - reduced.s12.at(l)) < 1e-6);
      CHECK(std::abs(from_full.s21.at(l) - reduced.s21.at(l)) < 1e-6);
    }
  }
}

TEST_CASE("bulk bands evolve shift-covariantly from a uniform start") {
  const double gamma_0 = 5e-3;
  const RateSet rates = mollow_rates(gamma_0);
  const int n_bands = 40;

  FullDressedState state(n_bands);
  for (int b = 0; b < n_bands; ++b)
    state.element(b, 1, b, 1) = 1.0 / n_bands;

  const double tau = 2.0 / rates.gamma_pop;
  const double dt = 0.25;
  // The uniform state deliberately occupies the bottom bands, so the window
  // leaks a little trace there; allow for it and probe the bulk only.
  FullEvolveOptions options;
  options.trace_tol_per_time = 1e-4;
  state = evolve_full(state, rates, dt, static_cast<long>(tau / dt), options);

  const int c = n_bands / 2;
  for (int label : {1, 2}) {
    CHECK(std::abs(state.band_population(c, label) - state.band_population(c - 1, label)) < 1e-6);
    CHECK(std::abs(state.band_population(c, label) - state.band_population(c + 1, label)) < 1e-6);
  }
}
