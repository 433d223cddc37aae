#include <doctest.h>

#include <cmath>
#include <numbers>

#include "darc/perturbation.hpp"
#include "darc/pipeline.hpp"

using namespace darc;

namespace {

constexpr double kPi = std::numbers::pi;

AmplitudeTable numerical_table(const PerturbativeInput& in, int n_levels = 50) {
  const HamiltonianSpec spec = standard_spec(in.omega_0, in.omega_L, in.rabi, in.asym, true,
                                             n_levels);
  return amplitudes(extract_doublets(diagonalize(assemble(spec)), spec));
}

double slot(const AmplitudeTable& t, int j, bool is_alpha, int p) {
  const auto& m = is_alpha ? t[j].alpha : t[j].beta;
  auto it = m.find(p);
  return it == m.end() ? 0.0 : it->second;
}

}  // namespace

TEST_CASE("mixing angle") {
  CHECK(mixing_angle({1.0, 1.0, 0.2, 0.0}) == doctest::Approx(kPi / 4.0));
  CHECK(mixing_angle({1.3, 1.0, 0.3, 0.0}) == doctest::Approx(kPi / 8.0));  // tan(2t) = 1
  // Weak driving limits on both sides of resonance.
  CHECK(mixing_angle({1.4, 1.0, 1e-9, 0.0}) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(mixing_angle({0.6, 1.0, 1e-9, 0.0}) == doctest::Approx(kPi / 2.0).epsilon(1e-6));
  CHECK_THROWS_AS(mixing_angle({1.0, 1.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(perturbed_states({1.9, 1.0, 0.5, 0.0}), DomainError);  // gap >= omega_L
  CHECK_THROWS_AS(perturbed_states({1.0, 1.0, 0.2, 1.5}), DomainError);
  CHECK_NOTHROW(perturbed_states({1.05, 1.0, 0.2, 0.1}));
}

TEST_CASE("first-order amplitudes match full diagonalization slot by slot") {
  const PerturbativeInput in{1.0, 1.0, 0.05, 0.02};
  const AmplitudeTable analytic = perturbed_states(in).table;
  const AmplitudeTable numeric = numerical_table(in);

  const double c2 = std::pow(std::max({in.rabi, in.asym, in.rwa_gap()}) / in.omega_L, 2.0);
  const double tol = std::max(1e-4, 5.0 * c2);

  for (int j : {1, 2}) {
    for (int p = -2; p <= 2; ++p) {
      CAPTURE(j);
      CAPTURE(p);
      CHECK(std::abs(slot(numeric, j, true, p) - slot(analytic, j, true, p)) < tol);
      CHECK(std::abs(slot(numeric, j, false, p) - slot(analytic, j, false, p)) < tol);
    }
  }
}

TEST_CASE("each displayed correction holds at an asymmetric operating point") {
  // Detuned point with distinct sin/cos so a swapped slot cannot pass.
  const PerturbativeInput in{1.08, 1.0, 0.2, 0.07};
  const PerturbativeStates states = perturbed_states(in);
  const double t = states.theta;
  const double c = std::cos(t), s = std::sin(t);
  const double w = in.omega_L, g = in.rwa_gap();
  const double as = in.asym / w, cr = in.rabi / (4.0 * w);
  const AmplitudeTable& table = states.table;

  // Upper state: permanent-dipole admixtures.
  CHECK(slot(table, 1, true, +1) == doctest::Approx(as * g / (w + g) * c * c * s));
  CHECK(slot(table, 1, false, +1) == doctest::Approx(as * c * (1.0 - g * s * s / (w + g))));
  CHECK(slot(table, 1, true, -1) == doctest::Approx(as * g / (w - g) * c * c * s));
  CHECK(slot(table, 1, false, -1) == doctest::Approx(-as * c * (1.0 + g * s * s / (w - g))));
  // Upper state: counter-rotating admixtures.
  CHECK(slot(table, 1, true, -2) == doctest::Approx(cr * g * s * s * c / (2.0 * w - g)));
  CHECK(slot(table, 1, false, -2) ==
        doctest::Approx(-cr * s * (1.0 + g * s * s / (2.0 * w - g))));
  CHECK(slot(table, 1, true, +2) ==
        doctest::Approx(cr * c * (1.0 - g * c * c / (2.0 * w + g))));
  CHECK(slot(table, 1, false, +2) == doctest::Approx(cr * g * s * c * c / (2.0 * w + g)));

  // Lower state: permanent-dipole admixtures.
  CHECK(slot(table, 2, true, +1) == doctest::Approx(-as * g / (w - g) * c * s * s));
  CHECK(slot(table, 2, false, +1) == doctest::Approx(-as * s * (1.0 + g * c * c / (w - g))));
  CHECK(slot(table, 2, true, -1) == doctest::Approx(-as * g / (w + g) * c * s * s));
  CHECK(slot(table, 2, false, -1) == doctest::Approx(as * s * (1.0 - g * c * c / (w + g))));
  // Lower state: counter-rotating admixtures.
  CHECK(slot(table, 2, true, -2) == doctest::Approx(cr * g * s * c * c / (2.0 * w + g)));
  CHECK(slot(table, 2, false, -2) ==
        doctest::Approx(-cr * c * (1.0 - g * c * c / (2.0 * w + g))));
  CHECK(slot(table, 2, true, +2) ==
        doctest::Approx(-cr * c * (1.0 + g * c * c / (2.0 * w - g))));
  CHECK(slot(table, 2, false, +2) == doctest::Approx(-cr * g * s * s * c / (2.0 * w - g)));

  // Zeroth order.
  CHECK(slot(table, 1, true, 0) == doctest::Approx(s));
  CHECK(slot(table, 1, false, 0) == doctest::Approx(c));
  CHECK(slot(table, 2, true, 0) == doctest::Approx(c));
  CHECK(slot(table, 2, false, 0) == doctest::Approx(-s));
}

TEST_CASE("without the permanent dipole only counter-rotating corrections survive") {
  const PerturbativeStates states = perturbed_states({1.02, 1.0, 0.15, 0.0});
  const AmplitudeTable& t = states.table;
  for (int j : {1, 2}) {
    CHECK(slot(t, j, true, +1) == 0.0);
    CHECK(slot(t, j, false, +1) == 0.0);
    CHECK(slot(t, j, true, -1) == 0.0);
    CHECK(slot(t, j, false, -1) == 0.0);
    CHECK(std::abs(slot(t, j, true, +2)) + std::abs(slot(t, j, false, +2)) > 0.0);
  }
}

TEST_CASE("analytic transition coefficients") {
  SUBCASE("resonant low-frequency coefficient") {
    const TransitionCoefficients coeffs = analytic_coefficients({1.0, 1.0, 0.2, 0.1});
    CHECK(coeffs.a(0, 1, 2) == doctest::Approx(-0.05));
  }

  SUBCASE("second-harmonic family is proportional to the main triplet family") {
    const PerturbativeInput in{1.12, 1.0, 0.25, 0.08};
    const TransitionCoefficients coeffs = analytic_coefficients(in);
    const double factor = in.asym / in.omega_L;
    for (int i : {1, 2})
      for (int j : {1, 2}) {
        CAPTURE(i);
        CAPTURE(j);
        CHECK(coeffs.a(2, i, j) == doctest::Approx(factor * coeffs.a(1, i, j)));
      }
  }

  SUBCASE("no permanent dipole, no extra families") {
    const TransitionCoefficients coeffs = analytic_coefficients({1.0, 1.0, 0.2, 0.0});
    CHECK(coeffs.entries.count(0) == 0);
    CHECK(coeffs.entries.count(2) == 0);
  }

  SUBCASE("third multiplet exposes only a magnitude bound") {
    const PerturbativeInput in{1.0, 1.0, 0.2, 0.1};
    CHECK(q3_magnitude_bound(in) == doctest::Approx(0.2 * 0.2));
    CHECK(analytic_coefficients(in).entries.count(3) == 0);
  }
}

TEST_CASE("numerical coefficients converge to the analytic family at second order") {
  // Fitted constant err / coupling^2 stays below 10 while couplings shrink.
  // Evaluated off resonance, where the doublet gap stays finite as couplings
  // vanish; see the resonance case below for why that matters.
  for (double scale : {1.0, 0.5, 0.25}) {
    const PerturbativeInput in{1.1, 1.0, 0.05 * scale, 0.02 * scale};
    const HamiltonianSpec spec = standard_spec(in.omega_0, in.omega_L, in.rabi, in.asym, true, 50);
    const TransitionCoefficients numeric =
        coefficients(amplitudes(extract_doublets(diagonalize(assemble(spec)), spec)));
    const TransitionCoefficients analytic = analytic_coefficients(in);

    double worst = 0.0;
    for (int q : {0, 1, 2})
      for (int i : {1, 2})
        for (int j : {1, 2})
          worst = std::max(worst, std::abs(numeric.a(q, i, j) - analytic.a(q, i, j)));
    const double c2 = std::pow(std::max(in.rabi, in.asym) / in.omega_L, 2.0);
    CAPTURE(scale);
    CHECK(worst / c2 < 10.0);
  }
}

TEST_CASE("resonant doublets rotate at first order under the counter-rotating term") {
  // On resonance the gap itself is rabi, so the second-order inter-band
  // repulsion divided by the gap rotates the doublet basis by ~rabi/(8 omega):
  // the q = 1 off-diagonal coefficients deviate from the rotating-wave values
  // at first order in the coupling.
  for (double rabi : {0.05, 0.025}) {
    const HamiltonianSpec spec = standard_spec(1.0, 1.0, rabi, 0.0, true, 50);
    const TransitionCoefficients coeffs =
        coefficients(amplitudes(extract_doublets(diagonalize(assemble(spec)), spec)));
    const double deviation = std::abs(coeffs.a(1, 1, 2) - 0.5);
    const double rotation_scale = rabi / 8.0;
    CAPTURE(rabi);
    CHECK(deviation > 0.5 * rotation_scale);
    CHECK(deviation < 2.0 * rotation_scale);
  }
}

TEST_CASE("low-frequency weight ratio") {
  const FormFactor cubic = FormFactor::power_law(1e-4, 1.0, 3.0);
  const FormFactor flat = FormFactor::flat(1e-4);

  SUBCASE("reference values at rabi 0.1, asym 0.05") {
    const PerturbativeInput in{1.0, 1.0, 0.1, 0.05};
    CHECK(ratio_lowfreq_vs_mollow(in, cubic) == doctest::Approx(6.25e-7).epsilon(1e-9));
    CHECK(ratio_lowfreq_vs_mollow(in, flat) == doctest::Approx(6.25e-4).epsilon(1e-9));
  }

  SUBCASE("resonance simplification") {
    const PerturbativeInput in{1.0, 1.0, 0.2, 0.07};
    const double expected = cubic(in.rwa_gap()) / cubic(1.0) * 0.07 * 0.07 / 4.0;
    CHECK(ratio_lowfreq_vs_mollow(in, cubic) == doctest::Approx(expected));
  }

  SUBCASE("full numerics approach the closed form at first order in the coupling") {
    double previous_error = 1.0;
    for (double rabi : {0.1, 0.05, 0.025}) {
      const PerturbativeInput in{1.0, 1.0, rabi, rabi / 2.0};
      const PipelineResult run =
          run_pipeline(standard_spec(1.0, 1.0, rabi, rabi / 2.0, true, 50), cubic);
      const double numeric = multiplet_ratio(run.spectrum, 0, 1);
      const double closed = ratio_lowfreq_vs_mollow(in, cubic);
      const double error = std::abs(numeric / closed - 1.0);
      CAPTURE(rabi);
      CHECK(error < previous_error * 0.75);  // at least first-order convergence
      previous_error = error;
    }
    CHECK(previous_error < 0.05);
  }
}

TEST_CASE("multiplet scaling rows") {
  const PerturbativeInput in{1.0, 1.0, 0.2, 0.1};
  const auto rows = multiplet_scalings(in, 3.0);
  REQUIRE(rows.size() == 4);

  CHECK(rows[0].q == 0);
  CHECK(rows[0].line_count == 1);
  CHECK(rows[0].center == doctest::Approx(in.rwa_gap()));
  CHECK(rows[0].weight_scaling == doctest::Approx(0.01 * std::pow(0.2, 3.0)));

  CHECK(rows[1].q == 1);
  CHECK(rows[1].line_count == 3);
  CHECK(rows[1].center == doctest::Approx(1.0));
  CHECK(rows[1].weight_scaling == doctest::Approx(1.0));

  CHECK(rows[2].q == 2);
  CHECK(rows[2].center == doctest::Approx(2.0));
  CHECK(rows[2].weight_scaling == doctest::Approx(0.01));

  CHECK(rows[3].q == 3);
  CHECK(rows[3].center == doctest::Approx(3.0));
  CHECK(rows[3].weight_scaling == doctest::Approx(0.04 * 0.04));
}

TEST_CASE("gap shrinks monotonically with the permanent dipole") {
  for (double rabi : {0.1, 0.3}) {
    CAPTURE(rabi);
    double previous = 1e30;
    for (double asym : {0.0, 0.1, 0.2, 0.3}) {
      const HamiltonianSpec spec = standard_spec(1.0, 1.0, rabi, asym, true, 50);
      const DressedSolution sol = extract_doublets(diagonalize(assemble(spec)), spec);
      CHECK(sol.omega_gap <= previous * (1.0 + 1e-12));
      previous = sol.omega_gap;
    }
  }
}
