#include "darc/perturbation.hpp"

#include <cmath>

namespace darc {

double PerturbativeInput::rwa_gap() const {
  return std::hypot(rabi, detuning());
}

void PerturbativeInput::validate() const {
  if (!(omega_L > 0.0)) throw SpecError("perturbation", "omega_L must be positive");
  if (rabi < 0.0 || asym < 0.0)
    throw SpecError("perturbation", "couplings must be non-negative");
  if (!(rwa_gap() < omega_L))
    throw DomainError("perturbation",
                      "rotating-wave gap must stay below omega_L for the expansion to apply");
  if (!(asym < omega_L) || !(rabi < omega_L))
    throw DomainError("perturbation", "couplings must stay below omega_L");
}

double mixing_angle(const PerturbativeInput& input) {
  if (input.rabi == 0.0 && input.detuning() == 0.0)
    throw DomainError("perturbation", "mixing angle undefined for a fully degenerate doublet");
  // atan2 keeps theta continuous through resonance: theta -> pi/4 at zero
  // detuning, -> 0 for red-side and -> pi/2 for blue-side weak driving.
  return 0.5 * std::atan2(input.rabi, input.detuning());
}

PerturbativeStates perturbed_states(const PerturbativeInput& input) {
  input.validate();
  const double theta = mixing_angle(input);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double w = input.omega_L;
  const double g = input.rwa_gap();
  const double as = input.asym / w;
  const double cr = input.rabi / (4.0 * w);

  PerturbativeStates out;
  out.theta = theta;
  AmplitudeTable& t = out.table;
  t.omega_gap = g;
  t.omega_L = w;
  t.p_min = -2;
  t.p_max = 2;

  for (int p = -2; p <= 2; ++p) {
    t.upper.alpha[p] = 0.0;
    t.upper.beta[p] = 0.0;
    t.lower.alpha[p] = 0.0;
    t.lower.beta[p] = 0.0;
  }

  // Rotating-wave composition.
  t.upper.alpha[0] = s;
  t.upper.beta[0] = c;
  t.lower.alpha[0] = c;
  t.lower.beta[0] = -s;

  // Permanent-dipole admixtures, one photon away.
  t.upper.alpha[+1] = as * (g / (w + g)) * c * c * s;
  t.upper.beta[+1] = as * c * (1.0 - g * s * s / (w + g));
  t.upper.alpha[-1] = as * (g / (w - g)) * c * c * s;
  t.upper.beta[-1] = -as * c * (1.0 + g * s * s / (w - g));

  t.lower.alpha[+1] = -as * (g / (w - g)) * c * s * s;
  t.lower.beta[+1] = -as * s * (1.0 + g * c * c / (w - g));
  t.lower.alpha[-1] = -as * (g / (w + g)) * c * s * s;
  t.lower.beta[-1] = as * s * (1.0 - g * c * c / (w + g));

  // Counter-rotating admixtures, two photons away.
  t.upper.alpha[-2] = cr * (g * s * s * c / (2.0 * w - g));
  t.upper.beta[-2] = -cr * s * (1.0 + g * s * s / (2.0 * w - g));
  t.upper.alpha[+2] = cr * c * (1.0 - g * c * c / (2.0 * w + g));
  t.upper.beta[+2] = cr * (g * s * c * c / (2.0 * w + g));

  t.lower.alpha[-2] = cr * (g * s * c * c / (2.0 * w + g));
  t.lower.beta[-2] = -cr * c * (1.0 - g * c * c / (2.0 * w + g));
  t.lower.alpha[+2] = -cr * c * (1.0 + g * c * c / (2.0 * w - g));
  t.lower.beta[+2] = -cr * (g * s * s * c / (2.0 * w - g));

  return out;
}

TransitionCoefficients analytic_coefficients(const PerturbativeInput& input) {
  input.validate();
  const double theta = mixing_angle(input);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double as = input.asym / input.omega_L;

  TransitionCoefficients out;
  out.omega_L = input.omega_L;
  out.omega_gap = input.rwa_gap();

  // Entry order: [a11, a12, a21, a22].
  const std::array<double, 4> rwa = {c * s, c * c, -s * s, -c * s};
  out.entries[1] = rwa;
  if (as > 0.0) {
    std::array<double, 4> low{};
    std::array<double, 4> high{};
    for (std::size_t k = 0; k < 4; ++k) {
      low[k] = -as * rwa[k];
      high[k] = as * rwa[k];
    }
    out.entries[0] = low;   // low-frequency singlet family
    out.entries[2] = high;  // second-harmonic triplet family
  }
  return out;
}

double q3_magnitude_bound(const PerturbativeInput& input) {
  input.validate();
  return input.rabi * input.rwa_gap() / (input.omega_L * input.omega_L);
}

double ratio_lowfreq_vs_mollow(const PerturbativeInput& input, const FormFactor& form_factor) {
  input.validate();
  const double gap = input.rwa_gap();
  const double ff_ratio = form_factor(gap) / form_factor(input.omega_L);
  const double as = input.asym / input.omega_L;
  const double d = input.detuning();
  return ff_ratio * as * as * input.rabi * input.rabi /
         (4.0 * (input.rabi * input.rabi + d * d));
}

std::vector<MultipletScaling> multiplet_scalings(const PerturbativeInput& input,
                                                 double alpha_exponent) {
  input.validate();
  const double w = input.omega_L;
  const double g = input.rwa_gap();
  const double as = input.asym / w;
  const double r = input.rabi / w;
  const double gw = g / w;

  std::vector<MultipletScaling> rows;
  rows.push_back({0, 1, g, as * as * std::pow(gw, alpha_exponent)});
  rows.push_back({1, 3, w, 1.0});
  rows.push_back({2, 3, 2.0 * w, as * as});
  rows.push_back({3, 3, 3.0 * w, r * r * gw * gw});
  return rows;
}

}  // namespace darc
