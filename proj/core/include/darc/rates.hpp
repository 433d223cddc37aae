// rates.hpp — radiation form factor and GKLS decay rates in the dressed basis

#pragma once

#include <map>
#include <vector>

#include "darc/dressing.hpp"
#include "darc/errors.hpp"

namespace darc {

// Coupling density Gamma(omega) to the propagating modes. Vanishes exactly
// for omega <= 0. Power law: gamma_0 * (omega/omega_ref)^exponent; the free
// space dipole case is exponent = 3 with omega_ref at the bare transition.
class FormFactor {
 public:
  static FormFactor power_law(double gamma_0, double omega_ref, double exponent);
  static FormFactor flat(double gamma_0);
  // Piecewise-linear interpolation of (omega, gamma) samples; clamped to the
  // end values outside the grid (still zero for omega <= 0).
  static FormFactor tabulated(std::vector<double> omega, std::vector<double> gamma);

  double operator()(double omega) const;
  FormFactor scaled(double factor) const;

 private:
  FormFactor() = default;
  bool is_power_law_ = true;
  double gamma_0_ = 0.0;
  double omega_ref_ = 1.0;
  double exponent_ = 0.0;
  std::vector<double> grid_omega_;
  std::vector<double> grid_gamma_;
};

// Per-multiplet decay rates. k12 is the coherence-transfer strength
// Gamma(q*omega_L) * a(q;1,1) * a(q;2,2); it is real for the real couplings
// in scope and bounded by sqrt(g11*g22).
struct MultipletRates {
  double g11 = 0.0;
  double g22 = 0.0;
  double g12 = 0.0;
  double g21 = 0.0;
  double k12 = 0.0;
};

struct HypothesisReport {
  double rate_scale = 0.0;  // max(gamma_pop, gamma_coh)
  double threshold = 0.1;
  double ratio_omega_L = 0.0;
  double ratio_gap = 0.0;
  double ratio_difference = 0.0;  // against omega_L - gap
  bool pass_omega_L = true;
  bool pass_gap = true;
  bool pass_difference = true;

  bool all_pass() const { return pass_omega_L && pass_gap && pass_difference; }
};

struct RateSet {
  std::map<int, MultipletRates> per_q;
  double gamma_12 = 0.0;   // total 1 -> 2 rate
  double gamma_21 = 0.0;   // total 2 -> 1 rate
  double gamma_pop = 0.0;  // gamma_12 + gamma_21, population relaxation rate
  double gamma_coh = 0.0;  // inter-doublet coherence decay rate
  double pi_1 = 0.5;       // steady upper-state population
  double pi_2 = 0.5;
  double omega_L = 0.0;
  double omega_gap = 0.0;
  HypothesisReport hypotheses;

  MultipletRates at(int q) const {
    auto it = per_q.find(q);
    return it == per_q.end() ? MultipletRates{} : it->second;
  }
};

struct RateOptions {
  double hypothesis_threshold = 0.1;
  double tail_truncation = 1e-12;  // stop the q sum once the relative tail is below this
};

// Assemble the rate set from transition coefficients and a form factor:
//   g_jj(q) = Gamma(q wL) a(q;j,j)^2,     g12(q) = Gamma(q wL + gap) a(q;1,2)^2,
//   g21(q) = Gamma(q wL - gap) a(q;2,1)^2.
// Aggregates and steady populations follow from the reduced dynamics.
RateSet build_rates(const TransitionCoefficients& coeffs, const FormFactor& form_factor,
                    double omega_L, double omega_gap, const RateOptions& options = {});

// Scale-separation report: the realized decay scale must sit well below
// omega_L, the gap, and their difference. Reporting only; never throws.
HypothesisReport check_hypotheses(const RateSet& rates, double omega_L, double omega_gap,
                                  double threshold = 0.1);

}  // namespace darc
