#include "darc/rates.hpp"

#include <algorithm>
#include <cmath>

namespace darc {

FormFactor FormFactor::power_law(double gamma_0, double omega_ref, double exponent) {
  if (gamma_0 < 0.0) throw SpecError("rates", "form factor gamma_0 must be non-negative");
  if (!(omega_ref > 0.0)) throw SpecError("rates", "form factor omega_ref must be positive");
  FormFactor ff;
  ff.is_power_law_ = true;
  ff.gamma_0_ = gamma_0;
  ff.omega_ref_ = omega_ref;
  ff.exponent_ = exponent;
  return ff;
}

FormFactor FormFactor::flat(double gamma_0) { return power_law(gamma_0, 1.0, 0.0); }

FormFactor FormFactor::tabulated(std::vector<double> omega, std::vector<double> gamma) {
  if (omega.size() != gamma.size() || omega.size() < 2)
    throw SpecError("rates", "tabulated form factor needs matching grids of size >= 2");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (i > 0 && omega[i] <= omega[i - 1])
      throw SpecError("rates", "tabulated form factor grid must be strictly increasing");
    if (omega[i] <= 0.0) throw SpecError("rates", "tabulated grid must be positive");
    if (gamma[i] < 0.0) throw SpecError("rates", "form factor values must be non-negative");
  }
  FormFactor ff;
  ff.is_power_law_ = false;
  ff.grid_omega_ = std::move(omega);
  ff.grid_gamma_ = std::move(gamma);
  return ff;
}

double FormFactor::operator()(double omega) const {
  if (omega <= 0.0) return 0.0;
  if (is_power_law_) {
    if (exponent_ == 0.0) return gamma_0_;
    return gamma_0_ * std::pow(omega / omega_ref_, exponent_);
  }
  if (omega <= grid_omega_.front()) return grid_gamma_.front();
  if (omega >= grid_omega_.back()) return grid_gamma_.back();
  const auto it = std::upper_bound(grid_omega_.begin(), grid_omega_.end(), omega);
  const std::size_t hi = static_cast<std::size_t>(it - grid_omega_.begin());
  const std::size_t lo = hi - 1;
  const double t = (omega - grid_omega_[lo]) / (grid_omega_[hi] - grid_omega_[lo]);
  return grid_gamma_[lo] + t * (grid_gamma_[hi] - grid_gamma_[lo]);
}

FormFactor FormFactor::scaled(double factor) const {
  if (factor < 0.0) throw SpecError("rates", "form factor scale must be non-negative");
  FormFactor ff = *this;
  if (ff.is_power_law_) {
    ff.gamma_0_ *= factor;
  } else {
    for (double& g : ff.grid_gamma_) g *= factor;
  }
  return ff;
}

RateSet build_rates(const TransitionCoefficients& coeffs, const FormFactor& form_factor,
                    double omega_L, double omega_gap, const RateOptions& options) {
  if (!(omega_gap > 0.0) || !(omega_gap < omega_L))
    throw HypothesisError("rates", "doublet gap must satisfy 0 < gap < omega_L");

  RateSet rates;
  rates.omega_L = omega_L;
  rates.omega_gap = omega_gap;

  double half_sum = 0.0;  // sum over q of (g11+g12+g21+g22)/2
  double re_k = 0.0;
  double running_total = 0.0;
  for (const auto& [q, entry] : coeffs.entries) {
    MultipletRates r;
    const double a11 = entry[0], a12 = entry[1], a21 = entry[2], a22 = entry[3];
    r.g11 = form_factor(q * omega_L) * a11 * a11;
    r.g22 = form_factor(q * omega_L) * a22 * a22;
    r.g12 = form_factor(q * omega_L + omega_gap) * a12 * a12;
    r.g21 = form_factor(q * omega_L - omega_gap) * a21 * a21;
    r.k12 = form_factor(q * omega_L) * a11 * a22;

    const double total = r.g11 + r.g22 + r.g12 + r.g21;
    if (total <= 0.0) continue;
    running_total += total;
    if (total < options.tail_truncation * running_total && q > 0) continue;

    rates.per_q[q] = r;
    rates.gamma_12 += r.g12;
    rates.gamma_21 += r.g21;
    half_sum += 0.5 * total;
    re_k += r.k12;
  }

  rates.gamma_pop = rates.gamma_12 + rates.gamma_21;
  rates.gamma_coh = half_sum - re_k;
  if (rates.gamma_pop > 0.0) {
    rates.pi_1 = rates.gamma_21 / rates.gamma_pop;
    rates.pi_2 = 1.0 - rates.pi_1;  // exact by construction
  } else {
    // No label-changing channel: populations are conserved and the steady
    // state is a convention. Keep the symmetric choice.
    rates.pi_1 = rates.pi_2 = 0.5;
  }

  rates.hypotheses = check_hypotheses(rates, omega_L, omega_gap, options.hypothesis_threshold);
  return rates;
}

HypothesisReport check_hypotheses(const RateSet& rates, double omega_L, double omega_gap,
                                  double threshold) {
  HypothesisReport report;
  report.threshold = threshold;
  report.rate_scale = std::max(rates.gamma_pop, rates.gamma_coh);
  report.ratio_omega_L = report.rate_scale / omega_L;
  report.ratio_gap = report.rate_scale / omega_gap;
  report.ratio_difference = report.rate_scale / (omega_L - omega_gap);
  report.pass_omega_L = report.ratio_omega_L < threshold;
  report.pass_gap = report.ratio_gap < threshold;
  report.pass_difference = report.ratio_difference < threshold;
  return report;
}

}  // namespace darc
