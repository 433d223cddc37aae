// dynamics.hpp — time-domain propagation of the dressed-state density matrix

#pragma once

#include <complex>
#include <map>

#include <Eigen/Dense>

#include "darc/dressing.hpp"
#include "darc/errors.hpp"
#include "darc/rates.hpp"

namespace darc {

// Band-summed coherences sigma_ij(l) = sum_N <i(N)| sigma |j(N+l)>. The
// populations are the l = 0 diagonal entries; hermiticity ties
// sigma_ji(-l) to conj(sigma_ij(l)).
struct ReducedState {
  std::map<int, std::complex<double>> s11, s22, s12, s21;
  double time = 0.0;

  static ReducedState populations(double p1, double p2, int l_window = 4);
  double hermiticity_residual() const;
};

// Exact closed-form propagation over an interval tau: cross-label coherences
// rotate at l*omega_L -/+ gap and decay at gamma_coh; equal-label pairs
// follow the two-by-two affine relaxation toward the steady populations at
// rate gamma_pop.
ReducedState evolve_reduced(const ReducedState& state, const RateSet& rates, double tau);

// Dense density matrix over the retained dressed bands. States are indexed
// band-major with the upper state first.
class FullDressedState {
 public:
  FullDressedState(int n_bands, double time = 0.0);

  // |j(band)><j'(band')| matrix element access, labels in {1, 2}.
  std::complex<double>& element(int band, int label, int band_other, int label_other);
  std::complex<double> element(int band, int label, int band_other, int label_other) const;

  // Pure state localized on one band: cos(theta)|1(band)> + sin(theta)|2(band)>.
  static FullDressedState band_state(int n_bands, int band, double mix_angle = 0.0);

  int n_bands() const { return n_bands_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  double trace() const { return sigma_.trace().real(); }
  double hermiticity_residual() const;
  double min_eigenvalue() const;

  // Per-band label populations.
  double band_population(int band, int label) const;

  Eigen::MatrixXcd& matrix() { return sigma_; }
  const Eigen::MatrixXcd& matrix() const { return sigma_; }

 private:
  int n_bands_;
  double time_;
  Eigen::MatrixXcd sigma_;
};

// Band-summed reduction of the full state.
ReducedState reduce(const FullDressedState& state, int l_window = 4);

struct FullEvolveOptions {
  double stability_margin = 0.1;  // dt * max generator entry must stay below this
  double trace_tol_per_time = 1e-8;
  double budget_fraction = 0.5;  // fraction of the window allowed to drain
};

// Average down-ladder photon drift rate (bands consumed per unit time) in the
// steady state; horizon * drift must stay within the window budget.
double photon_drift_rate(const RateSet& rates);

// Fixed-step RK4 integration of the element-wise master equation in the
// dressed basis: coherent phases from the doublet ladder energies plus the
// dissipator built from the per-multiplet rates. Trace is monitored; decay
// consumes the window from above, and horizons that would drain more than
// half the window are refused up front.
FullDressedState evolve_full(const FullDressedState& state, const RateSet& rates, double dt,
                             long steps, const FullEvolveOptions& options = {});

}  // namespace darc
