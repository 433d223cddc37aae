#include "darc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace darc {

using complexd = std::complex<double>;

ReducedState ReducedState::populations(double p1, double p2, int l_window) {
  ReducedState state;
  for (int l = -l_window; l <= l_window; ++l) {
    state.s11[l] = state.s22[l] = state.s12[l] = state.s21[l] = 0.0;
  }
  state.s11[0] = p1;
  state.s22[0] = p2;
  return state;
}

double ReducedState::hermiticity_residual() const {
  double worst = 0.0;
  auto probe = [&](const std::map<int, complexd>& a, const std::map<int, complexd>& b) {
    for (const auto& [l, value] : a) {
      auto it = b.find(-l);
      if (it != b.end()) worst = std::max(worst, std::abs(value - std::conj(it->second)));
    }
  };
  probe(s11, s11);
  probe(s22, s22);
  probe(s12, s21);
  probe(s21, s12);
  return worst;
}

ReducedState evolve_reduced(const ReducedState& state, const RateSet& rates, double tau) {
  const double wl = rates.omega_L;
  const double gap = rates.omega_gap;
  const complexd i_unit(0.0, 1.0);
  const double decay_pop = std::exp(-rates.gamma_pop * tau);
  const double decay_coh = std::exp(-rates.gamma_coh * tau);

  ReducedState next;
  next.time = state.time + tau;

  for (const auto& [l, value] : state.s12)
    next.s12[l] = std::exp(i_unit * (l * wl - gap) * tau) * decay_coh * value;
  for (const auto& [l, value] : state.s21)
    next.s21[l] = std::exp(i_unit * (l * wl + gap) * tau) * decay_coh * value;

  for (const auto& [l, v11] : state.s11) {
    auto it22 = state.s22.find(l);
    const complexd v22 = it22 == state.s22.end() ? complexd{0.0} : it22->second;
    const complexd phase = std::exp(i_unit * (l * wl) * tau);
    next.s11[l] = phase * ((rates.pi_1 + rates.pi_2 * decay_pop) * v11 +
                           rates.pi_1 * (1.0 - decay_pop) * v22);
    next.s22[l] = phase * (rates.pi_2 * (1.0 - decay_pop) * v11 +
                           (rates.pi_2 + rates.pi_1 * decay_pop) * v22);
  }
  // Equal-label coherences present only in s22.
  for (const auto& [l, v22] : state.s22) {
    if (state.s11.count(l)) continue;
    const complexd phase = std::exp(i_unit * (l * wl) * tau);
    next.s11[l] = phase * rates.pi_1 * (1.0 - decay_pop) * v22;
    next.s22[l] = phase * (rates.pi_2 + rates.pi_1 * decay_pop) * v22;
  }
  return next;
}

FullDressedState::FullDressedState(int n_bands, double time)
    : n_bands_(n_bands), time_(time), sigma_(Eigen::MatrixXcd::Zero(2 * n_bands, 2 * n_bands)) {
  if (n_bands < 2) throw SpecError("dynamics", "need at least two bands");
}

complexd& FullDressedState::element(int band, int label, int band_other, int label_other) {
  return sigma_(2 * band + (label - 1), 2 * band_other + (label_other - 1));
}

complexd FullDressedState::element(int band, int label, int band_other, int label_other) const {
  return sigma_(2 * band + (label - 1), 2 * band_other + (label_other - 1));
}

FullDressedState FullDressedState::band_state(int n_bands, int band, double mix_angle) {
  FullDressedState state(n_bands);
  if (band < 0 || band >= n_bands) throw SpecError("dynamics", "band index out of window");
  const double c = std::cos(mix_angle);
  const double s = std::sin(mix_angle);
  state.element(band, 1, band, 1) = c * c;
  state.element(band, 2, band, 2) = s * s;
  state.element(band, 1, band, 2) = c * s;
  state.element(band, 2, band, 1) = c * s;
  return state;
}

double FullDressedState::hermiticity_residual() const {
  return (sigma_ - sigma_.adjoint()).cwiseAbs().maxCoeff();
}

double FullDressedState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sigma_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double FullDressedState::band_population(int band, int label) const {
  return element(band, label, band, label).real();
}

ReducedState reduce(const FullDressedState& state, int l_window) {
  ReducedState reduced;
  reduced.time = state.time();
  for (int l = -l_window; l <= l_window; ++l) {
    complexd v11 = 0.0, v22 = 0.0, v12 = 0.0, v21 = 0.0;
    for (int w = 0; w < state.n_bands(); ++w) {
      const int w2 = w + l;
      if (w2 < 0 || w2 >= state.n_bands()) continue;
      v11 += state.element(w, 1, w2, 1);
      v22 += state.element(w, 2, w2, 2);
      v12 += state.element(w, 1, w2, 2);
      v21 += state.element(w, 2, w2, 1);
    }
    reduced.s11[l] = v11;
    reduced.s22[l] = v22;
    reduced.s12[l] = v12;
    reduced.s21[l] = v21;
  }
  return reduced;
}

double photon_drift_rate(const RateSet& rates) {
  double drift = 0.0;
  for (const auto& [q, r] : rates.per_q)
    drift += q * ((r.g11 + r.g12) * rates.pi_1 + (r.g22 + r.g21) * rates.pi_2);
  return drift;
}

namespace {

// Right-hand side of the element-wise master equation. The coherent part uses
// the ideal ladder energies E_j(w) = w*omega_L -/+ gap/2; the dissipator
// shifts both indices down by q per emission channel.
class FullGenerator {
 public:
  FullGenerator(const RateSet& rates, int n_bands) : rates_(rates), n_bands_(n_bands) {
    const int dim = 2 * n_bands;
    damp_.resize(dim, dim);
    double out1 = 0.0, out2 = 0.0;
    for (const auto& [q, r] : rates_.per_q) {
      out1 += r.g11 + r.g12;
      out2 += r.g22 + r.g21;
    }
    auto energy = [&](int s) {
      const int w = s / 2;
      const int label = s % 2;  // 0 = upper, 1 = lower
      return w * rates_.omega_L + (label == 0 ? 0.5 : -0.5) * rates_.omega_gap;
    };
    auto loss = [&](int s) { return (s % 2 == 0) ? out1 : out2; };
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        damp_(a, b) = complexd(-0.5 * (loss(a) + loss(b)), -(energy(a) - energy(b)));
    total_loss_ = out1 + out2;
  }

  double total_loss() const { return total_loss_; }

  void rhs(const Eigen::MatrixXcd& sigma, Eigen::MatrixXcd& out) const {
    out = damp_.cwiseProduct(sigma);
    for (const auto& [q, r] : rates_.per_q) {
      if (q < 0 || q >= n_bands_) continue;
      const int w_max = n_bands_ - q;
      for (int w = 0; w < w_max; ++w) {
        for (int w2 = 0; w2 < w_max; ++w2) {
          const int a1 = 2 * w, a2 = 2 * w + 1;
          const int b1 = 2 * w2, b2 = 2 * w2 + 1;
          const int sa1 = 2 * (w + q), sa2 = sa1 + 1;
          const int sb1 = 2 * (w2 + q), sb2 = sb1 + 1;
          out(a1, b1) += r.g11 * sigma(sa1, sb1) + r.g21 * sigma(sa2, sb2);
          out(a2, b2) += r.g12 * sigma(sa1, sb1) + r.g22 * sigma(sa2, sb2);
          out(a1, b2) += r.k12 * sigma(sa1, sb2);
          out(a2, b1) += r.k12 * sigma(sa2, sb1);
        }
      }
    }
  }

 private:
  RateSet rates_;
  int n_bands_;
  Eigen::MatrixXcd damp_;
  double total_loss_ = 0.0;
};

int occupied_band_span(const Eigen::MatrixXcd& sigma) {
  const double floor = 1e-14 * std::max(1.0, sigma.cwiseAbs().maxCoeff());
  int span = 0;
  for (int a = 0; a < sigma.rows(); ++a)
    for (int b = 0; b < sigma.cols(); ++b)
      if (std::abs(sigma(a, b)) > floor) span = std::max(span, std::abs(a / 2 - b / 2));
  return span;
}

}  // namespace

FullDressedState evolve_full(const FullDressedState& state, const RateSet& rates, double dt,
                             long steps, const FullEvolveOptions& options) {
  if (dt <= 0.0 || steps < 0) throw SpecError("dynamics", "dt must be positive, steps >= 0");

  FullGenerator generator(rates, state.n_bands());

  const int l_span = occupied_band_span(state.matrix());
  const double max_entry =
      l_span * rates.omega_L + rates.omega_gap + generator.total_loss();
  if (dt * max_entry > options.stability_margin)
    throw IntegratorError(
        "dynamics", "step size " + std::to_string(dt) + " exceeds the stability bound " +
                        std::to_string(options.stability_margin / max_entry) +
                        " for the occupied sectors");

  const double horizon = dt * static_cast<double>(steps);
  const double drift = photon_drift_rate(rates);
  const double drained = horizon * drift;
  const double allowed = options.budget_fraction * state.n_bands();
  if (drained > allowed)
    throw IntegratorError(
        "dynamics",
        "photon budget exceeded: horizon " + std::to_string(horizon) + " drains " +
            std::to_string(drained) + " bands at drift rate " + std::to_string(drift) +
            "; at most " + std::to_string(allowed) + " of " + std::to_string(state.n_bands()) +
            " bands may drain");

  FullDressedState current = state;
  Eigen::MatrixXcd& sigma = current.matrix();
  const double trace_0 = current.trace();
  const double trace_allowance =
      options.trace_tol_per_time * std::max(1.0, horizon) * std::max(1.0, trace_0);

  Eigen::MatrixXcd k1(sigma.rows(), sigma.cols());
  Eigen::MatrixXcd k2(sigma.rows(), sigma.cols());
  Eigen::MatrixXcd k3(sigma.rows(), sigma.cols());
  Eigen::MatrixXcd k4(sigma.rows(), sigma.cols());
  Eigen::MatrixXcd scratch(sigma.rows(), sigma.cols());

  const long check_every = std::max<long>(1, steps / 128);
  for (long step = 0; step < steps; ++step) {
    generator.rhs(sigma, k1);
    scratch = sigma + (0.5 * dt) * k1;
    generator.rhs(scratch, k2);
    scratch = sigma + (0.5 * dt) * k2;
    generator.rhs(scratch, k3);
    scratch = sigma + dt * k3;
    generator.rhs(scratch, k4);
    sigma += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if ((step + 1) % check_every == 0 || step + 1 == steps) {
      const double drift_now = std::abs(current.trace() - trace_0);
      if (drift_now > trace_allowance)
        throw IntegratorError("dynamics", "trace drifted by " + std::to_string(drift_now) +
                                              " (allowed " + std::to_string(trace_allowance) +
                                              "); population reached the window edge");
    }
  }
  current.set_time(state.time() + horizon);
  return current;
}

}  // namespace darc
