#include "darc/hamiltonian.hpp"

#include <cmath>
#include <string>

namespace darc {
namespace {

const char* op_name(AtomicOp op) {
  switch (op) {
    case AtomicOp::Raise: return "raise";
    case AtomicOp::Lower: return "lower";
    case AtomicOp::ExcProj: return "exc_proj";
    case AtomicOp::GndProj: return "gnd_proj";
  }
  return "?";
}

// Source/destination atomic states of a directed operator.
Atom op_source(AtomicOp op) {
  return (op == AtomicOp::Raise || op == AtomicOp::GndProj) ? Atom::g : Atom::e;
}

Atom op_destination(AtomicOp op) {
  return (op == AtomicOp::Raise || op == AtomicOp::ExcProj) ? Atom::e : Atom::g;
}

std::string term_label(const CouplingTerm& t) {
  return std::string(op_name(t.op)) + " shift " + std::to_string(t.photon_shift) +
         " strength " + std::to_string(t.strength);
}

}  // namespace

void HamiltonianSpec::validate() const {
  if (!(omega_0 > 0.0) || !std::isfinite(omega_0))
    throw SpecError("hamiltonian", "omega_0 must be positive and finite");
  if (!(omega_L > 0.0) || !std::isfinite(omega_L))
    throw SpecError("hamiltonian", "omega_L must be positive and finite");
  if (n_levels < 8)
    throw SpecError("hamiltonian", "n_levels must be at least 8");
  for (const auto& t : terms) {
    if (!std::isfinite(t.strength))
      throw SpecError("hamiltonian", "non-finite strength in term: " + term_label(t));
    if (std::abs(t.photon_shift) >= n_levels)
      throw SpecError("hamiltonian",
                      "photon_shift exceeds ladder truncation in term: " + term_label(t));
  }
}

Eigen::MatrixXd assemble(const HamiltonianSpec& spec) {
  spec.validate();
  const int dim = 2 * spec.n_levels;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

  for (int n = 0; n < spec.n_levels; ++n) {
    h(flat_index(Atom::g, n), flat_index(Atom::g, n)) = n * spec.omega_L;
    h(flat_index(Atom::e, n), flat_index(Atom::e, n)) = n * spec.omega_L + spec.omega_0;
  }

  for (const auto& t : spec.terms) {
    const Atom src = op_source(t.op);
    const Atom dst = op_destination(t.op);
    for (int n = 0; n < spec.n_levels; ++n) {
      const int m = n + t.photon_shift;
      if (m < 0 || m >= spec.n_levels) continue;  // edge terms dropped
      const int row = flat_index(dst, m);
      const int col = flat_index(src, n);
      h(row, col) += 0.5 * t.strength;
      if (t.hermitian_close) h(col, row) += 0.5 * t.strength;
    }
  }

  // A closed term set must come out symmetric; otherwise name a term that
  // touches the worst offending element.
  double scale = h.cwiseAbs().maxCoeff();
  if (scale == 0.0) scale = 1.0;
  Eigen::Index bad_r = 0, bad_c = 0;
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff(&bad_r, &bad_c);
  if (asym > 1e-12 * scale) {
    std::string offender = "unknown";
    const int shift = (static_cast<int>(bad_r) / 2) - (static_cast<int>(bad_c) / 2);
    for (const auto& t : spec.terms) {
      const bool touches_row = op_destination(t.op) == (bad_r % 2 ? Atom::e : Atom::g) &&
                               op_source(t.op) == (bad_c % 2 ? Atom::e : Atom::g) &&
                               t.photon_shift == shift;
      const bool touches_col = op_destination(t.op) == (bad_c % 2 ? Atom::e : Atom::g) &&
                               op_source(t.op) == (bad_r % 2 ? Atom::e : Atom::g) &&
                               t.photon_shift == -shift;
      if (touches_row || touches_col) {
        offender = term_label(t);
        break;
      }
    }
    throw SpecError("hamiltonian",
                    "term set is not Hermitian; unmatched contribution from term: " + offender);
  }
  // Exact symmetry downstream.
  h = ((h + h.transpose()) * 0.5).eval();
  return h;
}

HamiltonianSpec standard_spec(double omega_0, double omega_L, double rabi, double asym,
                              bool include_counter_rotating, int n_levels) {
  if (omega_0 < 0.0 || omega_L < 0.0 || rabi < 0.0 || asym < 0.0)
    throw SpecError("hamiltonian", "standard_spec frequencies must be non-negative");

  HamiltonianSpec spec;
  spec.omega_0 = omega_0;
  spec.omega_L = omega_L;
  spec.n_levels = n_levels;

  if (rabi > 0.0) {
    spec.terms.push_back({AtomicOp::Raise, -1, rabi, false});
    spec.terms.push_back({AtomicOp::Lower, +1, rabi, false});
  }
  if (include_counter_rotating && rabi > 0.0) {
    spec.terms.push_back({AtomicOp::Raise, +1, rabi, false});
    spec.terms.push_back({AtomicOp::Lower, -1, rabi, false});
  }
  if (asym > 0.0) {
    // |e><e| (x) h_L with coefficient `asym`: each directed term writes
    // strength/2, so the pair carries strength 2*asym.
    spec.terms.push_back({AtomicOp::ExcProj, +1, 2.0 * asym, false});
    spec.terms.push_back({AtomicOp::ExcProj, -1, 2.0 * asym, false});
  }
  return spec;
}

}  // namespace darc
