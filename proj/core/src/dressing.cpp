#include "darc/dressing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace darc {
namespace {

double mean_photon_number(const Eigen::VectorXd& v) {
  double nbar = 0.0;
  for (int i = 0; i < v.size(); ++i) nbar += (i / 2) * v[i] * v[i];
  return nbar;
}

// How doublet-like a candidate pair is: a true doublet spans essentially two
// bare states, so the two largest combined bare weights approach 2. The
// mean-photon-number spread breaks ties in uncoupled corners, and a gap at or
// beyond omega_L disqualifies the pairing outright.
double pair_defect(const Eigen::VectorXd& va, const Eigen::VectorXd& vb, double gap,
                   double omega_L) {
  double top1 = 0.0, top2 = 0.0;
  for (int i = 0; i < va.size(); ++i) {
    const double w = va[i] * va[i] + vb[i] * vb[i];
    if (w > top1) {
      top2 = top1;
      top1 = w;
    } else if (w > top2) {
      top2 = w;
    }
  }
  double defect = 2.0 - (top1 + top2);
  defect += 0.1 * std::abs(mean_photon_number(va) - mean_photon_number(vb));
  if (gap >= omega_L) defect += 100.0;
  return defect;
}

void fix_sign(Eigen::VectorXd& v) {
  double g_weight = 0.0;
  for (int i = 0; i < v.size(); i += 2) g_weight += v[i] * v[i];

  int best = -1;
  double best_mag = 0.0;
  const int start = (g_weight > 1e-12) ? 0 : 1;
  for (int i = start; i < v.size(); i += 2) {
    if (std::abs(v[i]) > best_mag) {
      best_mag = std::abs(v[i]);
      best = i;
    }
  }
  if (best >= 0 && v[best] < 0.0) v = -v;
}

int excited_weight_anchor(const Eigen::VectorXd& va, const Eigen::VectorXd& vb) {
  int best_n = 0;
  double best_w = -1.0;
  for (int i = 1; i < va.size(); i += 2) {
    const double w = va[i] * va[i] + vb[i] * vb[i];
    if (w > best_w) {
      best_w = w;
      best_n = i / 2;
    }
  }
  return best_n;
}

}  // namespace

EigenSystem diagonalize(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols())
    throw SpecError("dressing", "diagonalize requires a square matrix");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw SpecError("dressing", "diagonalize requires a symmetric matrix");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  if (solver.info() != Eigen::Success) {
    const double residual =
        (matrix * solver.eigenvectors() - solver.eigenvectors() * solver.eigenvalues().asDiagonal())
            .norm();
    throw NumericalError("dressing", "eigensolver did not converge; residual " +
                                         std::to_string(residual));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

DressedSolution extract_doublets(const EigenSystem& eigen, const HamiltonianSpec& spec,
                                 const DoubletOptions& options) {
  const int m = static_cast<int>(eigen.values.size());
  if (m != 2 * spec.n_levels)
    throw SpecError("dressing", "eigen system size does not match the ladder truncation");
  const double omega_L = spec.omega_L;

  // Choose the alternation phase on the central half of the spectrum.
  double score[2] = {0.0, 0.0};
  for (int parity = 0; parity < 2; ++parity) {
    int count = 0;
    for (int a = parity; a + 1 < m; a += 2) {
      if (a < m / 4 || a + 1 >= 3 * m / 4) continue;
      score[parity] += pair_defect(eigen.vectors.col(a), eigen.vectors.col(a + 1),
                                   eigen.values[a + 1] - eigen.values[a], omega_L);
      ++count;
    }
    if (count > 0) score[parity] /= count;
  }
  const int parity = score[0] <= score[1] ? 0 : 1;
  // A healthy doublet pairing scores near zero; when even the better parity
  // looks nothing like doublets the splitting has outgrown omega_L and the
  // alternating ladder no longer exists.
  if (score[parity] > 0.8)
    throw StructureError("dressing",
                         "no doublet structure in consecutive eigenvalues (pair defect " +
                             std::to_string(score[parity]) +
                             "); the splitting likely reaches omega_L");

  struct Pair {
    int a, b;
    double center;
  };
  std::vector<Pair> pairs;
  for (int a = parity; a + 1 < m; a += 2)
    pairs.push_back({a, a + 1, 0.5 * (eigen.values[a] + eigen.values[a + 1])});
  if (pairs.size() < 2) throw StructureError("dressing", "too few doublet candidates");

  // Band index grid anchored on the central pair.
  const std::size_t ic = pairs.size() / 2;
  const double e_ref = pairs[ic].center;
  std::vector<int> band_of(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    band_of[i] = static_cast<int>(std::lround((pairs[i].center - e_ref) / omega_L));

  const int n_edge = static_cast<int>(std::ceil(options.edge_fraction * pairs.size()));
  const std::size_t lo = static_cast<std::size_t>(n_edge);
  const std::size_t hi = pairs.size() - static_cast<std::size_t>(n_edge);
  if (lo + 2 > hi) throw StructureError("dressing", "no bands left after edge discard");

  DressedSolution out;
  out.omega_L = omega_L;
  out.n_levels = spec.n_levels;
  for (std::size_t i = lo; i < hi; ++i) {
    if (i > lo && band_of[i] != band_of[i - 1] + 1)
      throw StructureError("dressing",
                           "band assignment is not a consecutive ladder; two candidate "
                           "partners fall in one omega_L window");
    DressedBand band;
    band.label = band_of[i];
    band.energy_lower = eigen.values[pairs[i].a];
    band.energy_upper = eigen.values[pairs[i].b];
    band.vec_lower = eigen.vectors.col(pairs[i].a);
    band.vec_upper = eigen.vectors.col(pairs[i].b);
    const double gap = band.gap();
    if (gap < options.degeneracy_tol * omega_L)
      throw DegeneracyError("dressing", "degenerate doublet at band " +
                                            std::to_string(band.label) + "; gap " +
                                            std::to_string(gap));
    if (gap >= omega_L)
      throw StructureError("dressing", "doublet gap " + std::to_string(gap) +
                                           " reaches omega_L; doublet structure lost");
    fix_sign(band.vec_upper);
    fix_sign(band.vec_lower);
    band.ladder_anchor = excited_weight_anchor(band.vec_upper, band.vec_lower);
    out.bands.push_back(std::move(band));
  }

  for (std::size_t i = 1; i < out.bands.size(); ++i) {
    if (out.bands[i].ladder_anchor != out.bands[i - 1].ladder_anchor + 1)
      throw StructureError("dressing", "bare-ladder anchors are not consecutive across bands");
  }

  out.central = out.bands.size() / 2;
  out.omega_gap = out.bands[out.central].gap();

  double stability = 0.0;
  double translation = 0.0;
  for (std::size_t i = 0; i < out.bands.size(); ++i) {
    stability = std::max(stability, std::abs(out.bands[i].gap() - out.omega_gap) / out.omega_gap);
    if (i > 0) {
      translation = std::max(
          translation,
          std::abs(out.bands[i].energy_upper - out.bands[i - 1].energy_upper - omega_L) / omega_L);
      translation = std::max(
          translation,
          std::abs(out.bands[i].energy_lower - out.bands[i - 1].energy_lower - omega_L) / omega_L);
    }
  }
  out.band_stability = stability;
  out.translation_residual = translation;
  return out;
}

namespace {

AmplitudeTable table_at_band(const DressedSolution& solution, std::size_t index,
                             const AmplitudeOptions& options) {
  const DressedBand& band = solution.bands.at(index);
  const int n_anchor = band.ladder_anchor;
  const int n_levels = solution.n_levels;

  AmplitudeTable table;
  table.omega_gap = solution.omega_gap;
  table.omega_L = solution.omega_L;

  // Full p range reachable on the ladder, then shrink to the smallest
  // symmetric window whose dropped mass stays below drop_mass.
  struct Slot {
    int p;
    double mass;
  };
  std::vector<Slot> slots;
  const int p_lo = n_anchor + 1 - (n_levels - 1);  // alpha slot for n = n_levels-1
  const int p_hi = n_anchor + 1;                   // alpha slot for n = 0
  for (int p = p_lo; p <= p_hi; ++p) {
    double mass = 0.0;
    for (const Eigen::VectorXd* v : {&band.vec_upper, &band.vec_lower}) {
      const int ng = n_anchor + 1 - p;
      if (ng >= 0 && ng < n_levels) mass += (*v)[flat_index(Atom::g, ng)] * (*v)[flat_index(Atom::g, ng)];
      const int ne = n_anchor - p;
      if (ne >= 0 && ne < n_levels) mass += (*v)[flat_index(Atom::e, ne)] * (*v)[flat_index(Atom::e, ne)];
    }
    slots.push_back({p, mass});
  }

  int p_max_abs = 0;
  for (const auto& s : slots) p_max_abs = std::max(p_max_abs, std::abs(s.p));
  int window = 0;
  for (; window < p_max_abs; ++window) {
    double dropped = 0.0;
    for (const auto& s : slots)
      if (std::abs(s.p) > window) dropped += s.mass;
    if (dropped < options.drop_mass) break;
  }

  table.p_min = -window;
  table.p_max = window;
  for (int p = -window; p <= window; ++p) {
    const int ng = n_anchor + 1 - p;
    const int ne = n_anchor - p;
    auto fill = [&](const Eigen::VectorXd& v, AmplitudeTable::Label& label) {
      label.alpha[p] = (ng >= 0 && ng < n_levels) ? v[flat_index(Atom::g, ng)] : 0.0;
      label.beta[p] = (ne >= 0 && ne < n_levels) ? v[flat_index(Atom::e, ne)] : 0.0;
    };
    fill(band.vec_upper, table.upper);
    fill(band.vec_lower, table.lower);
  }
  return table;
}

}  // namespace

double normalization_residual(const AmplitudeTable& table) {
  double worst = 0.0;
  for (const auto* label : {&table.upper, &table.lower}) {
    double sum = 0.0;
    for (const auto& [p, a] : label->alpha) sum += a * a;
    for (const auto& [p, b] : label->beta) sum += b * b;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

double orthogonality_residual(const AmplitudeTable& table) {
  double sum = 0.0;
  for (const auto& [p, a1] : table.upper.alpha) {
    auto it = table.lower.alpha.find(p);
    if (it != table.lower.alpha.end()) sum += a1 * it->second;
  }
  for (const auto& [p, b1] : table.upper.beta) {
    auto it = table.lower.beta.find(p);
    if (it != table.lower.beta.end()) sum += b1 * it->second;
  }
  return std::abs(sum);
}

AmplitudeTable amplitudes(const DressedSolution& solution, const AmplitudeOptions& options) {
  const std::size_t n = solution.bands.size();
  const std::size_t c = solution.central;
  const int off = options.band_offset_check;
  if (c < static_cast<std::size_t>(off) || c + static_cast<std::size_t>(off) >= n)
    throw SpecError("dressing", "central band too close to the retained-window edge");

  AmplitudeTable central = table_at_band(solution, c, options);

  // The coefficients must not depend on which band they are read from.
  for (int sign : {-1, +1}) {
    const auto other_index = static_cast<std::size_t>(static_cast<int>(c) + sign * off);
    AmplitudeTable other = table_at_band(solution, other_index, options);
    double worst = 0.0;
    for (int j : {1, 2}) {
      const auto& lc = central[j];
      const auto& lo = other[j];
      for (int p = std::min(central.p_min, other.p_min); p <= std::max(central.p_max, other.p_max);
           ++p) {
        auto get = [p](const std::map<int, double>& m) {
          auto it = m.find(p);
          return it == m.end() ? 0.0 : it->second;
        };
        worst = std::max(worst, std::abs(get(lc.alpha) - get(lo.alpha)));
        worst = std::max(worst, std::abs(get(lc.beta) - get(lo.beta)));
      }
    }
    if (worst > options.n_independence_tol)
      throw HypothesisError("dressing",
                            "dressed amplitudes drift across bands (max deviation " +
                                std::to_string(worst) +
                                "); the constant-coupling laser-statistics assumption fails here");
  }
  return central;
}

TransitionCoefficients coefficients(const AmplitudeTable& table, const CoefficientOptions& options) {
  TransitionCoefficients out;
  out.omega_gap = table.omega_gap;
  out.omega_L = table.omega_L;

  const int q_lo = (table.p_min - table.p_max) + 1;
  const int q_hi = (table.p_max - table.p_min) + 1;
  for (int q = q_lo; q <= q_hi; ++q) {
    std::array<double, 4> entry{};
    for (int i : {1, 2}) {
      for (int j : {1, 2}) {
        double sum = 0.0;
        for (const auto& [p, alpha] : table[j].alpha) {
          auto it = table[i].beta.find(p + q - 1);
          if (it != table[i].beta.end()) sum += it->second * alpha;
        }
        entry[static_cast<std::size_t>(2 * (i - 1) + (j - 1))] = sum;
      }
    }
    const bool keep = std::any_of(entry.begin(), entry.end(), [&](double a) {
      return a * a >= options.prune_threshold;
    });
    if (keep) out.entries[q] = entry;
  }

  // Completeness: summing a(q;i,j)^2 over (j,q) recovers the excited-state
  // weight of |i(N)>.
  for (int i : {1, 2}) {
    double lhs = 0.0;
    for (const auto& [q, entry] : out.entries)
      for (int j : {1, 2}) {
        const double a = entry[static_cast<std::size_t>(2 * (i - 1) + (j - 1))];
        lhs += a * a;
      }
    double rhs = 0.0;
    for (const auto& [p, b] : table[i].beta) rhs += b * b;
    if (std::abs(lhs - rhs) > options.sum_rule_tol)
      throw NumericalError("dressing", "transition-coefficient sum rule violated by " +
                                           std::to_string(std::abs(lhs - rhs)));
  }
  return out;
}

}  // namespace darc
