// dressing.hpp — doublet band structure and dressed-state amplitude extraction

#pragma once

#include <array>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "darc/errors.hpp"
#include "darc/hamiltonian.hpp"

namespace darc {

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
};

// Symmetric eigensolve with a residual guarantee of ~1e-12 relative.
EigenSystem diagonalize(const Eigen::MatrixXd& matrix);

// One doublet of dressed eigenstates. `label` counts bands from the bottom of
// the retained window; `ladder_anchor` is the bare photon number N such that
// the pair lives on {|g,N+1>, |e,N>} (plus perturbative neighbours). Label 1
// is the upper state (+gap/2), label 2 the lower one.
struct DressedBand {
  int label = 0;
  int ladder_anchor = 0;
  double energy_upper = 0.0;
  double energy_lower = 0.0;
  Eigen::VectorXd vec_upper;
  Eigen::VectorXd vec_lower;

  double gap() const { return energy_upper - energy_lower; }
};

struct DressedSolution {
  std::vector<DressedBand> bands;  // retained bands, ascending
  std::size_t central = 0;         // index of the central retained band
  double omega_gap = 0.0;          // gap at the central band
  double omega_L = 0.0;
  int n_levels = 0;
  // max over retained bands of |gap(N) - omega_gap| / omega_gap
  double band_stability = 0.0;
  // max deviation of E_j(N+1) - E_j(N) from omega_L, relative
  double translation_residual = 0.0;

  const DressedBand& central_band() const { return bands.at(central); }
};

struct DoubletOptions {
  double edge_fraction = 0.2;       // bands discarded at each ladder end
  double degeneracy_tol = 1e-12;    // gap < tol*omega_L is an error
};

// Group the spectrum into doublets, fix labels and sign conventions, discard
// edge bands and read off the gap at the central band.
//
// Pairing: consecutive eigenvalues alternate between intra-doublet gaps and
// omega_L-complement gaps; the correct phase of the alternation is selected
// by eigenvector support (a true doublet spans ~2 bare states) with mean
// photon number as tie break. Sign convention: the largest ground-sector
// component of each eigenvector is made positive (excited sector as fallback
// when the ground weight vanishes), which reproduces the standard
// rotating-wave composition for any mixing angle.
DressedSolution extract_doublets(const EigenSystem& eigen, const HamiltonianSpec& spec,
                                 const DoubletOptions& options = {});

// Dressed amplitudes at the central band:
//   alpha_j(p) = <g, N+1-p | j(N)>,  beta_j(p) = <e, N-p | j(N)>.
struct AmplitudeTable {
  struct Label {
    std::map<int, double> alpha;
    std::map<int, double> beta;
  };
  Label upper;  // j = 1
  Label lower;  // j = 2
  int p_min = 0;
  int p_max = 0;
  double omega_gap = 0.0;
  double omega_L = 0.0;

  const Label& operator[](int j) const { return j == 1 ? upper : lower; }
};

struct AmplitudeOptions {
  double drop_mass = 1e-12;        // truncate p window once the tail is below this
  double n_independence_tol = 1e-6;
  int band_offset_check = 2;       // recompute at central +/- offset
};

// Extract the amplitude tables and verify they do not depend on the band
// (recomputed at neighbouring bands); a violation indicates the laser-number
// statistics assumption broke down and raises HypothesisError.
AmplitudeTable amplitudes(const DressedSolution& solution, const AmplitudeOptions& options = {});

// max |sum_p (a_j(p)^2 + b_j(p)^2) - 1| over labels
double normalization_residual(const AmplitudeTable& table);
// |sum_p (a_1 a_2 + b_1 b_2)|
double orthogonality_residual(const AmplitudeTable& table);

// Transition coefficients a(q; i, j) of the atomic lowering operator between
// dressed states: a(q;i,j) = sum_p beta_i(p+q-1) * alpha_j(p). Real couplings
// only, so all entries are real.
struct TransitionCoefficients {
  // q -> entries [a11, a12, a21, a22]
  std::map<int, std::array<double, 4>> entries;
  double omega_gap = 0.0;
  double omega_L = 0.0;

  double a(int q, int i, int j) const {
    auto it = entries.find(q);
    if (it == entries.end()) return 0.0;
    return it->second[static_cast<std::size_t>(2 * (i - 1) + (j - 1))];
  }
};

struct CoefficientOptions {
  double prune_threshold = 1e-14;  // drop entries with |a|^2 below this
  double sum_rule_tol = 1e-9;
};

// Build the coefficient map and enforce the completeness sum rule
// sum_{j,q} a(q;i,j)^2 = excited-state weight of |i(N)>.
TransitionCoefficients coefficients(const AmplitudeTable& table,
                                    const CoefficientOptions& options = {});

}  // namespace darc
