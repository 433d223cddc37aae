// spectrum.hpp — steady-state emission lines and spectral density

#pragma once

#include <span>
#include <string>
#include <vector>

#include "darc/errors.hpp"
#include "darc/rates.hpp"

namespace darc {

enum class LineKind { SidebandPlus, SidebandMinus, CentralLorentzian, CoherentDelta };

const char* to_string(LineKind kind);

// One emission line of multiplet q. Sidebands sit at q*omega_L +/- gap with
// width gamma_coh; the central Lorentzian sits at q*omega_L with width
// gamma_pop; the coherent delta has zero width. `weight` is the integrated
// intensity in photons per unit time.
struct SpectralLine {
  int q = 0;
  LineKind kind = LineKind::CentralLorentzian;
  double center = 0.0;
  double width = 0.0;
  double weight = 0.0;
};

struct Spectrum {
  std::vector<SpectralLine> lines;
  RateSet rates;
  std::vector<std::string> warnings;  // secular-approximation diagnostics

  double total_weight() const;
};

// Emit the line records for every retained multiplet; zero-weight lines are
// pruned. A delta weight below -1e-12 indicates an internal inconsistency.
Spectrum build_lines(const RateSet& rates);

// Sum of the Lorentzian lines on the grid; coherent deltas are never
// rasterized and stay as separate records. Grid must be strictly increasing
// and positive.
std::vector<double> evaluate_density(const Spectrum& spectrum, std::span<const double> omega_grid);

// Integrated weight of multiplet q (all kinds).
double multiplet_weight(const Spectrum& spectrum, int q);

// I_+(q_num) / I_total(q_den); with q_num = 0 this is the relative strength
// of the low-frequency singlet against a higher multiplet.
double multiplet_ratio(const Spectrum& spectrum, int q_num, int q_den);

// Peak prominence of the low-frequency line: its density at omega = gap
// against the tails of every q > 0 line at the same frequency, plus the
// closed-form estimate valid for gamma_coh << gap << omega_L.
struct QualityFactor {
  double exact = 0.0;
  double closed_form = 0.0;
};

QualityFactor quality_factor(const Spectrum& spectrum);

}  // namespace darc
