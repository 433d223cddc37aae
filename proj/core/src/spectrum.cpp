#include "darc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace darc {

const char* to_string(LineKind kind) {
  switch (kind) {
    case LineKind::SidebandPlus: return "sideband_plus";
    case LineKind::SidebandMinus: return "sideband_minus";
    case LineKind::CentralLorentzian: return "central_lorentzian";
    case LineKind::CoherentDelta: return "coherent_delta";
  }
  return "?";
}

double Spectrum::total_weight() const {
  double sum = 0.0;
  for (const auto& line : lines) sum += line.weight;
  return sum;
}

Spectrum build_lines(const RateSet& rates) {
  Spectrum spectrum;
  spectrum.rates = rates;

  const double wl = rates.omega_L;
  const double gap = rates.omega_gap;
  const double p1 = rates.pi_1;
  const double p2 = rates.pi_2;

  for (const auto& [q, r] : rates.per_q) {
    const double plus = r.g12 * p1;
    if (plus > 0.0)
      spectrum.lines.push_back({q, LineKind::SidebandPlus, q * wl + gap, rates.gamma_coh, plus});

    const double minus = r.g21 * p2;
    if (minus > 0.0)
      spectrum.lines.push_back({q, LineKind::SidebandMinus, q * wl - gap, rates.gamma_coh, minus});

    const double delta = r.g11 * p1 * p1 + r.g22 * p2 * p2 + 2.0 * r.k12 * p1 * p2;
    if (delta < -1e-12 * std::max(r.g11 + r.g22, 1e-300))
      throw NumericalError("spectrum", "coherent line weight came out negative at q " +
                                           std::to_string(q));
    if (delta > 0.0)
      spectrum.lines.push_back({q, LineKind::CoherentDelta, q * wl, 0.0, delta});

    const double lorentz = (r.g11 + r.g22 - 2.0 * r.k12) * p1 * p2;
    if (lorentz > 0.0)
      spectrum.lines.push_back(
          {q, LineKind::CentralLorentzian, q * wl, rates.gamma_pop, lorentz});
  }

  std::stable_sort(spectrum.lines.begin(), spectrum.lines.end(),
                   [](const SpectralLine& a, const SpectralLine& b) {
                     if (a.q != b.q) return a.q < b.q;
                     if (a.center != b.center) return a.center < b.center;
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });

  // Line separation diagnostic: distinct Lorentzian centers approaching each
  // other within ~10 widths mean the incoherent sum is no longer justified.
  for (std::size_t i = 0; i < spectrum.lines.size(); ++i) {
    const auto& a = spectrum.lines[i];
    if (a.kind == LineKind::CoherentDelta) continue;
    for (std::size_t j = i + 1; j < spectrum.lines.size(); ++j) {
      const auto& b = spectrum.lines[j];
      if (b.kind == LineKind::CoherentDelta) continue;
      if (a.q == b.q && a.center == b.center) continue;  // co-centered central pair
      const double dist = std::abs(a.center - b.center);
      if (dist < 10.0 * std::max(a.width, b.width))
        spectrum.warnings.push_back("lines at " + std::to_string(a.center) + " and " +
                                    std::to_string(b.center) +
                                    " overlap within 10 widths; incoherent summation is "
                                    "questionable here");
    }
  }
  return spectrum;
}

std::vector<double> evaluate_density(const Spectrum& spectrum, std::span<const double> omega_grid) {
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    if (omega_grid[i] <= 0.0)
      throw DomainError("spectrum", "density grid must be strictly positive");
    if (i > 0 && omega_grid[i] <= omega_grid[i - 1])
      throw DomainError("spectrum", "density grid must be strictly increasing");
  }

  std::vector<double> density(omega_grid.size(), 0.0);
  for (const auto& line : spectrum.lines) {
    if (line.kind == LineKind::CoherentDelta) continue;
    const double w = line.weight / std::numbers::pi * line.width;
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
      const double d = omega_grid[i] - line.center;
      density[i] += w / (d * d + line.width * line.width);
    }
  }
  return density;
}

double multiplet_weight(const Spectrum& spectrum, int q) {
  double sum = 0.0;
  for (const auto& line : spectrum.lines)
    if (line.q == q) sum += line.weight;
  return sum;
}

double multiplet_ratio(const Spectrum& spectrum, int q_num, int q_den) {
  double numerator = 0.0;
  for (const auto& line : spectrum.lines)
    if (line.q == q_num && line.kind == LineKind::SidebandPlus) numerator += line.weight;
  const double denominator = multiplet_weight(spectrum, q_den);
  if (denominator <= 0.0)
    throw DomainError("spectrum", "multiplet ratio undefined: multiplet " +
                                      std::to_string(q_den) + " carries no weight");
  return numerator / denominator;
}

QualityFactor quality_factor(const Spectrum& spectrum) {
  const double gap = spectrum.rates.omega_gap;

  const SpectralLine* low = nullptr;
  for (const auto& line : spectrum.lines)
    if (line.q == 0 && line.kind == LineKind::SidebandPlus) low = &line;
  if (low == nullptr)
    throw DomainError("spectrum", "quality factor undefined without a low-frequency line");

  double tails = 0.0;
  for (const auto& line : spectrum.lines) {
    if (line.q <= 0 || line.kind == LineKind::CoherentDelta) continue;
    const double d = gap - line.center;
    tails += line.weight / std::numbers::pi * line.width / (d * d + line.width * line.width);
  }
  if (tails <= 0.0)
    throw DomainError("spectrum", "quality factor undefined: no q > 0 background at the gap");

  QualityFactor qf;
  qf.exact = (low->weight / (std::numbers::pi * low->width)) / tails;

  const auto& rates = spectrum.rates;
  const double g12_0 = rates.at(0).g12;
  const double g12_1 = rates.at(1).g12;
  if (g12_1 > 0.0 && rates.gamma_coh > 0.0) {
    const double wl_over_coh = rates.omega_L / rates.gamma_coh;
    qf.closed_form = wl_over_coh * wl_over_coh * (g12_0 / g12_1) /
                     (4.0 - rates.gamma_pop / rates.gamma_coh);
  }
  return qf;
}

}  // namespace darc
