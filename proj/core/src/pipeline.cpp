#include "darc/pipeline.hpp"

namespace darc {
namespace {

void apply_q_cap(TransitionCoefficients& coeffs, const std::optional<int>& q_max) {
  if (!q_max) return;
  for (auto it = coeffs.entries.begin(); it != coeffs.entries.end();) {
    if (std::abs(it->first) > *q_max)
      it = coeffs.entries.erase(it);
    else
      ++it;
  }
}

}  // namespace

PipelineResult run_pipeline(const HamiltonianSpec& spec, const FormFactor& form_factor,
                            const PipelineOptions& options) {
  PipelineResult result;
  result.solution = extract_doublets(diagonalize(assemble(spec)), spec, options.doublets);
  result.table = amplitudes(result.solution, options.amplitudes);
  result.coeffs = coefficients(result.table, options.coefficients);
  apply_q_cap(result.coeffs, options.q_max);
  result.rates = build_rates(result.coeffs, form_factor, result.solution.omega_L,
                             result.solution.omega_gap, options.rates);
  result.spectrum = build_lines(result.rates);
  return result;
}

PipelineResult with_form_factor(const PipelineResult& base, const FormFactor& form_factor,
                                const PipelineOptions& options) {
  PipelineResult result = base;
  result.rates = build_rates(base.coeffs, form_factor, base.solution.omega_L,
                             base.solution.omega_gap, options.rates);
  result.spectrum = build_lines(result.rates);
  return result;
}

}  // namespace darc
