// pipeline.hpp — assembled spec to spectrum in one call

#pragma once

#include <optional>

#include "darc/dressing.hpp"
#include "darc/hamiltonian.hpp"
#include "darc/rates.hpp"
#include "darc/spectrum.hpp"

namespace darc {

struct PipelineOptions {
  DoubletOptions doublets;
  AmplitudeOptions amplitudes;
  CoefficientOptions coefficients;
  RateOptions rates;
  std::optional<int> q_max;  // optionally cap the retained multiplet order
};

struct PipelineResult {
  DressedSolution solution;
  AmplitudeTable table;
  TransitionCoefficients coeffs;
  RateSet rates;
  Spectrum spectrum;
};

PipelineResult run_pipeline(const HamiltonianSpec& spec, const FormFactor& form_factor,
                            const PipelineOptions& options = {});

// Rebuild rates and lines for the same dressed solution under a different
// form factor (used for the flat-coupling comparison).
PipelineResult with_form_factor(const PipelineResult& base, const FormFactor& form_factor,
                                const PipelineOptions& options = {});

}  // namespace darc
