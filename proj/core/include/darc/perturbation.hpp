// perturbation.hpp — closed-form first-order dressed states and line scalings

#pragma once

#include <vector>

#include "darc/dressing.hpp"
#include "darc/errors.hpp"
#include "darc/rates.hpp"

namespace darc {

// Rotating-wave doublet parameters plus the two perturbations: permanent
// dipole coefficient `asym` and the counter-rotating partner of `rabi`.
struct PerturbativeInput {
  double omega_0 = 1.0;
  double omega_L = 1.0;
  double rabi = 0.0;
  double asym = 0.0;

  double detuning() const { return omega_0 - omega_L; }
  // Rotating-wave doublet gap sqrt(rabi^2 + detuning^2).
  double rwa_gap() const;
  void validate() const;
};

// Mixing angle in (0, pi/2) with tan(2 theta) = rabi / detuning, continuous
// through resonance where it equals pi/4.
double mixing_angle(const PerturbativeInput& input);

// First-order dressed amplitudes: zeroth-order rotating-wave composition at
// p = 0 plus the permanent-dipole corrections at p = +/-1 and the
// counter-rotating corrections at p = +/-2. Kets are not re-normalized.
struct PerturbativeStates {
  double theta = 0.0;
  AmplitudeTable table;
};

PerturbativeStates perturbed_states(const PerturbativeInput& input);

// Leading-order transition coefficients: the rotating-wave values at q = 1,
// the permanent-dipole families at q = 0 and q = 2. q = 3 carries only an
// order-of-magnitude bound (see q3_magnitude_bound).
TransitionCoefficients analytic_coefficients(const PerturbativeInput& input);

// Magnitude scale of the q = 3 coefficients, rabi * gap / omega_L^2.
double q3_magnitude_bound(const PerturbativeInput& input);

// Leading-order weight of the low-frequency singlet relative to the main
// triplet: (Gamma(gap)/Gamma(omega_L)) * (asym/omega_L)^2 *
// rabi^2 / (4 (rabi^2 + detuning^2)).
double ratio_lowfreq_vs_mollow(const PerturbativeInput& input, const FormFactor& form_factor);

// Expected scaling of each low-order multiplet weight for a power-law form
// factor with the given exponent.
struct MultipletScaling {
  int q = 0;
  int line_count = 0;
  double center = 0.0;
  double weight_scaling = 0.0;
};

std::vector<MultipletScaling> multiplet_scalings(const PerturbativeInput& input,
                                                 double alpha_exponent);

}  // namespace darc
