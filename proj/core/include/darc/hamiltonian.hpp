// hamiltonian.hpp — atom-laser Hamiltonian assembly on a truncated photon ladder

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "darc/errors.hpp"

namespace darc {

enum class Atom { g, e };

enum class AtomicOp {
  Raise,    // |e><g|
  Lower,    // |g><e|
  ExcProj,  // |e><e|
  GndProj,  // |g><g|
};

// Bare basis ordering: photon number major, atom interleaved.
// |g,n> -> 2n, |e,n> -> 2n+1. Keeps the matrix banded with bandwidth
// 2*max|photon_shift|+1.
inline int flat_index(Atom atom, int n_photons) {
  return 2 * n_photons + (atom == Atom::e ? 1 : 0);
}

// One directed coupling term: strength * op (x) sum_N |N+photon_shift><N|.
// Each term writes strength/2 onto the coupled matrix elements, so a
// rotating-wave pair {Raise p=-1, Lower p=+1} with strength W reproduces the
// conventional W/2 (|e><g| a + h.c.) coupling. `strength` is the full
// Rabi-style frequency, already including the sqrt(<N>) enhancement.
// With hermitian_close the transposed elements are added automatically;
// otherwise the term set as a whole must be Hermitian.
struct CouplingTerm {
  AtomicOp op = AtomicOp::Raise;
  int photon_shift = 0;
  double strength = 0.0;
  bool hermitian_close = false;
};

struct HamiltonianSpec {
  double omega_0 = 1.0;  // bare atomic transition frequency (rad/s, hbar = 1)
  double omega_L = 1.0;  // laser frequency
  std::vector<CouplingTerm> terms;
  int n_levels = 50;  // photon-ladder truncation

  void validate() const;
};

// Dense symmetric matrix of size 2*n_levels. Diagonal carries the free
// energies n*omega_L and n*omega_L + omega_0; couplings are added per term,
// with ladder-edge contributions (n + shift out of range) silently dropped.
Eigen::MatrixXd assemble(const HamiltonianSpec& spec);

// Term list for the standard dipole-coupled model: rotating-wave pair of
// strength `rabi`, optional permanent-dipole terms of coefficient `asym` on
// the excited projector, optional counter-rotating pair. With asym = 0 and no
// counter-rotating flag the assembled matrix is block diagonal in the
// doublets {|g,N+1>, |e,N>} away from the ladder edges.
HamiltonianSpec standard_spec(double omega_0, double omega_L, double rabi, double asym,
                              bool include_counter_rotating, int n_levels = 50);

}  // namespace darc
