#pragma once

#include <stdexcept>
#include <string>

namespace qcrit {

// Labels for the two estimation parameters: the transverse field omega
// (the estimation target) and the coupling g (the control parameter).
enum class ParameterId { Omega, Coupling };

inline const char* to_string(ParameterId p) {
  return p == ParameterId::Omega ? "omega" : "g";
}

// Central collection of numerical guards. Everything reads its default from
// default_tolerances; call sites that need different behaviour pass an
// override explicitly.
struct Tolerances {
  double hermiticity = 1e-12;         // max|A - A^dag| relative to max|A|
  double eig_reconstruction = 1e-10;  // ||A - V diag(l) V^dag||_max, relative
  double orthonormality = 1e-10;      // ||V^dag V - I||_max
  double quadrature_rel = 1e-10;      // Gaussian moment matching, relative
  double state_norm = 1e-10;          // pure-state normalization slack
  double density_floor = 1e-12;       // admissible eigenvalue negativity
  double trace_unit = 1e-10;          // density-matrix trace slack
  double rank_cutoff = 1e-12;         // eigenvalue-pair cutoff in mixed QFI
  double singularity_rel = 1e-10;     // QFIM det threshold, relative
  double degeneracy_rel = 1e-10;      // spectral-gap threshold vs ||H||
  double gram_truncation = 1e-12;     // relative Gram eigenvalue cutoff
  double convergence_rel = 1e-6;      // quadrature doubling tolerance
};

inline constexpr Tolerances default_tolerances{};

// Degenerate point of a model family (ground state or angle undefined).
struct degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter point where a derivative formula loses its denominator.
struct singular_point_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Spectral gap too small for a perturbative derivative to be trusted.
struct near_degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter point outside the phase where a closed form is real.
struct out_of_phase_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Failure while assembling one quadrature node of an averaged state.
struct node_error : std::runtime_error {
  node_error(int node_index, const std::string& reason)
      : std::runtime_error("quadrature node " + std::to_string(node_index) +
                           ": " + reason),
        node(node_index) {}
  int node;
};

}  // namespace qcrit
