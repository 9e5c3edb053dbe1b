#pragma once

#include "uclab/linalg.hpp"
#include "uclab/sdp.hpp"

namespace uclab {

/// Von Neumann entropy in bits, 0 log 0 := 0.
double von_neumann(const DensityOperator& rho);

/// H(A|B) = H(AB) - H(B) for a bipartite state (dims [dA, dB]).
double conditional_vn(const DensityOperator& rho);

/// I(A;B) = H(A) + H(B) - H(AB).
double mutual_information(const DensityOperator& rho);

struct MinEntropyResult {
  double bits;  // -log2 of the primal value
  SdpSolution sdp;
};

/// Conditional min-entropy of A given B via the semidefinite program
/// 2^{-Hmin} = min{ Tr sigma : I (x) sigma >= rho }. Requires dims [dA, dB];
/// the solution always ships its dual certificate.
MinEntropyResult min_entropy(const DensityOperator& rho, double tol = 1e-8);

/// Max-entropy as the purification dual: H_max(A|B) = -H_min(A|E) on a
/// canonical purification (E appended, then B traced out).
MinEntropyResult max_entropy_result(const DensityOperator& rho, double tol = 1e-8);
double max_entropy(const DensityOperator& rho, double tol = 1e-8);

/// Recovery channel E: B -> A' extracted from the dual optimizer; its Choi
/// state is the conjugate-reordered certificate, completed to trace
/// preservation. Satisfies |A| F((id(x)E)(rho), phi+)^2 = 2^{-Hmin} up to
/// the duality gap; validated by achieved_ebit_fraction.
ChoiChannel recovery_channel(const DensityOperator& rho, const SdpSolution& sol);

/// |A| <phi+| (id (x) E)(rho) |phi+>, the loop-closure quantity.
double achieved_ebit_fraction(const DensityOperator& rho, const ChoiChannel& recovery);

/// Fallback extraction: fidelity ascent over Stinespring isometries.
ChoiChannel recovery_channel_ascent(const DensityOperator& rho, int iterations = 300,
                                    std::uint64_t seed = 1);

/// H(A|B) + H(A|C) on a tripartite state (dims [dA, dB, dC]); always >= 0.
double ssa_uncertainty_gap(const DensityOperator& rho);

/// H_min(A|B) - H_min(A|BC); nonnegative by strong subadditivity.
double ssa_min_entropy_gap(const DensityOperator& rho, double tol = 1e-8);

/// H_max(A|B) - H_min(A|B); nonnegative.
double min_max_gap(const DensityOperator& rho, double tol = 1e-8);

/// Mixture of bipartite states with a classical label register J.
struct CqState {
  std::vector<double> weights;
  std::vector<DensityOperator> components;  // each dims [dA, dB], normalized

  void validate(double tol = 1e-9) const;
  /// rho_ABJ with J appended as the last register.
  DensityOperator embed() const;
};

/// H_max(A|BJ) - sum_j p_j H_max(A|B)_j; nonnegative.
double max_concavity_gap(const CqState& cq, double tol = 1e-8);

}  // namespace uclab
