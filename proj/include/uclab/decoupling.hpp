#pragma once

#include "uclab/clifford.hpp"
#include "uclab/entropy.hpp"
#include "uclab/linalg.hpp"

namespace uclab {

/// One decoupling instance: lhs is the ensemble-averaged trace distance of
/// the channel output from product form, rhs the min-entropy bound
/// 2^{-Hmin(A|E)/2 - Hmin(A|B)_tau/2 - 1}.
struct DecouplingReport {
  double lhs = 0.0;
  double lhs_std_err = 0.0;  // Monte-Carlo mode only
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double hmin_ae = 0.0;
  double hmin_tau = 0.0;
  bool exact = true;
  bool pass = false;
};

/// Choi state of the keep-the-first-m-qubits channel on n qubits,
/// arranged with dims [2^n, 2^m]: phi+ on the kept qubits, omega on the
/// traced ones.
DensityOperator partial_trace_choi(std::uint32_t n, std::uint32_t m);

/// Exact average over an enumerated 2-design.
DecouplingReport decoupling_verify_exact(const DensityOperator& rho_ae, std::uint32_t n,
                                         std::uint32_t m, const UnitaryEnsemble& ensemble,
                                         double sdp_tol = 1e-8);

/// Monte-Carlo average over sampled Clifford unitaries.
DecouplingReport decoupling_verify_mc(const DensityOperator& rho_ae, std::uint32_t n,
                                      std::uint32_t m, int samples, std::uint64_t seed,
                                      double sdp_tol = 1e-8);

struct GuessBound {
  double guess_probability = 0.0;
  double bound = 0.0;  // 1/2 + 2^{-Hmin(A|B)/2 - n/2}
  double hmin = 0.0;
  bool pass = false;
};

/// Two-player guessing average E_U sum_b Tr[(A^U_b (x) B^U_b) rho] against
/// the min-entropy bound; holds for any PVM family when the ensemble is a
/// 2-design.
GuessBound lemma1_guess_bound(const DensityOperator& rho_ab, std::uint32_t n,
                              const UnitaryEnsemble& ensemble,
                              const std::vector<std::array<Mat, 2>>& bob_pvms,
                              double sdp_tol = 1e-8);

/// Bob's per-question optimal response PVMs for the guessing game.
std::vector<std::array<Mat, 2>> helstrom_guess_pvms(const DensityOperator& rho_ab,
                                                    std::uint32_t n,
                                                    const UnitaryEnsemble& ensemble);

struct OverlapCheck {
  double overlap_score = 0.0;
  double epsilon_squared = 0.0;
  bool pass = false;
};

/// Overlap stage: with the recovery channel E from the min-entropy program,
/// sum_x Tr[(A_x (x) conj(A_x)) (1 (x) E)(rho)] >= epsilon^2 for any PVM.
OverlapCheck lemma1_overlap_check(const DensityOperator& rho_ab, double epsilon,
                                  const std::vector<Mat>& alice_pvm, double sdp_tol = 1e-8);

}  // namespace uclab
