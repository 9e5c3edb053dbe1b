#pragma once

#include "uclab/linalg.hpp"

namespace uclab {

/// Solution of  min Tr(sigma)  s.t.  I_A (x) sigma >= rho  over Hermitian
/// sigma on B, together with a dual certificate X (PSD on A(x)B with
/// Tr_A X <= I) proving optimality up to `gap`:
///
///   Tr(rho X)  <=  optimum  <=  Tr(sigma*).
struct SdpSolution {
  Mat sigma_star;      // primal optimizer, dB x dB
  double primal_value; // Tr(sigma*)
  Mat dual_x;          // certificate on A (x) B
  double dual_value;   // Tr(rho X)
  double gap;          // primal_value - dual_value
  int iterations;
  bool converged;
};

/// Primal-dual interior-point solver specialized to the single-LMI block
/// structure above. `rho` is Hermitian PSD of dimension dA*dB with
/// trace in (0, 1]; tolerance is on the duality gap.
SdpSolution solve_min_entropy_sdp(const Mat& rho, Index d_a, Index d_b,
                                  double tol = 1e-8, int max_iterations = 200);

}  // namespace uclab
