#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "uclab/rng.hpp"

namespace uclab {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Density operator with an explicit subsystem dimension profile.
/// `normalized == false` marks a subnormalised state (trace <= 1).
struct DensityOperator {
  Mat mat;
  std::vector<Index> dims;
  bool normalized = true;

  Index dim() const { return mat.rows(); }

  /// Checks Hermiticity, positivity, trace and the dims product.
  /// Throws std::invalid_argument on violation.
  void validate(double herm_tol = 1e-12, double psd_tol = 1e-9,
                double trace_tol = 1e-9) const;
};

struct EigH {
  Eigen::VectorXd values;  // ascending
  Mat vectors;             // columns
};

/// The single spectral primitive: Hermitian eigendecomposition.
/// Every matrix function (sqrt, log, ...) routes through it.
EigH eigh(const Mat& hermitian);

Mat hermitize(const Mat& m);

/// sqrt of a PSD matrix; eigenvalues in [-1e-9, 0) are clamped to 0.
Mat sqrt_psd(const Mat& m);

double max_eigenvalue(const Mat& hermitian);
double min_eigenvalue(const Mat& hermitian);

/// Sum of absolute eigenvalues (1-norm of a Hermitian matrix).
double abs_eigenvalue_sum(const Mat& hermitian);

/// 1-norm of a general matrix, via the spectrum of M^dag M.
double one_norm(const Mat& m);

Mat kron(const Mat& a, const Mat& b);

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

/// Partial trace keeping the listed subsystems (ascending indices).
Mat partial_trace(const Mat& m, const std::vector<Index>& dims,
                  const std::vector<int>& keep);
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

/// Reorders subsystems: output subsystem i is input subsystem perm[i].
Mat permute_subsystems(const Mat& m, const std::vector<Index>& dims,
                       const std::vector<int>& perm);
DensityOperator permute_subsystems(const DensityOperator& rho, const std::vector<int>& perm);

/// Merges adjacent subsystems into the coarser profile `groups`,
/// e.g. dims (2,3,4) with groups {1,2} -> dims (2,12).
DensityOperator regroup(const DensityOperator& rho, const std::vector<int>& groups);

/// Trace distance ||rho - sigma||_Tr = (1/2)||rho - sigma||_1.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Fidelity F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Purified distance sqrt(1 - F_*^2) with the generalised fidelity
/// F_* = F + sqrt((1 - Tr rho)(1 - Tr sigma)).
double purified_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Channel in Choi form: choi = (id (x) Phi)(phi+) with dims [dIn, dOut].
struct ChoiChannel {
  DensityOperator choi;
  Index d_in = 0;
  Index d_out = 0;

  void validate(double tol = 1e-9) const;
};

ChoiChannel choi_of_unitary(const Mat& u);

/// Applies the channel: out = dIn * Tr_in[(rho^T (x) I) choi].
DensityOperator apply_channel(const ChoiChannel& chan, const DensityOperator& rho);

/// Kraus operators recovered from the Choi state (spectral route).
std::vector<Mat> kraus_operators(const ChoiChannel& chan, double cutoff = 1e-12);

/// Applies the channel to one subsystem, identity elsewhere.
DensityOperator apply_channel_to_subsystem(const ChoiChannel& chan,
                                           const DensityOperator& rho, int subsystem);

DensityOperator maximally_mixed(const std::vector<Index>& dims);

/// phi+ on [d, d].
DensityOperator max_entangled(Index d);

DensityOperator pure_state(const Vec& psi, const std::vector<Index>& dims);

/// Canonical purification: appends a register E of dimension rank(rho)
/// as the last subsystem.
DensityOperator purify(const DensityOperator& rho, double rank_cutoff = 1e-12);

Vec random_pure(Index d, Rng& rng);
Mat random_unitary(Index d, Rng& rng);
Mat random_hermitian(Index d, Rng& rng);
DensityOperator random_density(const std::vector<Index>& dims, Index rank, Rng& rng);

Index product(const std::vector<Index>& dims);

}  // namespace uclab
