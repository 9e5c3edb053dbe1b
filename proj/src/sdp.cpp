#include "uclab/sdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace uclab {

namespace {

// Orthonormal real basis of Hermitian dB x dB matrices under Tr[AB].
std::vector<Mat> hermitian_basis(Index d) {
  std::vector<Mat> basis;
  basis.reserve(d * d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Index k = 0; k < d; ++k) {
    Mat e = Mat::Zero(d, d);
    e(k, k) = 1.0;
    basis.push_back(e);
  }
  for (Index k = 0; k < d; ++k)
    for (Index l = k + 1; l < d; ++l) {
      Mat e = Mat::Zero(d, d);
      e(k, l) = inv_sqrt2;
      e(l, k) = inv_sqrt2;
      basis.push_back(e);
      Mat f = Mat::Zero(d, d);
      f(k, l) = Complex(0.0, inv_sqrt2);
      f(l, k) = Complex(0.0, -inv_sqrt2);
      basis.push_back(f);
    }
  return basis;
}

Eigen::VectorXd coeffs_of(const Mat& m, const std::vector<Mat>& basis) {
  Eigen::VectorXd c(static_cast<Index>(basis.size()));
  for (size_t i = 0; i < basis.size(); ++i) c[static_cast<Index>(i)] = (basis[i] * m).trace().real();
  return c;
}

Mat from_coeffs(const Eigen::VectorXd& c, const std::vector<Mat>& basis) {
  Mat m = Mat::Zero(basis.front().rows(), basis.front().cols());
  for (size_t i = 0; i < basis.size(); ++i) m += c[static_cast<Index>(i)] * basis[i];
  return m;
}

// Largest t with M + t D > 0 (M > 0), via the spectrum of M^{-1/2} D M^{-1/2}.
double max_step(const Mat& m, const Mat& d) {
  EigH e = eigh(m);
  Eigen::VectorXd inv_sqrt = e.values;
  for (Index i = 0; i < inv_sqrt.size(); ++i)
    inv_sqrt[i] = 1.0 / std::sqrt(std::max(inv_sqrt[i], 1e-300));
  const Mat l = e.vectors * inv_sqrt.asDiagonal() * e.vectors.adjoint();
  const double lam = min_eigenvalue(l * d * l);
  if (lam >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lam;
}

}  // namespace

SdpSolution solve_min_entropy_sdp(const Mat& rho_in, Index d_a, Index d_b, double tol,
                                  int max_iterations) {
  const Index d = d_a * d_b;
  if (rho_in.rows() != d || rho_in.cols() != d)
    throw std::invalid_argument("sdp: rho dimension does not match dA*dB");
  const Mat rho = hermitize(rho_in);
  const std::vector<Index> dims{d_a, d_b};
  const Mat id_a = Mat::Identity(d_a, d_a);
  const Mat id_b = Mat::Identity(d_b, d_b);
  const auto basis = hermitian_basis(d_b);
  const Index nb = static_cast<Index>(basis.size());

  Mat sigma = (std::max(0.0, max_eigenvalue(rho)) * 1.1 + 0.1) * id_b;
  Mat x = Mat::Identity(d, d) / static_cast<double>(d_a);

  SdpSolution best;
  best.primal_value = std::numeric_limits<double>::infinity();
  best.dual_value = -std::numeric_limits<double>::infinity();
  best.gap = std::numeric_limits<double>::infinity();
  best.converged = false;
  best.iterations = 0;

  int stalls = 0;
  double last_step = 1.0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Mat z = hermitize(kron(id_a, sigma) - rho);

    // Certificate: scale X into exact dual feasibility and read the gap.
    const Mat tr_a_x = partial_trace(x, dims, {1});
    const double s = std::max(1.0, max_eigenvalue(tr_a_x));
    const Mat x_cert = x / s;
    const double primal = sigma.trace().real();
    const double dual = (rho * x_cert).trace().real();
    if (primal - dual < best.gap) {
      best.sigma_star = sigma;
      best.primal_value = primal;
      best.dual_x = x_cert;
      best.dual_value = dual;
      best.gap = primal - dual;
      best.iterations = iter;
    }
    if (best.gap <= tol) {
      best.converged = true;
      return best;
    }

    const double mu = std::max((z * x).trace().real() / static_cast<double>(d), 1e-18);
    const double theta = last_step > 0.5 ? 0.2 : 0.7;
    const double mu_target = theta * mu;

    EigH ez = eigh(z);
    Eigen::VectorXd inv = ez.values;
    for (Index i = 0; i < inv.size(); ++i) inv[i] = 1.0 / std::max(inv[i], 1e-300);
    const Mat w = ez.vectors * inv.asDiagonal() * ez.vectors.adjoint();

    // Reduced Newton system: Tr_A[sym(W (I (x) dSigma) X)] = mu_t Tr_A[W] - I.
    Eigen::MatrixXd lmat(nb, nb);
    for (Index j = 0; j < nb; ++j) {
      const Mat lifted = kron(id_a, basis[static_cast<size_t>(j)]);
      const Mat img = partial_trace(hermitize(w * lifted * x), dims, {1});
      lmat.col(j) = coeffs_of(img, basis);
    }
    const Mat rhs_mat = mu_target * partial_trace(w, dims, {1}) - id_b;
    const Eigen::VectorXd rhs = coeffs_of(rhs_mat, basis);
    Eigen::VectorXd c = lmat.ldlt().solve(rhs);
    if (!c.allFinite()) c = lmat.fullPivLu().solve(rhs);
    if (!c.allFinite()) break;

    const Mat dsigma = from_coeffs(c, basis);
    const Mat lifted = kron(id_a, dsigma);
    const Mat dx = hermitize(mu_target * w - x - w * lifted * x);

    const double tp = std::min(1.0, 0.98 * max_step(z, lifted));
    const double td = std::min(1.0, 0.98 * max_step(x, dx));
    sigma = hermitize(sigma + tp * dsigma);
    x = hermitize(x + td * dx);
    last_step = std::min(tp, td);
    if (last_step < 1e-7) {
      if (++stalls >= 3) break;
    } else {
      stalls = 0;
    }
  }
  return best;
}

}  // namespace uclab
