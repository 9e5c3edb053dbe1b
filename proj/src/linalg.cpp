#include "uclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uclab {

Index product(const std::vector<Index>& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

void DensityOperator::validate(double herm_tol, double psd_tol, double trace_tol) const {
  if (mat.rows() != mat.cols()) throw std::invalid_argument("density operator not square");
  if (product(dims) != mat.rows())
    throw std::invalid_argument("subsystem dims do not multiply to the matrix dimension");
  const double herm = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm > herm_tol) throw std::invalid_argument("density operator not Hermitian");
  if (min_eigenvalue(mat) < -psd_tol)
    throw std::invalid_argument("density operator has a negative eigenvalue");
  const double tr = mat.trace().real();
  if (normalized) {
    if (std::abs(tr - 1.0) > trace_tol) throw std::invalid_argument("trace not 1");
  } else {
    if (tr <= 0.0 || tr > 1.0 + trace_tol)
      throw std::invalid_argument("subnormalised trace outside (0, 1]");
  }
}

EigH eigh(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(hermitize(hermitian));
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

Mat sqrt_psd(const Mat& m) {
  EigH e = eigh(m);
  Eigen::VectorXd vals = e.values;
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0.0) {
      if (vals[i] < -1e-9) throw std::invalid_argument("sqrt of a non-PSD matrix");
      vals[i] = 0.0;
    }
  }
  return e.vectors * vals.cwiseSqrt().asDiagonal() * e.vectors.adjoint();
}

double max_eigenvalue(const Mat& hermitian) { return eigh(hermitian).values.maxCoeff(); }
double min_eigenvalue(const Mat& hermitian) { return eigh(hermitian).values.minCoeff(); }

double abs_eigenvalue_sum(const Mat& hermitian) {
  return eigh(hermitian).values.cwiseAbs().sum();
}

double one_norm(const Mat& m) {
  EigH e = eigh(m.adjoint() * m);
  double s = 0.0;
  for (Index i = 0; i < e.values.size(); ++i) s += std::sqrt(std::max(0.0, e.values[i]));
  return s;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  DensityOperator out;
  out.mat = kron(a.mat, b.mat);
  out.dims = a.dims;
  out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
  out.normalized = a.normalized && b.normalized;
  return out;
}

namespace {

// Flat-index contributions of the kept and traced digit combinations.
// Kept and traced subsystems occupy disjoint stride positions, so a full
// index is the sum of one entry from each table.
struct TraceTables {
  std::vector<Index> kept_base;
  std::vector<Index> traced_base;
};

TraceTables build_tables(const std::vector<Index>& dims, const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  std::vector<bool> is_kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::out_of_range("subsystem index out of range");
    if (is_kept[k]) throw std::invalid_argument("duplicate subsystem index");
    is_kept[k] = true;
  }
  std::vector<Index> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  auto enumerate = [&](bool kept_flag) {
    std::vector<Index> base{0};
    for (int i = 0; i < n; ++i) {
      if (is_kept[i] != kept_flag) continue;
      std::vector<Index> next;
      next.reserve(base.size() * dims[i]);
      for (Index b : base)
        for (Index d = 0; d < dims[i]; ++d) next.push_back(b + d * stride[i]);
      base = std::move(next);
    }
    return base;
  };
  return {enumerate(true), enumerate(false)};
}

}  // namespace

Mat partial_trace(const Mat& m, const std::vector<Index>& dims, const std::vector<int>& keep) {
  if (product(dims) != m.rows() || m.rows() != m.cols())
    throw std::invalid_argument("partial_trace: dims mismatch");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  TraceTables t = build_tables(dims, keep_sorted);
  const Index kd = static_cast<Index>(t.kept_base.size());
  Mat out = Mat::Zero(kd, kd);
  for (Index r = 0; r < kd; ++r)
    for (Index c = 0; c < kd; ++c) {
      Complex acc = 0.0;
      for (Index tb : t.traced_base) acc += m(t.kept_base[r] + tb, t.kept_base[c] + tb);
      out(r, c) = acc;
    }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  DensityOperator out;
  out.mat = partial_trace(rho.mat, rho.dims, keep_sorted);
  for (int k : keep_sorted) out.dims.push_back(rho.dims[k]);
  out.normalized = rho.normalized;
  return out;
}

Mat permute_subsystems(const Mat& m, const std::vector<Index>& dims, const std::vector<int>& perm) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation size mismatch");
  std::vector<Index> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];
  std::vector<Index> new_dims(n);
  for (int i = 0; i < n; ++i) new_dims[i] = dims[perm[i]];
  std::vector<Index> new_stride(n, 1);
  for (int i = n - 2; i >= 0; --i) new_stride[i] = new_stride[i + 1] * new_dims[i + 1];

  const Index d = m.rows();
  std::vector<Index> map(d);
  std::vector<Index> digits(n);
  for (Index idx = 0; idx < d; ++idx) {
    Index rem = idx;
    for (int i = 0; i < n; ++i) {
      digits[i] = rem / stride[i];
      rem %= stride[i];
    }
    Index out_idx = 0;
    for (int i = 0; i < n; ++i) out_idx += digits[perm[i]] * new_stride[i];
    map[idx] = out_idx;
  }
  Mat out(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

DensityOperator permute_subsystems(const DensityOperator& rho, const std::vector<int>& perm) {
  DensityOperator out;
  out.mat = permute_subsystems(rho.mat, rho.dims, perm);
  out.dims.resize(rho.dims.size());
  for (size_t i = 0; i < perm.size(); ++i) out.dims[i] = rho.dims[perm[i]];
  out.normalized = rho.normalized;
  return out;
}

DensityOperator regroup(const DensityOperator& rho, const std::vector<int>& groups) {
  Index total = 0;
  for (int g : groups) total += g;
  if (total != static_cast<Index>(rho.dims.size()))
    throw std::invalid_argument("regroup: group sizes must cover all subsystems");
  DensityOperator out;
  out.mat = rho.mat;
  out.normalized = rho.normalized;
  size_t pos = 0;
  for (int g : groups) {
    Index d = 1;
    for (int i = 0; i < g; ++i) d *= rho.dims[pos++];
    out.dims.push_back(d);
  }
  return out;
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dims != sigma.dims) throw std::invalid_argument("trace_distance: dims mismatch");
  return 0.5 * abs_eigenvalue_sum(rho.mat - sigma.mat);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dims != sigma.dims) throw std::invalid_argument("fidelity: dims mismatch");
  const Mat sr = sqrt_psd(rho.mat);
  const Mat ss = sqrt_psd(sigma.mat);
  return one_norm(sr * ss);
}

double purified_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dims != sigma.dims) throw std::invalid_argument("purified_distance: dims mismatch");
  const double f = fidelity(rho, sigma);
  const double tr = std::max(0.0, 1.0 - rho.mat.trace().real());
  const double ts = std::max(0.0, 1.0 - sigma.mat.trace().real());
  const double fstar = f + std::sqrt(tr * ts);
  return std::sqrt(std::max(0.0, 1.0 - std::min(1.0, fstar) * std::min(1.0, fstar)));
}

void ChoiChannel::validate(double tol) const {
  if (choi.dims.size() != 2 || choi.dims[0] != d_in || choi.dims[1] != d_out)
    throw std::invalid_argument("Choi state dims must be [dIn, dOut]");
  if (min_eigenvalue(choi.mat) < -tol)
    throw std::invalid_argument("Choi state not positive semidefinite");
  const Mat marginal = partial_trace(choi.mat, choi.dims, {0});
  const Mat omega = Mat::Identity(d_in, d_in) / static_cast<double>(d_in);
  if ((marginal - omega).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("channel is not trace preserving");
}

ChoiChannel choi_of_unitary(const Mat& u) {
  const Index d = u.rows();
  DensityOperator phi = max_entangled(d);
  Mat iu = kron(Mat::Identity(d, d), u);
  ChoiChannel chan;
  chan.choi = DensityOperator{iu * phi.mat * iu.adjoint(), {d, d}, true};
  chan.d_in = d;
  chan.d_out = d;
  return chan;
}

DensityOperator apply_channel(const ChoiChannel& chan, const DensityOperator& rho) {
  if (rho.dim() != chan.d_in) throw std::invalid_argument("apply_channel: dims mismatch");
  const Mat lifted = kron(rho.mat.transpose(), Mat::Identity(chan.d_out, chan.d_out));
  Mat out = static_cast<double>(chan.d_in) *
            partial_trace(lifted * chan.choi.mat, {chan.d_in, chan.d_out}, {1});
  DensityOperator result{hermitize(out), {chan.d_out}, rho.normalized};
  return result;
}

std::vector<Mat> kraus_operators(const ChoiChannel& chan, double cutoff) {
  EigH e = eigh(chan.choi.mat);
  std::vector<Mat> ops;
  const double scale = static_cast<double>(chan.d_in);
  for (Index k = 0; k < e.values.size(); ++k) {
    if (e.values[k] < cutoff) continue;
    Mat op(chan.d_out, chan.d_in);
    const double w = std::sqrt(scale * e.values[k]);
    for (Index i = 0; i < chan.d_in; ++i)
      for (Index o = 0; o < chan.d_out; ++o) op(o, i) = w * e.vectors(i * chan.d_out + o, k);
    ops.push_back(op);
  }
  return ops;
}

DensityOperator apply_channel_to_subsystem(const ChoiChannel& chan,
                                           const DensityOperator& rho, int subsystem) {
  if (subsystem < 0 || subsystem >= static_cast<int>(rho.dims.size()))
    throw std::out_of_range("subsystem out of range");
  if (rho.dims[subsystem] != chan.d_in)
    throw std::invalid_argument("channel input dim does not match subsystem");
  const auto ks = kraus_operators(chan);
  const int n = static_cast<int>(rho.dims.size());
  Mat left = Mat::Identity(1, 1), right = Mat::Identity(1, 1);
  for (int i = 0; i < subsystem; ++i) left = kron(left, Mat::Identity(rho.dims[i], rho.dims[i]));
  for (int i = subsystem + 1; i < n; ++i)
    right = kron(right, Mat::Identity(rho.dims[i], rho.dims[i]));
  std::vector<Index> out_dims = rho.dims;
  out_dims[subsystem] = chan.d_out;
  Mat out = Mat::Zero(product(out_dims), product(out_dims));
  for (const Mat& k : ks) {
    const Mat lifted = kron(kron(left, k), right);
    out += lifted * rho.mat * lifted.adjoint();
  }
  return DensityOperator{hermitize(out), out_dims, rho.normalized};
}

DensityOperator maximally_mixed(const std::vector<Index>& dims) {
  const Index d = product(dims);
  return DensityOperator{Mat::Identity(d, d) / static_cast<double>(d), dims, true};
}

DensityOperator max_entangled(Index d) {
  Vec psi = Vec::Zero(d * d);
  for (Index i = 0; i < d; ++i) psi[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  return pure_state(psi, {d, d});
}

DensityOperator pure_state(const Vec& psi, const std::vector<Index>& dims) {
  if (product(dims) != psi.size()) throw std::invalid_argument("pure_state: dims mismatch");
  return DensityOperator{psi * psi.adjoint(), dims, true};
}

DensityOperator purify(const DensityOperator& rho, double rank_cutoff) {
  EigH e = eigh(rho.mat);
  std::vector<Index> kept;
  for (Index i = 0; i < e.values.size(); ++i)
    if (e.values[i] > rank_cutoff) kept.push_back(i);
  if (kept.empty()) throw std::invalid_argument("purify: zero state");
  const Index rank = static_cast<Index>(kept.size());
  const Index d = rho.dim();
  Vec psi = Vec::Zero(d * rank);
  for (Index r = 0; r < rank; ++r) {
    const double w = std::sqrt(e.values[kept[r]]);
    for (Index i = 0; i < d; ++i) psi[i * rank + r] = w * e.vectors(i, kept[r]);
  }
  std::vector<Index> dims = rho.dims;
  dims.push_back(rank);
  return pure_state(psi, dims);
}

Vec random_pure(Index d, Rng& rng) {
  Vec v(d);
  for (Index i = 0; i < d; ++i) v[i] = Complex(rng.gaussian(), rng.gaussian());
  return v / v.norm();
}

Mat random_unitary(Index d, Rng& rng) {
  Mat g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar.
  for (Index i = 0; i < d; ++i) {
    Complex rii = r(i, i);
    q.col(i) *= (std::abs(rii) > 0 ? rii / std::abs(rii) : 1.0);
  }
  return q;
}

Mat random_hermitian(Index d, Rng& rng) {
  Mat g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return hermitize(g);
}

DensityOperator random_density(const std::vector<Index>& dims, Index rank, Rng& rng) {
  const Index d = product(dims);
  if (rank < 1 || rank > d) throw std::invalid_argument("random_density: bad rank");
  Mat g(d, rank);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < rank; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Mat m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator{hermitize(m), dims, true};
}

}  // namespace uclab
