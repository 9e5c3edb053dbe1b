#include "uclab/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace uclab {

namespace {

double entropy_of_spectrum(const Eigen::VectorXd& vals) {
  double h = 0.0;
  for (Index i = 0; i < vals.size(); ++i) {
    const double p = vals[i];
    if (p > 1e-15) h -= p * std::log2(p);
  }
  return h;
}

void require_bipartite(const DensityOperator& rho, const char* who) {
  if (rho.dims.size() != 2) throw std::invalid_argument(std::string(who) + ": dims must be [dA, dB]");
}

}  // namespace

double von_neumann(const DensityOperator& rho) { return entropy_of_spectrum(eigh(rho.mat).values); }

double conditional_vn(const DensityOperator& rho) {
  require_bipartite(rho, "conditional_vn");
  return von_neumann(rho) - von_neumann(partial_trace(rho, {1}));
}

double mutual_information(const DensityOperator& rho) {
  require_bipartite(rho, "mutual_information");
  return von_neumann(partial_trace(rho, {0})) + von_neumann(partial_trace(rho, {1})) -
         von_neumann(rho);
}

MinEntropyResult min_entropy(const DensityOperator& rho, double tol) {
  require_bipartite(rho, "min_entropy");
  SdpSolution sol = solve_min_entropy_sdp(rho.mat, rho.dims[0], rho.dims[1], tol);
  return {-std::log2(sol.primal_value), sol};
}

MinEntropyResult max_entropy_result(const DensityOperator& rho, double tol) {
  require_bipartite(rho, "max_entropy");
  const DensityOperator psi = purify(rho);               // dims [dA, dB, dE]
  const DensityOperator ae = partial_trace(psi, {0, 2});  // dims [dA, dE]
  MinEntropyResult r = min_entropy(ae, tol);
  r.bits = -r.bits;
  return r;
}

double max_entropy(const DensityOperator& rho, double tol) {
  return max_entropy_result(rho, tol).bits;
}

ChoiChannel recovery_channel(const DensityOperator& rho, const SdpSolution& sol) {
  require_bipartite(rho, "recovery_channel");
  const Index da = rho.dims[0], db = rho.dims[1];
  // The dual certificate on A(x)B, conjugated and reordered to B(x)A',
  // is the unnormalized Choi matrix of the optimal recovery map.
  Mat c(db * da, db * da);
  for (Index a = 0; a < da; ++a)
    for (Index i = 0; i < db; ++i)
      for (Index ap = 0; ap < da; ++ap)
        for (Index j = 0; j < db; ++j)
          c(i * da + a, j * da + ap) = std::conj(sol.dual_x(a * db + i, ap * db + j));
  c = hermitize(c);
  // Complete to exact trace preservation with sigma -> Tr[. ] |0><0|
  // on the slack; the slack is PSD because the certificate satisfies
  // Tr_A X <= I.
  Mat slack = Mat::Identity(db, db) - partial_trace(c, {db, da}, {0});
  EigH es = eigh(slack);
  Eigen::VectorXd vals = es.values.cwiseMax(0.0);
  slack = es.vectors * vals.asDiagonal() * es.vectors.adjoint();
  Mat fill = Mat::Zero(da, da);
  fill(0, 0) = 1.0;
  c += kron(slack, fill).eval();
  ChoiChannel chan;
  chan.d_in = db;
  chan.d_out = da;
  chan.choi = DensityOperator{hermitize(c) / static_cast<double>(db), {db, da}, true};
  return chan;
}

double achieved_ebit_fraction(const DensityOperator& rho, const ChoiChannel& recovery) {
  require_bipartite(rho, "achieved_ebit_fraction");
  const Index da = rho.dims[0];
  DensityOperator out = apply_channel_to_subsystem(recovery, rho, 1);
  const DensityOperator phi = max_entangled(da);
  return static_cast<double>(da) * (phi.mat * out.mat).trace().real();
}

ChoiChannel recovery_channel_ascent(const DensityOperator& rho, int iterations,
                                    std::uint64_t seed) {
  require_bipartite(rho, "recovery_channel_ascent");
  const Index da = rho.dims[0], db = rho.dims[1];
  const Index de = da * db;  // environment large enough for any map

  // Stinespring picture: E(sigma) = Tr_E[V sigma V^dag], V: B -> A' (x) E.
  // The objective <phi+|(id (x) E)(rho)|phi+> = Tr[V^dag G(V) ] / ... is
  // quadratic in V; alternate V <- polar(G V) which never decreases it.
  Rng rng(seed);
  Mat g0(da * de, db);
  for (Index i = 0; i < g0.rows(); ++i)
    for (Index j = 0; j < g0.cols(); ++j) g0(i, j) = Complex(rng.gaussian(), rng.gaussian());
  auto polar = [](const Mat& m) {
    // m (m^dag m)^{-1/2} through the spectral primitive
    EigH e = eigh(m.adjoint() * m);
    Eigen::VectorXd inv = e.values;
    for (Index i = 0; i < inv.size(); ++i) inv[i] = 1.0 / std::sqrt(std::max(inv[i], 1e-30));
    return Mat(m * (e.vectors * inv.asDiagonal() * e.vectors.adjoint()));
  };
  Mat v = polar(g0);

  // <phi+|(id (x) E)(rho)|phi+> = (1/da) sum_{a,a',e} <a,e|V R_{aa'} V^dag|a',e>
  // with R_{aa'} = (<a| (x) I_B) rho (|a'> (x) I_B); a PSD quadratic form
  // in V, so the polar update is monotone.
  auto objective_and_grad = [&](const Mat& vcur, Mat* grad) {
    double val = 0.0;
    if (grad) *grad = Mat::Zero(da * de, db);
    for (Index a = 0; a < da; ++a)
      for (Index ap = 0; ap < da; ++ap) {
        Mat r(db, db);
        for (Index i = 0; i < db; ++i)
          for (Index j = 0; j < db; ++j) r(i, j) = rho.mat(a * db + i, ap * db + j);
        // sum_e <a,e| V R V^dag |a',e>
        Complex term = 0.0;
        const Mat vr = vcur * r;  // (da*de) x db
        for (Index e = 0; e < de; ++e)
          term += (vr.row(a * de + e) * vcur.row(ap * de + e).adjoint())(0, 0);
        val += (term / static_cast<double>(da)).real();
        if (grad) {
          for (Index e = 0; e < de; ++e)
            grad->row(ap * de + e) += (vcur.row(a * de + e) * r) / static_cast<double>(da);
        }
      }
    return val;
  };

  double best = -1.0;
  Mat vbest = v;
  for (int it = 0; it < iterations; ++it) {
    Mat grad;
    const double val = objective_and_grad(v, &grad);
    if (val > best) {
      best = val;
      vbest = v;
    }
    v = polar(grad + 1e-9 * v);
    if (!v.allFinite()) break;
  }

  // Choi of sigma -> Tr_E[V sigma V^dag].
  Mat c = Mat::Zero(db * da, db * da);
  for (Index i = 0; i < db; ++i)
    for (Index j = 0; j < db; ++j)
      for (Index o = 0; o < da; ++o)
        for (Index op = 0; op < da; ++op) {
          Complex acc = 0.0;
          for (Index e = 0; e < de; ++e) acc += vbest(o * de + e, i) * std::conj(vbest(op * de + e, j));
          c(i * da + o, j * da + op) += acc;
        }
  ChoiChannel chan;
  chan.d_in = db;
  chan.d_out = da;
  chan.choi = DensityOperator{hermitize(c) / static_cast<double>(db), {db, da}, true};
  return chan;
}

double ssa_uncertainty_gap(const DensityOperator& rho) {
  if (rho.dims.size() != 3) throw std::invalid_argument("ssa_uncertainty_gap: dims must be [dA,dB,dC]");
  const DensityOperator ab = partial_trace(rho, {0, 1});
  const DensityOperator ac = partial_trace(rho, {0, 2});
  return conditional_vn(ab) + conditional_vn(ac);
}

double ssa_min_entropy_gap(const DensityOperator& rho, double tol) {
  if (rho.dims.size() != 3) throw std::invalid_argument("ssa_min_entropy_gap: dims must be [dA,dB,dC]");
  const DensityOperator ab = partial_trace(rho, {0, 1});
  const DensityOperator abc = regroup(rho, {1, 2});
  return min_entropy(ab, tol).bits - min_entropy(abc, tol).bits;
}

double min_max_gap(const DensityOperator& rho, double tol) {
  require_bipartite(rho, "min_max_gap");
  return max_entropy(rho, tol) - min_entropy(rho, tol).bits;
}

void CqState::validate(double tol) const {
  if (weights.size() != components.size() || weights.empty())
    throw std::invalid_argument("cq state: weights/components mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("cq state: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("cq state: weights do not sum to 1");
  for (const auto& c : components) {
    if (c.dims != components.front().dims) throw std::invalid_argument("cq state: dims mismatch");
    c.validate();
  }
}

DensityOperator CqState::embed() const {
  validate();
  const Index j = static_cast<Index>(components.size());
  const Index dab = components.front().dim();
  Mat out = Mat::Zero(dab * j, dab * j);
  for (Index k = 0; k < j; ++k) {
    // (rho_k (x) |k><k|) block in the AB (x) J layout
    const Mat& m = components[static_cast<size_t>(k)].mat;
    for (Index r = 0; r < dab; ++r)
      for (Index c = 0; c < dab; ++c) out(r * j + k, c * j + k) = weights[static_cast<size_t>(k)] * m(r, c);
  }
  std::vector<Index> dims = components.front().dims;
  dims.push_back(j);
  return DensityOperator{out, dims, true};
}

double max_concavity_gap(const CqState& cq, double tol) {
  const DensityOperator rho = cq.embed();             // dims [dA, dB, J]
  const DensityOperator grouped = regroup(rho, {1, 2});  // [dA, dB*J]
  double mixture = 0.0;
  for (size_t k = 0; k < cq.components.size(); ++k)
    mixture += cq.weights[k] * max_entropy(cq.components[k], tol);
  return max_entropy(grouped, tol) - mixture;
}

}  // namespace uclab
