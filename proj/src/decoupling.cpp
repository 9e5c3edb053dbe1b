#include "uclab/decoupling.hpp"

#include "uclab/qecm.hpp"

#include <cmath>
#include <stdexcept>

namespace uclab {

DensityOperator partial_trace_choi(std::uint32_t n, std::uint32_t m) {
  if (m == 0 || m >= n + 1) throw std::invalid_argument("kept qubit count out of range");
  const Index dm = Index(1) << m;
  const Index dr = Index(1) << (n - m);
  DensityOperator tau = max_entangled(dm);  // dims [kept copy, output]
  if (n > m) {
    tau = tensor_product(tau, maximally_mixed({dr}));  // [kept, output, traced]
    tau = permute_subsystems(tau, {0, 2, 1});          // [kept, traced, output]
    tau = regroup(tau, {2, 1});                        // [2^n, 2^m]
  }
  return tau;
}

namespace {

struct RhsParts {
  double rhs, hmin_ae, hmin_tau;
};

RhsParts decoupling_rhs(const DensityOperator& rho_ae, std::uint32_t n, std::uint32_t m,
                        double sdp_tol) {
  const double hmin_ae = min_entropy(rho_ae, sdp_tol).bits;
  const double hmin_tau = min_entropy(partial_trace_choi(n, m), sdp_tol).bits;
  return {std::exp2(-0.5 * hmin_ae - 0.5 * hmin_tau - 1.0), hmin_ae, hmin_tau};
}

// || Tr_{last n-m A-qubits}[(U (x) 1) rho (U (x) 1)^dag] - omega (x) rho_E ||_Tr
double one_term(const DensityOperator& rho_ae, std::uint32_t n, std::uint32_t m,
                const DensityOperator& target, const Mat& u) {
  const Index de = rho_ae.dims[1];
  const Mat lifted = kron(u, Mat::Identity(de, de));
  const Mat rotated = lifted * rho_ae.mat * lifted.adjoint();
  const std::vector<Index> fine{Index(1) << m, Index(1) << (n - m), de};
  DensityOperator out{partial_trace(rotated, fine, {0, 2}), {Index(1) << m, de}, true};
  return trace_distance(out, target);
}

DensityOperator product_target(const DensityOperator& rho_ae, std::uint32_t m) {
  const DensityOperator rho_e = partial_trace(rho_ae, {1});
  return tensor_product(maximally_mixed({Index(1) << m}), rho_e);
}

void check_input(const DensityOperator& rho_ae, std::uint32_t n, std::uint32_t m) {
  if (rho_ae.dims.size() != 2 || rho_ae.dims[0] != (Index(1) << n))
    throw std::invalid_argument("state must have dims [2^n, dE]");
  if (m == 0 || m >= n) throw std::invalid_argument("need 0 < m < n");
}

}  // namespace

DecouplingReport decoupling_verify_exact(const DensityOperator& rho_ae, std::uint32_t n,
                                         std::uint32_t m, const UnitaryEnsemble& ensemble,
                                         double sdp_tol) {
  check_input(rho_ae, n, m);
  const DensityOperator target = product_target(rho_ae, m);
  double lhs = 0.0;
  for (const Mat& u : ensemble.elements) lhs += one_term(rho_ae, n, m, target, u);
  lhs /= static_cast<double>(ensemble.elements.size());

  const RhsParts r = decoupling_rhs(rho_ae, n, m, sdp_tol);
  DecouplingReport rep;
  rep.lhs = lhs;
  rep.rhs = r.rhs;
  rep.hmin_ae = r.hmin_ae;
  rep.hmin_tau = r.hmin_tau;
  rep.margin = r.rhs - lhs;
  rep.exact = true;
  rep.pass = rep.margin >= -1e-8;
  return rep;
}

DecouplingReport decoupling_verify_mc(const DensityOperator& rho_ae, std::uint32_t n,
                                      std::uint32_t m, int samples, std::uint64_t seed,
                                      double sdp_tol) {
  check_input(rho_ae, n, m);
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  const DensityOperator target = product_target(rho_ae, m);
  Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Mat u = clifford_to_unitary(sample_clifford(n, rng));
    const double v = one_term(rho_ae, n, m, target, u);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, (sumsq - samples * mean * mean) / (samples - 1));

  const RhsParts r = decoupling_rhs(rho_ae, n, m, sdp_tol);
  DecouplingReport rep;
  rep.lhs = mean;
  rep.lhs_std_err = std::sqrt(var / samples);
  rep.rhs = r.rhs;
  rep.hmin_ae = r.hmin_ae;
  rep.hmin_tau = r.hmin_tau;
  rep.margin = r.rhs - mean;
  rep.exact = false;
  rep.pass = rep.margin >= -3.0 * rep.lhs_std_err;
  return rep;
}

namespace {

std::array<Mat, 2> alice_pvm_for(const Mat& u, std::uint32_t n) {
  const Index rest = Index(1) << (n - 1);
  std::array<Mat, 2> pvm;
  for (int b = 0; b < 2; ++b) {
    Mat proj = Mat::Zero(2, 2);
    proj(b, b) = 1.0;
    pvm[b] = hermitize(u * kron(proj, Mat::Identity(rest, rest)) * u.adjoint());
  }
  return pvm;
}

}  // namespace

GuessBound lemma1_guess_bound(const DensityOperator& rho_ab, std::uint32_t n,
                              const UnitaryEnsemble& ensemble,
                              const std::vector<std::array<Mat, 2>>& bob_pvms, double sdp_tol) {
  if (rho_ab.dims.size() != 2 || rho_ab.dims[0] != (Index(1) << n))
    throw std::invalid_argument("state must have dims [2^n, dB]");
  if (bob_pvms.size() != ensemble.elements.size())
    throw std::invalid_argument("one PVM per ensemble element required");

  double guess = 0.0;
  for (size_t q = 0; q < ensemble.elements.size(); ++q) {
    const auto alice = alice_pvm_for(ensemble.elements[q], n);
    for (int b = 0; b < 2; ++b)
      guess += (kron(alice[b], bob_pvms[q][b]) * rho_ab.mat).trace().real();
  }
  guess /= static_cast<double>(ensemble.elements.size());

  GuessBound out;
  out.hmin = min_entropy(rho_ab, sdp_tol).bits;
  out.guess_probability = guess;
  out.bound = 0.5 + std::exp2(-0.5 * out.hmin - 0.5 * static_cast<double>(n));
  out.pass = guess <= out.bound + 1e-8;
  return out;
}

std::vector<std::array<Mat, 2>> helstrom_guess_pvms(const DensityOperator& rho_ab,
                                                    std::uint32_t n,
                                                    const UnitaryEnsemble& ensemble) {
  std::vector<std::array<Mat, 2>> pvms;
  pvms.reserve(ensemble.elements.size());
  for (const Mat& u : ensemble.elements) {
    const auto alice = alice_pvm_for(u, n);
    std::array<Mat, 2> scores;
    for (int b = 0; b < 2; ++b) {
      const Mat lifted = kron(alice[b], Mat::Identity(rho_ab.dims[1], rho_ab.dims[1]));
      scores[b] = hermitize(partial_trace(lifted * rho_ab.mat, rho_ab.dims, {1}));
    }
    pvms.push_back(helstrom_update(scores[0], scores[1]));
  }
  return pvms;
}

OverlapCheck lemma1_overlap_check(const DensityOperator& rho_ab, double epsilon,
                                  const std::vector<Mat>& alice_pvm, double sdp_tol) {
  if (rho_ab.dims.size() != 2) throw std::invalid_argument("state must be bipartite");
  const MinEntropyResult me = min_entropy(rho_ab, sdp_tol);
  const ChoiChannel recovery = recovery_channel(rho_ab, me.sdp);
  const DensityOperator mapped = apply_channel_to_subsystem(recovery, rho_ab, 1);

  OverlapCheck out;
  out.epsilon_squared = epsilon * epsilon;
  for (const Mat& a : alice_pvm) {
    const Mat joint = kron(a, a.conjugate());
    out.overlap_score += (joint * mapped.mat).trace().real();
  }
  out.pass = out.overlap_score >= out.epsilon_squared - 1e-6;
  return out;
}

}  // namespace uclab
