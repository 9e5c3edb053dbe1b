#include "uclab/qecm.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace uclab {

QECMScheme build_scheme(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("scheme needs at least one qubit");
  QECMScheme s;
  s.n = n;
  if (n <= 2) s.keys = enumerate_clifford_elements(n);
  return s;
}

DensityOperator plaintext(std::uint32_t n, int x) {
  if (x != 0 && x != 1) throw std::invalid_argument("message must be a bit");
  Mat bit = Mat::Zero(2, 2);
  bit(x, x) = 1.0;
  const Index rest = Index(1) << (n - 1);
  Mat m = kron(bit, Mat::Identity(rest, rest) / static_cast<double>(rest));
  return DensityOperator{m, {Index(1) << n}, true};
}

DensityOperator encrypt(const QECMScheme& scheme, const CliffordElement& key, int x) {
  if (key.n != scheme.n) throw std::invalid_argument("key size mismatch");
  const Mat u = clifford_to_unitary(key);
  const DensityOperator sigma = plaintext(scheme.n, x);
  return DensityOperator{hermitize(u * sigma.mat * u.adjoint()), sigma.dims, true};
}

std::array<double, 2> decrypt(const QECMScheme& scheme, const CliffordElement& key,
                              const DensityOperator& ciphertext) {
  if (ciphertext.dim() != scheme.dim()) throw std::invalid_argument("ciphertext dim mismatch");
  const Mat u = clifford_to_unitary(key);
  const Mat undone = u.adjoint() * ciphertext.mat * u;
  const Index rest = Index(1) << (scheme.n - 1);
  std::array<double, 2> p{};
  for (int b = 0; b < 2; ++b) {
    Mat proj = Mat::Zero(2, 2);
    proj(b, b) = 1.0;
    p[b] = (kron(proj, Mat::Identity(rest, rest)) * undone).trace().real();
  }
  return p;
}

namespace {

void validate_binary_povm(const std::array<Mat, 2>& povm, Index d, double tol) {
  for (const Mat& e : povm) {
    if (e.rows() != d || e.cols() != d) throw std::invalid_argument("POVM element dim mismatch");
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("POVM element not Hermitian");
    if (min_eigenvalue(e) < -tol) throw std::invalid_argument("POVM element not PSD");
  }
  if ((povm[0] + povm[1] - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("POVM does not sum to identity");
}

}  // namespace

void CloningAttack::validate(const QECMScheme& scheme, double tol) const {
  channel.validate(tol);
  if (channel.d_in != scheme.dim() || channel.d_out != dim_b * dim_c)
    throw std::invalid_argument("cloning channel dims mismatch");
  if (!scheme.keys.empty() &&
      (bob_povms.size() != scheme.keys.size() || charlie_povms.size() != scheme.keys.size()))
    throw std::invalid_argument("per-key POVM count mismatch");
  for (const auto& p : bob_povms) validate_binary_povm(p, dim_b, tol);
  for (const auto& p : charlie_povms) validate_binary_povm(p, dim_c, tol);
}

CloningValue cloning_success(const QECMScheme& scheme, const CloningAttack& attack, int samples,
                             std::uint64_t seed) {
  auto one_key = [&](const CliffordElement& key, const std::array<Mat, 2>& bob,
                     const std::array<Mat, 2>& charlie) {
    double acc = 0.0;
    for (int x = 0; x < 2; ++x) {
      DensityOperator ct = encrypt(scheme, key, x);
      DensityOperator out = apply_channel(attack.channel, ct);
      const Mat joint = kron(bob[x], charlie[x]);
      acc += 0.5 * (joint * out.mat).trace().real();
    }
    return acc;
  };

  if (!scheme.keys.empty()) {
    double total = 0.0;
    for (size_t k = 0; k < scheme.keys.size(); ++k)
      total += one_key(scheme.keys[k], attack.bob_povms[k], attack.charlie_povms[k]);
    return {total / static_cast<double>(scheme.keys.size()), 0.0};
  }

  if (samples <= 1) throw std::invalid_argument("sampled-key mode needs a sample count");
  if (!attack.bob_for_key || !attack.charlie_for_key)
    throw std::invalid_argument("sampled-key mode needs key-indexed POVMs");
  double sum = 0.0, sumsq = 0.0;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const CliffordElement key = sample_clifford(scheme.n, rng);
    const double v = one_key(key, attack.bob_for_key(key), attack.charlie_for_key(key));
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, (sumsq - samples * mean * mean) / (samples - 1));
  return {mean, std::sqrt(var / samples)};
}

CloningAttack trivial_routing_attack(const QECMScheme& scheme) {
  const Index d = scheme.dim();
  // Phi(rho) = rho_B (x) |0><0|_C: Kraus I (x) |0>.
  DensityOperator phi = max_entangled(d);
  Vec zero = Vec::Zero(d);
  zero[0] = 1.0;
  Mat iso = kron(Mat::Identity(d, d), Mat(zero));  // d^2 x d
  Mat choi = Mat::Zero(d * d * d, d * d * d);
  {
    Mat lifted = kron(Mat::Identity(d, d), iso);
    choi = lifted * phi.mat * lifted.adjoint();
  }
  CloningAttack a;
  a.channel.choi = DensityOperator{hermitize(choi), {d, d * d}, true};
  a.channel.d_in = d;
  a.channel.d_out = d * d;
  a.dim_b = d;
  a.dim_c = d;
  auto bob = [scheme](const CliffordElement& key) {
    const Mat u = clifford_to_unitary(key);
    const Index rest = Index(1) << (scheme.n - 1);
    std::array<Mat, 2> povm;
    for (int b = 0; b < 2; ++b) {
      Mat proj = Mat::Zero(2, 2);
      proj(b, b) = 1.0;
      povm[b] = u * kron(proj, Mat::Identity(rest, rest)) * u.adjoint();
    }
    return povm;
  };
  auto charlie = [d](const CliffordElement&) {
    return std::array<Mat, 2>{Mat::Identity(d, d), Mat::Zero(d, d)};
  };
  a.bob_for_key = bob;
  a.charlie_for_key = charlie;
  for (const auto& key : scheme.keys) {
    a.bob_povms.push_back(bob(key));
    a.charlie_povms.push_back(charlie(key));
  }
  return a;
}

void MoEGame::validate(double tol) const {
  if (alice_pvms.empty()) throw std::invalid_argument("game has no questions");
  for (const auto& pvm : alice_pvms) {
    validate_binary_povm(pvm, dim_a, tol);
    for (const Mat& p : pvm)
      if ((p * p - p).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("referee measurement is not a projector");
  }
}

MoEGame build_game(GameKind kind, std::uint32_t n) {
  MoEGame g;
  if (kind == GameKind::Bb84) {
    if (n != 1) throw std::invalid_argument("the two-basis game is single-qubit");
    g.dim_a = 2;
    Mat z0 = Mat::Zero(2, 2), z1 = Mat::Zero(2, 2);
    z0(0, 0) = 1.0;
    z1(1, 1) = 1.0;
    Mat h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    g.alice_pvms.push_back({z0, z1});
    g.alice_pvms.push_back({h * z0 * h, h * z1 * h});
    return g;
  }
  if (n != 1 && n != 2) throw std::invalid_argument("scheme game enumerates n in {1,2}");
  const Index d = Index(1) << n;
  const Index rest = Index(1) << (n - 1);
  g.dim_a = d;
  for (const auto& c : enumerate_clifford_elements(n)) {
    const Mat u = clifford_to_unitary(c);
    std::array<Mat, 2> pvm;
    for (int b = 0; b < 2; ++b) {
      Mat proj = Mat::Zero(2, 2);
      proj(b, b) = 1.0;
      pvm[b] = hermitize(u * kron(proj, Mat::Identity(rest, rest)) * u.adjoint());
    }
    g.alice_pvms.push_back(pvm);
  }
  return g;
}

void Strategy::validate(const MoEGame& game, double tol) const {
  state.validate();
  if (state.dims.size() != 3) throw std::invalid_argument("strategy state must be tripartite");
  if (state.dims[0] != game.dim_a) throw std::invalid_argument("strategy A dim mismatch");
  if (bob_povms.size() != game.alice_pvms.size() || charlie_povms.size() != game.alice_pvms.size())
    throw std::invalid_argument("strategy POVM count mismatch");
  for (const auto& p : bob_povms) validate_binary_povm(p, state.dims[1], tol);
  for (const auto& p : charlie_povms) validate_binary_povm(p, state.dims[2], tol);
}

double winning_probability(const MoEGame& game, const Strategy& strat) {
  double total = 0.0;
  for (size_t q = 0; q < game.alice_pvms.size(); ++q)
    for (int x = 0; x < 2; ++x) {
      const Mat joint =
          kron(kron(game.alice_pvms[q][x], strat.bob_povms[q][x]), strat.charlie_povms[q][x]);
      total += (joint * strat.state.mat).trace().real();
    }
  return total / static_cast<double>(game.alice_pvms.size());
}

std::array<Mat, 2> helstrom_update(const Mat& m0, const Mat& m1) {
  if ((m0 - m0.adjoint()).cwiseAbs().maxCoeff() > 1e-9 ||
      (m1 - m1.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("helstrom scores must be Hermitian");
  EigH e = eigh(m0 - m1);
  const Index d = m0.rows();
  Mat p = Mat::Zero(d, d);
  for (Index i = 0; i < e.values.size(); ++i)
    if (e.values[i] >= -1e-12) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
  p = hermitize(p);
  return {p, Mat::Identity(d, d) - p};
}

namespace {

struct RestartOutcome {
  Strategy strategy;
  std::vector<double> trace;
  double value = -1.0;
  bool converged = false;
};

RestartOutcome run_restart(const MoEGame& game, Index dim_b, Index dim_c, int iterations,
                           double tol, Rng rng) {
  const Index da = game.dim_a;
  const size_t nq = game.alice_pvms.size();
  Strategy s;
  s.state = pure_state(random_pure(da * dim_b * dim_c, rng), {da, dim_b, dim_c});
  auto random_pvm = [&rng](Index d) {
    const Mat g = random_hermitian(d, rng);
    return helstrom_update(g, Mat::Zero(d, d));
  };
  for (size_t q = 0; q < nq; ++q) {
    s.bob_povms.push_back(random_pvm(dim_b));
    s.charlie_povms.push_back(random_pvm(dim_c));
  }

  RestartOutcome out;
  const std::vector<Index> dims{da, dim_b, dim_c};
  double prev = -1.0;
  for (int it = 0; it < iterations; ++it) {
    for (size_t q = 0; q < nq; ++q) {
      std::array<Mat, 2> scores;
      for (int x = 0; x < 2; ++x) {
        const Mat lifted = kron(kron(game.alice_pvms[q][x], Mat::Identity(dim_b, dim_b)),
                                s.charlie_povms[q][x]);
        scores[x] = hermitize(partial_trace(lifted * s.state.mat, dims, {1}));
      }
      s.bob_povms[q] = helstrom_update(scores[0], scores[1]);
    }
    for (size_t q = 0; q < nq; ++q) {
      std::array<Mat, 2> scores;
      for (int x = 0; x < 2; ++x) {
        const Mat lifted =
            kron(kron(game.alice_pvms[q][x], s.bob_povms[q][x]), Mat::Identity(dim_c, dim_c));
        scores[x] = hermitize(partial_trace(lifted * s.state.mat, dims, {2}));
      }
      s.charlie_povms[q] = helstrom_update(scores[0], scores[1]);
    }
    Mat win = Mat::Zero(da * dim_b * dim_c, da * dim_b * dim_c);
    for (size_t q = 0; q < nq; ++q)
      for (int x = 0; x < 2; ++x)
        win += kron(kron(game.alice_pvms[q][x], s.bob_povms[q][x]), s.charlie_povms[q][x]);
    win /= static_cast<double>(nq);
    EigH e = eigh(win);
    const Index top = e.values.size() - 1;
    s.state = pure_state(e.vectors.col(top), {da, dim_b, dim_c});
    const double value = e.values[top];
    out.trace.push_back(value);
    if (prev >= 0.0 && value < prev - 1e-12)
      throw std::logic_error("see-saw value decreased beyond tolerance");
    if (prev >= 0.0 && std::abs(value - prev) < tol) {
      out.converged = true;
      prev = value;
      break;
    }
    prev = value;
  }
  out.value = prev;
  out.strategy = s;
  return out;
}

}  // namespace

SeesawResult seesaw_optimize(const MoEGame& game, Index dim_b, Index dim_c, int restarts,
                             int iterations, double tol, std::uint64_t seed, int threads) {
  if (dim_b < 1 || dim_c < 1) throw std::invalid_argument("player dimensions must be >= 1");
  std::vector<RestartOutcome> outcomes(restarts);
  const int workers = std::max(1, std::min<int>(threads, restarts));
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= restarts) return;
      outcomes[r] = run_restart(game, dim_b, dim_c, iterations, tol, Rng::stream(seed, r));
    }
  };
  if (workers == 1) {
    work();
  } else {
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SeesawResult res;
  res.value = -1.0;
  for (auto& o : outcomes) {
    res.traces.push_back(o.trace);
    if (o.value > res.value) {
      res.value = o.value;
      res.strategy = o.strategy;
      res.converged = o.converged;
    }
  }
  return res;
}

double choi_swap_symmetry(const ChoiChannel& chan, Index dim_b, Index dim_c) {
  if (dim_b != dim_c) throw std::invalid_argument("swap symmetry needs equal output dims");
  if (chan.d_out != dim_b * dim_c) throw std::invalid_argument("output dims mismatch");
  const std::vector<Index> dims{chan.d_in, dim_b, dim_c};
  const Mat j = chan.choi.mat;
  const Mat swapped = permute_subsystems(j, dims, {0, 2, 1});
  return 0.5 * abs_eigenvalue_sum(j - swapped);
}

Strategy attack_to_strategy(const QECMScheme& scheme, const CloningAttack& attack) {
  if (scheme.keys.empty()) throw std::invalid_argument("duality needs enumerated keys");
  std::unordered_map<std::string, size_t> index;
  for (size_t k = 0; k < scheme.keys.size(); ++k) index[scheme.keys[k].key()] = k;

  const Index d = scheme.dim();
  DensityOperator phi = max_entangled(d);
  DensityOperator rho = apply_channel_to_subsystem(attack.channel, phi, 1);
  rho.dims = {d, attack.dim_b, attack.dim_c};

  Strategy s;
  s.state = rho;
  s.bob_povms.resize(scheme.keys.size());
  s.charlie_povms.resize(scheme.keys.size());
  for (size_t q = 0; q < scheme.keys.size(); ++q) {
    const auto it = index.find(scheme.keys[q].conjugate().key());
    if (it == index.end()) throw std::logic_error("conjugate key not in enumeration");
    s.bob_povms[q] = attack.bob_povms[it->second];
    s.charlie_povms[q] = attack.charlie_povms[it->second];
  }
  return s;
}

}  // namespace uclab
