#pragma once

#include <array>
#include <functional>
#include <vector>

#include "uclab/clifford.hpp"
#include "uclab/linalg.hpp"

namespace uclab {

/// Single-bit encryption scheme: plaintexts sigma_x = |x><x| (x) omega^(n-1),
/// keys uniform over the n-qubit Clifford group (enumerated for n <= 2).
struct QECMScheme {
  std::uint32_t n = 1;
  std::vector<CliffordElement> keys;  // empty => sampled-key mode

  Index dim() const { return Index(1) << n; }
};

QECMScheme build_scheme(std::uint32_t n);

DensityOperator plaintext(std::uint32_t n, int x);

/// Ciphertext U sigma_x U^dag.
DensityOperator encrypt(const QECMScheme& scheme, const CliffordElement& key, int x);

/// Applies U^dag and measures the first qubit; returns the outcome law.
std::array<double, 2> decrypt(const QECMScheme& scheme, const CliffordElement& key,
                              const DensityOperator& ciphertext);

/// Adversary: pirate channel A -> B (x) C plus per-key binary POVMs.
struct CloningAttack {
  ChoiChannel channel;
  Index dim_b = 0, dim_c = 0;
  /// Aligned with scheme.keys in enumerated mode.
  std::vector<std::array<Mat, 2>> bob_povms, charlie_povms;
  /// Key-indexed POVMs for sampled-key mode.
  std::function<std::array<Mat, 2>(const CliffordElement&)> bob_for_key, charlie_for_key;

  void validate(const QECMScheme& scheme, double tol = 1e-9) const;
};

struct CloningValue {
  double value = 0.0;
  double std_error = 0.0;  // 0 in exact mode
};

/// E_k E_x Tr[(B^k_x (x) C^k_x) Phi(sigma^k_x)]; exact over enumerated keys,
/// Monte-Carlo with standard error otherwise.
CloningValue cloning_success(const QECMScheme& scheme, const CloningAttack& attack,
                             int samples = 0, std::uint64_t seed = 0);

/// Bob decrypts honestly, Charlie answers 0; success exactly 1/2.
CloningAttack trivial_routing_attack(const QECMScheme& scheme);

/// Referee game: uniform questions, binary PVMs on register A.
struct MoEGame {
  Index dim_a = 0;
  std::vector<std::array<Mat, 2>> alice_pvms;

  void validate(double tol = 1e-9) const;
};

enum class GameKind { Bb84, CliffordScheme };

MoEGame build_game(GameKind kind, std::uint32_t n);

struct Strategy {
  DensityOperator state;  // dims [dA, dB, dC]
  std::vector<std::array<Mat, 2>> bob_povms, charlie_povms;

  void validate(const MoEGame& game, double tol = 1e-9) const;
};

/// E_theta sum_x Tr[(A (x) B (x) C) rho].
double winning_probability(const MoEGame& game, const Strategy& strat);

/// Optimal binary response {P, I-P} to Hermitian score operators; directions
/// with eigenvalue within 1e-12 of zero go to outcome 0.
std::array<Mat, 2> helstrom_update(const Mat& m0, const Mat& m1);

struct SeesawResult {
  Strategy strategy;
  double value = 0.0;
  std::vector<std::vector<double>> traces;  // per restart
  bool converged = false;
};

/// Alternating best-response ascent over (Bob, Charlie, state); the value is
/// non-decreasing along each restart and the best restart is returned.
SeesawResult seesaw_optimize(const MoEGame& game, Index dim_b, Index dim_c, int restarts,
                             int iterations, double tol, std::uint64_t seed, int threads = 1);

/// || J - SWAP_BC J SWAP_BC ||_Tr for a channel with output B (x) C.
double choi_swap_symmetry(const ChoiChannel& chan, Index dim_b, Index dim_c);

/// Entanglement-based picture of a cloning attack: shared state is the Choi
/// state of the pirate channel and the players answer question U with the
/// attack's measurements at the conjugate key.
Strategy attack_to_strategy(const QECMScheme& scheme, const CloningAttack& attack);

}  // namespace uclab
