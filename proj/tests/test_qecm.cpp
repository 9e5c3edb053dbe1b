#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uclab/qecm.hpp"

using namespace uclab;

namespace {

CliffordElement hadamard_element() {
  CliffordElement h = CliffordElement::identity(1);
  std::swap(h.x_images[0], h.z_images[0]);
  return h;
}

// Random channel A -> B (x) C from a Haar isometry.
ChoiChannel random_isometry_channel(Index d_in, Index d_out, Rng& rng) {
  const Mat u = random_unitary(d_out, rng);
  const Mat v = u.leftCols(d_in);
  const DensityOperator phi = max_entangled(d_in);
  const Mat lifted = kron(Mat::Identity(d_in, d_in), v);
  ChoiChannel chan;
  chan.choi = DensityOperator{hermitize(lifted * phi.mat * lifted.adjoint()), {d_in, d_out}, true};
  chan.d_in = d_in;
  chan.d_out = d_out;
  return chan;
}

std::array<Mat, 2> random_binary_povm(Index d, Rng& rng) {
  return helstrom_update(random_hermitian(d, rng), Mat::Zero(d, d));
}

}  // namespace

TEST_CASE("scheme plaintexts") {
  const DensityOperator s0 = plaintext(1, 0);
  CHECK(s0.mat(0, 0).real() == doctest::Approx(1.0));
  CHECK(s0.mat(1, 1).real() == doctest::Approx(0.0));

  const DensityOperator t0 = plaintext(2, 0);
  CHECK(t0.mat.trace().real() == doctest::Approx(1.0));
  const auto vals = eigh(t0.mat).values;
  CHECK(vals[3] == doctest::Approx(0.5));
  CHECK(vals[2] == doctest::Approx(0.5));
  CHECK(vals[1] == doctest::Approx(0.0));

  for (std::uint32_t n : {1u, 2u, 3u}) {
    const Mat prod = plaintext(n, 0).mat * plaintext(n, 1).mat;
    CHECK(std::abs(prod.trace()) < 1e-12);  // orthogonal ciphertext pair
  }
  CHECK_THROWS(build_scheme(0));
}

TEST_CASE("encrypt: identity key, hadamard key, spectrum invariance") {
  const QECMScheme s1 = build_scheme(1);
  const DensityOperator ct_id = encrypt(s1, CliffordElement::identity(1), 1);
  CHECK((ct_id.mat - plaintext(1, 1).mat).cwiseAbs().maxCoeff() < 1e-14);

  const DensityOperator plus = encrypt(s1, hadamard_element(), 0);
  Mat want(2, 2);
  want << 0.5, 0.5, 0.5, 0.5;
  CHECK((plus.mat - want).cwiseAbs().maxCoeff() < 1e-12);

  const QECMScheme s2 = build_scheme(2);
  Rng rng(3);
  const DensityOperator ct = encrypt(s2, s2.keys[rng.below(s2.keys.size())], 1);
  const auto vals = eigh(ct.mat).values;
  CHECK(vals[3] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(vals[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(vals[1]) < 1e-12);
}

TEST_CASE("decrypt recovers the plaintext for every key") {
  const QECMScheme s1 = build_scheme(1);
  for (const auto& key : s1.keys)
    for (int x = 0; x < 2; ++x) {
      const auto p = decrypt(s1, key, encrypt(s1, key, x));
      CHECK(p[x] == doctest::Approx(1.0).epsilon(1e-12));
    }

  const QECMScheme s2 = build_scheme(2);
  Rng rng(5);
  for (int trial = 0; trial < 64; ++trial) {
    const auto& key = s2.keys[rng.below(s2.keys.size())];
    const int x = trial % 2;
    const auto p = decrypt(s2, key, encrypt(s2, key, x));
    CHECK(p[x] == doctest::Approx(1.0).epsilon(1e-12));
  }

  const auto pw = decrypt(s1, s1.keys[0], maximally_mixed({2}));
  CHECK(pw[0] == doctest::Approx(0.5));
  CHECK(pw[1] == doctest::Approx(0.5));
}

TEST_CASE("decrypt with the wrong key matches the Born rule") {
  const QECMScheme s1 = build_scheme(1);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& k = s1.keys[rng.below(24)];
    const auto& kp = s1.keys[rng.below(24)];
    const int x = trial % 2;
    const auto p = decrypt(s1, kp, encrypt(s1, k, x));
    const Mat v = clifford_to_unitary(kp).adjoint() * clifford_to_unitary(k);
    const Mat rotated = v * plaintext(1, x).mat * v.adjoint();
    CHECK(p[0] == doctest::Approx(rotated(0, 0).real()).epsilon(1e-10));
    CHECK(p[1] == doctest::Approx(rotated(1, 1).real()).epsilon(1e-10));
  }
}

TEST_CASE("cloning success of reference attacks") {
  for (std::uint32_t n : {1u, 2u}) {
    const QECMScheme s = build_scheme(n);
    const CloningAttack trivial = trivial_routing_attack(s);
    trivial.validate(s);
    CHECK(cloning_success(s, trivial).value == doctest::Approx(0.5).epsilon(1e-10));

    // Both players answering a uniformly random bit succeed 1/4 of the time.
    CloningAttack coin = trivial;
    const Mat hb = Mat::Identity(s.dim(), s.dim()) / 2.0;
    for (auto& povm : coin.bob_povms) povm = {hb, hb};
    for (auto& povm : coin.charlie_povms) povm = {hb, hb};
    CHECK(cloning_success(s, coin).value == doctest::Approx(0.25).epsilon(1e-10));
  }
}

TEST_CASE("sampled-key cloning average agrees with the exact one") {
  const QECMScheme s = build_scheme(1);
  QECMScheme sampled = s;
  sampled.keys.clear();
  const CloningAttack a = trivial_routing_attack(s);
  const CloningValue mc = cloning_success(sampled, a, 400, 11);
  CHECK(std::abs(mc.value - 0.5) <= std::max(3.0 * mc.std_error, 1e-9));
}

TEST_CASE("game construction") {
  const MoEGame bb84 = build_game(GameKind::Bb84, 1);
  bb84.validate();
  CHECK(bb84.alice_pvms.size() == 2);

  const MoEGame g1 = build_game(GameKind::CliffordScheme, 1);
  g1.validate();
  CHECK(g1.alice_pvms.size() == 24);
  for (const auto& pvm : g1.alice_pvms) CHECK(pvm[0].trace().real() == doctest::Approx(1.0));

  const MoEGame g2 = build_game(GameKind::CliffordScheme, 2);
  g2.validate();
  CHECK(g2.alice_pvms.size() == 11520);
  CHECK(g2.alice_pvms[7][0].trace().real() == doctest::Approx(2.0));  // rank 2

  CHECK_THROWS(build_game(GameKind::Bb84, 2));
  CHECK_THROWS(build_game(GameKind::CliffordScheme, 3));
}

TEST_CASE("winning probability reference strategies") {
  const MoEGame g = build_game(GameKind::CliffordScheme, 1);
  Strategy uniform;
  uniform.state = maximally_mixed({2, 2, 2});
  const Mat half = Mat::Identity(2, 2) / 2.0;
  for (size_t q = 0; q < g.alice_pvms.size(); ++q) {
    uniform.bob_povms.push_back({half, half});
    uniform.charlie_povms.push_back({half, half});
  }
  uniform.validate(g);
  CHECK(winning_probability(g, uniform) == doctest::Approx(0.25).epsilon(1e-12));

  // Single computational-basis question: classical copying wins always.
  MoEGame single;
  single.dim_a = 2;
  Mat z0 = Mat::Zero(2, 2), z1 = Mat::Zero(2, 2);
  z0(0, 0) = 1.0;
  z1(1, 1) = 1.0;
  single.alice_pvms.push_back({z0, z1});
  Strategy copy;
  Mat ghz = Mat::Zero(8, 8);
  ghz(0, 0) = 0.5;
  ghz(7, 7) = 0.5;
  copy.state = DensityOperator{ghz, {2, 2, 2}, true};
  copy.bob_povms.push_back({z0, z1});
  copy.charlie_povms.push_back({z0, z1});
  CHECK(winning_probability(single, copy) == doctest::Approx(1.0));
}

TEST_CASE("helstrom update") {
  Mat z0 = Mat::Zero(2, 2), z1 = Mat::Zero(2, 2);
  z0(0, 0) = 1.0;
  z1(1, 1) = 1.0;

  const auto tie = helstrom_update(z0, z0);
  CHECK((tie[0] - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  const auto split = helstrom_update(z0, z1);
  CHECK((split[0] - z0).cwiseAbs().maxCoeff() < 1e-12);

  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    Mat g0 = random_hermitian(3, rng), g1 = random_hermitian(3, rng);
    const Mat m0 = sqrt_psd(g0 * g0.adjoint());
    const Mat m1 = sqrt_psd(g1 * g1.adjoint());
    const auto best = helstrom_update(m0, m1);
    const double achieved = ((best[0] * m0).trace() + (best[1] * m1).trace()).real();
    for (int probe = 0; probe < 1000; ++probe) {
      const auto povm = random_binary_povm(3, rng);
      CHECK(achieved >= ((povm[0] * m0).trace() + (povm[1] * m1).trace()).real() - 1e-9);
    }
  }
  CHECK_THROWS(helstrom_update(Mat::Random(2, 2), z0));
}

TEST_CASE("see-saw on the two-basis game finds cos^2(pi/8)") {
  const MoEGame g = build_game(GameKind::Bb84, 1);
  const SeesawResult r = seesaw_optimize(g, 2, 2, 32, 300, 1e-10, 2024);
  CHECK(r.value == doctest::Approx(0.8535533905932738).epsilon(2e-3));
  r.strategy.validate(g);
  CHECK(winning_probability(g, r.strategy) == doctest::Approx(r.value).epsilon(1e-9));
  for (const auto& trace : r.traces)
    for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-12);
}

TEST_CASE("see-saw trivialities") {
  MoEGame single;
  single.dim_a = 2;
  Mat z0 = Mat::Zero(2, 2), z1 = Mat::Zero(2, 2);
  z0(0, 0) = 1.0;
  z1(1, 1) = 1.0;
  single.alice_pvms.push_back({z0, z1});
  const SeesawResult r = seesaw_optimize(single, 2, 2, 4, 50, 1e-10, 5);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));

  const MoEGame g = build_game(GameKind::CliffordScheme, 1);
  const SeesawResult rc = seesaw_optimize(g, 2, 2, 8, 200, 1e-9, 7);
  CHECK(rc.value >= 0.5 - 1e-9);
  CHECK(rc.value <= 1.0 + 1e-9);
}

TEST_CASE("choi swap symmetry") {
  // Constant symmetric broadcast.
  ChoiChannel broadcast;
  broadcast.choi = maximally_mixed({2, 4});
  broadcast.d_in = 2;
  broadcast.d_out = 4;
  CHECK(choi_swap_symmetry(broadcast, 2, 2) == doctest::Approx(0.0));

  // Route input to B, fixed generic state on C.
  Rng rng(17);
  const DensityOperator tau = random_density({2}, 2, rng);
  const DensityOperator phi = max_entangled(2);
  DensityOperator routed = tensor_product(phi, tau);  // [A, B, C]
  ChoiChannel route;
  route.choi = regroup(routed, {1, 2});
  route.d_in = 2;
  route.d_out = 4;
  CHECK(choi_swap_symmetry(route, 2, 2) > 0.05);

  // Symmetrizing kills the deviation.
  const Mat sym =
      0.5 * (route.choi.mat + permute_subsystems(route.choi.mat, {2, 2, 2}, {0, 2, 1}));
  ChoiChannel symmetrized;
  symmetrized.choi = DensityOperator{sym, {2, 4}, true};
  symmetrized.d_in = 2;
  symmetrized.d_out = 4;
  CHECK(choi_swap_symmetry(symmetrized, 2, 2) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS(choi_swap_symmetry(route, 2, 1));
}

TEST_CASE("cloning attacks and dual strategies have equal value") {
  const QECMScheme s = build_scheme(1);
  const MoEGame g = build_game(GameKind::CliffordScheme, 1);

  const CloningAttack trivial = trivial_routing_attack(s);
  const Strategy dual = attack_to_strategy(s, trivial);
  dual.validate(g);
  CHECK(winning_probability(g, dual) ==
        doctest::Approx(cloning_success(s, trivial).value).epsilon(1e-9));

  Rng rng(19);
  for (int trial = 0; trial < 3; ++trial) {
    CloningAttack a;
    a.channel = random_isometry_channel(2, 4, rng);
    a.dim_b = 2;
    a.dim_c = 2;
    for (size_t k = 0; k < s.keys.size(); ++k) {
      a.bob_povms.push_back(random_binary_povm(2, rng));
      a.charlie_povms.push_back(random_binary_povm(2, rng));
    }
    a.validate(s);
    const double direct = cloning_success(s, a).value;
    const double via_game = winning_probability(g, attack_to_strategy(s, a));
    CHECK(direct == doctest::Approx(via_game).epsilon(1e-9));
  }
}
