#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uclab/decoupling.hpp"

using namespace uclab;

TEST_CASE("choi state of the keep-first-qubits channel") {
  const DensityOperator tau = partial_trace_choi(2, 1);
  REQUIRE(tau.dims == std::vector<Index>{4, 2});
  tau.validate();

  // Against the generic channel-application route.
  ChoiChannel chan;
  chan.choi = tau;
  chan.d_in = 4;
  chan.d_out = 2;
  chan.validate();
  Rng rng(3);
  const DensityOperator rho = random_density({2, 2}, 3, rng);
  const Mat via = apply_channel(chan, regroup(rho, {2})).mat;
  CHECK((via - partial_trace(rho, {0}).mat).cwiseAbs().maxCoeff() < 1e-12);

  // Its conditional min-entropy is n - 2m exactly.
  CHECK(min_entropy(tau).bits == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(min_entropy(partial_trace_choi(3, 1)).bits == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("decoupling: invariant states have vanishing lhs") {
  const UnitaryEnsemble ens = enumerate_clifford(2);
  const DensityOperator rho = tensor_product(maximally_mixed({4}), maximally_mixed({2}));
  const DecouplingReport rep = decoupling_verify_exact(rho, 2, 1, ens);
  CHECK(rep.lhs == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.hmin_ae == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rep.hmin_tau == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(rep.rhs == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(rep.pass);
}

TEST_CASE("decoupling: maximally entangled input") {
  const UnitaryEnsemble ens = enumerate_clifford(2);
  const DensityOperator phi = max_entangled(4);
  const DecouplingReport rep = decoupling_verify_exact(phi, 2, 1, ens);
  CHECK(rep.hmin_ae == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(rep.margin >= 0.0);
  CHECK(rep.pass);
}

TEST_CASE("decoupling margin on random states, exact 2-design average") {
  const UnitaryEnsemble ens = enumerate_clifford(2);
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityOperator rho = random_density({4, 2}, 1 + trial % 8, rng);
    const DecouplingReport rep = decoupling_verify_exact(rho, 2, 1, ens);
    CHECK(rep.margin >= -1e-8);
    CHECK(rep.pass);
  }
}

TEST_CASE("decoupling Monte-Carlo mode converges") {
  Rng rng(11);
  const DensityOperator rho = random_density({4, 2}, 3, rng);
  const UnitaryEnsemble ens = enumerate_clifford(2);
  const DecouplingReport exact = decoupling_verify_exact(rho, 2, 1, ens);

  const DecouplingReport mc1 = decoupling_verify_mc(rho, 2, 1, 500, 21);
  CHECK(std::abs(mc1.lhs - exact.lhs) <= 4.0 * mc1.lhs_std_err + 1e-6);
  CHECK(mc1.pass);

  // Doubling the sample count shrinks the standard error like 1/sqrt(2).
  const DecouplingReport mc2 = decoupling_verify_mc(rho, 2, 1, 2000, 22);
  const double ratio = mc2.lhs_std_err / mc1.lhs_std_err;
  CHECK(ratio > 0.3);
  CHECK(ratio < 0.8);

  // Three qubits run through the sampled path as well.
  const DensityOperator rho3 = random_density({8, 2}, 4, rng);
  const DecouplingReport mc3 = decoupling_verify_mc(rho3, 3, 1, 300, 23);
  CHECK(mc3.pass);
}

TEST_CASE("guess bound: maximally entangled and uncorrelated states") {
  const UnitaryEnsemble ens = enumerate_clifford(1);
  const DensityOperator phi = max_entangled(2);

  // Bob measures in the transposed basis: perfect correlation.
  std::vector<std::array<Mat, 2>> transposed;
  for (const Mat& u : ens.elements) {
    std::array<Mat, 2> pvm;
    for (int b = 0; b < 2; ++b) {
      Mat proj = Mat::Zero(2, 2);
      proj(b, b) = 1.0;
      pvm[b] = (u * proj * u.adjoint()).transpose();
    }
    transposed.push_back(pvm);
  }
  const GuessBound gb = lemma1_guess_bound(phi, 1, ens, transposed);
  CHECK(gb.guess_probability == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(gb.hmin == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(gb.bound == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(gb.pass);

  // Uncorrelated state: exactly 1/2 whatever Bob does.
  const DensityOperator unc = tensor_product(maximally_mixed({2}), maximally_mixed({2}));
  const GuessBound gu = lemma1_guess_bound(unc, 1, ens, helstrom_guess_pvms(unc, 1, ens));
  CHECK(gu.guess_probability == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(gu.bound >= 0.5);
  CHECK(gu.pass);
}

TEST_CASE("guess bound holds for optimized adversaries on random states") {
  const UnitaryEnsemble ens = enumerate_clifford(1);
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityOperator rho = random_density({2, 2}, 1 + trial % 4, rng);
    const GuessBound gb = lemma1_guess_bound(rho, 1, ens, helstrom_guess_pvms(rho, 1, ens));
    CHECK(gb.pass);
    CHECK(gb.guess_probability >= 0.5 - 1e-10);  // best response beats coin flipping
  }
}

TEST_CASE("overlap stage of the guessing argument") {
  Mat z0 = Mat::Zero(2, 2), z1 = Mat::Zero(2, 2);
  z0(0, 0) = 1.0;
  z1(1, 1) = 1.0;
  const std::vector<Mat> computational{z0, z1};

  const DensityOperator phi = max_entangled(2);
  const OverlapCheck oc = lemma1_overlap_check(phi, 1.0, computational);
  CHECK(oc.overlap_score == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(oc.pass);

  const DensityOperator unc = tensor_product(maximally_mixed({2}), maximally_mixed({2}));
  const OverlapCheck ou = lemma1_overlap_check(unc, 0.0, computational);
  CHECK(ou.overlap_score >= 0.0);
  CHECK(ou.pass);

  const UnitaryEnsemble ens = enumerate_clifford(1);
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityOperator rho = random_density({2, 2}, 1 + trial % 4, rng);
    const GuessBound gb = lemma1_guess_bound(rho, 1, ens, helstrom_guess_pvms(rho, 1, ens));
    const double eps = std::max(0.0, gb.guess_probability - 0.5);
    const OverlapCheck rc = lemma1_overlap_check(rho, eps, computational);
    CHECK(rc.pass);
  }
}
