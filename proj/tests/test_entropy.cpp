#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uclab/entropy.hpp"

using namespace uclab;

namespace {

DensityOperator classically_correlated() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 0.5;
  m(3, 3) = 0.5;
  return DensityOperator{m, {2, 2}, true};
}

void check_certificate(const DensityOperator& rho, const SdpSolution& sol, double tol) {
  const Index da = rho.dims[0];
  const Mat z = kron(Mat::Identity(da, da), sol.sigma_star) - rho.mat;
  CHECK(min_eigenvalue(z) >= -1e-8);
  CHECK(min_eigenvalue(sol.dual_x) >= -1e-8);
  const Mat tr_a = partial_trace(sol.dual_x, rho.dims, {1});
  CHECK(max_eigenvalue(tr_a) <= 1.0 + 1e-8);
  CHECK(sol.gap <= tol);
  CHECK(sol.converged);
}

}  // namespace

TEST_CASE("von Neumann entropy") {
  Rng rng(1);
  CHECK(von_neumann(pure_state(random_pure(4, rng), {4})) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(von_neumann(maximally_mixed({8})) == doctest::Approx(3.0));
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 0.75;
  m(1, 1) = 0.25;
  CHECK(von_neumann(DensityOperator{m, {2}, true}) == doctest::Approx(0.8112781244591328));
}

TEST_CASE("conditional entropy and mutual information") {
  CHECK(conditional_vn(max_entangled(2)) == doctest::Approx(-1.0));
  Rng rng(2);
  const DensityOperator prod = tensor_product(maximally_mixed({2}), random_density({3}, 2, rng));
  CHECK(conditional_vn(prod) == doctest::Approx(1.0));
  CHECK(conditional_vn(classically_correlated()) == doctest::Approx(0.0));

  CHECK(mutual_information(prod) == doctest::Approx(0.0));
  CHECK(mutual_information(max_entangled(2)) == doctest::Approx(2.0));

  const DensityOperator rho = random_density({2, 2}, 3, rng);
  const double ha = von_neumann(partial_trace(rho, {0}));
  CHECK(mutual_information(rho) == doctest::Approx(ha - conditional_vn(rho)).epsilon(1e-10));
}

TEST_CASE("min-entropy closed forms") {
  for (Index d : {2, 3, 4}) {
    const auto r = min_entropy(max_entangled(d));
    CHECK(r.bits == doctest::Approx(-std::log2(double(d))).epsilon(1e-7));
    check_certificate(max_entangled(d), r.sdp, 1e-8);
  }

  Rng rng(3);
  const DensityOperator a = random_density({3}, 3, rng);
  const DensityOperator prod = tensor_product(a, random_density({2}, 2, rng));
  const auto r = min_entropy(prod);
  CHECK(r.bits == doctest::Approx(-std::log2(max_eigenvalue(a.mat))).epsilon(1e-7));
  check_certificate(prod, r.sdp, 1e-8);

  const auto rc = min_entropy(classically_correlated());
  CHECK(rc.bits == doctest::Approx(0.0).epsilon(1e-7));
  check_certificate(classically_correlated(), rc.sdp, 1e-8);
}

TEST_CASE("min-entropy below conditional von Neumann entropy") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho = random_density({2, 2}, 1 + trial % 4, rng);
    CHECK(min_entropy(rho).bits <= conditional_vn(rho) + 1e-6);
  }
}

TEST_CASE("recovery channel loop closure") {
  const DensityOperator phi = max_entangled(2);
  const auto rphi = min_entropy(phi);
  const ChoiChannel ephi = recovery_channel(phi, rphi.sdp);
  ephi.validate(1e-7);
  CHECK(achieved_ebit_fraction(phi, ephi) ==
        doctest::Approx(std::exp2(-rphi.bits)).epsilon(1e-6));

  const DensityOperator cc = classically_correlated();
  const auto rcc = min_entropy(cc);
  const ChoiChannel ecc = recovery_channel(cc, rcc.sdp);
  // F^2 = 2^{-Hmin}/|A| = 1/2 for the measure-and-prepare optimum.
  CHECK(achieved_ebit_fraction(cc, ecc) / 2.0 == doctest::Approx(0.5).epsilon(1e-6));

  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const DensityOperator rho = random_density({2, 2}, 1 + trial % 4, rng);
    const auto r = min_entropy(rho);
    const ChoiChannel e = recovery_channel(rho, r.sdp);
    e.validate(1e-7);
    CHECK(std::abs(achieved_ebit_fraction(rho, e) - std::exp2(-r.bits)) < 1e-5);
  }
}

TEST_CASE("recovery fallback ascent reaches the same optimum") {
  Rng rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const DensityOperator rho = random_density({2, 2}, 2 + trial, rng);
    const auto r = min_entropy(rho);
    const ChoiChannel e = recovery_channel_ascent(rho, 400, 17 + trial);
    e.validate(1e-6);
    CHECK(std::abs(achieved_ebit_fraction(rho, e) - std::exp2(-r.bits)) < 1e-4);
  }
}

TEST_CASE("max-entropy closed forms") {
  CHECK(max_entropy(max_entangled(2)) == doctest::Approx(-1.0).epsilon(1e-7));

  Mat zero = Mat::Zero(2, 2);
  zero(0, 0) = 1.0;
  const DensityOperator wz =
      tensor_product(maximally_mixed({2}), DensityOperator{zero, {2}, true});
  CHECK(max_entropy(wz) == doctest::Approx(1.0).epsilon(1e-7));

  Vec v = Vec::Zero(4);
  v[0] = 1.0;
  CHECK(max_entropy(pure_state(v, {2, 2})) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("max-entropy is purification independent") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityOperator rho = random_density({2, 2}, 1 + trial % 4, rng);
    const DensityOperator psi = purify(rho);

    // Second purification: rotate E by a random unitary.
    const Mat u = random_unitary(psi.dims[2], rng);
    ChoiChannel cu = choi_of_unitary(u);
    const DensityOperator psi2 = apply_channel_to_subsystem(cu, psi, 2);

    const double h1 = -min_entropy(partial_trace(psi, {0, 2})).bits;
    const double h2 = -min_entropy(partial_trace(psi2, {0, 2})).bits;
    CHECK(h1 == doctest::Approx(h2).epsilon(1e-6));
    CHECK(max_entropy(rho) == doctest::Approx(h1).epsilon(1e-6));
  }
}

TEST_CASE("uncertainty relation from strong subadditivity") {
  Mat zero = Mat::Zero(2, 2);
  zero(0, 0) = 1.0;
  const DensityOperator sat =
      tensor_product(max_entangled(2), DensityOperator{zero, {2}, true});
  CHECK(ssa_uncertainty_gap(sat) == doctest::Approx(0.0).epsilon(1e-9));

  Vec ghz = Vec::Zero(8);
  ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
  CHECK(ssa_uncertainty_gap(pure_state(ghz, {2, 2, 2})) == doctest::Approx(0.0).epsilon(1e-9));

  CHECK(ssa_uncertainty_gap(maximally_mixed({2, 2, 2})) == doctest::Approx(2.0));

  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityOperator rho = random_density({2, 2, 2}, 1 + trial % 8, rng);
    CHECK(ssa_uncertainty_gap(rho) >= -1e-9);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho = random_density({2, 3, 4}, 1 + trial % 4, rng);
    CHECK(ssa_uncertainty_gap(rho) >= -1e-9);
  }
}

TEST_CASE("strong subadditivity of min-entropy") {
  Rng rng(19);
  const DensityOperator prod = tensor_product(
      tensor_product(random_density({2}, 2, rng), random_density({2}, 2, rng)),
      random_density({2}, 2, rng));
  CHECK(ssa_min_entropy_gap(prod) == doctest::Approx(0.0).epsilon(1e-6));

  const DensityOperator phi_w = tensor_product(max_entangled(2), maximally_mixed({2}));
  CHECK(ssa_min_entropy_gap(phi_w) == doctest::Approx(0.0).epsilon(1e-6));

  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho = random_density({2, 2, 2}, 1 + trial % 8, rng);
    CHECK(ssa_min_entropy_gap(rho) >= -1e-6);
  }
}

TEST_CASE("min below max entropy") {
  Vec v = Vec::Zero(4);
  v[1] = 1.0;
  CHECK(min_max_gap(pure_state(v, {2, 2})) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(min_max_gap(max_entangled(2)) == doctest::Approx(0.0).epsilon(1e-6));

  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho = random_density({2, 2}, 1 + trial % 4, rng);
    CHECK(min_max_gap(rho) >= -1e-6);
  }
}

TEST_CASE("max-entropy concavity over a classical register") {
  Rng rng(29);
  const DensityOperator comp = random_density({2, 2}, 2, rng);

  CqState single{{1.0}, {comp}};
  CHECK(max_concavity_gap(single) == doctest::Approx(0.0).epsilon(1e-6));

  CqState twin{{0.5, 0.5}, {comp, comp}};
  CHECK(max_concavity_gap(twin) == doctest::Approx(0.0).epsilon(1e-6));

  for (int trial = 0; trial < 20; ++trial) {
    const double w = 0.2 + 0.6 * (trial / 19.0);
    CqState cq{{w, 1.0 - w},
               {random_density({2, 2}, 1 + trial % 4, rng), random_density({2, 2}, 2, rng)}};
    CHECK(max_concavity_gap(cq) >= -1e-6);
  }
}
