#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <unordered_set>

#include "uclab/clifford.hpp"

using namespace uclab;

namespace {

bool same_up_to_phase(const Mat& a, const Mat& b, double tol = 1e-10) {
  const Index d = a.rows();
  return std::abs(std::abs((a.adjoint() * b).trace()) - static_cast<double>(d)) < tol * d;
}

// Conjugation oracle: the synthesized unitary must reproduce the tableau
// action on every generator, signs included.
void check_tableau_action(const CliffordElement& c, double tol = 1e-10) {
  const Mat u = clifford_to_unitary(c);
  for (std::uint32_t j = 0; j < c.n; ++j) {
    const Mat x = PauliString::pauli_x(c.n, j).to_matrix();
    const Mat z = PauliString::pauli_z(c.n, j).to_matrix();
    CHECK((u * x * u.adjoint() - c.x_images[j].to_matrix()).cwiseAbs().maxCoeff() < tol);
    CHECK((u * z * u.adjoint() - c.z_images[j].to_matrix()).cwiseAbs().maxCoeff() < tol);
  }
}

}  // namespace

TEST_CASE("pauli multiplication matches matrices") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    PauliString a{2, rng.next_u64() & 3, rng.next_u64() & 3, rng.coin()};
    PauliString b{2, rng.next_u64() & 3, rng.next_u64() & 3, rng.coin()};
    if (!a.commutes_with(b)) continue;  // product of anticommuting pair is not Hermitian
    const PauliString c = pauli_multiply(a, b);
    CHECK((c.to_matrix() - a.to_matrix() * b.to_matrix()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("group orders") {
  CHECK(symplectic_group_order(1) == 6);
  CHECK(symplectic_group_order(2) == 720);
  CHECK(clifford_group_order(1) == 24);
  CHECK(clifford_group_order(2) == 11520);
}

TEST_CASE("enumeration is complete and duplicate free") {
  const auto elems1 = enumerate_clifford_elements(1);
  REQUIRE(elems1.size() == 24);
  std::unordered_set<std::string> keys;
  for (const auto& e : elems1) {
    CHECK(e.symplectic_ok());
    keys.insert(e.key());
  }
  CHECK(keys.size() == 24);

  const auto elems2 = enumerate_clifford_elements(2);
  REQUIRE(elems2.size() == 11520);
  keys.clear();
  for (const auto& e : elems2) keys.insert(e.key());
  CHECK(keys.size() == 11520);
  for (size_t i = 0; i < elems2.size(); i += 641) CHECK(elems2[i].symplectic_ok());

  CHECK_THROWS(enumerate_clifford_elements(3));
}

TEST_CASE("synthesis: identity, hadamard, and the conjugation oracle") {
  const CliffordElement id = CliffordElement::identity(2);
  CHECK((clifford_to_unitary(id) - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

  // X -> Z, Z -> X with + signs is the Hadamard.
  CliffordElement had = CliffordElement::identity(1);
  std::swap(had.x_images[0], had.z_images[0]);
  Mat h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CHECK((clifford_to_unitary(had) - h).cwiseAbs().maxCoeff() < 1e-12);

  for (const auto& e : enumerate_clifford_elements(1)) check_tableau_action(e);

  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) check_tableau_action(sample_clifford(2, rng));
  for (int trial = 0; trial < 5; ++trial) check_tableau_action(sample_clifford(3, rng));
}

TEST_CASE("enumerated group contains the hadamard") {
  Mat h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  bool found = false;
  for (const auto& e : enumerate_clifford_elements(1))
    if ((clifford_to_unitary(e) - h).cwiseAbs().maxCoeff() < 1e-12) found = true;
  CHECK(found);
}

TEST_CASE("closure under composition and inverse") {
  const auto elems = enumerate_clifford_elements(2);
  std::unordered_set<std::string> keys;
  for (const auto& e : elems) keys.insert(e.key());

  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& a = elems[rng.below(elems.size())];
    const auto& b = elems[rng.below(elems.size())];
    CHECK(keys.count(a.compose(b).key()) == 1);
  }
  for (int trial = 0; trial < 200; ++trial) {
    const auto& a = elems[rng.below(elems.size())];
    const CliffordElement inv = a.inverse();
    CHECK(keys.count(inv.key()) == 1);
    CHECK(a.compose(inv) == CliffordElement::identity(2));
  }

  // Composition agrees with matrix products modulo global phase.
  for (int trial = 0; trial < 10; ++trial) {
    const auto& a = elems[rng.below(elems.size())];
    const auto& b = elems[rng.below(elems.size())];
    CHECK(same_up_to_phase(clifford_to_unitary(a.compose(b)),
                           clifford_to_unitary(a) * clifford_to_unitary(b)));
  }
}

TEST_CASE("tableau conjugate matches the conjugated unitary") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CliffordElement c = sample_clifford(2, rng);
    const Mat u = clifford_to_unitary(c);
    const Mat uc = clifford_to_unitary(c.conjugate());
    CHECK(same_up_to_phase(uc, u.conjugate()));
  }
}

TEST_CASE("sampling is deterministic per stream") {
  Rng a(99), b(99);
  for (int i = 0; i < 10; ++i) CHECK(sample_clifford(2, a).key() == sample_clifford(2, b).key());
  CHECK(sample_clifford(4, a).symplectic_ok());
  CHECK(sample_clifford(5, a).symplectic_ok());
}

TEST_CASE("single-qubit sampling hits all 24 classes uniformly") {
  std::map<std::string, int> counts;
  Rng rng(123);
  const int samples = 24000;
  for (int i = 0; i < samples; ++i) counts[sample_clifford(1, rng).key()] += 1;
  REQUIRE(counts.size() == 24);
  const double p = 1.0 / 24.0;
  const double sigma = std::sqrt(samples * p * (1 - p));
  for (const auto& [key, c] : counts)
    CHECK(std::abs(c - samples * p) <= 5.0 * sigma);
}

TEST_CASE("two-qubit first-column image is uniform over its orbit") {
  // Enumeration oracle: the set of (first X-image, sign) pairs and their
  // multiplicities in the group.
  std::map<std::pair<std::uint64_t, int>, int> orbit;
  for (const auto& e : enumerate_clifford_elements(2)) {
    const auto cols = e.symplectic_columns();
    orbit[{cols[0], e.x_images[0].neg ? 1 : 0}] += 1;
  }
  // Transitivity: every nonzero vector with either sign, equally often.
  REQUIRE(orbit.size() == 30);
  for (const auto& [k, c] : orbit) CHECK(c == 11520 / 30);

  std::map<std::pair<std::uint64_t, int>, int> counts;
  Rng rng(321);
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    const CliffordElement e = sample_clifford(2, rng);
    counts[{e.symplectic_columns()[0], e.x_images[0].neg ? 1 : 0}] += 1;
  }
  REQUIRE(counts.size() == 30);
  const double p = 1.0 / 30.0;
  const double sigma = std::sqrt(samples * p * (1 - p));
  for (const auto& [k, c] : counts) CHECK(std::abs(c - samples * p) <= 5.0 * sigma);
}

TEST_CASE("twirl deviation") {
  const UnitaryEnsemble ens1 = enumerate_clifford(1);
  ens1.validate();

  CHECK(twirl_deviation(ens1, Mat::Identity(2, 2), 1) < 1e-12);
  CHECK(twirl_deviation(ens1, Mat::Identity(4, 4), 2) < 1e-12);

  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat x1 = random_hermitian(2, rng);
    CHECK(twirl_deviation(ens1, x1, 1) < 1e-10);
    const Mat x2 = random_hermitian(4, rng);
    CHECK(twirl_deviation(ens1, x2, 2) < 1e-10);
  }

  UnitaryEnsemble singleton;
  singleton.elements.push_back(Mat::Identity(2, 2));
  const Mat generic = random_hermitian(4, rng);
  CHECK(twirl_deviation(singleton, generic, 2) > 0.1);
}

TEST_CASE("two-qubit ensemble is a 2-design") {
  const UnitaryEnsemble ens2 = enumerate_clifford(2);
  ens2.validate();
  Rng rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    CHECK(twirl_deviation(ens2, random_hermitian(4, rng), 1) < 1e-10);
    CHECK(twirl_deviation(ens2, random_hermitian(16, rng), 2) < 1e-10);
  }
}
