#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uclab/linalg.hpp"
#include "uclab/rng.hpp"

namespace uclab {

/// Hermitian Pauli string on n qubits: (-1)^neg i^{|x&z|} X^x Z^z,
/// bit j of x/z acting on qubit j (qubit 0 is the leftmost tensor factor).
struct PauliString {
  std::uint32_t n = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  bool neg = false;

  static PauliString pauli_x(std::uint32_t n, std::uint32_t q);
  static PauliString pauli_z(std::uint32_t n, std::uint32_t q);

  bool commutes_with(const PauliString& other) const;
  bool is_identity_bits() const { return x == 0 && z == 0; }
  Mat to_matrix() const;  // n <= 12
};

/// Product of Hermitian Pauli strings with i-power bookkeeping.
/// The result of conjugating a Hermitian Pauli by a Clifford is again
/// Hermitian; multiply() asserts evenness of the residual phase.
PauliString pauli_multiply(const PauliString& a, const PauliString& b);

/// n-qubit Clifford element in symplectic/phase form: the images of the
/// generators X_j and Z_j under conjugation.
struct CliffordElement {
  std::uint32_t n = 0;
  std::vector<PauliString> x_images;
  std::vector<PauliString> z_images;

  /// 2n x 2n GF(2) symplectic matrix, rows/columns interleaved as
  /// (x_0, z_0, x_1, z_1, ...); column 2j is the image of X_j.
  std::vector<std::uint64_t> symplectic_columns() const;
  std::vector<int> phase_bits() const;  // 2n entries, image sign bits

  /// S^T Omega S = Omega over GF(2).
  bool symplectic_ok() const;

  PauliString image(const PauliString& p) const;
  CliffordElement compose(const CliffordElement& other) const;  // this after other
  CliffordElement inverse() const;
  /// Tableau of the entrywise complex conjugate unitary.
  CliffordElement conjugate() const;

  bool operator==(const CliffordElement& other) const;
  std::string key() const;  // canonical byte key for hashing/dedup

  static CliffordElement identity(std::uint32_t n);
};

std::uint64_t symplectic_group_order(std::uint32_t n);  // n <= 5
std::uint64_t clifford_group_order(std::uint32_t n);    // modulo phase, n <= 4

/// Uniform over the Clifford group modulo global phase; deterministic
/// given the stream state.
CliffordElement sample_clifford(std::uint32_t n, Rng& rng);

/// Index bijection [0, clifford_group_order(n)) -> group, used by the
/// enumerator and by tests for uniformity oracles.
CliffordElement clifford_from_index(std::uint32_t n, std::uint64_t index);

std::vector<CliffordElement> enumerate_clifford_elements(std::uint32_t n);  // n in {1,2}

/// Unitary matrix of the element, n <= 6. The tableau is decomposed into
/// a normal-form circuit over H/S/CNOT with a final Pauli layer; the
/// global phase is canonicalized (first nonzero entry positive real).
Mat clifford_to_unitary(const CliffordElement& c);

struct UnitaryEnsemble {
  std::vector<Mat> elements;  // uniform weights

  void validate(double tol = 1e-10) const;  // U^dag U = I
};

UnitaryEnsemble enumerate_clifford(std::uint32_t n);  // n in {1,2}

/// Haar moment operator: t=1 gives Tr[X]/d I; t=2 the projector mixture
/// onto the symmetric/antisymmetric subspaces.
Mat haar_twirl(const Mat& x, int t, Index d);

/// || E_ens[U^t X U^dag^t] - HaarTwirl_t(X) ||_Tr.
double twirl_deviation(const UnitaryEnsemble& ens, const Mat& x, int t);

}  // namespace uclab
