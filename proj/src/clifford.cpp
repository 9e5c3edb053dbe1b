#include "uclab/clifford.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace uclab {

namespace {

int parity64(std::uint64_t v) { return std::popcount(v) & 1; }

// Interleaved symplectic vector: bit 2j = x_j, bit 2j+1 = z_j.
std::uint64_t to_symplectic_bits(const PauliString& p) {
  std::uint64_t v = 0;
  for (std::uint32_t j = 0; j < p.n; ++j) {
    if ((p.x >> j) & 1ULL) v |= 1ULL << (2 * j);
    if ((p.z >> j) & 1ULL) v |= 1ULL << (2 * j + 1);
  }
  return v;
}

PauliString from_symplectic_bits(std::uint32_t n, std::uint64_t v, bool neg) {
  PauliString p;
  p.n = n;
  p.neg = neg;
  for (std::uint32_t j = 0; j < n; ++j) {
    if ((v >> (2 * j)) & 1ULL) p.x |= 1ULL << j;
    if ((v >> (2 * j + 1)) & 1ULL) p.z |= 1ULL << j;
  }
  return p;
}

// <u, v> = sum_j (ux_j vz_j + uz_j vx_j) mod 2.
int sp_product(std::uint64_t u, std::uint64_t v) {
  const std::uint64_t even = 0x5555555555555555ULL;
  const std::uint64_t swapped = ((v & even) << 1) | ((v >> 1) & even);
  return parity64(u & swapped);
}

}  // namespace

PauliString PauliString::pauli_x(std::uint32_t n, std::uint32_t q) {
  return PauliString{n, 1ULL << q, 0, false};
}

PauliString PauliString::pauli_z(std::uint32_t n, std::uint32_t q) {
  return PauliString{n, 0, 1ULL << q, false};
}

bool PauliString::commutes_with(const PauliString& other) const {
  return (parity64(x & other.z) ^ parity64(z & other.x)) == 0;
}

Mat PauliString::to_matrix() const {
  if (n > 12) throw std::invalid_argument("pauli matrix cap exceeded");
  static const Complex i(0.0, 1.0);
  Mat out = Mat::Identity(1, 1);
  for (std::uint32_t q = 0; q < n; ++q) {
    const bool bx = (x >> q) & 1ULL, bz = (z >> q) & 1ULL;
    Mat m(2, 2);
    if (bx && bz)
      m << 0, -i, i, 0;  // Y
    else if (bx)
      m << 0, 1, 1, 0;  // X
    else if (bz)
      m << 1, 0, 0, -1;  // Z
    else
      m = Mat::Identity(2, 2);
    out = kron(out, m);
  }
  if (neg) out = -out;
  return out;
}

namespace {

// i^k X^x Z^z working form for products whose intermediate factors need
// not be Hermitian.
struct PhasedPauli {
  std::uint64_t x = 0, z = 0;
  int k = 0;  // mod 4
};

PhasedPauli to_phased(const PauliString& p) {
  return {p.x, p.z, (std::popcount(p.x & p.z) + (p.neg ? 2 : 0)) % 4};
}

PhasedPauli phased_multiply(const PhasedPauli& a, const PhasedPauli& b) {
  PhasedPauli c;
  c.x = a.x ^ b.x;
  c.z = a.z ^ b.z;
  c.k = (a.k + b.k + 2 * parity64(a.z & b.x)) % 4;
  return c;
}

PauliString to_hermitian(std::uint32_t n, const PhasedPauli& p) {
  const int canonical = std::popcount(p.x & p.z) % 4;
  const int residual = ((p.k - canonical) % 4 + 4) % 4;
  if (residual % 2 != 0) throw std::logic_error("non-Hermitian pauli product");
  return PauliString{n, p.x, p.z, residual == 2};
}

}  // namespace

PauliString pauli_multiply(const PauliString& a, const PauliString& b) {
  if (a.n != b.n) throw std::invalid_argument("pauli size mismatch");
  return to_hermitian(a.n, phased_multiply(to_phased(a), to_phased(b)));
}

std::vector<std::uint64_t> CliffordElement::symplectic_columns() const {
  std::vector<std::uint64_t> cols(2 * n);
  for (std::uint32_t j = 0; j < n; ++j) {
    cols[2 * j] = to_symplectic_bits(x_images[j]);
    cols[2 * j + 1] = to_symplectic_bits(z_images[j]);
  }
  return cols;
}

std::vector<int> CliffordElement::phase_bits() const {
  std::vector<int> r(2 * n);
  for (std::uint32_t j = 0; j < n; ++j) {
    r[2 * j] = x_images[j].neg ? 1 : 0;
    r[2 * j + 1] = z_images[j].neg ? 1 : 0;
  }
  return r;
}

bool CliffordElement::symplectic_ok() const {
  const auto cols = symplectic_columns();
  for (std::uint32_t a = 0; a < 2 * n; ++a)
    for (std::uint32_t b = a; b < 2 * n; ++b) {
      const int want = (b == a + 1 && a % 2 == 0) ? 1 : 0;
      if (sp_product(cols[a], cols[b]) != want) return false;
    }
  return true;
}

PauliString CliffordElement::image(const PauliString& p) const {
  if (p.n != n) throw std::invalid_argument("pauli size mismatch");
  // P = (-1)^neg i^{|x&z|} X^x Z^z maps to the same phase times the
  // product of the generator images.
  PhasedPauli acc{0, 0, (std::popcount(p.x & p.z) + (p.neg ? 2 : 0)) % 4};
  for (std::uint32_t j = 0; j < n; ++j)
    if ((p.x >> j) & 1ULL) acc = phased_multiply(acc, to_phased(x_images[j]));
  for (std::uint32_t j = 0; j < n; ++j)
    if ((p.z >> j) & 1ULL) acc = phased_multiply(acc, to_phased(z_images[j]));
  return to_hermitian(n, acc);
}

CliffordElement CliffordElement::compose(const CliffordElement& other) const {
  if (other.n != n) throw std::invalid_argument("size mismatch");
  CliffordElement out;
  out.n = n;
  out.x_images.reserve(n);
  out.z_images.reserve(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    out.x_images.push_back(image(other.x_images[j]));
    out.z_images.push_back(image(other.z_images[j]));
  }
  return out;
}

CliffordElement CliffordElement::inverse() const {
  // Symplectic inverse is Omega S^T Omega; signs are fixed afterwards so
  // that image(inverse images) come out with + signs.
  const auto cols = symplectic_columns();
  auto row_of = [&](std::uint32_t r) {
    std::uint64_t row = 0;
    for (std::uint32_t c = 0; c < 2 * n; ++c)
      if ((cols[c] >> r) & 1ULL) row |= 1ULL << c;
    return row;
  };
  auto flip_pair = [&](std::uint64_t v) {
    const std::uint64_t even = 0x5555555555555555ULL;
    return ((v & even) << 1) | ((v >> 1) & even);
  };
  CliffordElement out;
  out.n = n;
  out.x_images.resize(n);
  out.z_images.resize(n);
  for (std::uint32_t j = 0; j < 2 * n; ++j) {
    // Column j of S^{-1} = Omega S^T Omega: row (j flipped) of S, pair-flipped.
    const std::uint64_t col = flip_pair(row_of(j ^ 1ULL));
    PauliString q = from_symplectic_bits(n, col, false);
    const PauliString img = image(q);
    q.neg = img.neg;
    if (j % 2 == 0)
      out.x_images[j / 2] = q;
    else
      out.z_images[j / 2] = q;
  }
  return out;
}

CliffordElement CliffordElement::conjugate() const {
  CliffordElement out = *this;
  for (std::uint32_t j = 0; j < n; ++j) {
    if (parity64(out.x_images[j].x & out.x_images[j].z)) out.x_images[j].neg ^= true;
    if (parity64(out.z_images[j].x & out.z_images[j].z)) out.z_images[j].neg ^= true;
  }
  return out;
}

bool CliffordElement::operator==(const CliffordElement& other) const {
  return key() == other.key();
}

std::string CliffordElement::key() const {
  std::string k;
  k.reserve(n * 34);
  auto put = [&k](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) k.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  };
  put(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    put(x_images[j].x);
    put(x_images[j].z);
    k.push_back(x_images[j].neg ? 1 : 0);
    put(z_images[j].x);
    put(z_images[j].z);
    k.push_back(z_images[j].neg ? 1 : 0);
  }
  return k;
}

CliffordElement CliffordElement::identity(std::uint32_t n) {
  CliffordElement e;
  e.n = n;
  for (std::uint32_t j = 0; j < n; ++j) {
    e.x_images.push_back(PauliString::pauli_x(n, j));
    e.z_images.push_back(PauliString::pauli_z(n, j));
  }
  return e;
}

std::uint64_t symplectic_group_order(std::uint32_t n) {
  if (n > 5) throw std::invalid_argument("group order overflows u64 range checked here");
  std::uint64_t order = 1;
  for (std::uint32_t j = 1; j <= n; ++j)
    order *= ((1ULL << (2 * j)) - 1) * (1ULL << (2 * j - 1));
  return order;
}

std::uint64_t clifford_group_order(std::uint32_t n) {
  if (n > 4) throw std::invalid_argument("group order overflows u64 range checked here");
  return symplectic_group_order(n) << (2 * n);
}

namespace {

struct DigitSource {
  virtual ~DigitSource() = default;
  virtual std::uint64_t next(std::uint64_t radix) = 0;
};

struct RngDigits final : DigitSource {
  explicit RngDigits(Rng& r) : rng(r) {}
  Rng& rng;
  std::uint64_t next(std::uint64_t radix) override { return rng.below(radix); }
};

struct IndexDigits final : DigitSource {
  explicit IndexDigits(std::uint64_t i) : idx(i) {}
  std::uint64_t idx;
  std::uint64_t next(std::uint64_t radix) override {
    const std::uint64_t d = idx % radix;
    idx /= radix;
    return d;
  }
};

// Builds a uniform symplectic matrix by drawing the images of the
// hyperbolic pairs (X_j, Z_j) one pair at a time: the X-image is any
// nonzero vector of the remaining symplectic complement, the Z-image any
// vector of it pairing to 1 with the X-image. The digit sequence is a
// bijection onto the group, so an index source enumerates and a uniform
// source samples.
CliffordElement build_clifford(std::uint32_t n, DigitSource& digits) {
  if (n == 0 || n > 32) throw std::invalid_argument("qubit count out of range");
  std::vector<std::uint64_t> basis(2 * n);
  for (std::uint32_t i = 0; i < 2 * n; ++i) basis[i] = 1ULL << i;

  std::vector<std::uint64_t> image_cols(2 * n);
  for (std::uint32_t j = 0; j < n; ++j) {
    const std::uint32_t dim = 2 * (n - j);
    // Nonzero combination of the current complement basis.
    const std::uint64_t c1 = digits.next((1ULL << dim) - 1) + 1;
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < dim; ++i)
      if ((c1 >> i) & 1ULL) v ^= basis[i];

    std::uint32_t p = dim;
    for (std::uint32_t i = 0; i < dim; ++i)
      if (sp_product(v, basis[i]) == 1) {
        p = i;
        break;
      }
    if (p == dim) throw std::logic_error("degenerate symplectic complement");
    for (std::uint32_t i = 0; i < dim; ++i)
      if (i != p && sp_product(v, basis[i]) == 1) basis[i] ^= basis[p];

    // Partner: pivot plus any combination of the pairing kernel.
    const std::uint64_t c2 = digits.next(1ULL << (dim - 1));
    std::uint64_t w = basis[p];
    {
      std::uint32_t bit = 0;
      for (std::uint32_t i = 0; i < dim; ++i) {
        if (i == p) continue;
        if ((c2 >> bit) & 1ULL) w ^= basis[i];
        ++bit;
      }
    }
    image_cols[2 * j] = v;
    image_cols[2 * j + 1] = w;

    // New complement: vectors of the old one orthogonal to both v and w.
    std::vector<std::uint64_t> rest;
    rest.reserve(dim - 1);
    for (std::uint32_t i = 0; i < dim; ++i)
      if (i != p) rest.push_back(basis[i]);
    std::uint32_t q = dim;
    for (std::uint32_t i = 0; i < dim - 1; ++i)
      if (sp_product(w, rest[i]) == 1) {
        q = i;
        break;
      }
    std::vector<std::uint64_t> next;
    next.reserve(dim >= 2 ? dim - 2 : 0);
    for (std::uint32_t i = 0; i < dim - 1; ++i) {
      if (i == q) continue;
      std::uint64_t b = rest[i];
      if (q != dim && sp_product(w, b) == 1) b ^= rest[q];
      next.push_back(b);
    }
    basis = std::move(next);
  }

  CliffordElement out;
  out.n = n;
  out.x_images.resize(n);
  out.z_images.resize(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    const bool nx = digits.next(2) != 0;
    const bool nz = digits.next(2) != 0;
    out.x_images[j] = from_symplectic_bits(n, image_cols[2 * j], nx);
    out.z_images[j] = from_symplectic_bits(n, image_cols[2 * j + 1], nz);
  }
  return out;
}

}  // namespace

CliffordElement sample_clifford(std::uint32_t n, Rng& rng) {
  RngDigits d(rng);
  return build_clifford(n, d);
}

CliffordElement clifford_from_index(std::uint32_t n, std::uint64_t index) {
  if (index >= clifford_group_order(n)) throw std::out_of_range("clifford index out of range");
  IndexDigits d(index);
  return build_clifford(n, d);
}

std::vector<CliffordElement> enumerate_clifford_elements(std::uint32_t n) {
  if (n != 1 && n != 2) throw std::invalid_argument("enumeration supported for n in {1,2}");
  const std::uint64_t order = clifford_group_order(n);
  std::vector<CliffordElement> out;
  out.reserve(order);
  for (std::uint64_t i = 0; i < order; ++i) out.push_back(clifford_from_index(n, i));
  return out;
}

namespace {

// Gates applied on the left during tableau reduction. Conjugation rules
// on (x, z, sign) per qubit follow the stabilizer update identities.
struct Gate {
  enum Kind { H, S, CNOT, PX, PZ } kind;
  std::uint32_t a = 0, b = 0;
};

void conjugate_by_gate(PauliString& p, const Gate& g) {
  auto bit = [](std::uint64_t v, std::uint32_t q) { return (v >> q) & 1ULL; };
  switch (g.kind) {
    case Gate::H: {
      const std::uint64_t xa = bit(p.x, g.a), za = bit(p.z, g.a);
      if (xa & za) p.neg ^= true;
      p.x ^= (xa ^ za) << g.a;
      p.z ^= (xa ^ za) << g.a;
      break;
    }
    case Gate::S: {
      const std::uint64_t xa = bit(p.x, g.a), za = bit(p.z, g.a);
      if (xa & za) p.neg ^= true;
      p.z ^= xa << g.a;
      break;
    }
    case Gate::CNOT: {
      const std::uint64_t xc = bit(p.x, g.a), zc = bit(p.z, g.a);
      const std::uint64_t xt = bit(p.x, g.b), zt = bit(p.z, g.b);
      if (xc && zt && (xt ^ zc ^ 1ULL)) p.neg ^= true;
      p.x ^= xc << g.b;
      p.z ^= zt << g.a;
      break;
    }
    case Gate::PX:
      if (bit(p.z, g.a)) p.neg ^= true;
      break;
    case Gate::PZ:
      if (bit(p.x, g.a)) p.neg ^= true;
      break;
  }
}

struct Reduction {
  CliffordElement t;
  std::vector<Gate> gates;

  void apply(Gate g) {
    for (auto& p : t.x_images) conjugate_by_gate(p, g);
    for (auto& p : t.z_images) conjugate_by_gate(p, g);
    gates.push_back(g);
  }
  void h(std::uint32_t q) { apply({Gate::H, q, 0}); }
  void s(std::uint32_t q) { apply({Gate::S, q, 0}); }
  void cnot(std::uint32_t c, std::uint32_t t2) { apply({Gate::CNOT, c, t2}); }
  void swap(std::uint32_t a, std::uint32_t b) {
    cnot(a, b);
    cnot(b, a);
    cnot(a, b);
  }
  void cz(std::uint32_t a, std::uint32_t b) {
    h(b);
    cnot(a, b);
    h(b);
  }
};

Mat gate_matrix_inverse(const Gate& g, std::uint32_t n) {
  const Index d = Index(1) << n;
  auto embed1 = [&](const Mat& m, std::uint32_t q) {
    Mat out = Mat::Identity(1, 1);
    for (std::uint32_t i = 0; i < n; ++i)
      out = kron(out, i == q ? m : Mat::Identity(2, 2));
    return out;
  };
  switch (g.kind) {
    case Gate::H: {
      Mat h(2, 2);
      h << 1, 1, 1, -1;
      return embed1(h / std::sqrt(2.0), g.a);
    }
    case Gate::S: {
      Mat sdag(2, 2);
      sdag << 1, 0, 0, Complex(0, -1);
      return embed1(sdag, g.a);
    }
    case Gate::CNOT: {
      Mat m = Mat::Zero(d, d);
      for (Index i = 0; i < d; ++i) {
        const Index cbit = (i >> (n - 1 - g.a)) & 1;
        const Index j = cbit ? (i ^ (Index(1) << (n - 1 - g.b))) : i;
        m(j, i) = 1.0;
      }
      return m;
    }
    case Gate::PX: {
      Mat x(2, 2);
      x << 0, 1, 1, 0;
      return embed1(x, g.a);
    }
    case Gate::PZ: {
      Mat z(2, 2);
      z << 1, 0, 0, -1;
      return embed1(z, g.a);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Mat clifford_to_unitary(const CliffordElement& c) {
  if (c.n > 6) throw std::invalid_argument("matrix synthesis capped at n = 6");
  Reduction red{c, {}};
  const std::uint32_t n = c.n;
  auto bit = [](std::uint64_t v, std::uint32_t q) { return ((v >> q) & 1ULL) != 0; };

  for (std::uint32_t j = 0; j < n; ++j) {
    // Bring the X_j image to exactly X_j.
    {
      const PauliString& a = red.t.x_images[j];
      std::uint32_t k = n;
      for (std::uint32_t q = j; q < n && k == n; ++q)
        if (bit(a.x, q)) k = q;
      if (k == n) {
        for (std::uint32_t q = j; q < n && k == n; ++q)
          if (bit(red.t.x_images[j].z, q)) k = q;
        if (k == n) throw std::logic_error("singular tableau");
        red.h(k);
      }
      if (k != j) red.swap(j, k);
      for (std::uint32_t q = j + 1; q < n; ++q)
        if (bit(red.t.x_images[j].x, q)) red.cnot(j, q);
      if (bit(red.t.x_images[j].z, j)) red.s(j);
      for (std::uint32_t q = j + 1; q < n; ++q)
        if (bit(red.t.x_images[j].z, q)) red.cz(j, q);
    }
    // Bring the Z_j image to exactly Z_j, preserving X_j.
    {
      for (std::uint32_t q = j + 1; q < n; ++q) {
        if (bit(red.t.z_images[j].x, q)) {
          if (bit(red.t.z_images[j].z, q)) red.s(q);
          red.h(q);
        }
      }
      for (std::uint32_t q = j + 1; q < n; ++q)
        if (bit(red.t.z_images[j].z, q)) red.cnot(q, j);
      if (bit(red.t.z_images[j].x, j)) {
        red.h(j);
        red.s(j);
        red.h(j);
      }
    }
    if (red.t.x_images[j].neg) red.apply({Gate::PZ, j, 0});
    if (red.t.z_images[j].neg) red.apply({Gate::PX, j, 0});
  }
  if (!(red.t == CliffordElement::identity(n))) throw std::logic_error("tableau reduction failed");

  const Index d = Index(1) << n;
  Mat u = Mat::Identity(d, d);
  for (const Gate& g : red.gates) u = u * gate_matrix_inverse(g, n);

  // Canonical global phase: first nonzero entry positive real.
  for (Index r = 0; r < d; ++r) {
    bool done = false;
    for (Index col = 0; col < d; ++col) {
      const Complex e = u(r, col);
      if (std::abs(e) > 1e-9) {
        u *= std::conj(e) / std::abs(e);
        done = true;
        break;
      }
    }
    if (done) break;
  }
  return u;
}

void UnitaryEnsemble::validate(double tol) const {
  for (const Mat& u : elements) {
    const Index d = u.rows();
    if ((u.adjoint() * u - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("ensemble element not unitary");
  }
}

UnitaryEnsemble enumerate_clifford(std::uint32_t n) {
  UnitaryEnsemble ens;
  for (const auto& c : enumerate_clifford_elements(n)) ens.elements.push_back(clifford_to_unitary(c));
  return ens;
}

Mat haar_twirl(const Mat& x, int t, Index d) {
  if (t == 1) {
    if (x.rows() != d) throw std::invalid_argument("twirl dimension mismatch");
    return x.trace() / static_cast<double>(d) * Mat::Identity(d, d);
  }
  if (t != 2) throw std::invalid_argument("only t in {1,2} supported");
  if (x.rows() != d * d) throw std::invalid_argument("twirl dimension mismatch");
  Mat swap = Mat::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  const Mat id = Mat::Identity(d * d, d * d);
  const Mat psym = 0.5 * (id + swap);
  const Mat panti = 0.5 * (id - swap);
  const Complex cs = (psym * x).trace() / psym.trace();
  const Complex ca = (panti * x).trace() / panti.trace();
  return cs * psym + ca * panti;
}

double twirl_deviation(const UnitaryEnsemble& ens, const Mat& x, int t) {
  if (ens.elements.empty()) throw std::invalid_argument("empty ensemble");
  const Index d = ens.elements.front().rows();
  Mat avg = Mat::Zero(x.rows(), x.cols());
  for (const Mat& u : ens.elements) {
    Mat ut = u;
    for (int k = 1; k < t; ++k) ut = kron(ut, u);
    avg += ut * x * ut.adjoint();
  }
  avg /= static_cast<double>(ens.elements.size());
  return 0.5 * one_norm(avg - haar_twirl(x, t, d));
}

}  // namespace uclab
