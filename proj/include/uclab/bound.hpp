#pragma once

#include <cstdint>
#include <vector>

#include "uclab/bigfloat.hpp"

namespace uclab {

/// Sign-free real in base-2 log domain; addition is exact log-sum-exp, so
/// astronomically mismatched magnitudes combine without overflow for
/// |log2 value| up to ~1e9.
class LogScalar {
 public:
  LogScalar() : zero_(true), log2_(64) {}

  static LogScalar zero(mpfr_prec_t prec) { return LogScalar(prec); }
  static LogScalar from_log2(BigFloat l) { return LogScalar(std::move(l)); }
  static LogScalar from_linear(const BigFloat& x);
  static LogScalar from_double(double x, mpfr_prec_t prec);

  bool is_zero() const { return zero_; }
  const BigFloat& log2_value() const { return log2_; }
  double log2_double() const { return log2_.to_double(); }
  BigFloat to_linear() const { return zero_ ? BigFloat(log2_.prec()) : log2_.exp2(); }

  LogScalar mul(const LogScalar& o) const;
  LogScalar div(const LogScalar& o) const;
  LogScalar add(const LogScalar& o) const;
  /// a - b, requiring a >= b; returns zero on exact cancellation.
  LogScalar sub(const LogScalar& o) const;
  LogScalar sqrt() const;
  LogScalar pow_int(std::int64_t k) const;

  bool leq(const LogScalar& o) const;
  bool lt(const LogScalar& o) const;

 private:
  explicit LogScalar(mpfr_prec_t prec) : zero_(true), log2_(prec) {}
  explicit LogScalar(BigFloat l) : zero_(false), log2_(std::move(l)) {}

  bool zero_;
  BigFloat log2_;
};

/// Working precision for the bound chain; reads
/// UNCLONEABLE_LAB_PRECISION_BITS, default 128.
mpfr_prec_t working_precision();

/// Binary entropy h(x) in bits, endpoints 0.
double binary_entropy(double x);
BigFloat binary_entropy(const BigFloat& x);

/// Smoothing-rate correction
/// delta = [1 + 5/2 log2(dimA + 3)] sqrt((log2(2/eps) + 4)/n + h(r/n)).
BigFloat delta_rate(const LogScalar& eps, std::int64_t r, std::int64_t n, int dim_a);

struct BoundDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// gamma(e0, e1) = log2 1/(1 - (e1 e0^2 + sqrt(1-e0^4) sqrt(1-e1^2))^2),
/// evaluated entirely in log domain to survive the cancellation near 1.
/// Throws BoundDomainError unless e1 < e0^2 (the arcsin validity window).
LogScalar gamma_term(const LogScalar& eps0, const LogScalar& eps1);

/// eta = (n-m)^32 e^{-(n-m)(r+1)/(2n)}.
LogScalar eta_definetti(std::int64_t n, std::int64_t m, std::int64_t r, mpfr_prec_t prec);
/// The same bound with the source theorem's leading factor 2 retained.
LogScalar eta_definetti_doubled(std::int64_t n, std::int64_t m, std::int64_t r, mpfr_prec_t prec);

struct BoundParams {
  std::int64_t n = 0, m = 0, r = 0;
  LogScalar eps0, eps1;
  int dim_a = 2;
};

/// m = n/2, r = floor(n/20000), eps0 = 2^{-n/1600+3}, eps1 = 2^{-n/800+5};
/// requires n even and n >= 20000.
BoundParams theorem1_schedule(std::int64_t n, mpfr_prec_t prec);

/// sqrt(eta + eps0 + 2^{-m(1-delta)+gamma}).
LogScalar epsilon_bound(const BoundParams& p);

/// (n^16/2^8) 2^{-n/120000}.
LogScalar theorem1_rhs(std::int64_t n, mpfr_prec_t prec);

struct ChainRow {
  std::int64_t n = 0, m = 0, r = 0;
  double log2_eps0 = 0, log2_eps1 = 0;
  double delta = 0, log2_gamma = 0, log2_eta = 0;
  double log2_eps_bound = 0, log2_thm1_rhs = 0, log2_margin = 0;
  bool pass = false;             // eps_bound <= rhs
  bool domination_ok = false;    // each radicand term below its closed-form cap
  bool cross_precision_ok = false;  // >= 30 agreeing bits at doubled precision
};

struct ChainTable {
  std::vector<ChainRow> rows;
  std::int64_t smallest_passing_n = -1;
  bool all_pass = false;
  bool all_domination_ok = false;
  bool all_cross_precision_ok = false;
};

/// Evaluates the full bound chain on a geometric grid of even n, checking
/// the final inequality, per-term domination by the closed-form schedule
/// caps, and 128/256-bit agreement.
ChainTable verify_theorem1(std::int64_t n_min, std::int64_t n_max, int points,
                           mpfr_prec_t prec);

}  // namespace uclab
