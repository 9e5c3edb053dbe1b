#include "uclab/bound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace uclab {

LogScalar LogScalar::from_linear(const BigFloat& x) {
  if (x.sign() < 0) throw std::domain_error("LogScalar holds nonnegative values");
  if (x.sign() == 0) return zero(x.prec());
  return from_log2(x.log2());
}

LogScalar LogScalar::from_double(double x, mpfr_prec_t prec) {
  return from_linear(BigFloat(x, prec));
}

LogScalar LogScalar::mul(const LogScalar& o) const {
  if (zero_ || o.zero_) return zero(std::max(log2_.prec(), o.log2_.prec()));
  return from_log2(log2_ + o.log2_);
}

LogScalar LogScalar::div(const LogScalar& o) const {
  if (o.zero_) throw std::domain_error("division by zero LogScalar");
  if (zero_) return *this;
  return from_log2(log2_ - o.log2_);
}

LogScalar LogScalar::add(const LogScalar& o) const {
  if (zero_) return o;
  if (o.zero_) return *this;
  const BigFloat& hi = (log2_ >= o.log2_) ? log2_ : o.log2_;
  const BigFloat& lo = (log2_ >= o.log2_) ? o.log2_ : log2_;
  return from_log2(hi + (lo - hi).exp2().log2_1p());
}

LogScalar LogScalar::sub(const LogScalar& o) const {
  if (o.zero_) return *this;
  if (zero_ || log2_ < o.log2_) throw std::domain_error("LogScalar subtraction went negative");
  const BigFloat t = (o.log2_ - log2_).exp2();
  const BigFloat one_minus(BigFloat(1.0, t.prec()) - t);
  if (one_minus.sign() <= 0) return zero(log2_.prec());
  return from_log2(log2_ + (-t).log2_1p());
}

LogScalar LogScalar::sqrt() const {
  if (zero_) return *this;
  return from_log2(log2_ / BigFloat(2.0, log2_.prec()));
}

LogScalar LogScalar::pow_int(std::int64_t k) const {
  if (zero_) {
    if (k <= 0) throw std::domain_error("0^k for k <= 0");
    return *this;
  }
  return from_log2(log2_ * BigFloat(k, log2_.prec()));
}

bool LogScalar::leq(const LogScalar& o) const {
  if (zero_) return true;
  if (o.zero_) return false;
  return log2_ <= o.log2_;
}

bool LogScalar::lt(const LogScalar& o) const {
  if (o.zero_) return false;
  if (zero_) return true;
  return log2_ < o.log2_;
}

mpfr_prec_t working_precision() {
  const char* env = std::getenv("UNCLONEABLE_LAB_PRECISION_BITS");
  if (!env) return 128;
  const long bits = std::strtol(env, nullptr, 10);
  if (bits < 64 || bits > 1 << 20) throw std::invalid_argument("precision override out of range");
  return static_cast<mpfr_prec_t>(bits);
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("binary entropy needs x in [0,1]");
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

BigFloat binary_entropy(const BigFloat& x) {
  const mpfr_prec_t prec = x.prec();
  const BigFloat one(1.0, prec);
  if (x.sign() < 0 || x > one) throw std::domain_error("binary entropy needs x in [0,1]");
  if (x.sign() == 0 || (one - x).sign() == 0) return BigFloat(prec);
  // -(x log2 x) - (1-x) log2(1-x), the latter via log1p for stability.
  return -(x * x.log2()) - (one - x) * (-x).log2_1p();
}

BigFloat delta_rate(const LogScalar& eps, std::int64_t r, std::int64_t n, int dim_a) {
  if (eps.is_zero()) throw std::domain_error("delta needs eps > 0");
  if (n <= 0 || r < 0 || r > n) throw std::domain_error("delta needs 0 <= r <= n");
  const mpfr_prec_t prec = eps.log2_value().prec();
  const BigFloat prefactor =
      BigFloat(1.0, prec) + BigFloat(2.5, prec) * BigFloat(std::int64_t(dim_a) + 3, prec).log2();
  // log2(2/eps) + 4 = 5 - log2(eps)
  const BigFloat log_term = BigFloat(5.0, prec) - eps.log2_value();
  const BigFloat inner =
      log_term / BigFloat(n, prec) + binary_entropy(BigFloat(r, prec) / BigFloat(n, prec));
  if (inner.sign() < 0) throw std::domain_error("delta radicand negative (eps too large)");
  return prefactor * inner.sqrt();
}

LogScalar gamma_term(const LogScalar& eps0, const LogScalar& eps1) {
  // Validity window arcsin(e1) + arcsin(sqrt(1-e0^4)) < pi/2, equivalently
  // e1 < e0^2.
  const LogScalar e0sq = eps0.mul(eps0);
  if (!eps1.lt(e0sq)) throw BoundDomainError("gamma validity requires eps1 < eps0^2");
  const mpfr_prec_t prec = eps0.log2_value().prec();

  // 1 - s^2 = (1 - s)(1 + s) with
  //   1 - s = u/(1 + sqrt(1-u)) - e1 e0^2,  u = e0^4 + e1^2 - e0^4 e1^2,
  // keeping every small quantity in log domain.
  const LogScalar e0_4 = e0sq.mul(e0sq);
  const LogScalar e1sq = eps1.mul(eps1);
  const LogScalar u = e0_4.add(e1sq).sub(e0_4.mul(e1sq));

  const BigFloat one(1.0, prec);
  BigFloat denom = one;
  {
    const BigFloat u_lin = u.to_linear();
    if ((one - u_lin).sign() > 0) denom = one + (one - u_lin).sqrt();
  }
  const LogScalar t = u.div(LogScalar::from_linear(denom));
  const LogScalar one_minus_s = t.sub(eps1.mul(e0sq));
  if (one_minus_s.is_zero()) throw BoundDomainError("gamma: expression reached 1");
  const LogScalar one_plus_s = LogScalar::from_double(2.0, prec).sub(one_minus_s);
  const LogScalar one_minus_s2 = one_minus_s.mul(one_plus_s);
  // gamma = -log2(1-s^2) > 0
  return LogScalar::from_linear(-one_minus_s2.log2_value());
}

namespace {

LogScalar eta_impl(std::int64_t n, std::int64_t m, std::int64_t r, mpfr_prec_t prec,
                   bool doubled) {
  if (m <= 0 || m >= n || r < 0) throw std::domain_error("eta needs 0 < m < n, r >= 0");
  const std::int64_t k = n - m;
  const BigFloat log2_poly = BigFloat(32.0, prec) * BigFloat(k, prec).log2();
  const BigFloat exponent =
      BigFloat(k * (r + 1), prec) / BigFloat(2 * n, prec) * BigFloat::log2e(prec);
  BigFloat log2_eta = log2_poly - exponent;
  if (doubled) log2_eta = log2_eta + BigFloat(1.0, prec);
  return LogScalar::from_log2(log2_eta);
}

}  // namespace

LogScalar eta_definetti(std::int64_t n, std::int64_t m, std::int64_t r, mpfr_prec_t prec) {
  return eta_impl(n, m, r, prec, false);
}

LogScalar eta_definetti_doubled(std::int64_t n, std::int64_t m, std::int64_t r,
                                mpfr_prec_t prec) {
  return eta_impl(n, m, r, prec, true);
}

BoundParams theorem1_schedule(std::int64_t n, mpfr_prec_t prec) {
  if (n < 20000) throw std::domain_error("schedule needs n >= 20000 so r >= 1");
  if (n % 2 != 0) throw std::domain_error("schedule needs n even");
  BoundParams p;
  p.n = n;
  p.m = n / 2;
  p.r = n / 20000;
  p.dim_a = 2;
  const BigFloat nn(n, prec);
  p.eps0 = LogScalar::from_log2(BigFloat(3.0, prec) - nn / BigFloat(1600.0, prec));
  p.eps1 = LogScalar::from_log2(BigFloat(5.0, prec) - nn / BigFloat(800.0, prec));
  return p;
}

namespace {

struct ChainParts {
  BigFloat delta;
  LogScalar gamma, eta, term3, bound, rhs;
};

ChainParts evaluate_chain(const BoundParams& p, mpfr_prec_t prec) {
  const BigFloat delta = delta_rate(p.eps1, p.r, p.m, p.dim_a);
  const LogScalar gamma = gamma_term(p.eps0, p.eps1);
  const LogScalar eta = eta_definetti(p.n, p.m, p.r, prec);
  const BigFloat exponent =
      -(BigFloat(p.m, prec) * (BigFloat(1.0, prec) - delta)) + gamma.to_linear();
  const LogScalar term3 = LogScalar::from_log2(exponent);
  const LogScalar bound = eta.add(p.eps0).add(term3).sqrt();
  const LogScalar rhs = theorem1_rhs(p.n, prec);
  return {delta, gamma, eta, term3, bound, rhs};
}

bool agrees_to_bits(const BigFloat& a, const BigFloat& b, int bits) {
  const BigFloat diff = (a - b).abs();
  const BigFloat scale = a.abs() + b.abs() + BigFloat(1e-30, a.prec());
  return diff <= scale * BigFloat(std::ldexp(1.0, -bits), a.prec());
}

}  // namespace

LogScalar epsilon_bound(const BoundParams& p) {
  const mpfr_prec_t prec = p.eps0.log2_value().prec();
  return evaluate_chain(p, prec).bound;
}

LogScalar theorem1_rhs(std::int64_t n, mpfr_prec_t prec) {
  const BigFloat nn(n, prec);
  return LogScalar::from_log2(BigFloat(16.0, prec) * nn.log2() - BigFloat(8.0, prec) -
                              nn / BigFloat(120000.0, prec));
}

ChainTable verify_theorem1(std::int64_t n_min, std::int64_t n_max, int points,
                           mpfr_prec_t prec) {
  if (n_min < 20000) throw std::domain_error("grid starts at n >= 20000");
  if (n_max < n_min || points < 1) throw std::domain_error("bad grid");
  std::vector<std::int64_t> grid;
  const double ratio = (points > 1)
                           ? std::pow(static_cast<double>(n_max) / n_min, 1.0 / (points - 1))
                           : 1.0;
  double x = static_cast<double>(n_min);
  for (int i = 0; i < points; ++i, x *= ratio) {
    std::int64_t n = 2 * static_cast<std::int64_t>(std::llround(x / 2.0));
    n = std::max<std::int64_t>(n, 20000);
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }

  ChainTable table;
  table.all_pass = true;
  table.all_domination_ok = true;
  table.all_cross_precision_ok = true;
  for (std::int64_t n : grid) {
    const BoundParams p = theorem1_schedule(n, prec);
    const ChainParts parts = evaluate_chain(p, prec);

    ChainRow row;
    row.n = n;
    row.m = p.m;
    row.r = p.r;
    row.log2_eps0 = p.eps0.log2_double();
    row.log2_eps1 = p.eps1.log2_double();
    row.delta = parts.delta.to_double();
    row.log2_gamma = parts.gamma.log2_double();
    row.log2_eta = parts.eta.log2_double();
    row.log2_eps_bound = parts.bound.log2_double();
    row.log2_thm1_rhs = parts.rhs.log2_double();
    row.log2_margin = (parts.rhs.log2_value() - parts.bound.log2_value()).to_double();
    row.pass = parts.bound.leq(parts.rhs);

    // Term-wise caps from the schedule's closed-form display:
    // (n/2)^32 e^{-n/80000}, eps0 itself, and 2^{-n/4 + n/400 - 9}.
    const BigFloat nn(n, prec);
    const LogScalar cap_eta = LogScalar::from_log2(
        BigFloat(32.0, prec) * nn.log2() - BigFloat(32.0, prec) -
        nn / BigFloat(80000.0, prec) * BigFloat::log2e(prec));
    const LogScalar cap_term3 = LogScalar::from_log2(
        -nn / BigFloat(4.0, prec) + nn / BigFloat(400.0, prec) - BigFloat(9.0, prec));
    const LogScalar cap_eps0 =
        LogScalar::from_log2(BigFloat(3.0, prec) - nn / BigFloat(1600.0, prec));
    row.domination_ok =
        parts.eta.leq(cap_eta) && p.eps0.leq(cap_eps0) && parts.term3.leq(cap_term3);

    const mpfr_prec_t hi_prec = 2 * prec;
    const BoundParams p2 = theorem1_schedule(n, hi_prec);
    const ChainParts parts2 = evaluate_chain(p2, hi_prec);
    row.cross_precision_ok =
        agrees_to_bits(parts.delta, parts2.delta, 30) &&
        agrees_to_bits(parts.gamma.log2_value(), parts2.gamma.log2_value(), 30) &&
        agrees_to_bits(parts.eta.log2_value(), parts2.eta.log2_value(), 30) &&
        agrees_to_bits(parts.bound.log2_value(), parts2.bound.log2_value(), 30) &&
        agrees_to_bits(parts.rhs.log2_value(), parts2.rhs.log2_value(), 30);

    if (row.pass && table.smallest_passing_n < 0) table.smallest_passing_n = n;
    table.all_pass = table.all_pass && row.pass;
    table.all_domination_ok = table.all_domination_ok && row.domination_ok;
    table.all_cross_precision_ok = table.all_cross_precision_ok && row.cross_precision_ok;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace uclab
