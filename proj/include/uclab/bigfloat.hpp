#pragma once

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace uclab {

/// Thin RAII wrapper over an mpfr_t with explicit per-value precision.
/// Binary operations round to the larger operand precision.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(double d, mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  BigFloat(std::int64_t i, mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(v_, prec);
    mpfr_set_sj(v_, i, MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) : prec_(o.prec_) {
    mpfr_init2(v_, o.prec_);
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(v_, o.prec_);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, o.prec_);
      prec_ = o.prec_;
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    std::swap(prec_, o.prec_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return prec_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  std::string str(int digits = 40) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec_, b.prec_));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec_, b.prec_));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec_, b.prec_));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec_, b.prec_));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  BigFloat operator-() const {
    BigFloat r(prec_);
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  BigFloat sqrt() const {
    if (sign() < 0) throw std::domain_error("sqrt of negative");
    BigFloat r(prec_);
    mpfr_sqrt(r.v_, v_, MPFR_RNDN);
    return r;
  }
  BigFloat abs() const {
    BigFloat r(prec_);
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
  }
  BigFloat log2() const {
    if (sign() <= 0) throw std::domain_error("log2 of non-positive");
    BigFloat r(prec_);
    mpfr_log2(r.v_, v_, MPFR_RNDN);
    return r;
  }
  BigFloat exp2() const {
    BigFloat r(prec_);
    mpfr_exp2(r.v_, v_, MPFR_RNDN);
    return r;
  }
  /// log2(1 + x), stable for tiny |x|.
  BigFloat log2_1p() const {
    BigFloat r(prec_);
    mpfr_log1p(r.v_, v_, MPFR_RNDN);
    mpfr_div(r.v_, r.v_, ln2(prec_).v_, MPFR_RNDN);
    return r;
  }

  static BigFloat ln2(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_log2(r.v_, MPFR_RNDN);
    return r;
  }
  static BigFloat log2e(mpfr_prec_t prec) {
    return BigFloat(1.0, prec) / ln2(prec);
  }

 private:
  mpfr_t v_;
  mpfr_prec_t prec_;
};

}  // namespace uclab
