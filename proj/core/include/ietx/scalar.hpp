#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace ietx {

enum class Backend { rational, fixed };

std::string_view backend_name(Backend b);
Backend parse_backend(std::string_view name);

// Scalar values from different backends (or fixed point at different
// precisions) never mix silently.
class BackendMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct NumericsConfig {
  Backend backend = Backend::fixed;
  int precision_bits = 256;

  // Throws std::invalid_argument when precision_bits < 64.
  void validate() const;
};

// A real number carried by one of two backends:
//
//  * rational: an exact p/q held in lowest terms with q > 0.
//  * fixed:    m / 2^P for an arbitrary-precision integer mantissa m.
//
// Fixed-point products and quotients round to nearest (ties toward +inf),
// so each such operation contributes at most 2^-P absolute error. Sums and
// differences are exact in both backends.
class Scalar {
 public:
  // Rational zero.
  Scalar();

  static Scalar rational(const mpz_class& num, const mpz_class& den);
  static Scalar rational(long num, long den = 1);
  static Scalar from_rational(const mpq_class& q);
  static Scalar fixed_from_mantissa(mpz_class mantissa, int bits);

  // p/q realised in the given backend: exact when rational, rounded to
  // config.precision_bits otherwise.
  static Scalar from_ratio(long num, long den, const NumericsConfig& config);
  static Scalar from_ratio(const mpq_class& q, const NumericsConfig& config);

  // The value p/q in the same backend (and precision) as `proto`.
  static Scalar like(const Scalar& proto, long num, long den = 1);

  Backend backend() const;
  bool is_rational() const { return std::holds_alternative<mpq_class>(value_); }
  bool is_fixed() const { return !is_rational(); }
  // Fixed-point precision P, or 0 for rationals.
  int precision_bits() const;
  bool same_backend(const Scalar& other) const;

  const mpq_class& as_rational() const;
  const mpz_class& mantissa() const;

  // Exact value as a rational, whichever the backend.
  mpq_class exact() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }

  // Backend-checked exact comparison.
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b);

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  Scalar abs() const { return sign() < 0 ? -*this : *this; }
  mpz_class floor() const;

  double to_double() const;

  // Re-express at `bits` of fixed precision (rounding to nearest).
  Scalar to_fixed(int bits) const;

 private:
  struct Fixed {
    mpz_class mantissa;
    int bits = 0;
  };

  explicit Scalar(mpq_class q);
  explicit Scalar(Fixed f);

  void check_compatible(const Scalar& other) const;

  std::variant<mpq_class, Fixed> value_;
};

// `s` re-expressed in the backend and precision of `proto`.
Scalar rebase(const Scalar& s, const Scalar& proto);

// floor(x * 2^53) / 2^53 for x in [0, 1): the double every orbit consumer
// (test functions, histograms) sees, identical across backends.
double unit_to_double(const Scalar& x);

// Reduction to [0, 1): returns r with 0 <= r < 1 and s - r an integer.
Scalar mod_one(const Scalar& s);

// Comparison tolerance of the backend `proto` lives in: 0 for rationals,
// 2^-(P-16) for fixed point.
Scalar tolerance_for(const Scalar& proto);
Scalar tolerance(const NumericsConfig& config);

// |a - b| <= tol.
bool within(const Scalar& a, const Scalar& b, const Scalar& tol);

// Distance on the circle R/Z.
Scalar circle_distance(const Scalar& a, const Scalar& b);

// Square root to `bits` of fixed precision (floor of the exact root).
// Throws std::domain_error for negative input.
Scalar sqrt_fixed(const Scalar& s, int bits);

// "p/q" or a decimal literal (optional sign, fraction and exponent).
// Decimals parsed into fixed point are correctly rounded to P bits;
// anything parsed into the rational backend is exact.
Scalar parse_scalar(std::string_view text, const NumericsConfig& config);

// Rationals as "p/q"; fixed point as a decimal with ceil(P*log10(2))
// fractional digits, enough for parse_scalar to recover the mantissa.
std::string format_scalar(const Scalar& s);

// Common irrational constants, rounded to the configured precision.
Scalar golden_conjugate(int bits);  // (sqrt(5) - 1) / 2
Scalar sqrt_two(int bits);

}  // namespace ietx
