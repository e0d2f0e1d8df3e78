#include "ietx/scalar.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ietx {

namespace {

// round(num / den) for den > 0, ties toward +inf.
mpz_class round_div(const mpz_class& num, const mpz_class& den) {
  mpz_class q;
  mpz_class twice_num = 2 * num + den;
  mpz_class twice_den = 2 * den;
  mpz_fdiv_q(q.get_mpz_t(), twice_num.get_mpz_t(), twice_den.get_mpz_t());
  return q;
}

// round(v / 2^shift), ties toward +inf.
mpz_class round_shift(const mpz_class& v, int shift) {
  if (shift <= 0) {
    mpz_class r;
    mpz_mul_2exp(r.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    return r;
  }
  mpz_class half;
  mpz_setbit(half.get_mpz_t(), static_cast<mp_bitcnt_t>(shift - 1));
  mpz_class biased = v + half;
  mpz_class r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), biased.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  return r;
}

mpz_class pow2(int bits) {
  mpz_class r;
  mpz_setbit(r.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  return r;
}

mpz_class rational_to_mantissa(const mpq_class& q, int bits) {
  mpz_class num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  return round_div(num, q.get_den());
}

mpz_class parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw ParseError("empty integer in scalar '" + std::string(whole) + "'");
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') i = 1;
  if (i == text.size()) throw ParseError("malformed scalar '" + std::string(whole) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
      throw ParseError("malformed scalar '" + std::string(whole) + "'");
    }
  }
  std::string digits(text.substr(text[0] == '+' ? 1 : 0));
  return mpz_class(digits, 10);
}

mpq_class parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw ParseError("malformed scalar '" + std::string(text) + "'");
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') {
      throw ParseError("malformed scalar '" + std::string(text) + "'");
    }
    mpz_class e = parse_integer(text.substr(pos + 1), text);
    if (!e.fits_slong_p() || abs(e) > 100000) {
      throw ParseError("exponent out of range in '" + std::string(text) + "'");
    }
    exponent = e.get_si();
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long scale = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  mpq_class q = scale >= 0 ? mpq_class(num * ten_pow) : mpq_class(num, ten_pow);
  q.canonicalize();
  return q;
}

}  // namespace

std::string_view backend_name(Backend b) {
  return b == Backend::rational ? "rational" : "fixed";
}

Backend parse_backend(std::string_view name) {
  if (name == "rational") return Backend::rational;
  if (name == "fixed") return Backend::fixed;
  throw std::invalid_argument("unknown backend '" + std::string(name) + "'");
}

void NumericsConfig::validate() const {
  if (precision_bits < 64) {
    throw std::invalid_argument("precision must be at least 64 bits, got " +
                                std::to_string(precision_bits));
  }
}

Scalar::Scalar() : value_(mpq_class(0)) {}
Scalar::Scalar(mpq_class q) : value_(std::move(q)) {}
Scalar::Scalar(Fixed f) : value_(std::move(f)) {}

Scalar Scalar::rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(std::move(q));
}

Scalar Scalar::rational(long num, long den) { return rational(mpz_class(num), mpz_class(den)); }

Scalar Scalar::from_rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return Scalar(std::move(c));
}

Scalar Scalar::fixed_from_mantissa(mpz_class mantissa, int bits) {
  if (bits <= 0) throw std::invalid_argument("fixed-point precision must be positive");
  return Scalar(Fixed{std::move(mantissa), bits});
}

Scalar Scalar::from_ratio(const mpq_class& q, const NumericsConfig& config) {
  if (config.backend == Backend::rational) return from_rational(q);
  return fixed_from_mantissa(rational_to_mantissa(q, config.precision_bits),
                             config.precision_bits);
}

Scalar Scalar::from_ratio(long num, long den, const NumericsConfig& config) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return from_ratio(q, config);
}

Scalar Scalar::like(const Scalar& proto, long num, long den) {
  NumericsConfig c{proto.backend(), proto.is_fixed() ? proto.precision_bits() : 256};
  return from_ratio(num, den, c);
}

Backend Scalar::backend() const { return is_rational() ? Backend::rational : Backend::fixed; }

int Scalar::precision_bits() const {
  return is_rational() ? 0 : std::get<Fixed>(value_).bits;
}

bool Scalar::same_backend(const Scalar& other) const {
  return backend() == other.backend() && precision_bits() == other.precision_bits();
}

const mpq_class& Scalar::as_rational() const {
  if (!is_rational()) throw BackendMismatch("scalar is not rational");
  return std::get<mpq_class>(value_);
}

const mpz_class& Scalar::mantissa() const {
  if (!is_fixed()) throw BackendMismatch("scalar is not fixed point");
  return std::get<Fixed>(value_).mantissa;
}

mpq_class Scalar::exact() const {
  if (is_rational()) return as_rational();
  const Fixed& f = std::get<Fixed>(value_);
  mpq_class q(f.mantissa, pow2(f.bits));
  q.canonicalize();
  return q;
}

void Scalar::check_compatible(const Scalar& other) const {
  if (!same_backend(other)) {
    throw BackendMismatch("scalar backend mismatch: " + std::string(backend_name(backend())) +
                          "/" + std::to_string(precision_bits()) + " vs " +
                          std::string(backend_name(other.backend())) + "/" +
                          std::to_string(other.precision_bits()));
  }
}

Scalar Scalar::operator-() const {
  if (is_rational()) return Scalar(mpq_class(-as_rational()));
  const Fixed& f = std::get<Fixed>(value_);
  return Scalar(Fixed{-f.mantissa, f.bits});
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  check_compatible(rhs);
  if (is_rational()) {
    std::get<mpq_class>(value_) += rhs.as_rational();
  } else {
    std::get<Fixed>(value_).mantissa += rhs.mantissa();
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  check_compatible(rhs);
  if (is_rational()) {
    std::get<mpq_class>(value_) -= rhs.as_rational();
  } else {
    std::get<Fixed>(value_).mantissa -= rhs.mantissa();
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  check_compatible(rhs);
  if (is_rational()) {
    std::get<mpq_class>(value_) *= rhs.as_rational();
  } else {
    Fixed& f = std::get<Fixed>(value_);
    mpz_class prod = f.mantissa * rhs.mantissa();
    f.mantissa = round_shift(prod, f.bits);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  check_compatible(rhs);
  if (rhs.is_zero()) throw std::domain_error("division by zero");
  if (is_rational()) {
    std::get<mpq_class>(value_) /= rhs.as_rational();
  } else {
    Fixed& f = std::get<Fixed>(value_);
    mpz_class num = f.mantissa;
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(f.bits));
    mpz_class den = rhs.mantissa();
    if (den < 0) {
      num = -num;
      den = -den;
    }
    f.mantissa = round_div(num, den);
  }
  return *this;
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  a.check_compatible(b);
  int c = a.is_rational() ? cmp(a.as_rational(), b.as_rational()) : cmp(a.mantissa(), b.mantissa());
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool operator==(const Scalar& a, const Scalar& b) { return (a <=> b) == 0; }

int Scalar::sign() const {
  return is_rational() ? sgn(as_rational()) : sgn(mantissa());
}

mpz_class Scalar::floor() const {
  mpz_class r;
  if (is_rational()) {
    const mpq_class& q = as_rational();
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  } else {
    const Fixed& f = std::get<Fixed>(value_);
    mpz_fdiv_q_2exp(r.get_mpz_t(), f.mantissa.get_mpz_t(), static_cast<mp_bitcnt_t>(f.bits));
  }
  return r;
}

double Scalar::to_double() const {
  if (is_rational()) return as_rational().get_d();
  const Fixed& f = std::get<Fixed>(value_);
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, f.mantissa.get_mpz_t());
  return std::ldexp(d, static_cast<int>(exp - f.bits));
}

Scalar Scalar::to_fixed(int bits) const {
  if (is_rational()) return fixed_from_mantissa(rational_to_mantissa(as_rational(), bits), bits);
  const Fixed& f = std::get<Fixed>(value_);
  return fixed_from_mantissa(round_shift(f.mantissa, f.bits - bits), bits);
}

Scalar rebase(const Scalar& s, const Scalar& proto) {
  if (s.same_backend(proto)) return s;
  if (proto.is_rational()) return Scalar::from_rational(s.exact());
  return s.to_fixed(proto.precision_bits());
}

double unit_to_double(const Scalar& x) {
  mpz_class scaled;
  if (x.is_rational()) {
    const mpq_class& q = x.as_rational();
    mpz_class num = q.get_num();
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), 53);
    mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
  } else {
    const int shift = x.precision_bits() - 53;
    if (shift >= 0) {
      mpz_fdiv_q_2exp(scaled.get_mpz_t(), x.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    } else {
      mpz_mul_2exp(scaled.get_mpz_t(), x.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    }
  }
  return std::ldexp(scaled.get_d(), -53);
}

Scalar mod_one(const Scalar& s) {
  if (s.is_rational()) {
    const mpq_class& q = s.as_rational();
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Scalar::rational(r, q.get_den());
  }
  mpz_class r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), s.mantissa().get_mpz_t(),
                  static_cast<mp_bitcnt_t>(s.precision_bits()));
  return Scalar::fixed_from_mantissa(std::move(r), s.precision_bits());
}

Scalar tolerance_for(const Scalar& proto) {
  if (proto.is_rational()) return Scalar::rational(0);
  int bits = proto.precision_bits();
  return Scalar::fixed_from_mantissa(pow2(16), bits);
}

Scalar tolerance(const NumericsConfig& config) {
  if (config.backend == Backend::rational) return Scalar::rational(0);
  return Scalar::fixed_from_mantissa(pow2(16), config.precision_bits);
}

bool within(const Scalar& a, const Scalar& b, const Scalar& tol) {
  return (a - b).abs() <= tol;
}

Scalar circle_distance(const Scalar& a, const Scalar& b) {
  Scalar d = mod_one(a - b);
  Scalar other = Scalar::like(d, 1) - d;
  return d < other ? d : other;
}

Scalar sqrt_fixed(const Scalar& s, int bits) {
  if (s.sign() < 0) throw std::domain_error("square root of a negative scalar");
  // floor(sqrt(v * 2^(2 bits))) = floor(sqrt(v) * 2^bits)
  mpq_class v = s.exact();
  mpz_class num = v.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * bits));
  mpz_class scaled;
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), v.get_den_mpz_t());
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  return Scalar::fixed_from_mantissa(std::move(root), bits);
}

Scalar parse_scalar(std::string_view text, const NumericsConfig& config) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty scalar");
  mpq_class q;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    mpz_class den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    q = mpq_class(num, den);
    q.canonicalize();
  } else {
    q = parse_decimal(text);
  }
  return Scalar::from_ratio(q, config);
}

std::string format_scalar(const Scalar& s) {
  if (s.is_rational()) {
    const mpq_class& q = s.as_rational();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
  }
  const int bits = s.precision_bits();
  const auto digits = static_cast<unsigned long>(std::ceil(bits * std::log10(2.0)));
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, digits);
  mpz_class magnitude = abs(s.mantissa());
  mpz_class scaled = round_shift(magnitude * ten_pow, bits);
  mpz_class int_part, frac_part;
  mpz_fdiv_qr(int_part.get_mpz_t(), frac_part.get_mpz_t(), scaled.get_mpz_t(), ten_pow.get_mpz_t());
  std::string frac = frac_part.get_str();
  frac.insert(0, digits - frac.size(), '0');
  std::string out = s.sign() < 0 ? "-" : "";
  out += int_part.get_str();
  out += '.';
  out += frac;
  return out;
}

Scalar golden_conjugate(int bits) {
  constexpr int guard = 8;
  mpz_class five = 5;
  mpz_mul_2exp(five.get_mpz_t(), five.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * (bits + guard)));
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), five.get_mpz_t());
  mpz_class m = root - pow2(bits + guard);
  return Scalar::fixed_from_mantissa(round_shift(m, guard + 1), bits);
}

Scalar sqrt_two(int bits) { return sqrt_fixed(Scalar::rational(2), bits); }

}  // namespace ietx
