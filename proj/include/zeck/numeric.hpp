#pragma once

// Numeric foundation: exact integers, extended-precision reals and the
// conversions between them that the rest of the library relies on.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zeck {

using BigInt = boost::multiprecision::mpz_int;
using BigRational = boost::multiprecision::mpq_rational;
using ExtReal = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 256;

namespace detail {

inline unsigned read_precision_env() {
  const char* raw = std::getenv("ZB_PRECISION_BITS");
  if (raw == nullptr || *raw == '\0') return kDefaultPrecisionBits;
  char* end = nullptr;
  const unsigned long bits = std::strtoul(raw, &end, 10);
  if (end == raw || *end != '\0' || bits < 64 || bits > (1UL << 20)) {
    throw std::invalid_argument("ZB_PRECISION_BITS: expected an integer in [64, 1048576], got '" +
                                std::string(raw) + "'");
  }
  return static_cast<unsigned>(bits);
}

inline unsigned& precision_bits_storage() {
  static unsigned bits = 0;
  return bits;
}

}  // namespace detail

/// Binary precision used for every ExtReal value created by the library.
/// Fixed for the whole process on first use (ZB_PRECISION_BITS, default 256).
inline unsigned ext_precision_bits() {
  static std::once_flag once;
  std::call_once(once, [] {
    const unsigned bits = detail::read_precision_env();
    detail::precision_bits_storage() = bits;
    // mpfr_float precision is expressed in decimal digits.
    const auto digits10 = static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
    ExtReal::default_precision(digits10);
  });
  return detail::precision_bits_storage();
}

inline ExtReal ext(double v) {
  ext_precision_bits();
  return ExtReal(v);
}

inline ExtReal ext(const BigInt& v) {
  ext_precision_bits();
  return ExtReal(v);
}

inline ExtReal ext_pi() {
  ext_precision_bits();
  ExtReal pi;
  mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
  return pi;
}

/// {n·π} with π carried to 64 bits beyond the working precision, so the
/// fractional part keeps at least the working precision for n < 2^64.
inline ExtReal frac_n_pi(std::uint64_t n) {
  const unsigned bits = ext_precision_bits();
  mpfr_t pi, prod, whole;
  mpfr_init2(pi, bits + 64);
  mpfr_init2(prod, bits + 128);
  mpfr_init2(whole, bits + 128);
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_mul_ui(prod, pi, static_cast<unsigned long>(n), MPFR_RNDN);
  mpfr_frac(whole, prod, MPFR_RNDN);
  ExtReal out;
  mpfr_set(out.backend().data(), whole, MPFR_RNDN);
  mpfr_clear(pi);
  mpfr_clear(prod);
  mpfr_clear(whole);
  return out;
}

namespace detail {

// Evaluates a product/quotient of decimal numbers and named constants into
// `out` at `prec` bits.
inline void eval_real(std::string_view text, mpfr_ptr out, mpfr_prec_t prec) {
  const std::string src(text);
  auto bad = [&](std::string_view tok) {
    return std::invalid_argument("malformed real constant '" + std::string(tok) + "' in '" + src + "'");
  };
  mpfr_t v;
  mpfr_init2(v, prec);
  mpfr_set_prec(out, prec);
  mpfr_set_ui(out, 1, MPFR_RNDN);
  auto atom = [&](std::string_view tok) {
    if (tok == "phi" || tok == "omega") {
      mpfr_sqrt_ui(v, 5, MPFR_RNDN);
      mpfr_add_ui(v, v, 1, MPFR_RNDN);
      mpfr_div_2ui(v, v, 1, MPFR_RNDN);
      if (tok == "omega") mpfr_ui_div(v, 1, v, MPFR_RNDN);
      return;
    }
    if (tok == "sqrt5") { mpfr_sqrt_ui(v, 5, MPFR_RNDN); return; }
    if (tok == "pi") { mpfr_const_pi(v, MPFR_RNDN); return; }
    if (tok == "e") { mpfr_set_ui(v, 1, MPFR_RNDN); mpfr_exp(v, v, MPFR_RNDN); return; }
    bool digit = false, dot = false;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      const char c = tok[i];
      if (c >= '0' && c <= '9') digit = true;
      else if (c == '.' && !dot) dot = true;
      else if (!((c == '-' || c == '+') && i == 0)) throw bad(tok);
    }
    if (!digit) throw bad(tok);
    mpfr_set_str(v, std::string(tok).c_str(), 10, MPFR_RNDN);
  };
  if (text.empty()) {
    mpfr_clear(v);
    throw std::invalid_argument("malformed real constant ''");
  }
  char op = '*';
  std::size_t pos = 0;
  try {
    while (true) {
      const std::size_t next = text.find_first_of("*/", pos);
      std::string_view tok = text.substr(pos, next == std::string_view::npos ? text.size() - pos : next - pos);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      atom(tok);
      if (op == '*') {
        mpfr_mul(out, out, v, MPFR_RNDN);
      } else {
        if (mpfr_zero_p(v)) throw std::domain_error("division by zero in real constant '" + src + "'");
        mpfr_div(out, out, v, MPFR_RNDN);
      }
      if (next == std::string_view::npos) break;
      op = text[next];
      pos = next + 1;
    }
  } catch (...) {
    mpfr_clear(v);
    throw;
  }
  mpfr_clear(v);
}

}  // namespace detail

/// Parses a real constant: a product/quotient of decimal numbers and the
/// names phi, omega (1/phi), sqrt5, pi, e.
/// Examples: "0.5", "89/55", "phi/sqrt5", "1/phi".
inline ExtReal parse_real(std::string_view text) {
  const unsigned bits = ext_precision_bits();
  mpfr_t tmp;
  mpfr_init2(tmp, bits);
  try {
    detail::eval_real(text, tmp, bits);
  } catch (...) {
    mpfr_clear(tmp);
    throw;
  }
  ExtReal out;
  mpfr_set(out.backend().data(), tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return out;
}

inline BigInt parse_bigint(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("malformed integer ''");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
    }
  }
  return BigInt(std::string(text));
}

inline std::size_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
}

/// num/den rounded to double; den > 0.
inline double ratio_to_double(const BigInt& num, const BigInt& den) {
  return BigRational(num, den).convert_to<double>();
}

/// floor(v * x) computed exactly from the binary value of x.
inline BigInt floor_mul(const BigInt& v, const ExtReal& x) {
  BigInt mantissa;
  const long exponent =
      mpfr_get_z_2exp(mantissa.backend().data(), x.backend().data());
  BigInt product = v * mantissa;
  if (exponent >= 0) return product << static_cast<unsigned>(exponent);
  BigInt q;
  mpz_fdiv_q_2exp(q.backend().data(), product.backend().data(), static_cast<unsigned long>(-exponent));
  return q;
}

/// floor(v * {n·π}) with π carried far enough past the width of v that the
/// floor is exact for any v, independent of the working precision.
inline BigInt floor_mul_frac_n_pi(const BigInt& v, std::uint64_t n) {
  const auto bits = static_cast<mpfr_prec_t>(bit_length(v) + 64 + 64 + 64);
  mpfr_t pi, prod;
  mpfr_init2(pi, bits);
  mpfr_init2(prod, bits + 64);
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_mul_ui(prod, pi, static_cast<unsigned long>(n), MPFR_RNDN);
  mpfr_frac(prod, prod, MPFR_RNDN);
  BigInt mantissa;
  const long exponent = mpfr_get_z_2exp(mantissa.backend().data(), prod);
  mpfr_clear(pi);
  mpfr_clear(prod);
  BigInt product = v * mantissa;
  if (exponent >= 0) return product << static_cast<unsigned>(exponent);
  BigInt q;
  mpz_fdiv_q_2exp(q.backend().data(), product.backend().data(), static_cast<unsigned long>(-exponent));
  return q;
}

/// Largest r >= 0 with r^k <= v, for v >= 0 and k >= 1.
inline BigInt floor_root(const BigInt& v, unsigned k) {
  if (v < 0) throw std::domain_error("floor_root of a negative integer");
  BigInt r;
  mpz_root(r.backend().data(), v.backend().data(), k);
  return r;
}

/// Smallest r >= 0 with r^k >= v.
inline BigInt ceil_root(const BigInt& v, unsigned k) {
  if (v <= 0) return BigInt(0);
  BigInt r = floor_root(v, k);
  if (boost::multiprecision::pow(r, k) < v) r += 1;
  return r;
}

/// Fractional part in [0,1).
inline double frac(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = std::nextafter(1.0, 0.0);
  return f;
}

inline ExtReal frac(const ExtReal& x) {
  return x - boost::multiprecision::floor(x);
}

}  // namespace zeck
