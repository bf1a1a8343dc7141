#include "cachelab/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace cachelab {

namespace {

bool is_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  // trim
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.erase(s.begin());
  }

  Rational result;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den))
      throw std::invalid_argument("bad rational literal: " + text);
    BigInt n(num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    result = Rational(n, d);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::string ip = dot == 0 ? "0" : s.substr(0, dot);
    const std::string fp = s.substr(dot + 1);
    if (!is_digits(ip) || (!fp.empty() && !is_digits(fp)))
      throw std::invalid_argument("bad decimal literal: " + text);
    BigInt scale = 1;
    for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
    BigInt n = BigInt(ip) * scale + (fp.empty() ? BigInt(0) : BigInt(fp));
    result = Rational(n, scale);
  } else {
    if (!is_digits(s)) throw std::invalid_argument("bad integer literal: " + text);
    result = Rational(BigInt(s), 1);
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string to_fraction_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

BigInt floor_rational(const Rational& value) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
  return q;
}

BigInt ceil_rational(const Rational& value) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
  return q;
}

BigInt round_half_down(const Rational& value) {
  // ceil(x - 1/2) realizes "nearest, ties toward floor".
  return ceil_rational(value - Rational(1, 2));
}

Rational rational_pow(const Rational& base, unsigned exp) {
  Rational result(1);
  Rational b = base;
  unsigned e = exp;
  while (e > 0) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  result.canonicalize();
  return result;
}

std::int64_t to_int64(const BigInt& value) {
  if (!value.fits_slong_p()) throw std::overflow_error("BigInt does not fit int64");
  return static_cast<std::int64_t>(value.get_si());
}

std::string to_decimal_string(const Rational& value, int significant_digits) {
  if (significant_digits < 1) significant_digits = 1;
  if (value == 0) return "0";
  const bool negative = value < 0;
  Rational v = negative ? Rational(-value) : value;
  v.canonicalize();

  BigInt num = v.get_num();
  BigInt den = v.get_den();

  // Find e with 10^e <= v < 10^(e+1).
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
  auto cmp_pow10 = [&](long p) {
    // compare v against 10^p
    BigInt lhs = num, rhs = den;
    if (p >= 0) {
      BigInt t;
      mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(p));
      rhs *= t;
    } else {
      BigInt t;
      mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(-p));
      lhs *= t;
    }
    return cmp(lhs, rhs);
  };
  while (cmp_pow10(e) < 0) --e;
  while (cmp_pow10(e + 1) >= 0) ++e;

  // m = round_half_even(v * 10^(sig-1-e)) has exactly `sig` digits.
  long shift = significant_digits - 1 - e;
  BigInt scaled_num = num, scaled_den = den;
  {
    BigInt t;
    if (shift >= 0) {
      mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(shift));
      scaled_num *= t;
    } else {
      mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
      scaled_den *= t;
    }
  }
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
  const int half = cmp(r * 2, scaled_den);
  if (half > 0 || (half == 0 && mpz_odd_p(q.get_mpz_t())))
    q += 1;
  std::string digits = q.get_str();
  if (static_cast<int>(digits.size()) > significant_digits) {
    // rounding carried into a new leading digit (e.g. 999.96 -> 1000)
    ++e;
    digits.pop_back();
  }

  // strip trailing zeros but keep at least one digit
  size_t last = digits.find_last_not_of('0');
  digits.erase(last + 1);

  std::string out;
  if (e >= 0 && e < significant_digits + 4) {
    if (static_cast<long>(digits.size()) <= e) {
      digits.append(static_cast<size_t>(e + 1 - static_cast<long>(digits.size())), '0');
      out = digits;
    } else {
      out = digits.substr(0, static_cast<size_t>(e + 1)) + "." +
            digits.substr(static_cast<size_t>(e + 1));
      if (out.back() == '.') out.pop_back();
    }
  } else if (e < 0 && e >= -5) {
    out = "0." + std::string(static_cast<size_t>(-e - 1), '0') + digits;
  } else {
    out = digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(e);
  }
  return negative ? "-" + out : out;
}

}  // namespace cachelab
