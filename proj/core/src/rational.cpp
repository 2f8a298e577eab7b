#include "anb/rational.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace anb {

std::string to_fraction_string(const ExactCount& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal_string(const ExactCount& value, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, value.get_d());
  return buf;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  mpz_class out(std::string(s), 10);
  return negative ? mpz_class(-out) : out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

ExactCount parse_exact_count(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(trim(s.substr(0, slash)));
    mpz_class den = parse_integer(trim(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    ExactCount out(num, den);
    out.canonicalize();
    return out;
  }

  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    bool negative = false;
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
      negative = whole.front() == '-';
      whole.remove_prefix(1);
    }
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw std::invalid_argument("malformed decimal '" + std::string(s) + "'");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    ExactCount out(negative ? mpz_class(-num) : num, scale);
    out.canonicalize();
    return out;
  }

  return ExactCount(parse_integer(s));
}

ExactSum& ExactSum::operator+=(const ExactCount& v) {
  const mpz_srcptr d = v.get_den_mpz_t();
  if (!mpz_divisible_p(den_.get_mpz_t(), d)) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), den_.get_mpz_t(), d);
    mpz_divexact(scale_.get_mpz_t(), d, g.get_mpz_t());
    num_ *= scale_;
    den_ *= scale_;
  }
  mpz_divexact(scale_.get_mpz_t(), den_.get_mpz_t(), d);
  mpz_addmul(num_.get_mpz_t(), v.get_num_mpz_t(), scale_.get_mpz_t());
  return *this;
}

ExactCount ExactSum::value() const {
  ExactCount out(num_, den_);
  out.canonicalize();
  return out;
}

}  // namespace anb
