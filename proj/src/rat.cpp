#include "dpnppl/rat.hpp"

#include <cctype>

#include "dpnppl/error.hpp"

namespace dpnppl {

using boost::multiprecision::cpp_int;

Rat::Rat(long long num, long long den) {
  if (den == 0) fail(ErrorKind::MalformedDistribution, "zero denominator");
  v_ = Backend(cpp_int(num), cpp_int(den));
}

Rat Rat::fromUnsigned(std::uint64_t n) { return Rat(Backend(cpp_int(n))); }

Rat Rat::unitPow2(unsigned exponent) {
  cpp_int den = cpp_int(1) << exponent;
  return Rat(Backend(cpp_int(1), den));
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.isZero()) fail(ErrorKind::MalformedDistribution, "division by zero");
  v_ /= o.v_;
  return *this;
}

bool Rat::isInteger() const { return denominator(v_) == 1; }

long long Rat::asInt() const {
  if (!isInteger())
    fail(ErrorKind::MalformedDistribution, "expected integer, got " + str());
  cpp_int n = numerator(v_);
  if (n > (std::numeric_limits<long long>::max)() ||
      n < (std::numeric_limits<long long>::min)())
    fail(ErrorKind::MalformedDistribution, "integer out of range: " + str());
  return n.convert_to<long long>();
}

std::string Rat::str() const {
  std::string s = numerator(v_).str();
  if (denominator(v_) != 1) s += "/" + denominator(v_).str();
  return s;
}

double Rat::approx() const { return v_.convert_to<double>(); }

Rat Rat::parse(std::string_view text) {
  auto bad = [&]() {
    fail(ErrorKind::ParseError, "bad rational literal '" + std::string(text) + "'");
  };
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    i++;
  }
  auto digits = [&](std::string& out) {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      out += text[i];
      i++;
    }
    if (i == start) bad();
  };
  std::string intPart;
  digits(intPart);
  cpp_int num(intPart);
  cpp_int den(1);
  if (i < text.size() && text[i] == '.') {
    i++;
    std::string frac;
    digits(frac);
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
  } else if (i < text.size() && text[i] == '/') {
    i++;
    std::string denPart;
    digits(denPart);
    den = cpp_int(denPart);
    if (den == 0) bad();
  }
  if (i != text.size()) bad();
  if (neg) num = -num;
  return Rat(Backend(num, den));
}

}  // namespace dpnppl
