#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace dpnppl {

// Exact rational number. Always in canonical form (reduced, positive
// denominator); the underlying boost type maintains that. Floating point
// construction is deliberately deleted: probability arithmetic must stay
// exact, doubles only appear at reporting boundaries via approx().
class Rat {
 public:
  using Backend = boost::multiprecision::cpp_rational;

  Rat() : v_(0) {}
  Rat(int n) : v_(n) {}
  Rat(long long n) : v_(n) {}
  Rat(long long num, long long den);
  Rat(double) = delete;
  Rat(float) = delete;
  explicit Rat(Backend v) : v_(std::move(v)) {}

  static Rat fromUnsigned(std::uint64_t n);
  // 1 / 2^exponent
  static Rat unitPow2(unsigned exponent);
  // Accepts "p/q", integer, and decimal literals, optionally signed.
  static Rat parse(std::string_view text);

  std::string str() const;
  double approx() const;

  bool isZero() const { return v_.is_zero(); }
  int sign() const { return v_.sign(); }
  bool isInteger() const;
  // Throws unless the value is an integer fitting in long long.
  long long asInt() const;

  const Backend& backend() const { return v_; }

  Rat operator-() const { return Rat(Backend(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

 private:
  Backend v_;
};

}  // namespace dpnppl
