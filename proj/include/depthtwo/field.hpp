#pragma once

// Exact scalar fields: the rationals (GMP backed) and prime fields F_p.
//
// Both types are regular value types with the usual arithmetic operators.
// A prime-field element carries its modulus; combining elements of two
// different prime fields throws FieldMismatch.  Constructing an F_p element
// from an integer reads the modulus from the innermost active
// ModP::Context on the current thread (the same model as NTL's ZZ_p).

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace depthtwo {

class FieldMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) : q_(num, den) {
    if (den == 0) throw std::domain_error("zero denominator");
    q_.canonicalize();
  }
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Accepts "n", "-n", "p/q" (any sign placement on p).
  static Rational parse(std::string_view text) {
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) throw ParseError("empty scalar");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("malformed rational '" + s + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    q.canonicalize();
    return Rational(std::move(q));
  }

  const mpq_class& value() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }

  Rational inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rational(mpq_class(1) / q_);
  }

  std::string to_string() const { return q_.get_str(10); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }

 private:
  mpq_class q_;
};

class ModP {
 public:
  /// Largest admissible modulus; keeps products inside 64 bits.
  static constexpr std::uint64_t kMaxModulus = (std::uint64_t{1} << 31) - 1;

  /// Installs a prime modulus for the lifetime of the object (thread local, nestable).
  class Context {
   public:
    explicit Context(std::uint64_t p) : previous_(current()) {
      if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
      if (p > kMaxModulus) throw std::invalid_argument("modulus too large");
      current() = p;
    }
    ~Context() { current() = previous_; }
    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;

   private:
    std::uint64_t previous_;
  };

  static std::uint64_t active_modulus() {
    if (current() == 0) throw std::logic_error("no prime field context is active");
    return current();
  }

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  ModP() : value_(0), modulus_(active_modulus()) {}
  ModP(long v) : modulus_(active_modulus()) { value_ = reduce(v, modulus_); }  // NOLINT
  ModP(std::uint64_t v, std::uint64_t p) : value_(v % p), modulus_(p) {}

  /// Integers and "p/q" fractions are mapped through the canonical map Z[1/q] -> F_p.
  static ModP parse(std::string_view text) {
    const Rational q = Rational::parse(text);
    return from_rational(q);
  }

  static ModP from_rational(const Rational& q) {
    const std::uint64_t p = active_modulus();
    mpz_class num = q.value().get_num() % mpz_class(static_cast<unsigned long>(p));
    mpz_class den = q.value().get_den() % mpz_class(static_cast<unsigned long>(p));
    if (num < 0) num += static_cast<unsigned long>(p);
    if (den == 0) throw ParseError("denominator of " + q.to_string() + " vanishes mod " + std::to_string(p));
    ModP n(num.get_ui(), p);
    ModP d(den.get_ui(), p);
    return n / d;
  }

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  ModP inverse() const {
    if (value_ == 0) throw std::domain_error("inverse of zero");
    return ModP(power(value_, modulus_ - 2, modulus_), modulus_);
  }

  std::string to_string() const { return std::to_string(value_); }

  ModP& operator+=(const ModP& o) {
    check(o);
    value_ += o.value_;
    if (value_ >= modulus_) value_ -= modulus_;
    return *this;
  }
  ModP& operator-=(const ModP& o) {
    check(o);
    value_ = value_ >= o.value_ ? value_ - o.value_ : value_ + modulus_ - o.value_;
    return *this;
  }
  ModP& operator*=(const ModP& o) {
    check(o);
    value_ = (value_ * o.value_) % modulus_;
    return *this;
  }
  ModP& operator/=(const ModP& o) {
    check(o);
    return *this *= o.inverse();
  }

  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
  friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
  friend ModP operator-(const ModP& a) { return ModP(a.value_ == 0 ? 0 : a.modulus_ - a.value_, a.modulus_); }
  friend bool operator==(const ModP& a, const ModP& b) {
    a.check(b);
    return a.value_ == b.value_;
  }
  friend bool operator!=(const ModP& a, const ModP& b) { return !(a == b); }

 private:
  static std::uint64_t& current() {
    thread_local std::uint64_t p = 0;
    return p;
  }
  static std::uint64_t reduce(long v, std::uint64_t p) {
    const long m = static_cast<long>(p);
    long r = v % m;
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
  }
  static std::uint64_t power(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }
  void check(const ModP& o) const {
    if (modulus_ != o.modulus_)
      throw FieldMismatch("F_" + std::to_string(modulus_) + " element combined with F_" + std::to_string(o.modulus_) +
                          " element");
  }

  std::uint64_t value_;
  std::uint64_t modulus_;
};

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static std::uint64_t characteristic() { return 0; }
  static std::string name() { return "q"; }
  static Rational parse(std::string_view s) { return Rational::parse(s); }
  static Rational from_rational(const Rational& q) { return q; }
};

template <>
struct FieldTraits<ModP> {
  static std::uint64_t characteristic() { return ModP::active_modulus(); }
  static std::string name() { return "fp:" + std::to_string(ModP::active_modulus()); }
  static ModP parse(std::string_view s) { return ModP::parse(s); }
  static ModP from_rational(const Rational& q) { return ModP::from_rational(q); }
};

template <class F>
concept ExactField = requires(const F& a, const F& b) {
  { a + b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a.inverse() } -> std::convertible_to<F>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.to_string() } -> std::convertible_to<std::string>;
  { FieldTraits<F>::characteristic() } -> std::convertible_to<std::uint64_t>;
};

}  // namespace depthtwo
