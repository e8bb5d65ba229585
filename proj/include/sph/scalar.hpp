// Exact scalar types for the engine: arbitrary-precision rationals and a
// prime field with a per-scenario modulus. No floating point anywhere.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

namespace sph {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Element of F_p. The modulus is a process-wide (per-thread) setting chosen
/// once per scenario through FieldScope; mixing moduli is undefined.
class Fp {
 public:
  Fp() = default;
  Fp(long long v) : v_(reduce(v)) {}  // NOLINT: implicit like Rational(int)

  static std::uint32_t modulus() { return p_; }
  static void set_modulus(std::uint32_t p);

  std::uint32_t value() const { return v_; }

  friend Fp operator+(Fp a, Fp b) { return from_raw((std::uint64_t(a.v_) + b.v_) % p_); }
  friend Fp operator-(Fp a, Fp b) { return from_raw((std::uint64_t(a.v_) + p_ - b.v_) % p_); }
  friend Fp operator*(Fp a, Fp b) { return from_raw(std::uint64_t(a.v_) * b.v_ % p_); }
  friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
  Fp operator-() const { return from_raw(v_ == 0 ? 0 : p_ - v_); }
  Fp& operator+=(Fp o) { return *this = *this + o; }
  Fp& operator-=(Fp o) { return *this = *this - o; }
  Fp& operator*=(Fp o) { return *this = *this * o; }
  Fp& operator/=(Fp o) { return *this = *this / o; }
  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
  friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

  Fp inverse() const {
    if (v_ == 0) throw std::domain_error("Fp: inverse of zero");
    // Fermat
    std::uint64_t r = 1, b = v_, e = p_ - 2;
    while (e) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return from_raw(r);
  }

 private:
  static Fp from_raw(std::uint64_t v) {
    Fp r;
    r.v_ = static_cast<std::uint32_t>(v);
    return r;
  }
  static std::uint32_t reduce(long long v) {
    long long m = v % static_cast<long long>(p_);
    if (m < 0) m += p_;
    return static_cast<std::uint32_t>(m);
  }

  std::uint32_t v_ = 0;
  static inline thread_local std::uint32_t p_ = 32003;
};

inline bool is_probable_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

inline void Fp::set_modulus(std::uint32_t p) {
  if (p >= (1u << 31) || !is_probable_prime(p))
    throw std::invalid_argument("Fp: modulus must be a prime below 2^31");
  p_ = p;
}

/// RAII guard for the F_p modulus.
class FieldScope {
 public:
  explicit FieldScope(std::uint32_t p) : saved_(Fp::modulus()) { Fp::set_modulus(p); }
  ~FieldScope() { Fp::set_modulus(saved_); }
  FieldScope(const FieldScope&) = delete;
  FieldScope& operator=(const FieldScope&) = delete;

 private:
  std::uint32_t saved_;
};

// Uniform helpers so templated code never depends on the concrete field.

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const Fp& x) { return x.value() == 0; }

template <typename S>
S frac(long long num, long long den = 1);

template <>
inline Rational frac<Rational>(long long num, long long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  return Rational(num) / Rational(den);
}

template <>
inline Fp frac<Fp>(long long num, long long den) {
  return Fp(num) / Fp(den);
}

inline std::string to_string(const Rational& x) { return x.str(); }
inline std::string to_string(const Fp& x) { return std::to_string(x.value()); }

/// Numerator/denominator of an exact scalar as 64-bit integers when they fit.
inline std::pair<long long, long long> to_fraction(const Rational& x) {
  BigInt n = boost::multiprecision::numerator(x), d = boost::multiprecision::denominator(x);
  return {n.convert_to<long long>(), d.convert_to<long long>()};
}
inline std::pair<long long, long long> to_fraction(const Fp& x) { return {x.value(), 1}; }

inline int sign_of(long long e) { return (e % 2 == 0) ? 1 : -1; }

template <typename S>
S signed_one(long long exponent) {
  return (exponent % 2 == 0) ? S(1) : S(-1);
}

}  // namespace sph

namespace Eigen {
template <>
struct NumTraits<sph::Fp> : GenericNumTraits<sph::Fp> {
  using Real = sph::Fp;
  using NonInteger = sph::Fp;
  using Nested = sph::Fp;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 0,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
