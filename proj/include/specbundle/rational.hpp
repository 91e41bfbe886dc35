#pragma once

#include <gmpxx.h>

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "specbundle/errors.hpp"

namespace specbundle {

using Rat = mpq_class;

inline Rat rat_from_string(const std::string& text) {
  Rat r;
  if (r.set_str(text, 10) != 0)
    throw InvalidInput("not a rational: '" + text + "'");
  if (r.get_den() == 0) throw InvalidInput("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

/// Reduced "p/q", or just "p" when q = 1.
inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

/// mpq_class(n, d) does not reduce; this does.
inline Rat make_rat(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

struct QComplex {
  Rat re;
  Rat im;

  QComplex() = default;
  QComplex(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  explicit QComplex(long r) : re(r), im(0) {}

  bool operator==(const QComplex&) const = default;

  QComplex operator+(const QComplex& o) const { return {re + o.re, im + o.im}; }
  QComplex operator-(const QComplex& o) const { return {re - o.re, im - o.im}; }
  QComplex operator*(const QComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  QComplex operator*(const Rat& s) const { return {re * s, im * s}; }
  QComplex operator/(const Rat& s) const { return {re / s, im / s}; }
};

/// A function K -> Q(i), one value per state.
using QFunction = std::vector<QComplex>;

/// The unit complex number e^{2*pi*i*num/den}, kept reduced with
/// 0 <= num < den. Multiplication of values is addition of angles.
struct RationalAngle {
  long num = 0;
  long den = 1;

  RationalAngle() = default;
  RationalAngle(long n, long d) {
    if (d <= 0) throw InvalidInput("angle denominator must be positive");
    n %= d;
    if (n < 0) n += d;
    long g = std::gcd(n, d);
    num = n / g;
    den = d / g;
  }

  bool operator==(const RationalAngle&) const = default;

  RationalAngle operator+(const RationalAngle& o) const {
    long d = std::lcm(den, o.den);
    return RationalAngle(num * (d / den) + o.num * (d / o.den), d);
  }
  RationalAngle operator-() const { return RationalAngle(-num, den); }
  RationalAngle operator-(const RationalAngle& o) const {
    return *this + (-o);
  }
  /// n-fold angle sum, i.e. the value raised to the nth power.
  RationalAngle times(long n) const {
    long r = ((n % den) * (num % den)) % den;
    return RationalAngle(r, den);
  }
  bool is_one() const { return num == 0; }
  /// Order of the generated subgroup of Q/Z.
  long subgroup_order() const { return den; }
};

/// Eigenfunction values: each entry is zero or a root of unity.
using CyclotomicValue = std::optional<RationalAngle>;  // nullopt = 0
using CyclotomicFunction = std::vector<CyclotomicValue>;

/// Exact probability measure on the states of a system.
struct RationalMeasure {
  std::vector<Rat> weights;

  RationalMeasure() = default;
  explicit RationalMeasure(std::vector<Rat> w) : weights(std::move(w)) {
    validate();
  }

  void validate() const {
    Rat total = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] < 0)
        throw InvalidInput("negative weight at index " + std::to_string(i));
      total += weights[i];
    }
    if (total != 1) throw InvalidInput("weights must sum to exactly 1");
  }

  static RationalMeasure dirac(std::size_t n, std::size_t at) {
    std::vector<Rat> w(n, Rat(0));
    w.at(at) = 1;
    return RationalMeasure(std::move(w));
  }

  bool operator==(const RationalMeasure&) const = default;
};

/// The subgroup {k/m mod 1 : 0 <= k < m} of Q/Z, i.e. the point spectrum
/// of a minimal m-cycle.
struct CyclicSpectrum {
  long order = 1;

  CyclicSpectrum() = default;
  explicit CyclicSpectrum(long m) : order(m) {
    if (m < 1) throw InvalidInput("spectrum order must be >= 1");
  }
  bool operator==(const CyclicSpectrum&) const = default;
  auto operator<=>(const CyclicSpectrum&) const = default;
};

}  // namespace specbundle
