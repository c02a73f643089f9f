#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wps/rational.hpp"
#include "wps/ring.hpp"

namespace wps {

/// Canonical monomial: sorted even exponents (no zeros) and a bitmask of odd
/// generators in ring order.  Any sign produced by sorting odd factors is
/// absorbed into the coefficient by the arithmetic below, never stored here.
struct Monomial {
  std::vector<std::pair<int, int>> evenExp; // (even var index, exponent != 0)
  std::uint64_t oddMask = 0;

  auto operator<=>(const Monomial&) const = default;

  int exponentOf(int evenIdx) const {
    for (auto& [v, e] : evenExp)
      if (v == evenIdx) return e;
    return 0;
  }
  bool hasOdd(int oddIdx) const { return (oddMask >> oddIdx) & 1; }
  Parity parity() const;
};

/// Sign accumulated when concatenating two sorted odd blocks a, b into one
/// sorted block; zero-overlap is a precondition.
int koszulMergeSign(std::uint64_t a, std::uint64_t b);

struct WeightedDegree {
  std::map<std::string, long> weights; // absent generators weigh 0
};

class SuperPoly {
public:
  SuperPoly() = default;
  explicit SuperPoly(RingPtr ring) : ring_(std::move(ring)) {}

  static SuperPoly zero(RingPtr ring) { return SuperPoly(std::move(ring)); }
  static SuperPoly constant(RingPtr ring, const Rat& c);
  static SuperPoly gen(const RingPtr& ring, const std::string& name);
  static SuperPoly evenVar(RingPtr ring, int idx, int exp = 1);
  static SuperPoly oddGen(RingPtr ring, int idx);

  const RingPtr& ring() const { return ring_; }
  const std::map<Monomial, Rat>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  size_t termCount() const { return terms_.size(); }

  SuperPoly operator-() const;
  SuperPoly operator+(const SuperPoly& o) const;
  SuperPoly operator-(const SuperPoly& o) const;
  SuperPoly operator*(const SuperPoly& o) const;
  SuperPoly& operator+=(const SuperPoly& o) { return *this = *this + o; }
  SuperPoly& operator-=(const SuperPoly& o) { return *this = *this - o; }
  SuperPoly& operator*=(const SuperPoly& o) { return *this = *this * o; }
  bool operator==(const SuperPoly& o) const;

  SuperPoly scaled(const Rat& c) const;
  /// p^e.  Negative e requires a unit (see inverse()).
  SuperPoly pow(long e) const;

  /// Terms free of odd generators.  A poly is a unit in the chart ring iff
  /// its body is a single term whose variables are all Laurent-invertible.
  SuperPoly body() const;
  /// Terms containing at least one odd generator (the nilpotent part here).
  SuperPoly soul() const { return *this - body(); }
  bool isUnit() const;
  SuperPoly inverse() const; // throws if not a unit

  void addTerm(const Monomial& m, const Rat& c);
  Rat coefficientOf(const Monomial& m) const;

  /// Left derivative: the differentiated generator is pulled out past the
  /// odd factors standing before it.
  SuperPoly derivativeEven(int evenIdx) const;
  SuperPoly derivativeOdd(int oddIdx) const;
  SuperPoly derivative(const std::string& genName) const;

  /// Parity if every term agrees (zero counts as even), nullopt otherwise.
  std::optional<Parity> parity() const;
  bool isHomogeneousParity(Parity p) const;

  /// Common weighted degree of all terms, nullopt if inhomogeneous or zero.
  std::optional<long> weightedDegree(const WeightedDegree& w) const;

  /// Maximal/minimal exponent of one even variable across all terms.
  int maxExponent(int evenIdx) const;
  int minExponent(int evenIdx) const;

  /// Sets the listed odd generators to zero (drops their terms).
  SuperPoly dropOdd(const std::vector<int>& oddIdxs) const;
  /// Drops every term containing a non-geometric (constant) odd generator.
  SuperPoly constantOddFreePart() const;

  std::string str() const;

private:
  RingPtr ring_;
  std::map<Monomial, Rat> terms_;
};

SuperPoly operator*(const Rat& c, const SuperPoly& p);

} // namespace wps
