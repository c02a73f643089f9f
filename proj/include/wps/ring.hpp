#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace wps {

enum class Parity : int { Even = 0, Odd = 1 };

inline Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>((static_cast<int>(a) + static_cast<int>(b)) & 1);
}

/// A fixed list of commuting (even) variables and anticommuting (odd)
/// generators.  Generator order is significant: it fixes the canonical sort
/// of odd factors inside a monomial, and therefore all Koszul signs.
///
/// "Geometric" generators (chart or homogeneous coordinates) are listed
/// before constant generators of the coefficient ring (deformation or test
/// parameters); vector fields and forms only carry components along the
/// geometric ones.
class RingContext {
public:
  struct EvenVar {
    std::string name;
    bool laurent = false; // negative exponents permitted
    bool operator==(const EvenVar&) const = default;
  };

  std::vector<EvenVar> even;
  std::vector<std::string> odd;
  int geomEven = 0; // evens [0, geomEven) are geometric
  int geomOdd = 0;  // odds  [0, geomOdd)  are geometric

  bool operator==(const RingContext& o) const {
    return even == o.even && odd == o.odd && geomEven == o.geomEven &&
           geomOdd == o.geomOdd;
  }

  int evenIndex(const std::string& n) const {
    for (size_t i = 0; i < even.size(); ++i)
      if (even[i].name == n) return static_cast<int>(i);
    return -1;
  }
  int oddIndex(const std::string& n) const {
    for (size_t i = 0; i < odd.size(); ++i)
      if (odd[i] == n) return static_cast<int>(i);
    return -1;
  }
  bool hasGen(const std::string& n) const {
    return evenIndex(n) >= 0 || oddIndex(n) >= 0;
  }
};

using RingPtr = std::shared_ptr<const RingContext>;

class RingBuilder {
public:
  RingBuilder& even(std::string name, bool laurent = false) {
    ctx_.even.push_back({std::move(name), laurent});
    return *this;
  }
  RingBuilder& odd(std::string name) {
    ctx_.odd.push_back(std::move(name));
    return *this;
  }
  /// Marks everything added so far as geometric.
  RingBuilder& endGeometric() {
    ctx_.geomEven = static_cast<int>(ctx_.even.size());
    ctx_.geomOdd = static_cast<int>(ctx_.odd.size());
    return *this;
  }
  RingPtr build() {
    if (ctx_.odd.size() > 63)
      throw std::invalid_argument("too many odd generators");
    for (size_t i = 0; i < ctx_.even.size(); ++i)
      for (size_t j = i + 1; j < ctx_.even.size(); ++j)
        if (ctx_.even[i].name == ctx_.even[j].name)
          throw std::invalid_argument("duplicate even variable");
    for (size_t i = 0; i < ctx_.odd.size(); ++i) {
      if (ctx_.evenIndex(ctx_.odd[i]) >= 0)
        throw std::invalid_argument("generator both even and odd");
      for (size_t j = i + 1; j < ctx_.odd.size(); ++j)
        if (ctx_.odd[i] == ctx_.odd[j])
          throw std::invalid_argument("duplicate odd generator");
    }
    return std::make_shared<RingContext>(ctx_);
  }

private:
  RingContext ctx_;
};

inline void requireSameRing(const RingPtr& a, const RingPtr& b) {
  if (a == b) return;
  if (!a || !b || !(*a == *b))
    throw std::invalid_argument("mismatched ring contexts");
}

} // namespace wps
