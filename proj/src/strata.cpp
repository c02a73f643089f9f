#include "wps/strata.hpp"

#include <bit>
#include <iterator>
#include <stdexcept>

namespace wps {

namespace {

/// The big ring must extend the plain ring by odd constant generators only:
/// identical even variables, identical geometric odd generators, and no even
/// constants.  Monomials of the plain ring are then valid monomials of the
/// big ring verbatim (indices and odd bits align).
void checkAligned(const RingPtr& big, const RingPtr& plain) {
  if (!big || !plain) throw std::invalid_argument("null ring context");
  if (plain->geomEven != static_cast<int>(plain->even.size()) ||
      plain->geomOdd != static_cast<int>(plain->odd.size()))
    throw std::invalid_argument("plain ring carries constant generators");
  if (big->geomEven != static_cast<int>(big->even.size()))
    throw std::invalid_argument("even constant generators are not supported");
  if (big->even != plain->even || big->geomOdd != plain->geomOdd)
    throw std::invalid_argument("rings disagree on geometric generators");
  for (int i = 0; i < big->geomOdd; ++i)
    if (big->odd[i] != plain->odd[i])
      throw std::invalid_argument("rings disagree on geometric generators");
}

std::uint64_t geometricBits(const RingPtr& ring) {
  int g = ring->geomOdd;
  return g >= 64 ? ~0ull : (1ull << g) - 1;
}

}  // namespace

int constantDegree(std::uint64_t mask) { return std::popcount(mask); }

SuperPoly constantMonomial(const RingPtr& big, std::uint64_t mask) {
  if (!big) throw std::invalid_argument("null ring context");
  if (mask & geometricBits(big))
    throw std::invalid_argument("mask contains geometric generators");
  if (big->odd.size() < 64 && (mask >> big->odd.size()) != 0)
    throw std::invalid_argument("mask exceeds the ring's odd generators");
  SuperPoly p(big);
  Monomial m;
  m.oddMask = mask;
  p.addTerm(m, Rat(1));
  return p;
}

std::map<std::uint64_t, SuperPoly> constantStrata(const SuperPoly& p,
                                                  const RingPtr& plain) {
  checkAligned(p.ring(), plain);
  const std::uint64_t geom = geometricBits(p.ring());
  std::map<std::uint64_t, SuperPoly> out;
  for (const auto& [mono, c] : p.terms()) {
    const std::uint64_t g = mono.oddMask & geom;
    const std::uint64_t k = mono.oddMask & ~geom;
    // Stored canonical order puts geometric odd factors before constants;
    // rewriting c·(g-part)(k-part) as mu·(stratum term) with mu on the left
    // costs a transposition per (constant, geometric) pair.
    const bool flip = (constantDegree(k) & 1) && (std::popcount(g) & 1);
    Monomial pm;
    pm.evenExp = mono.evenExp;
    pm.oddMask = g;
    auto it = out.find(k);
    if (it == out.end()) it = out.emplace(k, SuperPoly(plain)).first;
    it->second.addTerm(pm, flip ? -c : c);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.isZero() ? out.erase(it) : std::next(it);
  return out;
}

SuperPoly liftPoly(const SuperPoly& plain, const RingPtr& big) {
  checkAligned(big, plain.ring());
  SuperPoly out(big);
  for (const auto& [mono, c] : plain.terms()) out.addTerm(mono, c);
  return out;
}

std::map<std::uint64_t, VectorField> constantStrataField(
    const VectorField& x, const RingPtr& plain) {
  const RingPtr& big = x.ring();
  checkAligned(big, plain);
  std::map<std::uint64_t, VectorField> out;
  auto add = [&](const std::string& axis, const SuperPoly& comp) {
    for (auto& [k, q] : constantStrata(comp, plain)) {
      auto it = out.find(k);
      if (it == out.end()) it = out.emplace(k, VectorField(plain)).first;
      it->second.setComp(axis, q);
    }
  };
  for (int i = 0; i < big->geomEven; ++i) add(big->even[i].name, x.evenComp(i));
  for (int i = 0; i < big->geomOdd; ++i) add(big->odd[i], x.oddComp(i));
  return out;
}

VectorField liftField(const VectorField& plain, const RingPtr& big) {
  checkAligned(big, plain.ring());
  VectorField out(big);
  const RingPtr& ring = plain.ring();
  for (int i = 0; i < ring->geomEven; ++i)
    if (!plain.evenComp(i).isZero())
      out.setComp(ring->even[i].name, liftPoly(plain.evenComp(i), big));
  for (int i = 0; i < ring->geomOdd; ++i)
    if (!plain.oddComp(i).isZero())
      out.setComp(ring->odd[i], liftPoly(plain.oddComp(i), big));
  return out;
}

namespace {

void checkConstantsMatch(const RingPtr& big, const RingPtr& constants) {
  if (!big || !constants)
    throw std::invalid_argument("constant embedding needs two rings");
  if (!constants->even.empty() || constants->geomOdd != 0)
    throw std::invalid_argument(
        "the constants ring must consist of odd constants only");
  if (static_cast<int>(big->even.size()) != big->geomEven)
    throw std::invalid_argument(
        "the big ring must not carry even constants");
  const int t = static_cast<int>(constants->odd.size());
  if (static_cast<int>(big->odd.size()) != big->geomOdd + t)
    throw std::invalid_argument(
        "the big ring carries a different number of constants");
  for (int i = 0; i < t; ++i)
    if (big->odd[big->geomOdd + i] != constants->odd[i])
      throw std::invalid_argument(
          "the big ring carries differently named constants");
}

}  // namespace

SuperPoly embedConstants(const SuperPoly& c, const RingPtr& big) {
  checkConstantsMatch(big, c.ring());
  SuperPoly out(big);
  for (const auto& [mono, coef] : c.terms()) {
    Monomial m;
    m.oddMask = mono.oddMask << big->geomOdd;
    out.addTerm(m, coef);
  }
  return out;
}

SuperPoly restrictToConstants(const SuperPoly& p, const RingPtr& constants) {
  checkConstantsMatch(p.ring(), constants);
  const std::uint64_t geomBits = (std::uint64_t{1} << p.ring()->geomOdd) - 1;
  SuperPoly out(constants);
  for (const auto& [mono, coef] : p.terms()) {
    if (!mono.evenExp.empty() || (mono.oddMask & geomBits))
      throw std::invalid_argument(
          "cannot restrict a polynomial with geometric content to constants");
    Monomial m;
    m.oddMask = mono.oddMask >> p.ring()->geomOdd;
    out.addTerm(m, coef);
  }
  return out;
}

}  // namespace wps
