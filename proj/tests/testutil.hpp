#pragma once

#include <random>

#include "wps/chartmap.hpp"
#include "wps/superpoly.hpp"

namespace wps::testutil {

/// z (Laurent) and ζ are geometric; η₁, η₂ are odd constants.
inline RingPtr chartRing() {
  static RingPtr r = []() {
    RingBuilder b;
    b.even("z", true).odd("zeta").endGeometric();
    b.odd("eta1").odd("eta2");
    return b.build();
  }();
  return r;
}

inline Rat randomCoef(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  int n = num(rng);
  if (n == 0) n = 1;
  return Rat(n, den(rng));
}

inline SuperPoly randomPoly(std::mt19937& rng, const RingPtr& ring,
                            int maxTerms = 4, int maxDeg = 3) {
  std::uniform_int_distribution<int> nterms(1, maxTerms);
  std::uniform_int_distribution<int> expDist(-maxDeg, maxDeg);
  std::uniform_int_distribution<int> bit(0, 1);
  SuperPoly p(ring);
  int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    Monomial m;
    for (size_t v = 0; v < ring->even.size(); ++v) {
      int e = expDist(rng);
      if (e < 0 && !ring->even[v].laurent) e = -e;
      if (e != 0) m.evenExp.push_back({static_cast<int>(v), e});
    }
    for (size_t o = 0; o < ring->odd.size(); ++o)
      if (bit(rng)) m.oddMask |= std::uint64_t(1) << o;
    p.addTerm(m, randomCoef(rng));
  }
  return p;
}

inline SuperPoly randomHomogeneous(std::mt19937& rng, const RingPtr& ring,
                                   Parity parity, int maxTerms = 4,
                                   int maxDeg = 3) {
  for (;;) {
    SuperPoly p = randomPoly(rng, ring, maxTerms, maxDeg);
    SuperPoly filtered(ring);
    for (auto& [m, c] : p.terms())
      if (m.parity() == parity) filtered.addTerm(m, c);
    if (!filtered.isZero()) return filtered;
  }
}

/// Random unit: c·z^k·(1 + nilpotent soul).
inline SuperPoly randomUnit(std::mt19937& rng, const RingPtr& ring) {
  std::uniform_int_distribution<int> expDist(-2, 2);
  SuperPoly u = SuperPoly::evenVar(ring, 0, expDist(rng))
                    .scaled(randomCoef(rng));
  SuperPoly soul = randomHomogeneous(rng, ring, Parity::Even, 2, 2);
  SuperPoly nil(ring);
  for (auto& [m, c] : soul.terms())
    if (m.oddMask != 0) nil.addTerm(m, c);
  return u + nil;
}

/// Random parity-preserving self-map of chartRing(); the even image is a
/// unit, so Laurent substitution works, but the map need not be invertible.
inline ChartMap randomChartMap(std::mt19937& rng, const RingPtr& ring) {
  ChartMap m(ring, ring);
  m.setImage("z", randomUnit(rng, ring));
  m.setImage("zeta", randomHomogeneous(rng, ring, Parity::Odd, 2, 2));
  m.setImage("eta1", randomHomogeneous(rng, ring, Parity::Odd, 2, 2));
  m.setImage("eta2", randomHomogeneous(rng, ring, Parity::Odd, 2, 2));
  return m;
}

/// Terms of a random even polynomial that carry odd generators (nilpotent).
/// Geometric generators move freely but constants map to constant
/// combinations, as form transport requires.
inline ChartMap randomFormCompatibleMap(std::mt19937& rng,
                                        const RingPtr& ring) {
  ChartMap m(ring, ring);
  m.setImage("z", randomUnit(rng, ring));
  m.setImage("zeta", randomHomogeneous(rng, ring, Parity::Odd, 2, 2));
  SuperPoly e1 = SuperPoly::gen(ring, "eta1");
  SuperPoly e2 = SuperPoly::gen(ring, "eta2");
  m.setImage("eta1", e1.scaled(randomCoef(rng)) + e2.scaled(randomCoef(rng)));
  m.setImage("eta2", e2.scaled(randomCoef(rng)));
  return m;
}

inline SuperPoly evenNilpotent(std::mt19937& rng, const RingPtr& ring,
                               bool laurent = true) {
  SuperPoly s = randomHomogeneous(rng, ring, Parity::Even, 2, 2);
  SuperPoly nil(ring);
  for (auto& [m, c] : s.terms()) {
    if (m.oddMask == 0) continue;
    Monomial mm = m;
    if (!laurent)
      for (auto& [v, e] : mm.evenExp) e = e < 0 ? -e : e;
    nil.addTerm(mm, c);
  }
  return nil;
}

/// Random invertible self-map of chartRing(), Laurent-closed flavor: the z
/// body is a·z or c·z⁻¹ (so composites stay in the chart ring), ζ maps to a
/// unit monomial times ζ plus constant-bearing odd terms, odd constants stay
/// fixed.
inline ChartMap randomInvertibleMap(std::mt19937& rng, const RingPtr& ring) {
  ChartMap m(ring, ring);
  SuperPoly z = SuperPoly::gen(ring, "z");
  SuperPoly zimg = z.pow((rng() & 1) ? 1 : -1).scaled(randomCoef(rng));
  m.setImage("z", zimg + evenNilpotent(rng, ring));
  int k = static_cast<int>(rng() % 3) - 1;
  SuperPoly zetaImg =
      (SuperPoly::gen(ring, "zeta") * z.pow(k)).scaled(randomCoef(rng)) +
      SuperPoly::gen(ring, "eta1") *
          randomHomogeneous(rng, ring, Parity::Even, 2, 2);
  m.setImage("zeta", zetaImg);
  return m;
}

/// Random invertible self-map with an affine body a·z+b and polynomial
/// nilpotent corrections (no negative exponents, so substitution stays
/// defined).
inline ChartMap randomAffineMap(std::mt19937& rng, const RingPtr& ring) {
  ChartMap m(ring, ring);
  SuperPoly z = SuperPoly::gen(ring, "z");
  int beta = static_cast<int>(rng() % 5) - 2;
  SuperPoly zimg = z.scaled(randomCoef(rng)) +
                   SuperPoly::constant(ring, beta) +
                   evenNilpotent(rng, ring, /*laurent=*/false);
  m.setImage("z", zimg);
  SuperPoly evenPart = randomHomogeneous(rng, ring, Parity::Even, 2, 2);
  SuperPoly evenPoly(ring);
  for (auto& [mm, c] : evenPart.terms()) {
    Monomial t = mm;
    for (auto& [v, e] : t.evenExp) e = e < 0 ? -e : e;
    evenPoly.addTerm(t, c);
  }
  m.setImage("zeta", SuperPoly::gen(ring, "zeta").scaled(randomCoef(rng)) +
                         SuperPoly::gen(ring, "eta1") * evenPoly);
  return m;
}

} // namespace wps::testutil
