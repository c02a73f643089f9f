#include "wps/superpoly.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace wps {

Parity Monomial::parity() const {
  return (std::popcount(oddMask) & 1) ? Parity::Odd : Parity::Even;
}

int koszulMergeSign(std::uint64_t a, std::uint64_t b) {
  int inversions = 0;
  std::uint64_t bb = b;
  while (bb) {
    int i = std::countr_zero(bb);
    bb &= bb - 1;
    std::uint64_t higher = (i == 63) ? 0 : (a >> (i + 1));
    inversions += std::popcount(higher);
  }
  return (inversions & 1) ? -1 : 1;
}

SuperPoly SuperPoly::constant(RingPtr ring, const Rat& c) {
  SuperPoly p(std::move(ring));
  if (c != 0) p.terms_[Monomial{}] = c;
  return p;
}

SuperPoly SuperPoly::evenVar(RingPtr ring, int idx, int exp) {
  SuperPoly p(std::move(ring));
  if (idx < 0 || idx >= static_cast<int>(p.ring_->even.size()))
    throw std::invalid_argument("even variable index out of range");
  if (exp < 0 && !p.ring_->even[idx].laurent)
    throw std::invalid_argument("negative exponent on non-Laurent variable");
  Monomial m;
  if (exp != 0) m.evenExp.push_back({idx, exp});
  p.terms_[m] = 1;
  return p;
}

SuperPoly SuperPoly::oddGen(RingPtr ring, int idx) {
  SuperPoly p(std::move(ring));
  if (idx < 0 || idx >= static_cast<int>(p.ring_->odd.size()))
    throw std::invalid_argument("odd generator index out of range");
  Monomial m;
  m.oddMask = std::uint64_t(1) << idx;
  p.terms_[m] = 1;
  return p;
}

SuperPoly SuperPoly::gen(const RingPtr& ring, const std::string& name) {
  int e = ring->evenIndex(name);
  if (e >= 0) return evenVar(ring, e);
  int o = ring->oddIndex(name);
  if (o >= 0) return oddGen(ring, o);
  throw std::invalid_argument("unknown generator: " + name);
}

void SuperPoly::addTerm(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rat SuperPoly::coefficientOf(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rat(0) : it->second;
}

SuperPoly SuperPoly::operator-() const {
  SuperPoly r(ring_);
  for (auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

SuperPoly SuperPoly::operator+(const SuperPoly& o) const {
  requireSameRing(ring_, o.ring_);
  SuperPoly r = *this;
  for (auto& [m, c] : o.terms_) r.addTerm(m, c);
  return r;
}

SuperPoly SuperPoly::operator-(const SuperPoly& o) const {
  requireSameRing(ring_, o.ring_);
  SuperPoly r = *this;
  for (auto& [m, c] : o.terms_) r.addTerm(m, -c);
  return r;
}

static Monomial mergeEven(const Monomial& a, const Monomial& b,
                          const RingContext& ring) {
  Monomial m;
  m.evenExp.reserve(a.evenExp.size() + b.evenExp.size());
  size_t i = 0, j = 0;
  while (i < a.evenExp.size() || j < b.evenExp.size()) {
    if (j == b.evenExp.size() ||
        (i < a.evenExp.size() && a.evenExp[i].first < b.evenExp[j].first)) {
      m.evenExp.push_back(a.evenExp[i++]);
    } else if (i == a.evenExp.size() ||
               b.evenExp[j].first < a.evenExp[i].first) {
      m.evenExp.push_back(b.evenExp[j++]);
    } else {
      int v = a.evenExp[i].first;
      int e = a.evenExp[i].second + b.evenExp[j].second;
      ++i, ++j;
      if (e != 0) m.evenExp.push_back({v, e});
    }
  }
  for (auto& [v, e] : m.evenExp)
    if (e < 0 && !ring.even[v].laurent)
      throw std::domain_error("negative exponent on non-Laurent variable " +
                              ring.even[v].name);
  return m;
}

SuperPoly SuperPoly::operator*(const SuperPoly& o) const {
  requireSameRing(ring_, o.ring_);
  SuperPoly r(ring_);
  for (auto& [ma, ca] : terms_) {
    for (auto& [mb, cb] : o.terms_) {
      if (ma.oddMask & mb.oddMask) continue; // repeated odd factor
      Monomial m = mergeEven(ma, mb, *ring_);
      m.oddMask = ma.oddMask | mb.oddMask;
      int sign = koszulMergeSign(ma.oddMask, mb.oddMask);
      Rat prod = ca * cb;
      if (sign < 0) prod = -prod;
      r.addTerm(m, prod);
    }
  }
  return r;
}

bool SuperPoly::operator==(const SuperPoly& o) const {
  requireSameRing(ring_, o.ring_);
  return terms_ == o.terms_;
}

SuperPoly SuperPoly::scaled(const Rat& c) const {
  SuperPoly r(ring_);
  if (c == 0) return r;
  for (auto& [m, k] : terms_) r.terms_[m] = k * c;
  return r;
}

SuperPoly operator*(const Rat& c, const SuperPoly& p) { return p.scaled(c); }

SuperPoly SuperPoly::body() const {
  SuperPoly r(ring_);
  for (auto& [m, c] : terms_)
    if (m.oddMask == 0) r.terms_[m] = c;
  return r;
}

bool SuperPoly::isUnit() const {
  SuperPoly b = body();
  if (b.terms_.size() != 1) return false;
  auto& [m, c] = *b.terms_.begin();
  for (auto& [v, e] : m.evenExp)
    if (!ring_->even[v].laurent) return false;
  return true;
}

SuperPoly SuperPoly::inverse() const {
  SuperPoly b = body();
  if (b.terms_.size() != 1)
    throw std::domain_error("not a unit: body is not a single term");
  auto& [bm, bc] = *b.terms_.begin();
  Monomial im;
  for (auto& [v, e] : bm.evenExp) {
    if (!ring_->even[v].laurent)
      throw std::domain_error("not a unit: non-Laurent variable " +
                              ring_->even[v].name);
    im.evenExp.push_back({v, -e});
  }
  SuperPoly tinv(ring_);
  tinv.terms_[im] = Rat(1) / bc;
  SuperPoly nil = (*this - b) * tinv; // nilpotent: every term has odd content
  SuperPoly acc = SuperPoly::constant(ring_, 1);
  SuperPoly powNil = SuperPoly::constant(ring_, 1);
  int bound = static_cast<int>(ring_->odd.size());
  for (int k = 1; k <= bound; ++k) {
    powNil = powNil * nil;
    if (powNil.isZero()) break;
    acc = (k & 1) ? acc - powNil : acc + powNil;
  }
  return tinv * acc;
}

SuperPoly SuperPoly::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  SuperPoly acc = SuperPoly::constant(ring_, 1);
  SuperPoly base = *this;
  unsigned long k = static_cast<unsigned long>(e);
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

SuperPoly SuperPoly::derivativeEven(int evenIdx) const {
  SuperPoly r(ring_);
  for (auto& [m, c] : terms_) {
    int e = m.exponentOf(evenIdx);
    if (e == 0) continue;
    Monomial d = m;
    for (auto it = d.evenExp.begin(); it != d.evenExp.end(); ++it) {
      if (it->first == evenIdx) {
        if (it->second == 1)
          d.evenExp.erase(it);
        else
          it->second -= 1;
        break;
      }
    }
    r.addTerm(d, c * e);
  }
  return r;
}

SuperPoly SuperPoly::derivativeOdd(int oddIdx) const {
  SuperPoly r(ring_);
  std::uint64_t bit = std::uint64_t(1) << oddIdx;
  std::uint64_t below = bit - 1;
  for (auto& [m, c] : terms_) {
    if (!(m.oddMask & bit)) continue;
    Monomial d = m;
    d.oddMask &= ~bit;
    Rat coef = c;
    if (std::popcount(m.oddMask & below) & 1) coef = -coef;
    r.addTerm(d, coef);
  }
  return r;
}

SuperPoly SuperPoly::derivative(const std::string& genName) const {
  int e = ring_->evenIndex(genName);
  if (e >= 0) return derivativeEven(e);
  int o = ring_->oddIndex(genName);
  if (o >= 0) return derivativeOdd(o);
  throw std::invalid_argument("unknown generator: " + genName);
}

std::optional<Parity> SuperPoly::parity() const {
  if (terms_.empty()) return Parity::Even;
  Parity p = terms_.begin()->first.parity();
  for (auto& [m, c] : terms_)
    if (m.parity() != p) return std::nullopt;
  return p;
}

bool SuperPoly::isHomogeneousParity(Parity p) const {
  if (terms_.empty()) return true;
  auto q = parity();
  return q && *q == p;
}

std::optional<long> SuperPoly::weightedDegree(const WeightedDegree& w) const {
  std::optional<long> deg;
  for (auto& [m, c] : terms_) {
    long d = 0;
    for (auto& [v, e] : m.evenExp) {
      auto it = w.weights.find(ring_->even[v].name);
      if (it != w.weights.end()) d += it->second * e;
    }
    std::uint64_t mask = m.oddMask;
    while (mask) {
      int i = std::countr_zero(mask);
      mask &= mask - 1;
      auto it = w.weights.find(ring_->odd[i]);
      if (it != w.weights.end()) d += it->second;
    }
    if (!deg)
      deg = d;
    else if (*deg != d)
      return std::nullopt;
  }
  return deg;
}

int SuperPoly::maxExponent(int evenIdx) const {
  int m = 0;
  for (auto& [mon, c] : terms_) m = std::max(m, mon.exponentOf(evenIdx));
  return m;
}

int SuperPoly::minExponent(int evenIdx) const {
  int m = 0;
  for (auto& [mon, c] : terms_) m = std::min(m, mon.exponentOf(evenIdx));
  return m;
}

SuperPoly SuperPoly::dropOdd(const std::vector<int>& oddIdxs) const {
  std::uint64_t mask = 0;
  for (int i : oddIdxs) mask |= std::uint64_t(1) << i;
  SuperPoly r(ring_);
  for (auto& [m, c] : terms_)
    if (!(m.oddMask & mask)) r.terms_[m] = c;
  return r;
}

SuperPoly SuperPoly::constantOddFreePart() const {
  std::uint64_t geomMask = (ring_->geomOdd >= 64)
                               ? ~std::uint64_t(0)
                               : ((std::uint64_t(1) << ring_->geomOdd) - 1);
  SuperPoly r(ring_);
  for (auto& [m, c] : terms_)
    if (!(m.oddMask & ~geomMask)) r.terms_[m] = c;
  return r;
}

std::string SuperPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto& [m, c] : terms_) {
    Rat a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    std::vector<std::string> factors;
    for (auto& [v, e] : m.evenExp) {
      std::string f = ring_->even[v].name;
      if (e != 1) f += "^" + std::to_string(e);
      factors.push_back(f);
    }
    std::uint64_t mask = m.oddMask;
    while (mask) {
      int i = std::countr_zero(mask);
      mask &= mask - 1;
      factors.push_back(ring_->odd[i]);
    }
    if (factors.empty()) {
      out << ratToString(a);
    } else {
      if (a != 1) out << ratToString(a) << "*";
      for (size_t i = 0; i < factors.size(); ++i) {
        if (i) out << "*";
        out << factors[i];
      }
    }
  }
  return out.str();
}

} // namespace wps
