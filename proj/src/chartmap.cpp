#include "wps/chartmap.hpp"

#include <bit>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wps {

ChartMap::ChartMap(RingPtr src, RingPtr dst)
    : src_(std::move(src)), dst_(std::move(dst)),
      evenImg_(src_->even.size()), oddImg_(src_->odd.size()) {}

ChartMap ChartMap::identity(const RingPtr& ring) {
  return ChartMap(ring, ring);
}

ChartMap& ChartMap::setImage(const std::string& genName, SuperPoly image) {
  requireSameRing(image.ring(), dst_);
  int e = src_->evenIndex(genName);
  if (e >= 0) {
    if (!image.isHomogeneousParity(Parity::Even))
      throw std::invalid_argument("image of even generator " + genName +
                                  " is not even");
    evenImg_[e] = std::move(image);
    return *this;
  }
  int o = src_->oddIndex(genName);
  if (o >= 0) {
    if (!image.isZero() && !image.isHomogeneousParity(Parity::Odd))
      throw std::invalid_argument("image of odd generator " + genName +
                                  " is not odd");
    oddImg_[o] = std::move(image);
    return *this;
  }
  throw std::invalid_argument("unknown generator: " + genName);
}

SuperPoly ChartMap::imageOfEven(int idx) const {
  if (evenImg_[idx]) return *evenImg_[idx];
  const std::string& name = src_->even[idx].name;
  int j = dst_->evenIndex(name);
  if (j < 0)
    throw std::invalid_argument("no image for generator " + name);
  return SuperPoly::evenVar(dst_, j);
}

SuperPoly ChartMap::imageOfOdd(int idx) const {
  if (oddImg_[idx]) return *oddImg_[idx];
  const std::string& name = src_->odd[idx];
  int j = dst_->oddIndex(name);
  if (j < 0)
    throw std::invalid_argument("no image for generator " + name);
  return SuperPoly::oddGen(dst_, j);
}

SuperPoly ChartMap::image(const std::string& genName) const {
  int e = src_->evenIndex(genName);
  if (e >= 0) return imageOfEven(e);
  int o = src_->oddIndex(genName);
  if (o >= 0) return imageOfOdd(o);
  throw std::invalid_argument("unknown generator: " + genName);
}

SuperPoly ChartMap::apply(const SuperPoly& p) const {
  requireSameRing(p.ring(), src_);
  SuperPoly out(dst_);
  std::map<std::pair<int, int>, SuperPoly> powCache;
  for (auto& [m, c] : p.terms()) {
    SuperPoly t = SuperPoly::constant(dst_, c);
    for (auto& [v, e] : m.evenExp) {
      auto key = std::make_pair(v, e);
      auto it = powCache.find(key);
      if (it == powCache.end())
        it = powCache.emplace(key, imageOfEven(v).pow(e)).first;
      t = t * it->second;
    }
    std::uint64_t mask = m.oddMask;
    while (mask) { // ascending index = canonical factor order, signs emerge
      int i = std::countr_zero(mask);
      mask &= mask - 1;
      t = t * imageOfOdd(i);
    }
    out += t;
  }
  return out;
}

bool ChartMap::isIdentity() const {
  if (!(*src_ == *dst_)) return false;
  for (size_t i = 0; i < src_->even.size(); ++i)
    if (!(imageOfEven(static_cast<int>(i)) ==
          SuperPoly::evenVar(dst_, static_cast<int>(i))))
      return false;
  for (size_t i = 0; i < src_->odd.size(); ++i)
    if (!(imageOfOdd(static_cast<int>(i)) ==
          SuperPoly::oddGen(dst_, static_cast<int>(i))))
      return false;
  return true;
}

bool ChartMap::operator==(const ChartMap& o) const {
  if (!(*src_ == *o.src_) || !(*dst_ == *o.dst_)) return false;
  for (size_t i = 0; i < src_->even.size(); ++i)
    if (!(imageOfEven(static_cast<int>(i)) ==
          o.imageOfEven(static_cast<int>(i))))
      return false;
  for (size_t i = 0; i < src_->odd.size(); ++i)
    if (!(imageOfOdd(static_cast<int>(i)) == o.imageOfOdd(static_cast<int>(i))))
      return false;
  return true;
}

std::string ChartMap::str() const {
  std::ostringstream out;
  bool first = true;
  for (size_t i = 0; i < src_->even.size(); ++i) {
    if (!first) out << ", ";
    first = false;
    out << src_->even[i].name << " -> "
        << imageOfEven(static_cast<int>(i)).str();
  }
  for (size_t i = 0; i < src_->odd.size(); ++i) {
    if (!first) out << ", ";
    first = false;
    out << src_->odd[i] << " -> " << imageOfOdd(static_cast<int>(i)).str();
  }
  return out.str();
}

ChartMap compose(const ChartMap& outer, const ChartMap& inner) {
  requireSameRing(inner.dst(), outer.src());
  ChartMap r(inner.src(), outer.dst());
  for (auto& v : inner.src()->even)
    r.setImage(v.name, outer.apply(inner.image(v.name)));
  for (auto& g : inner.src()->odd)
    r.setImage(g, outer.apply(inner.image(g)));
  return r;
}

namespace {

// Fixed-point inversion of q = id + nilpotent on one ring: s_x = -r(n_x).
ChartMap nearIdentityInverse(const ChartMap& q) {
  const RingPtr& ring = q.src();
  requireSameRing(ring, q.dst());
  std::vector<std::pair<std::string, SuperPoly>> defect;
  for (auto& v : ring->even)
    defect.emplace_back(v.name,
                        q.image(v.name) - SuperPoly::gen(ring, v.name));
  for (auto& g : ring->odd)
    defect.emplace_back(g, q.image(g) - SuperPoly::gen(ring, g));

  ChartMap r = ChartMap::identity(ring);
  int bound = static_cast<int>(ring->odd.size()) + 2;
  for (int k = 0; k < bound; ++k) {
    ChartMap next = ChartMap::identity(ring);
    bool changed = false;
    for (auto& [name, n] : defect) {
      SuperPoly img = SuperPoly::gen(ring, name) - r.apply(n);
      if (!(img == r.image(name))) changed = true;
      next.setImage(name, img);
    }
    if (!changed) return r;
    r = next;
  }
  if (compose(r, q).isIdentity()) return r;
  throw std::domain_error("substitution is not invertible: "
                          "nilpotent correction did not stabilize");
}

bool isRationalConstant(const SuperPoly& p, Rat& out) {
  if (p.isZero()) {
    out = 0;
    return true;
  }
  if (p.termCount() != 1) return false;
  auto& [m, c] = *p.terms().begin();
  if (!m.evenExp.empty() || m.oddMask != 0) return false;
  out = c;
  return true;
}

} // namespace

ChartMap invert(const ChartMap& m) {
  const RingPtr& src = m.src();
  const RingPtr& dst = m.dst();
  if (src->geomEven != dst->geomEven || src->geomOdd != dst->geomOdd)
    throw std::domain_error("cannot invert: geometric shapes differ");

  // Non-geometric generators must carry across unchanged.
  for (int i = src->geomEven; i < static_cast<int>(src->even.size()); ++i) {
    int j = dst->evenIndex(src->even[i].name);
    if (j < 0 || !(m.imageOfEven(i) == SuperPoly::evenVar(dst, j)))
      throw std::domain_error("cannot invert: constant generator remapped");
  }
  for (int i = src->geomOdd; i < static_cast<int>(src->odd.size()); ++i) {
    int j = dst->oddIndex(src->odd[i]);
    if (j < 0 || !(m.imageOfOdd(i) == SuperPoly::oddGen(dst, j)))
      throw std::domain_error("cannot invert: constant generator remapped");
  }

  ChartMap skel(src, dst);
  ChartMap skelInv(dst, src);
  std::vector<bool> dstEvenHit(dst->geomEven, false);

  // Even skeleton: the body of each even image, required affine a·x+b or
  // c·x⁻¹ in a single destination variable; invert in closed form.
  for (int i = 0; i < src->geomEven; ++i) {
    SuperPoly body = m.imageOfEven(i).body();
    int var = -1;
    Rat lin = 0, cst = 0, inv = 0;
    bool ok = !body.isZero();
    for (auto& [mon, c] : body.terms()) {
      if (mon.evenExp.empty()) {
        cst = c;
        continue;
      }
      if (mon.evenExp.size() != 1) {
        ok = false;
        break;
      }
      auto [v, e] = mon.evenExp[0];
      if (v >= dst->geomEven || (var >= 0 && var != v)) {
        ok = false;
        break;
      }
      var = v;
      if (e == 1 && inv == 0)
        lin = c;
      else if (e == -1 && lin == 0 && cst == 0)
        inv = c;
      else {
        ok = false;
        break;
      }
    }
    if (!ok || var < 0 || (lin == 0 && inv == 0) || dstEvenHit[var])
      throw std::domain_error("cannot invert: even image body of " +
                              src->even[i].name + " is not affine or c/x");
    dstEvenHit[var] = true;
    skel.setImage(src->even[i].name, body);
    SuperPoly x = SuperPoly::evenVar(src, i);
    if (lin != 0) {
      // body = lin·x + cst  =>  x ↦ (x − cst)/lin
      skelInv.setImage(dst->even[var].name,
                       (x - SuperPoly::constant(src, cst)).scaled(1 / lin));
    } else {
      // body = inv·x⁻¹  =>  x ↦ inv·x⁻¹  (self-inverse shape)
      skelInv.setImage(dst->even[var].name, x.pow(-1).scaled(inv));
    }
  }

  // Odd skeleton: the part of each odd image that is linear in a geometric
  // odd generator with no constant odd factors; must be one term.
  std::uint64_t dstGeomMask = (std::uint64_t(1) << dst->geomOdd) - 1;
  std::vector<bool> dstOddHit(dst->geomOdd, false);
  for (int i = 0; i < src->geomOdd; ++i) {
    SuperPoly img = m.imageOfOdd(i);
    SuperPoly linPart(dst);
    for (auto& [mon, c] : img.terms())
      if ((mon.oddMask & ~dstGeomMask) == 0 &&
          std::popcount(mon.oddMask & dstGeomMask) == 1)
        linPart.addTerm(mon, c);
    if (linPart.termCount() != 1)
      throw std::domain_error("cannot invert: odd image of " + src->odd[i] +
                              " has no single-term linear part");
    auto& [mon, c] = *linPart.terms().begin();
    int g = std::countr_zero(mon.oddMask);
    if (dstOddHit[g])
      throw std::domain_error("cannot invert: odd images collide");
    dstOddHit[g] = true;
    skel.setImage(src->odd[i], linPart);
    // linPart = c·x^k·ξ_g  =>  ξ_g ↦ (c·skelInv(x)^k)⁻¹ · ξ_i
    SuperPoly factor = SuperPoly::constant(src, c);
    for (auto& [v, e] : mon.evenExp)
      factor = factor * skelInv.imageOfEven(v).pow(e);
    skelInv.setImage(dst->odd[g], factor.inverse() * SuperPoly::oddGen(src, i));
  }

  if (!compose(skelInv, skel).isIdentity() ||
      !compose(skel, skelInv).isIdentity())
    throw std::domain_error("cannot invert: skeleton inverse check failed");

  ChartMap q = compose(skelInv, m); // id + nilpotent on src
  ChartMap r = nearIdentityInverse(q);
  ChartMap minv = compose(r, skelInv);

  if (!compose(minv, m).isIdentity() || !compose(m, minv).isIdentity())
    throw std::domain_error("cannot invert: final inverse check failed");
  return minv;
}

} // namespace wps
