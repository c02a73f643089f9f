#include "wps/derivation.hpp"

#include <sstream>
#include <stdexcept>

namespace wps {

namespace {

// Shared component plumbing for VectorField and OneForm.
struct Axes {
  static int evenAxis(const RingPtr& ring, const std::string& name) {
    int i = ring->evenIndex(name);
    return (i >= 0 && i < ring->geomEven) ? i : -1;
  }
  static int oddAxis(const RingPtr& ring, const std::string& name) {
    int i = ring->oddIndex(name);
    return (i >= 0 && i < ring->geomOdd) ? i : -1;
  }
};

std::optional<Parity> slotParity(const RingPtr& ring,
                                 const std::vector<SuperPoly>& evenComp,
                                 const std::vector<SuperPoly>& oddComp) {
  std::optional<Parity> out;
  auto merge = [&](const SuperPoly& p, Parity shift) -> bool {
    if (p.isZero()) return true;
    auto q = p.parity();
    if (!q) return false;
    Parity slot = *q + shift;
    if (!out) {
      out = slot;
      return true;
    }
    return *out == slot;
  };
  for (auto& p : evenComp)
    if (!merge(p, Parity::Even)) return std::nullopt;
  for (auto& p : oddComp)
    if (!merge(p, Parity::Odd)) return std::nullopt;
  if (!out) out = Parity::Even; // zero
  return out;
}

std::string slotStr(const RingPtr& ring,
                    const std::vector<SuperPoly>& evenComp,
                    const std::vector<SuperPoly>& oddComp,
                    const std::string& prefix) {
  std::ostringstream s;
  bool first = true;
  for (int i = 0; i < ring->geomEven; ++i) {
    if (evenComp[i].isZero()) continue;
    if (!first) s << " + ";
    first = false;
    s << "(" << evenComp[i].str() << ")" << prefix << ring->even[i].name;
  }
  for (int i = 0; i < ring->geomOdd; ++i) {
    if (oddComp[i].isZero()) continue;
    if (!first) s << " + ";
    first = false;
    s << "(" << oddComp[i].str() << ")" << prefix << ring->odd[i];
  }
  return first ? "0" : s.str();
}

} // namespace

VectorField::VectorField(RingPtr ring) : ring_(std::move(ring)) {
  evenComp_.assign(ring_->geomEven, SuperPoly::zero(ring_));
  oddComp_.assign(ring_->geomOdd, SuperPoly::zero(ring_));
}

SuperPoly VectorField::comp(const std::string& axisName) const {
  int e = Axes::evenAxis(ring_, axisName);
  if (e >= 0) return evenComp_[e];
  int o = Axes::oddAxis(ring_, axisName);
  if (o >= 0) return oddComp_[o];
  throw std::invalid_argument("not a geometric axis: " + axisName);
}

VectorField& VectorField::setComp(const std::string& axisName, SuperPoly p) {
  requireSameRing(p.ring(), ring_);
  int e = Axes::evenAxis(ring_, axisName);
  if (e >= 0) {
    evenComp_[e] = std::move(p);
    return *this;
  }
  int o = Axes::oddAxis(ring_, axisName);
  if (o >= 0) {
    oddComp_[o] = std::move(p);
    return *this;
  }
  throw std::invalid_argument("not a geometric axis: " + axisName);
}

SuperPoly VectorField::applyTo(const SuperPoly& f) const {
  requireSameRing(f.ring(), ring_);
  SuperPoly out(ring_);
  for (int i = 0; i < ring_->geomEven; ++i)
    if (!evenComp_[i].isZero()) out += evenComp_[i] * f.derivativeEven(i);
  for (int i = 0; i < ring_->geomOdd; ++i)
    if (!oddComp_[i].isZero()) out += oddComp_[i] * f.derivativeOdd(i);
  return out;
}

std::optional<Parity> VectorField::parity() const {
  return slotParity(ring_, evenComp_, oddComp_);
}

bool VectorField::isZero() const {
  for (auto& p : evenComp_)
    if (!p.isZero()) return false;
  for (auto& p : oddComp_)
    if (!p.isZero()) return false;
  return true;
}

VectorField VectorField::operator+(const VectorField& o) const {
  requireSameRing(ring_, o.ring_);
  VectorField r(ring_);
  for (size_t i = 0; i < evenComp_.size(); ++i)
    r.evenComp_[i] = evenComp_[i] + o.evenComp_[i];
  for (size_t i = 0; i < oddComp_.size(); ++i)
    r.oddComp_[i] = oddComp_[i] + o.oddComp_[i];
  return r;
}

VectorField VectorField::operator-(const VectorField& o) const {
  return *this + (-o);
}

VectorField VectorField::operator-() const {
  VectorField r(ring_);
  for (size_t i = 0; i < evenComp_.size(); ++i) r.evenComp_[i] = -evenComp_[i];
  for (size_t i = 0; i < oddComp_.size(); ++i) r.oddComp_[i] = -oddComp_[i];
  return r;
}

bool VectorField::operator==(const VectorField& o) const {
  requireSameRing(ring_, o.ring_);
  return evenComp_ == o.evenComp_ && oddComp_ == o.oddComp_;
}

VectorField VectorField::scaledBy(const SuperPoly& f) const {
  VectorField r(ring_);
  for (size_t i = 0; i < evenComp_.size(); ++i)
    r.evenComp_[i] = f * evenComp_[i];
  for (size_t i = 0; i < oddComp_.size(); ++i) r.oddComp_[i] = f * oddComp_[i];
  return r;
}

VectorField VectorField::scaled(const Rat& c) const {
  VectorField r(ring_);
  for (size_t i = 0; i < evenComp_.size(); ++i)
    r.evenComp_[i] = evenComp_[i].scaled(c);
  for (size_t i = 0; i < oddComp_.size(); ++i)
    r.oddComp_[i] = oddComp_[i].scaled(c);
  return r;
}

std::string VectorField::str() const {
  return slotStr(ring_, evenComp_, oddComp_, " d/d");
}

OneForm::OneForm(RingPtr ring) : ring_(std::move(ring)) {
  evenComp_.assign(ring_->geomEven, SuperPoly::zero(ring_));
  oddComp_.assign(ring_->geomOdd, SuperPoly::zero(ring_));
}

SuperPoly OneForm::comp(const std::string& axisName) const {
  int e = Axes::evenAxis(ring_, axisName);
  if (e >= 0) return evenComp_[e];
  int o = Axes::oddAxis(ring_, axisName);
  if (o >= 0) return oddComp_[o];
  throw std::invalid_argument("not a geometric axis: " + axisName);
}

OneForm& OneForm::setComp(const std::string& axisName, SuperPoly p) {
  requireSameRing(p.ring(), ring_);
  int e = Axes::evenAxis(ring_, axisName);
  if (e >= 0) {
    evenComp_[e] = std::move(p);
    return *this;
  }
  int o = Axes::oddAxis(ring_, axisName);
  if (o >= 0) {
    oddComp_[o] = std::move(p);
    return *this;
  }
  throw std::invalid_argument("not a geometric axis: " + axisName);
}

std::optional<Parity> OneForm::parity() const {
  return slotParity(ring_, evenComp_, oddComp_);
}

bool OneForm::isZero() const {
  for (auto& p : evenComp_)
    if (!p.isZero()) return false;
  for (auto& p : oddComp_)
    if (!p.isZero()) return false;
  return true;
}

OneForm OneForm::operator+(const OneForm& o) const {
  requireSameRing(ring_, o.ring_);
  OneForm r(ring_);
  for (size_t i = 0; i < evenComp_.size(); ++i)
    r.evenComp_[i] = evenComp_[i] + o.evenComp_[i];
  for (size_t i = 0; i < oddComp_.size(); ++i)
    r.oddComp_[i] = oddComp_[i] + o.oddComp_[i];
  return r;
}

OneForm OneForm::operator-(const OneForm& o) const { return *this + (-o); }

OneForm OneForm::operator-() const {
  OneForm r(ring_);
  for (size_t i = 0; i < evenComp_.size(); ++i) r.evenComp_[i] = -evenComp_[i];
  for (size_t i = 0; i < oddComp_.size(); ++i) r.oddComp_[i] = -oddComp_[i];
  return r;
}

bool OneForm::operator==(const OneForm& o) const {
  requireSameRing(ring_, o.ring_);
  return evenComp_ == o.evenComp_ && oddComp_ == o.oddComp_;
}

OneForm OneForm::scaledBy(const SuperPoly& f) const {
  OneForm r(ring_);
  for (size_t i = 0; i < evenComp_.size(); ++i)
    r.evenComp_[i] = f * evenComp_[i];
  for (size_t i = 0; i < oddComp_.size(); ++i) r.oddComp_[i] = f * oddComp_[i];
  return r;
}

OneForm OneForm::scaled(const Rat& c) const {
  OneForm r(ring_);
  for (size_t i = 0; i < evenComp_.size(); ++i)
    r.evenComp_[i] = evenComp_[i].scaled(c);
  for (size_t i = 0; i < oddComp_.size(); ++i)
    r.oddComp_[i] = oddComp_[i].scaled(c);
  return r;
}

std::string OneForm::str() const {
  return slotStr(ring_, evenComp_, oddComp_, " d");
}

VectorField bracket(const VectorField& x, const VectorField& y) {
  requireSameRing(x.ring(), y.ring());
  auto px = x.parity();
  auto py = y.parity();
  if (!px || !py)
    throw std::invalid_argument("bracket requires parity-homogeneous fields");
  bool minus = (*px == Parity::Odd) && (*py == Parity::Odd);
  const RingPtr& ring = x.ring();
  VectorField r(ring);
  for (int i = 0; i < ring->geomEven; ++i) {
    SuperPoly c = x.applyTo(y.evenComp(i)) - (minus ? -y.applyTo(x.evenComp(i))
                                                    : y.applyTo(x.evenComp(i)));
    r.setComp(ring->even[i].name, c);
  }
  for (int i = 0; i < ring->geomOdd; ++i) {
    SuperPoly c = x.applyTo(y.oddComp(i)) - (minus ? -y.applyTo(x.oddComp(i))
                                                   : y.applyTo(x.oddComp(i)));
    r.setComp(ring->odd[i], c);
  }
  return r;
}

OneForm differentialOf(const SuperPoly& f) {
  const RingPtr& ring = f.ring();
  OneForm r(ring);
  for (int i = 0; i < ring->geomEven; ++i)
    r.setComp(ring->even[i].name, f.derivativeEven(i));
  for (int i = 0; i < ring->geomOdd; ++i)
    r.setComp(ring->odd[i], f.derivativeOdd(i));
  return r;
}

SuperPoly pairing(const OneForm& omega, const VectorField& x) {
  requireSameRing(omega.ring(), x.ring());
  SuperPoly out(omega.ring());
  for (int i = 0; i < omega.ring()->geomEven; ++i)
    out += omega.evenComp(i) * x.evenComp(i);
  for (int i = 0; i < omega.ring()->geomOdd; ++i)
    out += omega.oddComp(i) * x.oddComp(i);
  return out;
}

namespace {

bool usesGeometricGens(const SuperPoly& p) {
  const RingPtr& r = p.ring();
  std::uint64_t geomBits = (std::uint64_t(1) << r->geomOdd) - 1;
  for (auto& [m, c] : p.terms()) {
    if (m.oddMask & geomBits) return true;
    for (auto& [v, e] : m.evenExp)
      if (v < r->geomEven) return true;
  }
  return false;
}

} // namespace

OneForm pullbackForm(const OneForm& omega, const ChartMap& m) {
  requireSameRing(omega.ring(), m.src());
  const RingPtr& src = m.src();
  const RingPtr& dst = m.dst();
  // d only has geometric components, so transporting forms is exact only
  // when constants stay constant.
  for (int i = src->geomEven; i < static_cast<int>(src->even.size()); ++i)
    if (usesGeometricGens(m.imageOfEven(i)))
      throw std::invalid_argument(
          "pullback requires constants to map to constants");
  for (int i = src->geomOdd; i < static_cast<int>(src->odd.size()); ++i)
    if (usesGeometricGens(m.imageOfOdd(i)))
      throw std::invalid_argument(
          "pullback requires constants to map to constants");
  OneForm out(dst);
  // Component along dy_c: Σ_a ∂_c(m(x_a))·m(F_a).  The Jacobian entry sits
  // left of the transported coefficient; that is the super chain rule, and
  // it is what makes pullback commute with d and compose covariantly.
  auto addPiece = [&](const SuperPoly& coef, const SuperPoly& image) {
    if (coef.isZero()) return;
    SuperPoly f = m.apply(coef);
    for (int c = 0; c < dst->geomEven; ++c)
      out.setComp(dst->even[c].name,
                  out.evenComp(c) + image.derivativeEven(c) * f);
    for (int c = 0; c < dst->geomOdd; ++c)
      out.setComp(dst->odd[c], out.oddComp(c) + image.derivativeOdd(c) * f);
  };
  for (int i = 0; i < src->geomEven; ++i)
    addPiece(omega.evenComp(i), m.imageOfEven(i));
  for (int i = 0; i < src->geomOdd; ++i)
    addPiece(omega.oddComp(i), m.imageOfOdd(i));
  return out;
}

VectorField pushforwardField(const VectorField& x, const ChartMap& m,
                             const ChartMap& minv) {
  requireSameRing(x.ring(), m.dst());
  requireSameRing(minv.src(), m.dst());
  requireSameRing(minv.dst(), m.src());
  const RingPtr& src = m.src();
  VectorField out(src);
  for (int i = 0; i < src->geomEven; ++i)
    out.setComp(src->even[i].name, minv.apply(x.applyTo(m.imageOfEven(i))));
  for (int i = 0; i < src->geomOdd; ++i)
    out.setComp(src->odd[i], minv.apply(x.applyTo(m.imageOfOdd(i))));
  return out;
}

VectorField pushforwardField(const VectorField& x, const ChartMap& m) {
  return pushforwardField(x, m, invert(m));
}

} // namespace wps
