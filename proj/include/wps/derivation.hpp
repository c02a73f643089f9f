#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wps/chartmap.hpp"
#include "wps/superpoly.hpp"

namespace wps {

/// Derivation with components along the ring's geometric axes:
/// X = Σ Xᶻ∂_z + Σ Xᶿ∂_θ, coefficients written to the left.  A component
/// along an odd axis contributes |comp|+1 to the parity of the field.
class VectorField {
public:
  VectorField() = default;
  explicit VectorField(RingPtr ring);
  static VectorField zero(RingPtr ring) { return VectorField(std::move(ring)); }

  const RingPtr& ring() const { return ring_; }
  const SuperPoly& evenComp(int i) const { return evenComp_[i]; }
  const SuperPoly& oddComp(int i) const { return oddComp_[i]; }
  SuperPoly comp(const std::string& axisName) const;
  VectorField& setComp(const std::string& axisName, SuperPoly p);

  /// X(f) = Σ comp·(left partial of f).
  SuperPoly applyTo(const SuperPoly& f) const;

  std::optional<Parity> parity() const;
  bool isZero() const;

  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField operator-() const;
  bool operator==(const VectorField& o) const;
  VectorField scaledBy(const SuperPoly& f) const; // left multiplication
  VectorField scaled(const Rat& c) const;

  std::string str() const;

private:
  RingPtr ring_;
  std::vector<SuperPoly> evenComp_, oddComp_;
};

/// ω = Σ F_z dz + Σ F_θ dθ with coefficients to the left of basis forms and
/// |dx| = |x|; same parity bookkeeping as VectorField.
class OneForm {
public:
  OneForm() = default;
  explicit OneForm(RingPtr ring);
  static OneForm zero(RingPtr ring) { return OneForm(std::move(ring)); }

  const RingPtr& ring() const { return ring_; }
  const SuperPoly& evenComp(int i) const { return evenComp_[i]; }
  const SuperPoly& oddComp(int i) const { return oddComp_[i]; }
  SuperPoly comp(const std::string& axisName) const;
  OneForm& setComp(const std::string& axisName, SuperPoly p);

  std::optional<Parity> parity() const;
  bool isZero() const;

  OneForm operator+(const OneForm& o) const;
  OneForm operator-(const OneForm& o) const;
  OneForm operator-() const;
  bool operator==(const OneForm& o) const;
  OneForm scaledBy(const SuperPoly& f) const; // left multiplication
  OneForm scaled(const Rat& c) const;

  std::string str() const;

private:
  RingPtr ring_;
  std::vector<SuperPoly> evenComp_, oddComp_;
};

/// [X,Y] = X∘Y − (−1)^{|X||Y|} Y∘X on coordinate functions; inputs must be
/// parity-homogeneous.
VectorField bracket(const VectorField& x, const VectorField& y);

/// df = Σ (∂_a f) dx_a over the geometric axes.
OneForm differentialOf(const SuperPoly& f);

/// ⟨Σ F_a dx_a, Σ X_a ∂_a⟩ = Σ F_a·X_a.
SuperPoly pairing(const OneForm& omega, const VectorField& x);

/// ω over m.src() transported to m.dst(): the dy_c-component is
/// Σ_a ∂_c(m(x_a))·m(F_a), the Jacobian entry left of the coefficient.
/// With this order pullback commutes with d on functions and is covariant:
/// pullbackForm(ω, compose(m₂,m₁)) = pullbackForm(pullbackForm(ω, m₁), m₂).
OneForm pullbackForm(const OneForm& omega, const ChartMap& m);

/// X over m.dst() transported to m.src(): comp_a = m⁻¹(X(m(x_a))).
VectorField pushforwardField(const VectorField& x, const ChartMap& m);
VectorField pushforwardField(const VectorField& x, const ChartMap& m,
                             const ChartMap& minv);

} // namespace wps
