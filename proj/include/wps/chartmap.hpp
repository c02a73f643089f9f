#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wps/superpoly.hpp"

namespace wps {

/// Parity-preserving substitution: each source generator is assigned an image
/// polynomial over the destination ring, and apply() extends multiplicatively
/// (negative even exponents go through unit inversion).  Generators without
/// an explicit image fall back to the same-named generator of the
/// destination, so shared constants carry across automatically.
class ChartMap {
public:
  ChartMap(RingPtr src, RingPtr dst);
  static ChartMap identity(const RingPtr& ring);

  const RingPtr& src() const { return src_; }
  const RingPtr& dst() const { return dst_; }

  /// Declares the image of one generator; parity must match (zero allowed).
  ChartMap& setImage(const std::string& genName, SuperPoly image);

  /// Resolved image (explicit or same-name fallback); throws if neither.
  SuperPoly imageOfEven(int idx) const;
  SuperPoly imageOfOdd(int idx) const;
  SuperPoly image(const std::string& genName) const;

  SuperPoly apply(const SuperPoly& p) const;

  bool isIdentity() const;
  bool operator==(const ChartMap& o) const;

  std::string str() const;

private:
  RingPtr src_, dst_;
  std::vector<std::optional<SuperPoly>> evenImg_, oddImg_;
};

/// (outer ∘ inner): apply = outer.apply after inner.apply.
ChartMap compose(const ChartMap& outer, const ChartMap& inner);

/// Exact two-sided inverse.  Supported shapes: every non-geometric generator
/// maps to itself; even geometric images have body a·x+b (a ≠ 0) or c·x⁻¹ in
/// a single destination variable; odd geometric images have their
/// constant-free linear part equal to a single term (unit monomial)·(odd
/// generator).  The nilpotent remainder is inverted by fixed-point iteration
/// and the result is certified by composing back to the identity.
ChartMap invert(const ChartMap& m);

} // namespace wps
