#pragma once

#include <string>
#include <vector>

#include "wps/chartmap.hpp"
#include "wps/sheaf.hpp"
#include "wps/superpoly.hpp"

namespace wps {

/// Two-chart family over an odd-parameter base: charts U = (z | zeta) and
/// V = (w | chi), glued over z ≠ 0 by
///   w   = 1/z,
///   chi = zeta·z^{q} + Σ_{i=1}^{q-1} eta_i·z^{q-i},     q = nR/2 − 1,
/// with anticommuting parameters eta_1..eta_{q-1} adjoined as constants to
/// both chart rings.  Setting every eta_i to zero recovers the weighted
/// split space of twist 1 − nR/2.
struct FamilyZ {
  int nR = 0;
  RingPtr ringU, ringV;    ///< charts with the parameters adjoined
  RingPtr plainU, plainV;  ///< the same charts without parameters
  ChartMap uToV;  ///< substitution sending U-generators to V-expressions
  ChartMap vToU;  ///< inverse display sending V-generators to U-expressions
  std::vector<std::string> etaNames;

  int paramCount() const { return nR / 2 - 2; }
};

/// Constructs the family.  Throws std::invalid_argument unless nR is even
/// and at least 4; the two gluing displays are certified mutually inverse.
FamilyZ buildZ(int nR);

/// Residuals of the defining hypersurface relation
///   u^{q}·chi − v^{q}·zeta − Σ_i eta_i·u^{i}·v^{q-i}
/// restricted to the two affine charts (u=1, v=z on U; v=1, u=w on V),
/// evaluated on a candidate pair of gluing displays.  Both vanish exactly
/// when the displays present the same hypersurface.
struct HypersurfaceReport {
  bool ok = false;
  SuperPoly residualU, residualV;
};
HypersurfaceReport hypersurfaceResiduals(int nR, const ChartMap& vToU,
                                         const ChartMap& uToV);

/// Convenience form for a family's own displays.
HypersurfaceReport hypersurfaceCheck(const FamilyZ& z);

/// Normal form of a deformed gluing:
///   input == autoU ∘ normalizedVtoU ∘ autoV   (as substitutions),
/// where normalizedVtoU is the standard display with the returned params in
/// place of the eta's and autoU/autoV are chart automorphisms that restrict
/// to the identity when all constants vanish.
struct DeformationClassification {
  int nR = 0;
  /// Coefficient of z^{q-i} in the normalized chi-image, i = 1..nR/2−2;
  /// odd elements of the parameter part of the U-chart ring.
  std::vector<SuperPoly> params;
  ChartMap autoU;           ///< automorphism of the U chart
  ChartMap autoV;           ///< automorphism of the V chart
  ChartMap normalizedVtoU;  ///< standard gluing display built from params
};

/// Classifies a nilpotent deformation of the standard gluing, layer by
/// layer in the total degree of the adjoined odd constants.  The input must
/// map a (w | chi) chart to a (z | zeta) chart sharing the same odd
/// constants, and its constant-free part must equal the standard gluing
/// exactly (otherwise std::invalid_argument).  The factorization is
/// certified exactly before returning.
DeformationClassification classifyDeformation(const ChartMap& d);

/// O(d) on the family: transition z^d over the family's gluing.
LineBundleModel lineBundleOnZ(const FamilyZ& z, int d);

/// Global sections of O(d) on the family: a basis of the free module over
/// the parameter base, each satisfying onU == z^d·vToU(onV) exactly and
/// reducing to the plain-space basis when every parameter vanishes.
struct ZSections {
  int twist = 0;
  DimPair rank;
  std::vector<GlobalSection> basis;
};

/// Throws std::runtime_error if a plain-space section fails to extend over
/// the parameter base.
ZSections h0OnZ(const FamilyZ& z, int d);

}  // namespace wps
