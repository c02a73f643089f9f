#pragma once

#include <string>
#include <vector>

#include "wps/chartmap.hpp"
#include "wps/derivation.hpp"
#include "wps/sheaf.hpp"
#include "wps/superpoly.hpp"

namespace wps {

/// Ring of coefficient constants: no geometric generators, just the listed
/// odd constants (a finite Grassmann algebra over the rationals).  An empty
/// list gives plain rational coefficients.
RingPtr constantsRing(const std::vector<std::string>& oddNames);

/// Homogeneous coordinate ring of the rank-nR weighted projective line:
/// even generators u, v of weight 1 and an odd generator theta of weight
/// 1 - nR/2, extended by the odd constants of `base`.
RingPtr susyHomogeneousRing(const RingPtr& base);

/// Affine chart rings of the same line: (z | zeta) on the chart where u is
/// inverted and (w | chi) on the chart where v is.  The even variable is
/// Laurent so that transition maps stay inside the ring.
RingPtr susyChartRingU(const RingPtr& base);
RingPtr susyChartRingV(const RingPtr& base);

/// One-form in homogeneous coordinates, fu*du + fv*dv + ftheta*dtheta, with
/// coefficients written to the left of the basis forms.
struct HomogeneousForm {
  SuperPoly fu, fv, ftheta;
  bool operator==(const HomogeneousForm&) const = default;
};

/// Global one-form of total weight two on the rank-nR weighted line, stored
/// by its coordinates in the canonical basis of such forms:
///   xs[0]       <->  u dv - v du
///   xs[1+i]     <->  u^{nR-i} v^i theta dtheta              (i = 0..nR)
///   xis[i]      <->  u^{nR/2-1-i} v^i theta (u dv - v du)   (i = 0..nR/2-1)
///   xis[nR/2+j] <->  u^{nR/2-j} v^j (u dtheta - theta du)   (j = 0..nR/2)
///   xis[nR+1]   <->  v^{nR/2} (v dtheta - theta dv)
/// The xs entries are even and the xis entries odd elements of the constants
/// ring `base`.  A form is *framed* when xs[0] is invertible.
struct SusyForm {
  int nR = 0;
  RingPtr base;
  std::vector<SuperPoly> xs;
  std::vector<SuperPoly> xis;

  bool operator==(const SusyForm& o) const;
};

SusyForm zeroSusyForm(int nR, RingPtr base);
void validateSusyForm(const SusyForm& s);
bool isFramed(const SusyForm& s);

/// Fixed serialization order: the even coefficients followed by the odd ones.
std::vector<SuperPoly> susyCoefficientList(const SusyForm& s);
SusyForm susyFormFromList(int nR, RingPtr base,
                          const std::vector<SuperPoly>& coeffs);

/// One canonical basis form over the homogeneous ring H (see SusyForm).
HomogeneousForm susyBasisForm(const RingPtr& H, int nR, Parity parity,
                              int idx);

/// Expansion of a SusyForm in homogeneous coordinates, and the exact inverse
/// (throws std::invalid_argument if the input is not in the canonical span).
HomogeneousForm toHomogeneousForm(const SusyForm& s);
SusyForm susyFormFromHomogeneous(int nR, const RingPtr& base,
                                 const HomogeneousForm& w);

/// Substitution maps between presentations: the homogeneous ring restricted
/// to a chart (u=1, v=z, theta=zeta, resp. v=1, u=w, theta=chi), and the
/// homogenization of a chart-U function at total weight `degree`
/// (z^a -> u^{degree-a} v^a, z^a zeta -> u^{degree-a-1+nR/2} v^a theta).
SuperPoly restrictToChartU(const SuperPoly& p, const RingPtr& chartU);
SuperPoly restrictToChartV(const SuperPoly& p, const RingPtr& chartV);
SuperPoly homogenizeChartU(const SuperPoly& f, int nR, int degree,
                           const RingPtr& H);

/// Chart restrictions of the twisted form: substitute u=1, v=z, theta=zeta
/// with du=0, dv=dz, dtheta=dzeta (and symmetrically on the other chart).
OneForm omegaOnChartU(const SusyForm& s);
OneForm omegaOnChartV(const SusyForm& s);

/// The rank-(0|1) distribution annihilated by a chart form F dz + G dzeta:
/// returns D = F d/dzeta - G d/dz, which satisfies omega(D) = 0.  Requires F
/// to be an even unit and G odd; throws std::invalid_argument otherwise.
VectorField distributionFromForm(const OneForm& omega);

/// Divisor measuring the failure of the distribution to be integrable: the
/// defining equation is extracted from (1/2)[D,D] projected along the
/// distribution and normalized by the unit coefficient of D, then
/// homogenized.  `p` is homogeneous of degree nR in u, v (theta-free, with
/// possibly nilpotent constant corrections) over the homogeneous ring.
struct RamondDivisorModel {
  int nR = 0;
  SuperPoly p;
};

/// Throws std::invalid_argument when the form is unframed or the distribution
/// is integrable (zero self-bracket leaves no divisor).
RamondDivisorModel ramondDivisor(const SusyForm& s);

/// Resultant of the two partial derivatives of a binary form of the declared
/// degree, a unit multiple of the classical homogeneous discriminant: zero
/// exactly when the form has a repeated projective root (including roots at
/// infinity).  Coefficients may carry nilpotent constants; the input must be
/// theta-free and homogeneous of the declared degree in u, v.
SuperPoly homogeneousDiscriminant(const SuperPoly& p, int degree);

/// Discriminant of the divisor of s, as an element of the constants ring.
SuperPoly framedDiscriminant(const SusyForm& s);

/// Framed with invertible divisor discriminant: the open condition cutting
/// out the structures whose divisor has distinct reduced points.
bool isFramedSusyPoint(const SusyForm& s);

/// Global sections of the weight-two twisted cotangent sheaf, computed as
/// the kernel of the evaluation map
///   H0(O(1)) du + H0(O(1)) dv + H0(O(nR/2+1)) dtheta  ->  H0(O(2)),
/// du -> u, dv -> v, dtheta -> theta.  The call verifies that the map is
/// onto (so the twisted cotangent sheaf has no higher cohomology) and that
/// the kernel has dimension (nR+2 | nR+2).
struct TwistedFormSections {
  DimPair dims;
  std::vector<HomogeneousForm> evenBasis, oddBasis;
};
TwistedFormSections h0OmegaTwisted(int nR);

/// Invertible global function a0 * (1 + theta * sum_i betas[i] u^{nR/2-1-i}
/// v^i): an even unit scalar a0 and nR/2 odd constants.  Composition
/// multiplies the scalars and adds the betas.
struct GammaStarElement {
  int nR = 0;
  RingPtr base;
  SuperPoly a0;
  std::vector<SuperPoly> betas;

  bool operator==(const GammaStarElement& o) const;
};

GammaStarElement gammaIdentity(int nR, RingPtr base);
void validateGammaStar(const GammaStarElement& g);
SuperPoly gammaHomogeneousFunction(const GammaStarElement& g,
                                   const RingPtr& H);
/// The same function on the chart where u is inverted:
/// a0 * (1 + zeta * sum_i betas[i] z^i).
SuperPoly gammaChartFunctionU(const GammaStarElement& g, const RingPtr& U);
GammaStarElement gammaCompose(const GammaStarElement& a,
                              const GammaStarElement& b);
GammaStarElement gammaInverse(const GammaStarElement& g);

/// Multiplication of the twisted form by the invertible function.
SusyForm gammaAction(const GammaStarElement& g, const SusyForm& s);

/// Unique orbit representative with xs[0] = 1 and xis[0..nR/2-1] = 0,
/// together with the group element reaching it: gammaAction(g, s) == fixed.
/// Throws std::invalid_argument on unframed input.
struct GaugeFixResult {
  GammaStarElement g;
  SusyForm fixed;
};
GaugeFixResult gaugeFix(const SusyForm& s);

/// Dimension bookkeeping for the moduli of rank-nR structures.  Every entry
/// is computed live from the corresponding cohomology or group model, and
/// the derived rows are exact differences of the computed ones.
struct ModuliDimensionReport {
  int nR = 0;
  DimPair framedForms;      // global twisted one-forms, (nR+2 | nR+2)
  DimPair gammaStar;        // invertible global functions, (1 | nR/2)
  DimPair susyQuotient;     // framedForms - gammaStar
  DimPair deformationBase;  // odd deformation parameters, (0 | nR/2-2)
  DimPair autGroup;         // global tangent fields, (4 | nR/2+2)
  DimPair moduli;           // susyQuotient + deformationBase - autGroup
};
ModuliDimensionReport moduliDimensionReport(int nR);

}  // namespace wps
