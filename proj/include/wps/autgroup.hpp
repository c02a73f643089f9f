#pragma once

#include <optional>
#include <vector>

#include "wps/chartmap.hpp"
#include "wps/derivation.hpp"
#include "wps/sheaf.hpp"
#include "wps/superpoly.hpp"
#include "wps/susy.hpp"

namespace wps {

/// Global automorphism of the rank-nR weighted line over a Grassmann
/// constants ring, written on homogeneous coordinates as
///   u     ->  a*u + b*v + theta * sum_i alphas[i] u^{nR/2-i} v^i,
///   v     ->  c*u + d*v + theta * sum_j betas[j]  u^{nR/2-j} v^j,
///   theta ->  e*theta.
/// Every entry is a constant (an element of `base`): a,b,c,d,e even with
/// a*d - b*c and e invertible, the corrections odd with nR/2+1 slots each.
/// Free parameters: (5 | nR+2).
struct AutElement {
  int nR = 0;
  RingPtr base;
  SuperPoly a, b, c, d, e;
  std::vector<SuperPoly> alphas, betas;

  bool operator==(const AutElement& o) const;
};

AutElement autIdentity(int nR, RingPtr base);
void validateAutElement(const AutElement& g);

/// The substitution realizing g on the homogeneous coordinate ring, which
/// must extend g's constants ring by u, v, theta.
ChartMap autRingMap(const AutElement& g, const RingPtr& H);

/// Group law, "h first, then g": the induced substitutions compose as
///   autRingMap(autCompose(g,h)) == compose(autRingMap(h), autRingMap(g)).
AutElement autCompose(const AutElement& g, const AutElement& h);

/// Exact inverse: adjugate over the determinant for the linear block, the
/// scalar inverse for e, and a 2x2 solve over the ring for the odd
/// corrections.  The result is certified by composing back to the identity.
AutElement autInvert(const AutElement& g);

/// The automorphism attached to an invertible global function: u and v are
/// multiplied by the function and theta by the matching inverse power of its
/// scalar part.  These rescalings induce the identity on both affine charts,
/// so they act trivially on every chart-level object.
AutElement gammaAsAut(const GammaStarElement& g);

/// When compose(h, invert(g)) is a rescaling automorphism, returns the
/// invertible function responsible: gammaAsAut(*witness) == h o g^{-1}.
/// Otherwise nullopt.  quotientEqual is the boolean view; it is the equality
/// test of the quotient group of automorphisms modulo rescalings.
std::optional<GammaStarElement> rescalingWitness(const AutElement& g,
                                                 const AutElement& h);
bool quotientEqual(const AutElement& g, const AutElement& h);

/// Substitution induced by g on an affine chart ring (as produced by
/// susyChartRingU / susyChartRingV over g's constants).  The denominator of
/// the fractional-linear image is invertible in the Laurent chart ring only
/// when the off-diagonal entry vanishes, so the U-chart map requires b == 0
/// and the V-chart map requires c == 0; std::invalid_argument otherwise.
ChartMap autChartMapU(const AutElement& g, const RingPtr& chartU);
ChartMap autChartMapV(const AutElement& g, const RingPtr& chartV);

/// Action on the odd gluing parameters of the deformed two-chart family
/// (chi = zeta z^q + sum params[i] z^{q-i}, q = nR/2-1): conjugates the
/// deformed gluing by g's chart substitutions and re-extracts the normalized
/// coefficients via classifyDeformation.  Input entries are odd elements of
/// g's constants ring, nR/2-2 of them; the output is the transported tuple.
/// Requires b == c == 0 (both charts preserved); rescaling automorphisms act
/// trivially, so the action is well defined on the quotient group.
std::vector<SuperPoly> actOnDeformation(const AutElement& g,
                                        const std::vector<SuperPoly>& params);

/// Action on global twisted one-forms: pull the form back along the ring map
/// of the inverse element and re-normalize the frame with gaugeFix.  Defined
/// for every group element (no chart restriction) and constant on rescaling
/// classes, giving a left action of the quotient group on gauge-fixed forms.
SusyForm actOnSusy(const AutElement& g, const SusyForm& s);

/// Global tangent fields X with [D, X] contained in the span of D, where D
/// is the rank-(0|1) distribution cut out by the twisted form dz + p zeta
/// dzeta on the chart of the weighted line of twist 1 - nRLike/2.  The
/// condition is one exact rational linear system per parity over the span of
/// the globally extending fields; basis fields are U-chart presentations.
struct SuperconformalReport {
  DimPair dims;
  std::vector<VectorField> evenBasis, oddBasis;
};

/// Raw solver on an explicit chart polynomial p = sum pCoeffs[i] z^i; also
/// meaningful below rank 4, where nontrivial solutions exist.
SuperconformalReport superconformalSectionsForPolynomial(
    const std::vector<Rat>& pCoeffs, int nRLike);

/// Solver on a gauge-fixed structure over plain rational constants with
/// invertible divisor discriminant; returns (0|0) there, and that emptiness
/// is the infinitesimal-rigidity statement for valid structures.
SuperconformalReport superconformalGlobalSections(const SusyForm& s);

/// Finite symmetry group of a gauge-fixed structure whose divisor has
/// distinct reduced points, the points being treated as marked: a symmetry
/// must fix each of the nR >= 4 labelled divisor points individually, and a
/// fractional-linear map of the line fixing more than two points is the
/// identity; the surviving freedom is the theta sign, giving order two.
/// Special symmetric divisors admit extra form-preserving elements that
/// permute the points; those are deliberately not counted here.  Both
/// certificates are re-checked on the instance (the flip fixes the form, and
/// it is not a rescaling).
struct StabilizerReport {
  int order = 0;
  AutElement nontrivial;
};
StabilizerReport stabilizer(const SusyForm& s);

/// Parameter counts of the three groups: the full automorphism group, the
/// rescaling subgroup, and their quotient; the quotient row is cross-checked
/// live against the tangent cohomology of the weighted line.
struct AutDimensionTable {
  int nR = 0;
  DimPair fullGroup;   // (5 | nR+2)
  DimPair rescalings;  // (1 | nR/2)
  DimPair quotient;    // (4 | nR/2+2)
};
AutDimensionTable autDimensionTable(int nR);

}  // namespace wps
