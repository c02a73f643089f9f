#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wps/chartmap.hpp"
#include "wps/derivation.hpp"
#include "wps/superpoly.hpp"

namespace wps {

/// Dimension of a Z/2-graded vector space, printed "(p|q)".
struct DimPair {
  long even = 0;
  long odd = 0;
  friend bool operator==(const DimPair&, const DimPair&) = default;
  DimPair operator+(const DimPair& o) const { return {even + o.even, odd + o.odd}; }
  DimPair operator-(const DimPair& o) const { return {even - o.even, odd - o.odd}; }
  /// Parity swap (the effect of tensoring with an odd line).
  DimPair swapped() const { return {odd, even}; }
  std::string str() const;
};

/// The weighted projective superline with homogeneous weights (1,1|m),
/// modelled on two affine charts: U with coordinates (z, zeta) and V with
/// (w, chi), glued over z != 0 by z = 1/w, zeta = chi * w^{-m}.
class WPSpace {
 public:
  explicit WPSpace(int m);
  int m() const { return m_; }
  const RingPtr& ringU() const { return U_; }
  const RingPtr& ringV() const { return V_; }
  /// Substitution taking U-chart expressions to V-chart expressions.
  const ChartMap& uToV() const { return uToV_; }
  /// Substitution taking V-chart expressions to U-chart expressions.
  const ChartMap& vToU() const { return vToU_; }

 private:
  int m_;
  RingPtr U_, V_;
  ChartMap uToV_, vToU_;
};

/// Invertible sheaf on a WPSpace in the two-chart model: a V-chart section
/// s_V and a U-chart section s_U represent the same global object when
/// s_U = transition * vToU(s_V) on the overlap.
struct LineBundleModel {
  int twist = 0;
  SuperPoly transition;  // expressed in the U chart; a unit on the overlap
};

LineBundleModel lineBundle(const WPSpace& X, int d);
/// Tensor product; the transition is the product of the factors'.
LineBundleModel tensorBundle(const WPSpace& X, const LineBundleModel& a,
                             const LineBundleModel& b);

/// Laurent z-degree window bounding the overlap sections examined by the
/// cohomology solvers. Dimensions are independent of the window once it is
/// large enough; that stabilization is itself a tested property.
struct CechWindow {
  int loDeg = 0;
  int hiDeg = 0;
};

CechWindow defaultWindow(const WPSpace& X, int d);

struct GlobalSection {
  SuperPoly onU;
  SuperPoly onV;
};

struct LineBundleCohomology {
  int twist = 0;
  DimPair h0dim, h1dim;
  /// Pairs satisfying onU = transition * vToU(onV) exactly.
  std::vector<GlobalSection> h0basis;
  /// Overlap monomial representatives (U-chart coordinates) of H^1 classes.
  std::vector<SuperPoly> h1basis;
};

LineBundleCohomology lineBundleCohomology(const WPSpace& X, int d,
                                          std::optional<CechWindow> win = {});
DimPair h0LineBundle(const WPSpace& X, int d);
DimPair h1LineBundle(const WPSpace& X, int d);

struct GlobalField {
  VectorField onU;
  VectorField onV;
};

struct TangentCohomology {
  DimPair h0dim, h1dim;
  /// Pairs whose U-restriction equals the transported V-restriction.
  std::vector<GlobalField> h0basis;
  /// Overlap monomial representatives (U-chart coordinates) of H^1 classes.
  std::vector<VectorField> h1basis;
};

TangentCohomology tangentCohomology(const WPSpace& X,
                                    std::optional<CechWindow> win = {});

/// Result of splitting an overlap cocycle into cohomology coordinates and a
/// coboundary: v = sum_i coords[i]*basis[i] + fromU + fromV, where
/// fromU is the overlap restriction of the polynomial U-chart datum onU and
/// fromV = -transport(onV) for the polynomial V-chart datum onV.
struct CocycleReduction {
  std::vector<Rat> coords;
  VectorField fromU, fromV;
  VectorField onU, onV;
};

CocycleReduction reduceCocycle(const WPSpace& X, const VectorField& v);

/// Line-bundle analogue of reduceCocycle for an overlap section of O(d).
struct SectionReduction {
  std::vector<Rat> coords;
  SuperPoly fromU, fromV;
  SuperPoly onU, onV;
};

SectionReduction reduceSectionCocycle(const WPSpace& X, int d,
                                      const SuperPoly& v);

/// If the polynomial U-chart field extends to a global field, returns the
/// V-chart partner; otherwise std::nullopt.
std::optional<VectorField> globalExtensionOfU(const WPSpace& X,
                                              const VectorField& onU);

}  // namespace wps
