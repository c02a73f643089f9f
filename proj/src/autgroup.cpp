#include "wps/autgroup.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "wps/family.hpp"
#include "wps/qlinalg.hpp"
#include "wps/strata.hpp"

namespace wps {

namespace {

/// sum_i coeffs[i] * u^{half-i} v^i over the homogeneous ring (the odd
/// correction attached to one coordinate image, without its theta factor).
SuperPoly correctionPoly(const std::vector<SuperPoly>& coeffs,
                         const RingPtr& H, int half) {
  SuperPoly acc(H);
  for (int i = 0; i <= half; ++i)
    acc += embedConstants(coeffs[i], H) * SuperPoly::evenVar(H, 0, half - i) *
           SuperPoly::evenVar(H, 1, i);
  return acc;
}

/// Inverse of correctionPoly: coefficients of u^{half-i} v^i as constants.
std::vector<SuperPoly> correctionCoefficients(const SuperPoly& p, int half,
                                              const RingPtr& base,
                                              const RingPtr& H) {
  std::vector<SuperPoly> buckets(size_t(half) + 1, SuperPoly(H));
  for (const auto& [m, c] : p.terms()) {
    if (m.hasOdd(0))
      throw std::logic_error("correction polynomial carries the odd coordinate");
    const int eu = m.exponentOf(0);
    const int ev = m.exponentOf(1);
    if (eu < 0 || ev < 0 || ev > half || eu + ev != half)
      throw std::logic_error("correction polynomial has the wrong degree");
    for (const auto& [idx, exp] : m.evenExp)
      if (idx > 1 && exp != 0)
        throw std::logic_error("correction polynomial has stray even factors");
    Monomial stripped;
    stripped.oddMask = m.oddMask;
    buckets[size_t(ev)].addTerm(stripped, c);
  }
  std::vector<SuperPoly> out;
  out.reserve(buckets.size());
  for (const auto& b : buckets) out.push_back(restrictToConstants(b, base));
  return out;
}

/// Substitution replacing u, v by the linear block of h (theta untouched).
ChartMap linearBlockMap(const AutElement& h, const RingPtr& H) {
  SuperPoly u = SuperPoly::gen(H, "u");
  SuperPoly v = SuperPoly::gen(H, "v");
  ChartMap lin(H, H);
  lin.setImage("u", embedConstants(h.a, H) * u + embedConstants(h.b, H) * v);
  lin.setImage("v", embedConstants(h.c, H) * u + embedConstants(h.d, H) * v);
  return lin;
}

void requireSameGroup(const AutElement& g, const AutElement& h) {
  if (g.nR != h.nR)
    throw std::invalid_argument("automorphisms have different ranks");
  requireSameRing(g.base, h.base);
}

}  // namespace

bool AutElement::operator==(const AutElement& o) const {
  if (nR != o.nR) return false;
  if (!base || !o.base || !(*base == *o.base)) return false;
  return a == o.a && b == o.b && c == o.c && d == o.d && e == o.e &&
         alphas == o.alphas && betas == o.betas;
}

AutElement autIdentity(int nR, RingPtr base) {
  AutElement g;
  g.nR = nR;
  g.base = std::move(base);
  const SuperPoly one = SuperPoly::constant(g.base, Rat(1));
  const SuperPoly zero = SuperPoly::zero(g.base);
  g.a = one;
  g.b = zero;
  g.c = zero;
  g.d = one;
  g.e = one;
  g.alphas.assign(size_t(nR / 2) + 1, zero);
  g.betas.assign(size_t(nR / 2) + 1, zero);
  validateAutElement(g);
  return g;
}

void validateAutElement(const AutElement& g) {
  if (g.nR < 4 || g.nR % 2 != 0)
    throw std::invalid_argument("rank must be an even integer >= 4");
  if (!g.base) throw std::invalid_argument("missing constants ring");
  if (g.base->geomEven != 0 || g.base->geomOdd != 0)
    throw std::invalid_argument("entries must live in a constants ring");
  auto evenEntry = [&](const SuperPoly& p, const char* what) {
    requireSameRing(p.ring(), g.base);
    if (!p.isHomogeneousParity(Parity::Even))
      throw std::invalid_argument(std::string(what) +
                                  " must be an even constant");
  };
  evenEntry(g.a, "a");
  evenEntry(g.b, "b");
  evenEntry(g.c, "c");
  evenEntry(g.d, "d");
  evenEntry(g.e, "e");
  const size_t want = size_t(g.nR / 2) + 1;
  if (g.alphas.size() != want || g.betas.size() != want)
    throw std::invalid_argument("correction tuples need nR/2+1 slots");
  for (const auto* tuple : {&g.alphas, &g.betas})
    for (const SuperPoly& p : *tuple) {
      requireSameRing(p.ring(), g.base);
      if (!p.isHomogeneousParity(Parity::Odd))
        throw std::invalid_argument("corrections must be odd constants");
    }
  if (!(g.a * g.d - g.b * g.c).isUnit())
    throw std::invalid_argument("linear block must be invertible");
  if (!g.e.isUnit())
    throw std::invalid_argument("theta scale must be invertible");
}

ChartMap autRingMap(const AutElement& g, const RingPtr& H) {
  validateAutElement(g);
  requireSameRing(H, susyHomogeneousRing(g.base));
  const int half = g.nR / 2;
  const SuperPoly u = SuperPoly::gen(H, "u");
  const SuperPoly v = SuperPoly::gen(H, "v");
  const SuperPoly theta = SuperPoly::oddGen(H, 0);
  ChartMap m(H, H);
  m.setImage("u", embedConstants(g.a, H) * u + embedConstants(g.b, H) * v +
                      theta * correctionPoly(g.alphas, H, half));
  m.setImage("v", embedConstants(g.c, H) * u + embedConstants(g.d, H) * v +
                      theta * correctionPoly(g.betas, H, half));
  m.setImage("theta", embedConstants(g.e, H) * theta);
  return m;
}

AutElement autCompose(const AutElement& g, const AutElement& h) {
  validateAutElement(g);
  validateAutElement(h);
  requireSameGroup(g, h);
  const int half = g.nR / 2;
  AutElement r;
  r.nR = g.nR;
  r.base = g.base;
  r.a = g.a * h.a + g.b * h.c;
  r.b = g.a * h.b + g.b * h.d;
  r.c = g.c * h.a + g.d * h.c;
  r.d = g.c * h.b + g.d * h.d;
  r.e = g.e * h.e;
  // theta-correction of the composite: substituting h's images into g's and
  // discarding the theta*theta cross terms leaves
  //   a_g A_h + b_g B_h + e_h A_g(linear block of h), and the B analogue.
  RingPtr H = susyHomogeneousRing(g.base);
  const ChartMap lin = linearBlockMap(h, H);
  const SuperPoly Ah = correctionPoly(h.alphas, H, half);
  const SuperPoly Bh = correctionPoly(h.betas, H, half);
  const SuperPoly AgL = lin.apply(correctionPoly(g.alphas, H, half));
  const SuperPoly BgL = lin.apply(correctionPoly(g.betas, H, half));
  const SuperPoly eH = embedConstants(h.e, H);
  const SuperPoly combA = embedConstants(g.a, H) * Ah +
                          embedConstants(g.b, H) * Bh + eH * AgL;
  const SuperPoly combB = embedConstants(g.c, H) * Ah +
                          embedConstants(g.d, H) * Bh + eH * BgL;
  r.alphas = correctionCoefficients(combA, half, g.base, H);
  r.betas = correctionCoefficients(combB, half, g.base, H);
  validateAutElement(r);
  return r;
}

AutElement autInvert(const AutElement& g) {
  validateAutElement(g);
  const int half = g.nR / 2;
  const SuperPoly detInv = (g.a * g.d - g.b * g.c).inverse();
  AutElement h;
  h.nR = g.nR;
  h.base = g.base;
  h.a = g.d * detInv;
  h.b = -(g.b * detInv);
  h.c = -(g.c * detInv);
  h.d = g.a * detInv;
  h.e = g.e.inverse();
  // The composite's corrections must vanish; solving the 2x2 linear system
  // from autCompose(g, h) for h's correction polynomials gives
  //   (A_h, B_h) = -e_h * det^{-1} * (d_g A_g(L_h) - b_g B_g(L_h),
  //                                   -c_g A_g(L_h) + a_g B_g(L_h)).
  RingPtr H = susyHomogeneousRing(g.base);
  const ChartMap lin = linearBlockMap(h, H);
  const SuperPoly AgL = lin.apply(correctionPoly(g.alphas, H, half));
  const SuperPoly BgL = lin.apply(correctionPoly(g.betas, H, half));
  const SuperPoly scale = embedConstants(h.e * detInv, H);
  const SuperPoly solA =
      -(scale * (embedConstants(g.d, H) * AgL - embedConstants(g.b, H) * BgL));
  const SuperPoly solB =
      -(scale *
        (embedConstants(g.a, H) * BgL - embedConstants(g.c, H) * AgL));
  h.alphas = correctionCoefficients(solA, half, g.base, H);
  h.betas = correctionCoefficients(solB, half, g.base, H);
  validateAutElement(h);
  const AutElement id = autIdentity(g.nR, g.base);
  if (!(autCompose(g, h) == id) || !(autCompose(h, g) == id))
    throw std::logic_error("inverse certification failed");
  return h;
}

AutElement gammaAsAut(const GammaStarElement& g) {
  validateGammaStar(g);
  const int half = g.nR / 2;
  AutElement r;
  r.nR = g.nR;
  r.base = g.base;
  r.a = g.a0;
  r.d = g.a0;
  r.b = SuperPoly::zero(g.base);
  r.c = SuperPoly::zero(g.base);
  r.e = g.a0.inverse().pow(half - 1);
  r.alphas.assign(size_t(half) + 1, SuperPoly::zero(g.base));
  r.betas.assign(size_t(half) + 1, SuperPoly::zero(g.base));
  for (int i = 0; i < half; ++i) r.alphas[size_t(i)] = g.a0 * g.betas[size_t(i)];
  for (int j = 1; j <= half; ++j)
    r.betas[size_t(j)] = g.a0 * g.betas[size_t(j - 1)];
  validateAutElement(r);
  return r;
}

std::optional<GammaStarElement> rescalingWitness(const AutElement& g,
                                                 const AutElement& h) {
  validateAutElement(g);
  validateAutElement(h);
  requireSameGroup(g, h);
  const AutElement k = autCompose(h, autInvert(g));
  if (!k.b.isZero() || !k.c.isZero()) return std::nullopt;
  if (!(k.a == k.d) || !k.a.isUnit()) return std::nullopt;
  GammaStarElement w;
  w.nR = g.nR;
  w.base = g.base;
  w.a0 = k.a;
  const SuperPoly aInv = k.a.inverse();
  w.betas.clear();
  for (int i = 0; i < g.nR / 2; ++i)
    w.betas.push_back(aInv * k.alphas[size_t(i)]);
  // Certify the reconstruction; a wrong theta scale or inconsistent
  // correction slots fail here.
  if (!(gammaAsAut(w) == k)) return std::nullopt;
  return w;
}

bool quotientEqual(const AutElement& g, const AutElement& h) {
  return rescalingWitness(g, h).has_value();
}

ChartMap autChartMapU(const AutElement& g, const RingPtr& chartU) {
  validateAutElement(g);
  if (!g.b.isZero())
    throw std::invalid_argument(
        "U-chart substitution needs b == 0 to keep the denominator a unit");
  requireSameRing(chartU, susyChartRingU(g.base));
  const int half = g.nR / 2;
  const SuperPoly z = SuperPoly::gen(chartU, "z");
  const SuperPoly zeta = SuperPoly::oddGen(chartU, 0);
  SuperPoly atZ(chartU), btZ(chartU);
  for (int i = 0; i <= half; ++i) {
    atZ += embedConstants(g.alphas[size_t(i)], chartU) *
           SuperPoly::evenVar(chartU, 0, i);
    btZ += embedConstants(g.betas[size_t(i)], chartU) *
           SuperPoly::evenVar(chartU, 0, i);
  }
  const SuperPoly denom = embedConstants(g.a, chartU) + zeta * atZ;
  ChartMap m(chartU, chartU);
  m.setImage("z", (embedConstants(g.c, chartU) +
                   embedConstants(g.d, chartU) * z + zeta * btZ) *
                      denom.inverse());
  m.setImage("zeta",
             embedConstants(g.e, chartU) * zeta * denom.pow(half - 1));
  return m;
}

ChartMap autChartMapV(const AutElement& g, const RingPtr& chartV) {
  validateAutElement(g);
  if (!g.c.isZero())
    throw std::invalid_argument(
        "V-chart substitution needs c == 0 to keep the denominator a unit");
  requireSameRing(chartV, susyChartRingV(g.base));
  const int half = g.nR / 2;
  const SuperPoly w = SuperPoly::gen(chartV, "w");
  const SuperPoly chi = SuperPoly::oddGen(chartV, 0);
  SuperPoly atW(chartV), btW(chartV);
  for (int i = 0; i <= half; ++i) {
    atW += embedConstants(g.alphas[size_t(i)], chartV) *
           SuperPoly::evenVar(chartV, 0, half - i);
    btW += embedConstants(g.betas[size_t(i)], chartV) *
           SuperPoly::evenVar(chartV, 0, half - i);
  }
  const SuperPoly denom = embedConstants(g.d, chartV) + chi * btW;
  ChartMap m(chartV, chartV);
  m.setImage("w", (embedConstants(g.a, chartV) * w +
                   embedConstants(g.b, chartV) + chi * atW) *
                      denom.inverse());
  m.setImage("chi",
             embedConstants(g.e, chartV) * chi * denom.pow(half - 1));
  return m;
}

std::vector<SuperPoly> actOnDeformation(const AutElement& g,
                                        const std::vector<SuperPoly>& params) {
  validateAutElement(g);
  if (!g.b.isZero() || !g.c.isZero())
    throw std::invalid_argument(
        "gluing-parameter transport needs a chart-preserving element "
        "(b == c == 0)");
  const int q = g.nR / 2 - 1;
  const size_t t = size_t(g.nR / 2 - 2);
  if (params.size() != t)
    throw std::invalid_argument("expected nR/2-2 gluing parameters");
  for (const SuperPoly& p : params) {
    requireSameRing(p.ring(), g.base);
    if (!p.isHomogeneousParity(Parity::Odd))
      throw std::invalid_argument("gluing parameters must be odd");
  }
  RingPtr U = susyChartRingU(g.base);
  RingPtr V = susyChartRingV(g.base);
  ChartMap glue(V, U);
  glue.setImage("w", SuperPoly::evenVar(U, 0, -1));
  SuperPoly chiImg = SuperPoly::oddGen(U, 0) * SuperPoly::evenVar(U, 0, q);
  for (size_t i = 1; i <= t; ++i)
    chiImg += embedConstants(params[i - 1], U) *
              SuperPoly::evenVar(U, 0, q - int(i));
  glue.setImage("chi", chiImg);
  const ChartMap conj = compose(autChartMapU(autInvert(g), U),
                                compose(glue, autChartMapV(g, V)));
  DeformationClassification cls = classifyDeformation(conj);
  std::vector<SuperPoly> out;
  out.reserve(cls.params.size());
  for (const SuperPoly& p : cls.params)
    out.push_back(restrictToConstants(p, g.base));
  return out;
}

SusyForm actOnSusy(const AutElement& g, const SusyForm& s) {
  validateAutElement(g);
  validateSusyForm(s);
  if (g.nR != s.nR)
    throw std::invalid_argument("automorphism and form have different ranks");
  requireSameRing(g.base, s.base);
  RingPtr H = susyHomogeneousRing(s.base);
  const HomogeneousForm hf = toHomogeneousForm(s);
  OneForm omega(H);
  omega.setComp("u", hf.fu);
  omega.setComp("v", hf.fv);
  omega.setComp("theta", hf.ftheta);
  const ChartMap m = autRingMap(autInvert(g), H);
  const OneForm pulled = pullbackForm(omega, m);
  const HomogeneousForm movedH{pulled.comp("u"), pulled.comp("v"),
                               pulled.comp("theta")};
  SusyForm moved = susyFormFromHomogeneous(s.nR, s.base, movedH);
  if (!isFramed(moved))
    throw std::logic_error("automorphism action lost the frame");
  return gaugeFix(moved).fixed;
}

SuperconformalReport superconformalSectionsForPolynomial(
    const std::vector<Rat>& pCoeffs, int nRLike) {
  if (nRLike < 2 || nRLike % 2 != 0)
    throw std::invalid_argument("rank analogue must be an even integer >= 2");
  WPSpace X(1 - nRLike / 2);
  const RingPtr& RU = X.ringU();
  SuperPoly p(RU);
  for (size_t i = 0; i < pCoeffs.size(); ++i)
    p += pCoeffs[i] * SuperPoly::evenVar(RU, 0, int(i));
  const SuperPoly zeta = SuperPoly::oddGen(RU, 0);
  VectorField D(RU);
  D.setComp("zeta", SuperPoly::constant(RU, Rat(1)));
  D.setComp("z", -(p * zeta));
  const SuperPoly dz = D.comp("z");
  const TangentCohomology tc = tangentCohomology(X);

  SuperconformalReport rep;
  for (Parity par : {Parity::Even, Parity::Odd}) {
    std::vector<const VectorField*> candidates;
    for (const GlobalField& gf : tc.h0basis) {
      const auto pr = gf.onU.parity();
      if (pr && *pr == par && !gf.onU.isZero()) candidates.push_back(&gf.onU);
    }
    // [D, X] lies in the span of D iff the z-component of the bracket equals
    // lambda * D_z with lambda the zeta-component (D's zeta-component is 1);
    // the residual is linear in X, one rational column per candidate field.
    std::vector<SuperPoly> residuals;
    residuals.reserve(candidates.size());
    for (const VectorField* cand : candidates) {
      const VectorField bk = bracket(D, *cand);
      residuals.push_back(bk.comp("z") - bk.comp("zeta") * dz);
    }
    std::map<Monomial, int> rowOf;
    for (const SuperPoly& r : residuals)
      for (const auto& [m, c] : r.terms()) rowOf.emplace(m, 0);
    int nextRow = 0;
    for (auto& [m, row] : rowOf) row = nextRow++;
    RatMat mat(nextRow, int(residuals.size()));
    for (int k = 0; k < int(residuals.size()); ++k)
      for (const auto& [m, c] : residuals[size_t(k)].terms())
        mat.at(rowOf.at(m), k) = c;
    std::vector<VectorField>& dst =
        (par == Parity::Even) ? rep.evenBasis : rep.oddBasis;
    for (const std::vector<Rat>& coords : nullspaceBasis(mat)) {
      VectorField sol(RU);
      for (size_t k = 0; k < coords.size(); ++k)
        sol = sol + candidates[k]->scaled(coords[k]);
      dst.push_back(sol);
    }
  }
  rep.dims = DimPair{long(rep.evenBasis.size()), long(rep.oddBasis.size())};
  return rep;
}

SuperconformalReport superconformalGlobalSections(const SusyForm& s) {
  validateSusyForm(s);
  if (!s.base->odd.empty())
    throw std::invalid_argument(
        "the symmetry solver runs over plain rational constants");
  if (!(gaugeFix(s).fixed == s))
    throw std::invalid_argument("structure must be gauge-fixed");
  if (!framedDiscriminant(s).isUnit())
    throw std::invalid_argument("divisor discriminant must be invertible");
  const RamondDivisorModel model = ramondDivisor(s);
  std::vector<Rat> pc(size_t(s.nR) + 1, Rat(0));
  for (const auto& [m, c] : model.p.terms()) {
    if (m.oddMask != 0)
      throw std::logic_error("divisor polynomial carries odd factors");
    const int ev = m.exponentOf(1);
    if (ev < 0 || ev > s.nR || m.exponentOf(0) != s.nR - ev)
      throw std::logic_error("divisor polynomial is not homogeneous");
    pc[size_t(ev)] = c;
  }
  return superconformalSectionsForPolynomial(pc, s.nR);
}

StabilizerReport stabilizer(const SusyForm& s) {
  validateSusyForm(s);
  if (!s.base->odd.empty())
    throw std::invalid_argument(
        "the symmetry search runs over plain rational constants");
  if (!(gaugeFix(s).fixed == s))
    throw std::invalid_argument("structure must be gauge-fixed");
  if (!framedDiscriminant(s).isUnit())
    throw std::invalid_argument(
        "divisor has a repeated point; the symmetry search needs distinct "
        "reduced points");
  // A symmetry fixes each of the nR >= 4 labelled divisor points, and a
  // fractional-linear map of the line with more than two fixed points is the
  // identity; with the frame normalized, the only remaining freedom is the
  // sign of the odd coordinate.
  AutElement flip = autIdentity(s.nR, s.base);
  flip.e = SuperPoly::constant(s.base, Rat(-1));
  const AutElement id = autIdentity(s.nR, s.base);
  if (!(actOnSusy(flip, s) == s))
    throw std::logic_error("sign flip failed to fix the structure");
  if (quotientEqual(id, flip))
    throw std::logic_error("sign flip collapsed to a rescaling");
  if (!(autCompose(flip, flip) == id))
    throw std::logic_error("sign flip must square to the identity");
  return StabilizerReport{2, flip};
}

AutDimensionTable autDimensionTable(int nR) {
  if (nR < 4 || nR % 2 != 0)
    throw std::invalid_argument("rank must be an even integer >= 4");
  AutDimensionTable t;
  t.nR = nR;
  t.fullGroup = DimPair{5, long(nR) + 2};
  t.rescalings = DimPair{1, long(nR) / 2};
  t.quotient = t.fullGroup - t.rescalings;
  const TangentCohomology tc = tangentCohomology(WPSpace(1 - nR / 2));
  if (!(tc.h0dim == t.quotient))
    throw std::logic_error(
        "quotient parameter count disagrees with the tangent sections");
  return t;
}

}  // namespace wps
