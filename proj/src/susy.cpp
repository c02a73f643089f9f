#include "wps/susy.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wps/family.hpp"
#include "wps/qlinalg.hpp"
#include "wps/strata.hpp"

namespace wps {

namespace {

void requireEvenRank(int nR) {
  if (nR < 4 || nR % 2 != 0)
    throw std::invalid_argument("rank must be an even integer >= 4");
}

void requireConstantsRing(const RingPtr& base) {
  if (!base) throw std::invalid_argument("coefficient ring is null");
  if (!base->even.empty() || base->geomOdd != 0)
    throw std::invalid_argument(
        "coefficient ring must consist of odd constants only");
}

bool sameRing(const RingPtr& a, const RingPtr& b) {
  if (!a || !b) return a == b;
  return *a == *b;
}

/// u^a v^b, optionally times theta, over the homogeneous ring.
SuperPoly uvMono(const RingPtr& H, int a, int b, bool theta) {
  if (a < 0 || b < 0)
    throw std::invalid_argument("monomial exponents must be nonnegative");
  Monomial m;
  if (a != 0) m.evenExp.push_back({0, a});
  if (b != 0) m.evenExp.push_back({1, b});
  if (theta) m.oddMask = 1;
  SuperPoly p(H);
  p.addTerm(m, Rat(1));
  return p;
}

void requireHomogeneousRing(const RingPtr& H) {
  if (!H || H->geomEven != 2 || H->geomOdd != 1 || H->evenIndex("u") != 0 ||
      H->evenIndex("v") != 1 || H->oddIndex("theta") != 0)
    throw std::invalid_argument(
        "expected the homogeneous ring with generators u, v | theta");
}

void requireChartShape(const RingPtr& r, const std::string& evenName,
                       const std::string& oddName) {
  if (!r || r->geomEven != 1 || r->geomOdd != 1 ||
      r->evenIndex(evenName) != 0 || r->oddIndex(oddName) != 0)
    throw std::invalid_argument("expected a chart ring with generators " +
                                evenName + " | " + oddName);
}

ChartMap chartRestrictionU(const RingPtr& H, const RingPtr& U) {
  requireHomogeneousRing(H);
  requireChartShape(U, "z", "zeta");
  ChartMap m(H, U);
  m.setImage("u", SuperPoly::constant(U, Rat(1)));
  m.setImage("v", SuperPoly::evenVar(U, 0));
  m.setImage("theta", SuperPoly::oddGen(U, 0));
  return m;
}

ChartMap chartRestrictionV(const RingPtr& H, const RingPtr& V) {
  requireHomogeneousRing(H);
  requireChartShape(V, "w", "chi");
  ChartMap m(H, V);
  m.setImage("u", SuperPoly::evenVar(V, 0));
  m.setImage("v", SuperPoly::constant(V, Rat(1)));
  m.setImage("theta", SuperPoly::oddGen(V, 0));
  return m;
}

void requireCoefficient(const SuperPoly& c, const RingPtr& base, Parity want,
                        const char* what) {
  if (!sameRing(c.ring(), base))
    throw std::invalid_argument(std::string(what) +
                                " lives in a different coefficient ring");
  if (!c.isHomogeneousParity(want))
    throw std::invalid_argument(std::string(what) + " has the wrong parity");
}

/// Row indexing for triples of polynomials used as linear-algebra vectors:
/// slot 0 = fu, 1 = fv, 2 = ftheta.
using TripleKey = std::pair<int, Monomial>;

void collectRows(const HomogeneousForm& f, std::map<TripleKey, int>& rows) {
  auto scan = [&](int slot, const SuperPoly& p) {
    for (const auto& [m, c] : p.terms()) {
      TripleKey k{slot, m};
      if (!rows.count(k)) {
        int next = static_cast<int>(rows.size());
        rows.emplace(k, next);
      }
    }
  };
  scan(0, f.fu);
  scan(1, f.fv);
  scan(2, f.ftheta);
}

bool fillColumn(const HomogeneousForm& f, const std::map<TripleKey, int>& rows,
                std::vector<Rat>& col) {
  auto put = [&](int slot, const SuperPoly& p) {
    for (const auto& [m, c] : p.terms()) {
      auto it = rows.find(TripleKey{slot, m});
      if (it == rows.end()) return false;
      col[it->second] = c;
    }
    return true;
  };
  return put(0, f.fu) && put(1, f.fv) && put(2, f.ftheta);
}

}  // namespace

RingPtr constantsRing(const std::vector<std::string>& oddNames) {
  RingBuilder b;
  b.endGeometric();
  for (const auto& n : oddNames) b.odd(n);
  return b.build();
}

RingPtr susyHomogeneousRing(const RingPtr& base) {
  requireConstantsRing(base);
  RingBuilder b;
  b.even("u").even("v").odd("theta").endGeometric();
  for (const auto& n : base->odd) b.odd(n);
  return b.build();
}

RingPtr susyChartRingU(const RingPtr& base) {
  requireConstantsRing(base);
  RingBuilder b;
  b.even("z", /*laurent=*/true).odd("zeta").endGeometric();
  for (const auto& n : base->odd) b.odd(n);
  return b.build();
}

RingPtr susyChartRingV(const RingPtr& base) {
  requireConstantsRing(base);
  RingBuilder b;
  b.even("w", /*laurent=*/true).odd("chi").endGeometric();
  for (const auto& n : base->odd) b.odd(n);
  return b.build();
}

bool SusyForm::operator==(const SusyForm& o) const {
  if (nR != o.nR || !sameRing(base, o.base)) return false;
  return xs == o.xs && xis == o.xis;
}

SusyForm zeroSusyForm(int nR, RingPtr base) {
  requireEvenRank(nR);
  requireConstantsRing(base);
  SusyForm s;
  s.nR = nR;
  s.base = base;
  s.xs.assign(nR + 2, SuperPoly::zero(base));
  s.xis.assign(nR + 2, SuperPoly::zero(base));
  return s;
}

void validateSusyForm(const SusyForm& s) {
  requireEvenRank(s.nR);
  requireConstantsRing(s.base);
  const size_t want = static_cast<size_t>(s.nR) + 2;
  if (s.xs.size() != want || s.xis.size() != want)
    throw std::invalid_argument(
        "a rank-nR form needs nR+2 even and nR+2 odd coefficients");
  for (const auto& c : s.xs)
    requireCoefficient(c, s.base, Parity::Even, "an even coefficient");
  for (const auto& c : s.xis)
    requireCoefficient(c, s.base, Parity::Odd, "an odd coefficient");
}

bool isFramed(const SusyForm& s) {
  validateSusyForm(s);
  return s.xs[0].isUnit();
}

std::vector<SuperPoly> susyCoefficientList(const SusyForm& s) {
  validateSusyForm(s);
  std::vector<SuperPoly> out = s.xs;
  out.insert(out.end(), s.xis.begin(), s.xis.end());
  return out;
}

SusyForm susyFormFromList(int nR, RingPtr base,
                          const std::vector<SuperPoly>& coeffs) {
  requireEvenRank(nR);
  const size_t half = static_cast<size_t>(nR) + 2;
  if (coeffs.size() != 2 * half)
    throw std::invalid_argument(
        "coefficient list must hold 2*(nR+2) entries");
  SusyForm s = zeroSusyForm(nR, std::move(base));
  for (size_t i = 0; i < half; ++i) s.xs[i] = coeffs[i];
  for (size_t i = 0; i < half; ++i) s.xis[i] = coeffs[half + i];
  validateSusyForm(s);
  return s;
}

HomogeneousForm susyBasisForm(const RingPtr& H, int nR, Parity parity,
                              int idx) {
  requireHomogeneousRing(H);
  requireEvenRank(nR);
  const int n = nR;
  HomogeneousForm f{SuperPoly::zero(H), SuperPoly::zero(H),
                    SuperPoly::zero(H)};
  if (parity == Parity::Even) {
    if (idx < 0 || idx > n + 1)
      throw std::invalid_argument("even basis index out of range");
    if (idx == 0) {
      f.fu = -uvMono(H, 0, 1, false);  // u dv - v du
      f.fv = uvMono(H, 1, 0, false);
      return f;
    }
    const int i = idx - 1;  // u^{n-i} v^i theta dtheta
    f.ftheta = uvMono(H, n - i, i, true);
    return f;
  }
  if (idx < 0 || idx > n + 1)
    throw std::invalid_argument("odd basis index out of range");
  if (idx < n / 2) {
    const int i = idx;  // u^{n/2-1-i} v^i theta (u dv - v du)
    f.fv = uvMono(H, n / 2 - i, i, true);
    f.fu = -uvMono(H, n / 2 - 1 - i, i + 1, true);
    return f;
  }
  if (idx <= n) {
    const int j = idx - n / 2;  // u^{n/2-j} v^j (u dtheta - theta du)
    f.ftheta = uvMono(H, n / 2 - j + 1, j, false);
    f.fu = -uvMono(H, n / 2 - j, j, true);
    return f;
  }
  // v^{n/2} (v dtheta - theta dv)
  f.ftheta = uvMono(H, 0, n / 2 + 1, false);
  f.fv = -uvMono(H, 0, n / 2, true);
  return f;
}

HomogeneousForm toHomogeneousForm(const SusyForm& s) {
  validateSusyForm(s);
  RingPtr H = susyHomogeneousRing(s.base);
  HomogeneousForm acc{SuperPoly::zero(H), SuperPoly::zero(H),
                      SuperPoly::zero(H)};
  auto addPiece = [&](const SuperPoly& coeff, Parity parity, int idx) {
    if (coeff.isZero()) return;
    SuperPoly c = embedConstants(coeff, H);
    HomogeneousForm b = susyBasisForm(H, s.nR, parity, idx);
    acc.fu += c * b.fu;
    acc.fv += c * b.fv;
    acc.ftheta += c * b.ftheta;
  };
  for (int i = 0; i < s.nR + 2; ++i) addPiece(s.xs[i], Parity::Even, i);
  for (int i = 0; i < s.nR + 2; ++i) addPiece(s.xis[i], Parity::Odd, i);
  return acc;
}

SusyForm susyFormFromHomogeneous(int nR, const RingPtr& base,
                                 const HomogeneousForm& w) {
  requireEvenRank(nR);
  requireConstantsRing(base);
  RingPtr H = susyHomogeneousRing(base);
  for (const SuperPoly* p : {&w.fu, &w.fv, &w.ftheta})
    if (!sameRing(p->ring(), H))
      throw std::invalid_argument(
          "form components live in the wrong homogeneous ring");

  RingPtr plainBase = constantsRing({});
  RingPtr plainH = susyHomogeneousRing(plainBase);
  const int half = nR + 2;

  std::vector<HomogeneousForm> evenForms, oddForms;
  std::map<TripleKey, int> rows;
  for (int i = 0; i < half; ++i) {
    evenForms.push_back(susyBasisForm(plainH, nR, Parity::Even, i));
    oddForms.push_back(susyBasisForm(plainH, nR, Parity::Odd, i));
    collectRows(evenForms.back(), rows);
    collectRows(oddForms.back(), rows);
  }
  const int nrows = static_cast<int>(rows.size());
  RatMat evenMat(nrows, half), oddMat(nrows, half);
  for (int j = 0; j < half; ++j) {
    std::vector<Rat> col(nrows, Rat(0));
    fillColumn(evenForms[j], rows, col);
    for (int i = 0; i < nrows; ++i) evenMat.at(i, j) = col[i];
    col.assign(nrows, Rat(0));
    fillColumn(oddForms[j], rows, col);
    for (int i = 0; i < nrows; ++i) oddMat.at(i, j) = col[i];
  }

  // Split the components into constant strata; each stratum must be a
  // rational combination of the basis forms of the matching parity.
  std::map<std::uint64_t, HomogeneousForm> strata;
  auto gather = [&](int slot, const SuperPoly& p) {
    for (auto& [mask, part] : constantStrata(p, plainH)) {
      auto it = strata.find(mask);
      if (it == strata.end())
        it = strata
                 .emplace(mask, HomogeneousForm{SuperPoly::zero(plainH),
                                                SuperPoly::zero(plainH),
                                                SuperPoly::zero(plainH)})
                 .first;
      if (slot == 0) it->second.fu = part;
      else if (slot == 1) it->second.fv = part;
      else it->second.ftheta = part;
    }
  };
  gather(0, w.fu);
  gather(1, w.fv);
  gather(2, w.ftheta);

  SusyForm out = zeroSusyForm(nR, base);
  for (auto& [mask, triple] : strata) {
    std::vector<Rat> b(nrows, Rat(0));
    if (!fillColumn(triple, rows, b))
      throw std::invalid_argument(
          "form is not a combination of the canonical basis");
    const bool oddStratum = constantDegree(mask) % 2 != 0;
    auto sol = solveLinear(oddStratum ? oddMat : evenMat, b);
    if (!sol)
      throw std::invalid_argument(
          "form is not a combination of the canonical basis");
    Monomial mu;
    mu.oddMask = mask >> plainH->geomOdd;
    for (int j = 0; j < half; ++j) {
      if ((*sol)[j] == 0) continue;
      if (oddStratum) out.xis[j].addTerm(mu, (*sol)[j]);
      else out.xs[j].addTerm(mu, (*sol)[j]);
    }
  }
  validateSusyForm(out);
  return out;
}

SuperPoly restrictToChartU(const SuperPoly& p, const RingPtr& chartU) {
  return chartRestrictionU(p.ring(), chartU).apply(p);
}

SuperPoly restrictToChartV(const SuperPoly& p, const RingPtr& chartV) {
  return chartRestrictionV(p.ring(), chartV).apply(p);
}

SuperPoly homogenizeChartU(const SuperPoly& f, int nR, int degree,
                           const RingPtr& H) {
  requireEvenRank(nR);
  requireHomogeneousRing(H);
  requireChartShape(f.ring(), "z", "zeta");
  const RingPtr& U = f.ring();
  if (U->odd.size() != H->odd.size())
    throw std::invalid_argument(
        "chart and homogeneous rings carry different constants");
  for (size_t i = 1; i < U->odd.size(); ++i)
    if (U->odd[i] != H->odd[i])
      throw std::invalid_argument(
          "chart and homogeneous rings carry different constants");
  SuperPoly out(H);
  for (const auto& [m, c] : f.terms()) {
    const int a = m.exponentOf(0);
    const bool zeta = m.hasOdd(0);
    // z^a has weight a; zeta stands for theta of weight 1 - nR/2.
    const int uExp = zeta ? degree - a - 1 + nR / 2 : degree - a;
    if (a < 0 || uExp < 0)
      throw std::invalid_argument(
          "chart function does not homogenize at the requested degree");
    Monomial hm;
    if (uExp != 0) hm.evenExp.push_back({0, uExp});
    if (a != 0) hm.evenExp.push_back({1, a});
    hm.oddMask = m.oddMask;  // zeta and theta share the low bit
    out.addTerm(hm, c);
  }
  return out;
}

OneForm omegaOnChartU(const SusyForm& s) {
  HomogeneousForm w = toHomogeneousForm(s);
  RingPtr U = susyChartRingU(s.base);
  OneForm omega(U);
  omega.setComp("z", restrictToChartU(w.fv, U));
  omega.setComp("zeta", restrictToChartU(w.ftheta, U));
  return omega;
}

OneForm omegaOnChartV(const SusyForm& s) {
  HomogeneousForm w = toHomogeneousForm(s);
  RingPtr V = susyChartRingV(s.base);
  OneForm omega(V);
  omega.setComp("w", restrictToChartV(w.fu, V));
  omega.setComp("chi", restrictToChartV(w.ftheta, V));
  return omega;
}

VectorField distributionFromForm(const OneForm& omega) {
  const RingPtr& ring = omega.ring();
  if (!ring || ring->geomEven != 1 || ring->geomOdd != 1)
    throw std::invalid_argument(
        "distribution extraction needs a (1|1)-dimensional chart");
  const SuperPoly& f = omega.evenComp(0);
  const SuperPoly& g = omega.oddComp(0);
  if (!f.isHomogeneousParity(Parity::Even) ||
      !g.isHomogeneousParity(Parity::Odd))
    throw std::invalid_argument(
        "degenerate one-form: components of mixed parity");
  if (!f.isUnit())
    throw std::invalid_argument(
        "degenerate one-form: the even coefficient is not a unit");
  VectorField d(ring);
  d.setComp(ring->odd[0], f);
  d.setComp(ring->even[0].name, -g);
  if (!pairing(omega, d).isZero())
    throw std::logic_error("distribution does not annihilate its one-form");
  return d;
}

RamondDivisorModel ramondDivisor(const SusyForm& s) {
  if (!isFramed(s))
    throw std::invalid_argument(
        "divisor extraction needs a framed form (invertible first "
        "coefficient)");
  OneForm omega = omegaOnChartU(s);
  VectorField d = distributionFromForm(omega);
  VectorField y = bracket(d, d).scaled(Rat(1, 2));
  if (y.isZero())
    throw std::invalid_argument(
        "distribution is integrable: the self-bracket vanishes");
  const SuperPoly& f = d.oddComp(0);
  SuperPoly g = -d.evenComp(0);
  SuperPoly fInv = f.inverse();
  // Project the bracket along the distribution (d/dzeta = fInv*g d/dz mod D)
  // and normalize by the unit so the canonical family returns its own
  // defining polynomial exactly.
  SuperPoly h = -(fInv * (y.evenComp(0) + y.oddComp(0) * fInv * g));
  SuperPoly hFree = h.dropOdd({0});
  if (hFree.isZero())
    throw std::invalid_argument(
        "distribution is integrable: no divisor equation survives");
  RingPtr H = susyHomogeneousRing(s.base);
  return RamondDivisorModel{s.nR, homogenizeChartU(hFree, s.nR, s.nR, H)};
}

SuperPoly homogeneousDiscriminant(const SuperPoly& p, int degree) {
  const RingPtr& ring = p.ring();
  if (!ring || ring->geomEven < 2 || ring->evenIndex("u") != 0 ||
      ring->evenIndex("v") != 1)
    throw std::invalid_argument(
        "binary-form discriminant needs a ring with even generators u, v");
  if (degree < 2)
    throw std::invalid_argument("binary-form degree must be at least 2");
  if (!p.isHomogeneousParity(Parity::Even))
    throw std::invalid_argument("binary form must be parity even");
  const std::uint64_t geomBits = (std::uint64_t{1} << ring->geomOdd) - 1;

  std::vector<SuperPoly> a(degree + 1, SuperPoly::zero(ring));
  for (const auto& [m, c] : p.terms()) {
    if (m.oddMask & geomBits)
      throw std::invalid_argument(
          "binary form must be free of geometric odd generators");
    int eu = 0, ev = 0;
    for (auto& [var, exp] : m.evenExp) {
      if (var == 0) eu = exp;
      else if (var == 1) ev = exp;
      else
        throw std::invalid_argument(
            "binary form must involve only u and v");
    }
    if (eu < 0 || ev < 0 || eu + ev != degree)
      throw std::invalid_argument(
          "form is not homogeneous of the declared degree");
    Monomial cm;
    cm.oddMask = m.oddMask;
    a[ev].addTerm(cm, c);
  }

  // Coefficient lists of the two partial derivatives, both of degree e.
  const int e = degree - 1;
  std::vector<SuperPoly> du(e + 1, SuperPoly::zero(ring));
  std::vector<SuperPoly> dv(e + 1, SuperPoly::zero(ring));
  for (int i = 0; i <= e; ++i) {
    du[i] = a[i].scaled(Rat(degree - i));
    dv[i] = a[i + 1].scaled(Rat(i + 1));
  }

  const int n = 2 * e;
  std::vector<std::vector<SuperPoly>> syl(
      n, std::vector<SuperPoly>(n, SuperPoly::zero(ring)));
  for (int i = 0; i < e; ++i)
    for (int j = 0; j <= e; ++j) {
      syl[i][i + j] = du[j];
      syl[e + i][i + j] = dv[j];
    }
  return berkowitzDet(syl, ring);
}

SuperPoly framedDiscriminant(const SusyForm& s) {
  SuperPoly d = homogeneousDiscriminant(ramondDivisor(s).p, s.nR);
  return restrictToConstants(d, s.base);
}

bool isFramedSusyPoint(const SusyForm& s) {
  if (!isFramed(s)) return false;
  try {
    return framedDiscriminant(s).isUnit();
  } catch (const std::invalid_argument&) {
    return false;  // integrable: no divisor at all
  }
}

TwistedFormSections h0OmegaTwisted(int nR) {
  requireEvenRank(nR);
  RingPtr H = susyHomogeneousRing(constantsRing({}));
  const int n = nR;

  std::vector<HomogeneousForm> evenDomain, oddDomain;
  auto pure = [&](int slot, SuperPoly p) {
    HomogeneousForm f{SuperPoly::zero(H), SuperPoly::zero(H),
                      SuperPoly::zero(H)};
    if (slot == 0) f.fu = std::move(p);
    else if (slot == 1) f.fv = std::move(p);
    else f.ftheta = std::move(p);
    return f;
  };
  for (int slot : {0, 1}) {
    evenDomain.push_back(pure(slot, uvMono(H, 1, 0, false)));
    evenDomain.push_back(pure(slot, uvMono(H, 0, 1, false)));
    for (int i = 0; i <= n / 2; ++i)
      oddDomain.push_back(pure(slot, uvMono(H, n / 2 - i, i, true)));
  }
  for (int i = 0; i <= n; ++i)
    evenDomain.push_back(pure(2, uvMono(H, n - i, i, true)));
  for (int i = 0; i <= n / 2 + 1; ++i)
    oddDomain.push_back(pure(2, uvMono(H, n / 2 + 1 - i, i, false)));

  SuperPoly uGen = uvMono(H, 1, 0, false);
  SuperPoly vGen = uvMono(H, 0, 1, false);
  SuperPoly thetaGen = uvMono(H, 0, 0, true);
  auto image = [&](const HomogeneousForm& f) {
    return f.fu * uGen + f.fv * vGen + f.ftheta * thetaGen;
  };

  auto kernelOf = [&](const std::vector<HomogeneousForm>& domain,
                      int targetDim) {
    std::map<Monomial, int> rows;
    std::vector<SuperPoly> images;
    for (const auto& f : domain) {
      images.push_back(image(f));
      for (const auto& [m, c] : images.back().terms())
        if (!rows.count(m)) {
          int next = static_cast<int>(rows.size());
          rows.emplace(m, next);
        }
    }
    RatMat mat(static_cast<int>(rows.size()), static_cast<int>(domain.size()));
    for (size_t j = 0; j < images.size(); ++j)
      for (const auto& [m, c] : images[j].terms())
        mat.at(rows.at(m), static_cast<int>(j)) = c;
    if (rankOf(mat) != targetDim)
      throw std::logic_error(
          "evaluation map on twisted one-forms is not onto");
    std::vector<HomogeneousForm> basis;
    for (const auto& vec : nullspaceBasis(mat)) {
      HomogeneousForm f{SuperPoly::zero(H), SuperPoly::zero(H),
                        SuperPoly::zero(H)};
      for (size_t j = 0; j < domain.size(); ++j) {
        if (vec[j] == 0) continue;
        f.fu += domain[j].fu.scaled(vec[j]);
        f.fv += domain[j].fv.scaled(vec[j]);
        f.ftheta += domain[j].ftheta.scaled(vec[j]);
      }
      basis.push_back(std::move(f));
    }
    return basis;
  };

  TwistedFormSections out;
  out.evenBasis = kernelOf(evenDomain, 3);
  out.oddBasis = kernelOf(oddDomain, n / 2 + 2);
  out.dims = DimPair{static_cast<long>(out.evenBasis.size()),
                     static_cast<long>(out.oddBasis.size())};
  if (out.dims.even != n + 2 || out.dims.odd != n + 2)
    throw std::logic_error(
        "twisted one-form section count disagrees with the expected rank");
  return out;
}

bool GammaStarElement::operator==(const GammaStarElement& o) const {
  if (nR != o.nR || !sameRing(base, o.base)) return false;
  return a0 == o.a0 && betas == o.betas;
}

GammaStarElement gammaIdentity(int nR, RingPtr base) {
  requireEvenRank(nR);
  requireConstantsRing(base);
  GammaStarElement g;
  g.nR = nR;
  g.base = base;
  g.a0 = SuperPoly::constant(base, Rat(1));
  g.betas.assign(nR / 2, SuperPoly::zero(base));
  return g;
}

void validateGammaStar(const GammaStarElement& g) {
  requireEvenRank(g.nR);
  requireConstantsRing(g.base);
  requireCoefficient(g.a0, g.base, Parity::Even, "the scalar part");
  if (!g.a0.isUnit())
    throw std::invalid_argument("the scalar part must be invertible");
  if (g.betas.size() != static_cast<size_t>(g.nR / 2))
    throw std::invalid_argument("expected nR/2 odd parameters");
  for (const auto& b : g.betas)
    requireCoefficient(b, g.base, Parity::Odd, "an odd parameter");
}

SuperPoly gammaHomogeneousFunction(const GammaStarElement& g,
                                   const RingPtr& H) {
  validateGammaStar(g);
  requireHomogeneousRing(H);
  SuperPoly tail = SuperPoly::zero(H);
  for (int i = 0; i < g.nR / 2; ++i)
    tail += embedConstants(g.betas[i], H) *
            uvMono(H, g.nR / 2 - 1 - i, i, false);
  SuperPoly one = SuperPoly::constant(H, Rat(1));
  return embedConstants(g.a0, H) * (one + SuperPoly::oddGen(H, 0) * tail);
}

SuperPoly gammaChartFunctionU(const GammaStarElement& g, const RingPtr& U) {
  validateGammaStar(g);
  requireChartShape(U, "z", "zeta");
  SuperPoly tail = SuperPoly::zero(U);
  for (int i = 0; i < g.nR / 2; ++i)
    tail += embedConstants(g.betas[i], U) * SuperPoly::evenVar(U, 0, i);
  SuperPoly one = SuperPoly::constant(U, Rat(1));
  return embedConstants(g.a0, U) * (one + SuperPoly::oddGen(U, 0) * tail);
}

GammaStarElement gammaCompose(const GammaStarElement& a,
                              const GammaStarElement& b) {
  validateGammaStar(a);
  validateGammaStar(b);
  if (a.nR != b.nR || !sameRing(a.base, b.base))
    throw std::invalid_argument(
        "cannot compose group elements over different data");
  GammaStarElement out = a;
  out.a0 = a.a0 * b.a0;
  for (int i = 0; i < a.nR / 2; ++i) out.betas[i] = a.betas[i] + b.betas[i];
  return out;
}

GammaStarElement gammaInverse(const GammaStarElement& g) {
  validateGammaStar(g);
  GammaStarElement out = g;
  out.a0 = g.a0.inverse();
  for (auto& b : out.betas) b = -b;
  return out;
}

SusyForm gammaAction(const GammaStarElement& g, const SusyForm& s) {
  validateGammaStar(g);
  validateSusyForm(s);
  if (g.nR != s.nR || !sameRing(g.base, s.base))
    throw std::invalid_argument(
        "group element and form live over different data");
  RingPtr H = susyHomogeneousRing(s.base);
  SuperPoly fn = gammaHomogeneousFunction(g, H);
  HomogeneousForm w = toHomogeneousForm(s);
  HomogeneousForm scaled{fn * w.fu, fn * w.fv, fn * w.ftheta};
  return susyFormFromHomogeneous(s.nR, s.base, scaled);
}

GaugeFixResult gaugeFix(const SusyForm& s) {
  if (!isFramed(s))
    throw std::invalid_argument("cannot gauge-fix an unframed form");
  const int half = s.nR / 2;

  GammaStarElement scale = gammaIdentity(s.nR, s.base);
  scale.a0 = s.xs[0].inverse();
  SusyForm s1 = gammaAction(scale, s);
  if (!(s1.xs[0] == SuperPoly::constant(s.base, Rat(1))))
    throw std::logic_error("scalar normalization failed to reach 1");

  auto qIsZero = [&](const SusyForm& f) {
    for (int i = 0; i < half; ++i)
      if (!f.xis[i].isZero()) return false;
    return true;
  };

  for (int sign : {1, -1}) {
    GammaStarElement shear = gammaIdentity(s.nR, s.base);
    for (int i = 0; i < half; ++i)
      shear.betas[i] = s1.xis[i].scaled(Rat(sign));
    SusyForm s2 = gammaAction(shear, s1);
    if (!qIsZero(s2)) continue;
    GammaStarElement g = gammaCompose(shear, scale);
    if (!(gammaAction(g, s) == s2))
      throw std::logic_error("gauge normalization certificate failed");
    return GaugeFixResult{g, s2};
  }
  throw std::logic_error("odd shear failed to remove the q-coefficients");
}

ModuliDimensionReport moduliDimensionReport(int nR) {
  requireEvenRank(nR);
  ModuliDimensionReport r;
  r.nR = nR;
  r.framedForms = h0OmegaTwisted(nR).dims;
  r.gammaStar = h0OnZ(buildZ(nR), 0).rank;
  TangentCohomology tc = tangentCohomology(WPSpace(1 - nR / 2));
  r.deformationBase = tc.h1dim;
  r.autGroup = tc.h0dim;
  r.susyQuotient = r.framedForms - r.gammaStar;
  r.moduli = r.susyQuotient + r.deformationBase - r.autGroup;
  return r;
}

}  // namespace wps
