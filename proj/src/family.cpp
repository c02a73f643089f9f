#include "wps/family.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wps/derivation.hpp"
#include "wps/strata.hpp"

namespace wps {

namespace {

RingPtr familyChartRing(const std::string& evenName, const std::string& oddName,
                        int paramCount) {
  RingBuilder b;
  b.even(evenName, /*laurent=*/true).odd(oddName).endGeometric();
  for (int i = 1; i <= paramCount; ++i) b.odd("eta" + std::to_string(i));
  return b.build();
}

SuperPoly etaOf(const RingPtr& ring, int i) {
  int idx = ring->oddIndex("eta" + std::to_string(i));
  if (idx < 0)
    throw std::invalid_argument("chart ring is missing parameter eta" +
                                std::to_string(i));
  return SuperPoly::oddGen(ring, idx);
}

/// chi-image of the standard display: zeta*z^q + sum_i coeffs[i-1]*z^{q-i}.
SuperPoly standardChiImage(const RingPtr& U, int q,
                           const std::vector<SuperPoly>& coeffs) {
  SuperPoly img = SuperPoly::oddGen(U, 0) * SuperPoly::evenVar(U, 0, q);
  for (size_t i = 0; i < coeffs.size(); ++i)
    img += coeffs[i] * SuperPoly::evenVar(U, 0, q - static_cast<int>(i) - 1);
  return img;
}

ChartMap standardDisplay(const RingPtr& V, const RingPtr& U, int q,
                         const std::vector<SuperPoly>& coeffs) {
  ChartMap g(V, U);
  g.setImage(V->even[0].name, SuperPoly::evenVar(U, 0, -1));
  g.setImage(V->odd[0], standardChiImage(U, q, coeffs));
  return g;
}

void requireRank(int nR) {
  if (nR < 4 || nR % 2 != 0)
    throw std::invalid_argument("family rank must be an even integer >= 4");
}

}  // namespace

FamilyZ buildZ(int nR) {
  requireRank(nR);
  const int q = nR / 2 - 1;
  const int t = nR / 2 - 2;
  RingPtr ringU = familyChartRing("z", "zeta", t);
  RingPtr ringV = familyChartRing("w", "chi", t);
  WPSpace reduced(1 - nR / 2);

  std::vector<SuperPoly> etasU, etasV;
  for (int i = 1; i <= t; ++i) {
    etasU.push_back(etaOf(ringU, i));
    etasV.push_back(etaOf(ringV, i));
  }

  ChartMap vToU = standardDisplay(ringV, ringU, q, etasU);

  ChartMap uToV(ringU, ringV);
  uToV.setImage("z", SuperPoly::evenVar(ringV, 0, -1));
  SuperPoly zetaImg =
      SuperPoly::oddGen(ringV, 0) * SuperPoly::evenVar(ringV, 0, q);
  for (int i = 1; i <= t; ++i)
    zetaImg -= etasV[i - 1] * SuperPoly::evenVar(ringV, 0, i);
  uToV.setImage("zeta", zetaImg);

  if (!compose(vToU, uToV).isIdentity() || !compose(uToV, vToU).isIdentity())
    throw std::logic_error("family gluing displays are not mutually inverse");

  std::vector<std::string> etaNames;
  for (int i = 1; i <= t; ++i) etaNames.push_back("eta" + std::to_string(i));
  return FamilyZ{nR,
                 ringU,
                 ringV,
                 reduced.ringU(),
                 reduced.ringV(),
                 std::move(uToV),
                 std::move(vToU),
                 std::move(etaNames)};
}

HypersurfaceReport hypersurfaceResiduals(int nR, const ChartMap& vToU,
                                         const ChartMap& uToV) {
  requireRank(nR);
  const int q = nR / 2 - 1;
  const int t = nR / 2 - 2;
  const RingPtr& U = vToU.dst();
  const RingPtr& V = uToV.dst();

  // Chart U (u=1, v=z): the relation solves to chi = zeta*z^q + sum eta_i z^{q-i}.
  SuperPoly expectU = SuperPoly::oddGen(U, 0) * SuperPoly::evenVar(U, 0, q);
  for (int i = 1; i <= t; ++i)
    expectU += etaOf(U, i) * SuperPoly::evenVar(U, 0, q - i);
  SuperPoly residualU = vToU.imageOfOdd(0) - expectU;

  // Chart V (v=1, u=w): the relation solves to zeta = chi*w^q - sum eta_i w^i.
  SuperPoly expectV = SuperPoly::oddGen(V, 0) * SuperPoly::evenVar(V, 0, q);
  for (int i = 1; i <= t; ++i)
    expectV -= etaOf(V, i) * SuperPoly::evenVar(V, 0, i);
  SuperPoly residualV = uToV.imageOfOdd(0) - expectV;

  bool ok = residualU.isZero() && residualV.isZero();
  return HypersurfaceReport{ok, std::move(residualU), std::move(residualV)};
}

HypersurfaceReport hypersurfaceCheck(const FamilyZ& z) {
  return hypersurfaceResiduals(z.nR, z.vToU, z.uToV);
}

namespace {

void requireDeformationCharts(const ChartMap& d) {
  const RingPtr& src = d.src();
  const RingPtr& dst = d.dst();
  if (!src || !dst) throw std::invalid_argument("null ring context");
  if (src->geomEven != 1 || src->geomOdd != 1 || dst->geomEven != 1 ||
      dst->geomOdd != 1)
    throw std::invalid_argument(
        "deformation charts need exactly one even and one odd geometric "
        "generator each");
  if (dst->even[0].name != "z" || dst->odd[0] != "zeta" ||
      src->even[0].name != "w" || src->odd[0] != "chi")
    throw std::invalid_argument(
        "deformation charts must be named (z|zeta) and (w|chi)");
  if (!dst->even[0].laurent || !src->even[0].laurent)
    throw std::invalid_argument(
        "deformation chart coordinates must permit negative exponents");
  if (src->even.size() != 1 || dst->even.size() != 1)
    throw std::invalid_argument(
        "even constants are not supported in deformation charts");
  if (src->odd.size() != dst->odd.size())
    throw std::invalid_argument(
        "deformation charts must share their odd constants");
  for (size_t i = 1; i < src->odd.size(); ++i)
    if (src->odd[i] != dst->odd[i])
      throw std::invalid_argument(
          "deformation charts must share their odd constants");
}

}  // namespace

DeformationClassification classifyDeformation(const ChartMap& d) {
  requireDeformationCharts(d);
  const RingPtr& U = d.dst();
  const RingPtr& V = d.src();
  const int nConst = static_cast<int>(U->odd.size()) - 1;

  // The constant-free stratum must be the standard gluing on the nose; it
  // also determines the rank.
  WPSpace probeRings(0);  // chart rings only; the twist is irrelevant here
  const RingPtr& plainU = probeRings.ringU();
  auto wStrata = constantStrata(d.imageOfEven(0), plainU);
  auto chiStrata = constantStrata(d.imageOfOdd(0), plainU);
  auto stratum0 = [&](std::map<std::uint64_t, SuperPoly>& m) {
    auto it = m.find(0);
    SuperPoly p = it == m.end() ? SuperPoly(plainU) : it->second;
    if (it != m.end()) m.erase(it);
    return p;
  };
  SuperPoly w0 = stratum0(wStrata);
  SuperPoly chi0 = stratum0(chiStrata);
  if (w0 != SuperPoly::evenVar(plainU, 0, -1))
    throw std::invalid_argument(
        "constant-free part of the even gluing is not 1/z");
  int q = 0;
  {
    bool good = chi0.termCount() == 1;
    if (good) {
      const auto& [mono, coeff] = *chi0.terms().begin();
      q = mono.exponentOf(0);
      good = mono.oddMask == 1 && coeff == Rat(1) && q >= 1;
    }
    if (!good)
      throw std::invalid_argument(
          "constant-free part of the odd gluing is not zeta*z^q with q >= 1");
  }
  const int nR = 2 * (q + 1);
  const int tParams = q - 1;

  WPSpace wp(1 - nR / 2);
  TangentCohomology tangent = tangentCohomology(wp);
  // Locate each class representative z^{-i} d/dzeta in the basis ordering.
  std::vector<size_t> repPos(tParams);
  for (int i = 1; i <= tParams; ++i) {
    VectorField rep(wp.ringU());
    rep.setComp("zeta", SuperPoly::evenVar(wp.ringU(), 0, -i));
    size_t pos = tangent.h1basis.size();
    for (size_t j = 0; j < tangent.h1basis.size(); ++j)
      if (tangent.h1basis[j] == rep) pos = j;
    if (pos == tangent.h1basis.size())
      throw std::logic_error(
          "expected deformation class representative is missing");
    repPos[i - 1] = pos;
  }

  std::vector<SuperPoly> params(tParams, SuperPoly(U));
  ChartMap psiU = ChartMap::identity(U);
  ChartMap psiV = ChartMap::identity(V);
  const SuperPoly zSq = SuperPoly::evenVar(wp.ringU(), 0, 2);
  const SuperPoly zetaZq1 =
      SuperPoly::oddGen(wp.ringU(), 0) * SuperPoly::evenVar(wp.ringU(), 0, q - 1);
  const SuperPoly zNegQ = SuperPoly::evenVar(wp.ringU(), 0, -q);

  for (int k = 1; k <= nConst; ++k) {
    ChartMap gf = standardDisplay(V, U, q, params);
    ChartMap m = compose(psiU, compose(gf, psiV));
    SuperPoly dw = d.imageOfEven(0) - m.imageOfEven(0);
    SuperPoly dchi = d.imageOfOdd(0) - m.imageOfOdd(0);

    // Group this layer's discrepancies by constant monomial.
    std::map<std::uint64_t, std::pair<SuperPoly, SuperPoly>> layer;
    auto gather = [&](const SuperPoly& p, bool evenSide) {
      for (auto& [mask, poly] : constantStrata(p, wp.ringU())) {
        int deg = constantDegree(mask);
        if (deg < k)
          throw std::logic_error(
              "deformation layer left a lower stratum unmatched");
        if (deg != k) continue;
        auto it = layer.find(mask);
        if (it == layer.end())
          it = layer
                   .emplace(mask, std::make_pair(SuperPoly(wp.ringU()),
                                                 SuperPoly(wp.ringU())))
                   .first;
        (evenSide ? it->second.first : it->second.second) = poly;
      }
    };
    gather(dw, true);
    gather(dchi, false);
    if (layer.empty()) continue;

    VectorField xiU(U), xiV(V);
    for (auto& [mask, delta] : layer) {
      // Translate the discrepancy at this constant monomial into an overlap
      // vector field on the plain space.
      SuperPoly a = -(zSq * delta.first);
      SuperPoly b = (delta.second - a * (Rat(q) * zetaZq1)) * zNegQ;
      VectorField tau(wp.ringU());
      tau.setComp("z", a);
      tau.setComp("zeta", b);
      CocycleReduction r = reduceCocycle(wp, tau);

      SuperPoly mu = constantMonomial(U, mask);
      SuperPoly muV = constantMonomial(V, mask);
      for (int i = 1; i <= tParams; ++i) {
        const Rat& c = r.coords[repPos[i - 1]];
        if (!(c == Rat(0))) params[i - 1] += mu.scaled(c);
      }
      if (!r.onU.isZero()) xiU = xiU + liftField(r.onU, U).scaledBy(mu);
      if (!r.onV.isZero()) xiV = xiV - liftField(r.onV, V).scaledBy(muV);
    }

    if (!xiU.isZero()) {
      ChartMap step(U, U);
      step.setImage("z", SuperPoly::evenVar(U, 0, 1) + xiU.comp("z"));
      step.setImage("zeta", SuperPoly::oddGen(U, 0) + xiU.comp("zeta"));
      psiU = compose(step, psiU);
    }
    if (!xiV.isZero()) {
      ChartMap step(V, V);
      step.setImage("w", SuperPoly::evenVar(V, 0, 1) + xiV.comp("w"));
      step.setImage("chi", SuperPoly::oddGen(V, 0) + xiV.comp("chi"));
      psiV = compose(psiV, step);
    }
  }

  ChartMap gf = standardDisplay(V, U, q, params);
  if (!(compose(psiU, compose(gf, psiV)) == d))
    throw std::runtime_error(
        "deformation normalization failed its exactness certificate");
  return DeformationClassification{nR, std::move(params), std::move(psiU),
                                   std::move(psiV), std::move(gf)};
}

LineBundleModel lineBundleOnZ(const FamilyZ& z, int d) {
  return LineBundleModel{d, SuperPoly::evenVar(z.ringU, 0, d)};
}

ZSections h0OnZ(const FamilyZ& z, int d) {
  WPSpace reduced(1 - z.nR / 2);
  LineBundleCohomology base = lineBundleCohomology(reduced, d);
  const int nConst = z.paramCount();
  const SuperPoly trans = SuperPoly::evenVar(z.ringU, 0, d);

  std::vector<GlobalSection> basis;
  for (const GlobalSection& s : base.h0basis) {
    SuperPoly su = liftPoly(s.onU, z.ringU);
    SuperPoly sv = liftPoly(s.onV, z.ringV);
    for (int k = 1; k <= nConst; ++k) {
      SuperPoly delta = su - trans * z.vToU.apply(sv);
      for (auto& [mask, poly] : constantStrata(delta, reduced.ringU())) {
        int deg = constantDegree(mask);
        if (deg < k)
          throw std::logic_error(
              "section corrector left a lower stratum unmatched");
        if (deg != k) continue;
        SectionReduction r = reduceSectionCocycle(reduced, d, poly);
        for (const Rat& c : r.coords)
          if (!(c == Rat(0)))
            throw std::runtime_error(
                "section does not extend over the parameter base");
        su -= constantMonomial(z.ringU, mask) * liftPoly(r.onU, z.ringU);
        sv -= constantMonomial(z.ringV, mask) * liftPoly(r.onV, z.ringV);
      }
    }
    if (!(su - trans * z.vToU.apply(sv)).isZero())
      throw std::logic_error("corrected section fails the transition identity");
    basis.push_back(GlobalSection{std::move(su), std::move(sv)});
  }
  return ZSections{d, base.h0dim, std::move(basis)};
}

}  // namespace wps
