#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wps/family.hpp"
#include "wps/parser.hpp"
#include "wps/strata.hpp"

using namespace wps;

namespace {

SuperPoly P(const RingPtr& r, const std::string& s) { return parseExpr(r, s); }

long p1h0(long d) { return d >= 0 ? d + 1 : 0; }

/// Chart ring with three adjoined odd test constants eps1..eps3.
RingPtr testChartRing(const std::string& evenName, const std::string& oddName) {
  RingBuilder b;
  b.even(evenName, true).odd(oddName).endGeometric();
  b.odd("eps1").odd("eps2").odd("eps3");
  return b.build();
}

/// Standard-form gluing display with prescribed odd coefficients.
ChartMap displayWithCoeffs(const RingPtr& V, const RingPtr& U, int q,
                           const std::vector<SuperPoly>& coeffs) {
  ChartMap g(V, U);
  g.setImage(V->even[0].name, SuperPoly::evenVar(U, 0, -1));
  SuperPoly chi = SuperPoly::oddGen(U, 0) * SuperPoly::evenVar(U, 0, q);
  for (size_t i = 0; i < coeffs.size(); ++i)
    chi += coeffs[i] * SuperPoly::evenVar(U, 0, q - static_cast<int>(i) - 1);
  g.setImage(V->odd[0], chi);
  return g;
}

/// Random polynomial with every term carrying at least one odd constant and
/// the requested parity; z-exponents are non-negative (chart-regular).
SuperPoly randomNilpotent(std::mt19937& rng, const RingPtr& r, Parity want) {
  std::uniform_int_distribution<int> maskD(1, (1 << r->odd.size()) - 1);
  std::uniform_int_distribution<int> expD(0, 2), coefD(-3, 3);
  const std::uint64_t geomBits = (1ull << r->geomOdd) - 1;
  SuperPoly p(r);
  int terms = 0, guard = 0;
  while (terms < 3 && ++guard < 200) {
    std::uint64_t mask = static_cast<std::uint64_t>(maskD(rng));
    if ((mask & ~geomBits) == 0) continue;  // must touch a constant
    if ((std::popcount(mask) & 1) != static_cast<int>(want)) continue;
    int c = coefD(rng);
    if (c == 0) continue;
    Monomial m;
    m.oddMask = mask;
    int e = expD(rng);
    if (e != 0) m.evenExp.push_back({0, e});
    p.addTerm(m, Rat(c));
    ++terms;
  }
  return p;
}

/// Chart automorphism id + (random nilpotent shift of both coordinates).
ChartMap randomNilpotentAuto(std::mt19937& rng, const RingPtr& r) {
  ChartMap a(r, r);
  a.setImage(r->even[0].name, SuperPoly::evenVar(r, 0, 1) +
                                  randomNilpotent(rng, r, Parity::Even));
  a.setImage(r->odd[0],
             SuperPoly::oddGen(r, 0) + randomNilpotent(rng, r, Parity::Odd));
  return a;
}

SuperPoly randomBigPoly(std::mt19937& rng, const RingPtr& r) {
  std::uniform_int_distribution<int> maskD(0, (1 << r->odd.size()) - 1);
  std::uniform_int_distribution<int> expD(-4, 4), coefD(-5, 5);
  SuperPoly p(r);
  for (int t = 0; t < 6; ++t) {
    int c = coefD(rng);
    if (c == 0) continue;
    Monomial m;
    m.oddMask = static_cast<std::uint64_t>(maskD(rng));
    int e = expD(rng);
    if (e != 0) m.evenExp.push_back({0, e});
    p.addTerm(m, Rat(c));
  }
  return p;
}

}  // namespace

TEST_CASE("family construction pins the documented gluings") {
  FamilyZ z4 = buildZ(4);
  CHECK(z4.paramCount() == 0);
  CHECK(z4.vToU.image("chi") == P(z4.ringU, "zeta*z"));
  CHECK(z4.vToU.image("w") == P(z4.ringU, "z^-1"));
  CHECK(z4.uToV.image("zeta") == P(z4.ringV, "chi*w"));

  FamilyZ z6 = buildZ(6);
  CHECK(z6.paramCount() == 1);
  CHECK(z6.vToU.image("chi") == P(z6.ringU, "zeta*z^2 + eta1*z"));
  CHECK(z6.uToV.image("zeta") == P(z6.ringV, "chi*w^2 - eta1*w"));

  FamilyZ z8 = buildZ(8);
  CHECK(z8.paramCount() == 2);
  CHECK(z8.vToU.image("chi") ==
        P(z8.ringU, "zeta*z^3 + eta1*z^2 + eta2*z"));
  CHECK(z8.uToV.image("zeta") ==
        P(z8.ringV, "chi*w^3 - eta1*w - eta2*w^2"));

  CHECK_THROWS_AS(buildZ(2), std::invalid_argument);
  CHECK_THROWS_AS(buildZ(3), std::invalid_argument);
  CHECK_THROWS_AS(buildZ(5), std::invalid_argument);
  CHECK_THROWS_AS(buildZ(0), std::invalid_argument);
  CHECK_THROWS_AS(buildZ(-4), std::invalid_argument);
}

TEST_CASE("gluing displays are mutually inverse and specialize to the plain space") {
  for (int n : {4, 6, 8, 10, 12}) {
    CAPTURE(n);
    FamilyZ z = buildZ(n);
    CHECK(compose(z.vToU, z.uToV).isIdentity());
    CHECK(compose(z.uToV, z.vToU).isIdentity());

    WPSpace wp(1 - n / 2);
    ChartMap dropU(z.ringU, wp.ringU());
    ChartMap dropV(z.ringV, wp.ringV());
    for (const std::string& name : z.etaNames) {
      dropU.setImage(name, SuperPoly(wp.ringU()));
      dropV.setImage(name, SuperPoly(wp.ringV()));
    }
    CHECK(dropU.apply(z.vToU.image("chi")) == wp.vToU().image("chi"));
    CHECK(dropU.apply(z.vToU.image("w")) == wp.vToU().image("w"));
    CHECK(dropV.apply(z.uToV.image("zeta")) == wp.uToV().image("zeta"));
    CHECK(dropV.apply(z.uToV.image("z")) == wp.uToV().image("z"));
  }
}

TEST_CASE("hypersurface relation holds on both charts, fails on a perturbed display") {
  for (int n : {4, 6, 8}) {
    CAPTURE(n);
    HypersurfaceReport rep = hypersurfaceCheck(buildZ(n));
    CHECK(rep.ok);
    CHECK(rep.residualU.isZero());
    CHECK(rep.residualV.isZero());
  }

  // Negative control: double the eta1 coefficient in one display only.
  FamilyZ z = buildZ(6);
  ChartMap bad(z.ringV, z.ringU);
  bad.setImage("w", P(z.ringU, "z^-1"));
  bad.setImage("chi", P(z.ringU, "zeta*z^2 + 2*eta1*z"));
  HypersurfaceReport rep = hypersurfaceResiduals(6, bad, z.uToV);
  CHECK_FALSE(rep.ok);
  CHECK(rep.residualU == P(z.ringU, "eta1*z"));
  CHECK(rep.residualV.isZero());
}

TEST_CASE("classification recovers the family's own parameters") {
  for (int n : {4, 6, 8, 10}) {
    CAPTURE(n);
    FamilyZ z = buildZ(n);
    DeformationClassification c = classifyDeformation(z.vToU);
    CHECK(c.nR == n);
    REQUIRE(static_cast<int>(c.params.size()) == z.paramCount());
    for (int i = 1; i <= z.paramCount(); ++i)
      CHECK(c.params[i - 1] ==
            SuperPoly::oddGen(z.ringU, z.ringU->oddIndex(z.etaNames[i - 1])));
    CHECK(c.autoU.isIdentity());
    CHECK(c.autoV.isIdentity());
    CHECK(c.normalizedVtoU == z.vToU);
  }
}

TEST_CASE("classification pinned examples at rank six") {
  FamilyZ z = buildZ(6);
  const RingPtr& U = z.ringU;
  const RingPtr& V = z.ringV;

  SUBCASE("trivial deformation maps to zero parameters") {
    ChartMap d(V, U);
    d.setImage("w", P(U, "z^-1"));
    d.setImage("chi", P(U, "zeta*z^2"));
    DeformationClassification c = classifyDeformation(d);
    CHECK(c.nR == 6);
    REQUIRE(c.params.size() == 1);
    CHECK(c.params[0].isZero());
    CHECK(c.autoU.isIdentity());
    CHECK(c.autoV.isIdentity());
  }

  SUBCASE("coefficient on z maps to the parameter itself") {
    ChartMap d(V, U);
    d.setImage("w", P(U, "z^-1"));
    d.setImage("chi", P(U, "zeta*z^2 + 3/2*eta1*z"));
    DeformationClassification c = classifyDeformation(d);
    REQUIRE(c.params.size() == 1);
    CHECK(c.params[0] == P(U, "3/2*eta1"));
    CHECK(c.autoU.isIdentity());
    CHECK(c.autoV.isIdentity());
  }

  SUBCASE("coefficient on z^3 is a coboundary, absorbed by automorphisms") {
    ChartMap d(V, U);
    d.setImage("w", P(U, "z^-1"));
    d.setImage("chi", P(U, "zeta*z^2 + eta1*z^3"));
    DeformationClassification c = classifyDeformation(d);
    REQUIRE(c.params.size() == 1);
    CHECK(c.params[0].isZero());
    CHECK(c.normalizedVtoU.image("chi") == P(U, "zeta*z^2"));
    bool bothTrivial = c.autoU.isIdentity() && c.autoV.isIdentity();
    CHECK_FALSE(bothTrivial);
    CHECK(compose(c.autoU, compose(c.normalizedVtoU, c.autoV)) == d);
  }

  SUBCASE("even nilpotent shift of the even gluing is absorbed") {
    RingPtr bigU = testChartRing("z", "zeta");
    RingPtr bigV = testChartRing("w", "chi");
    ChartMap d(bigV, bigU);
    d.setImage("w", P(bigU, "z^-1 + eps1*eps2*z^2"));
    d.setImage("chi", P(bigU, "zeta*z^2"));
    DeformationClassification c = classifyDeformation(d);
    CHECK(c.nR == 6);
    CHECK(c.params[0].isZero());
    CHECK(compose(c.autoU, compose(c.normalizedVtoU, c.autoV)) == d);
  }

  SUBCASE("malformed inputs are rejected") {
    ChartMap badW(V, U);
    badW.setImage("w", P(U, "z^-1 + z"));
    badW.setImage("chi", P(U, "zeta*z^2"));
    CHECK_THROWS_AS(classifyDeformation(badW), std::invalid_argument);

    ChartMap badChi(V, U);
    badChi.setImage("w", P(U, "z^-1"));
    badChi.setImage("chi", P(U, "2*zeta*z^2"));
    CHECK_THROWS_AS(classifyDeformation(badChi), std::invalid_argument);

    ChartMap badChi2(V, U);
    badChi2.setImage("w", P(U, "z^-1"));
    badChi2.setImage("chi", P(U, "zeta*z^2 + zeta*z"));
    CHECK_THROWS_AS(classifyDeformation(badChi2), std::invalid_argument);

    WPSpace plain(-2);
    ChartMap mixed(plain.ringV(), U);
    mixed.setImage("w", P(U, "z^-1"));
    mixed.setImage("chi", P(U, "zeta*z^2"));
    CHECK_THROWS_AS(classifyDeformation(mixed), std::invalid_argument);
  }
}

TEST_CASE("base change into Grassmann test rings is functorial") {
  std::mt19937 rng(7001);
  std::uniform_int_distribution<int> coefD(-3, 3);
  RingPtr U = testChartRing("z", "zeta");
  RingPtr V = testChartRing("w", "chi");
  SuperPoly e1 = SuperPoly::oddGen(U, 1), e2 = SuperPoly::oddGen(U, 2),
            e3 = SuperPoly::oddGen(U, 3);
  SuperPoly cubic = e1 * e2 * e3;

  for (int n : {6, 8, 10}) {
    CAPTURE(n);
    const int q = n / 2 - 1;
    for (int iter = 0; iter < 7; ++iter) {
      CAPTURE(iter);
      std::vector<SuperPoly> f;
      for (int i = 1; i <= n / 2 - 2; ++i) {
        SuperPoly fi = e1.scaled(Rat(coefD(rng))) + e2.scaled(Rat(coefD(rng))) +
                       e3.scaled(Rat(coefD(rng))) + cubic.scaled(Rat(coefD(rng)));
        f.push_back(fi);
      }
      ChartMap d = displayWithCoeffs(V, U, q, f);
      DeformationClassification c = classifyDeformation(d);
      CHECK(c.nR == n);
      REQUIRE(c.params.size() == f.size());
      for (size_t i = 0; i < f.size(); ++i) CHECK(c.params[i] == f[i]);
      CHECK(c.autoU.isIdentity());
      CHECK(c.autoV.isIdentity());
      CHECK(c.normalizedVtoU == d);
    }
  }
}

TEST_CASE("classification is well defined on conjugated gluings") {
  std::mt19937 rng(7002);
  RingPtr U = testChartRing("z", "zeta");
  RingPtr V = testChartRing("w", "chi");

  SUBCASE("conjugates of the trivial deformation classify to zero") {
    for (int n : {6, 8}) {
      CAPTURE(n);
      ChartMap d0 = displayWithCoeffs(V, U, n / 2 - 1, {});
      for (int iter = 0; iter < 6; ++iter) {
        CAPTURE(iter);
        ChartMap psiU = randomNilpotentAuto(rng, U);
        ChartMap psiV = randomNilpotentAuto(rng, V);
        ChartMap d = compose(psiU, compose(d0, psiV));
        DeformationClassification c = classifyDeformation(d);
        CHECK(c.nR == n);
        for (const SuperPoly& p : c.params) CHECK(p.isZero());
        CHECK(compose(c.autoU, compose(c.normalizedVtoU, c.autoV)) == d);
      }
    }
  }

  SUBCASE("top-degree conjugation cannot shift the parameters") {
    std::uniform_int_distribution<int> coefD(-3, 3), expD(0, 2);
    SuperPoly e1 = SuperPoly::oddGen(U, 1), e2 = SuperPoly::oddGen(U, 2),
              e3 = SuperPoly::oddGen(U, 3);
    for (int iter = 0; iter < 6; ++iter) {
      CAPTURE(iter);
      std::vector<SuperPoly> f = {e1.scaled(Rat(coefD(rng))) +
                                  e2.scaled(Rat(coefD(rng)))};
      ChartMap d = displayWithCoeffs(V, U, 2, f);

      // Shifts proportional to eps1*eps2*eps3 live in the top filtration
      // layer, so they commute with everything up to degree four = zero.
      auto topAuto = [&](const RingPtr& r) {
        SuperPoly c123 = SuperPoly::oddGen(r, 1) * SuperPoly::oddGen(r, 2) *
                         SuperPoly::oddGen(r, 3);
        ChartMap a(r, r);
        a.setImage(r->even[0].name,
                   SuperPoly::evenVar(r, 0, 1) +
                       c123 * SuperPoly::oddGen(r, 0) *
                           SuperPoly::evenVar(r, 0, expD(rng))
                               .scaled(Rat(coefD(rng))));
        a.setImage(r->odd[0],
                   SuperPoly::oddGen(r, 0) +
                       c123 * SuperPoly::evenVar(r, 0, expD(rng))
                                  .scaled(Rat(coefD(rng))));
        return a;
      };
      ChartMap conj = compose(topAuto(U), compose(d, topAuto(V)));
      DeformationClassification base = classifyDeformation(d);
      DeformationClassification moved = classifyDeformation(conj);
      REQUIRE(base.params.size() == 1);
      REQUIRE(moved.params.size() == 1);
      CHECK(base.params[0] == f[0]);
      CHECK(moved.params[0] == f[0]);
      CHECK(compose(moved.autoU, compose(moved.normalizedVtoU, moved.autoV)) ==
            conj);
    }
  }
}

TEST_CASE("constant strata decompose and reassemble polynomials") {
  FamilyZ z = buildZ(10);  // three parameters
  std::mt19937 rng(7003);
  for (int iter = 0; iter < 200; ++iter) {
    CAPTURE(iter);
    SuperPoly p = randomBigPoly(rng, z.ringU);
    auto strata = constantStrata(p, z.plainU);
    SuperPoly rebuilt(z.ringU);
    for (const auto& [mask, part] : strata) {
      CHECK_FALSE(part.isZero());
      CHECK((mask & 1) == 0);  // no geometric bits in stratum keys
      rebuilt += constantMonomial(z.ringU, mask) * liftPoly(part, z.ringU);
    }
    CHECK(rebuilt == p);
  }

  SUBCASE("lifted plain polynomials occupy the empty stratum") {
    SuperPoly q = P(z.plainU, "3*z^2 + zeta*z^-1 - 7");
    auto strata = constantStrata(liftPoly(q, z.ringU), z.plainU);
    REQUIRE(strata.size() == 1);
    CHECK(strata.count(0) == 1);
    CHECK(strata.at(0) == q);
  }

  SUBCASE("field strata round-trip componentwise") {
    for (int iter = 0; iter < 50; ++iter) {
      CAPTURE(iter);
      VectorField x(z.ringU);
      x.setComp("z", randomBigPoly(rng, z.ringU));
      x.setComp("zeta", randomBigPoly(rng, z.ringU));
      auto strata = constantStrataField(x, z.plainU);
      VectorField rebuilt(z.ringU);
      for (const auto& [mask, part] : strata)
        rebuilt = rebuilt +
                  liftField(part, z.ringU).scaledBy(constantMonomial(z.ringU, mask));
      CHECK(rebuilt == x);
    }
  }

  SUBCASE("misaligned rings are rejected") {
    CHECK_THROWS_AS(constantStrata(P(z.ringU, "z"), z.plainV),
                    std::invalid_argument);
    CHECK_THROWS_AS(liftPoly(P(z.plainV, "w"), z.ringU), std::invalid_argument);
    CHECK_THROWS_AS(constantMonomial(z.ringU, 1), std::invalid_argument);
  }
}

TEST_CASE("twisted sections extend freely over the base") {
  SUBCASE("rank six, twist one") {
    FamilyZ z = buildZ(6);
    ZSections s = h0OnZ(z, 1);
    CHECK(s.rank == DimPair{2, 4});
    REQUIRE(s.basis.size() == 6);
    SuperPoly trans = P(z.ringU, "z");
    for (const GlobalSection& g : s.basis)
      CHECK(g.onU == trans * z.vToU.apply(g.onV));

    // Dropping the parameters recovers the plain-space basis in order.
    WPSpace wp(-2);
    LineBundleCohomology plain = lineBundleCohomology(wp, 1);
    ChartMap dropU(z.ringU, wp.ringU());
    dropU.setImage("eta1", SuperPoly(wp.ringU()));
    for (size_t j = 0; j < s.basis.size(); ++j)
      CHECK(dropU.apply(s.basis[j].onU) == plain.h0basis[j].onU);
  }

  SUBCASE("structure sheaf and negative twist ranks") {
    for (int n : {6, 8}) {
      CAPTURE(n);
      FamilyZ z = buildZ(n);
      ZSections s0 = h0OnZ(z, 0);
      CHECK(s0.rank == DimPair{1, n / 2});
      for (const GlobalSection& g : s0.basis)
        CHECK(g.onU == z.vToU.apply(g.onV));

      ZSections sm = h0OnZ(z, -1);
      CHECK(sm.rank == DimPair{0, n / 2 - 1});
      CHECK(sm.basis.size() == static_cast<size_t>(n / 2 - 1));
      SuperPoly trans = P(z.ringU, "z^-1");
      for (const GlobalSection& g : sm.basis)
        CHECK(g.onU == trans * z.vToU.apply(g.onV));
    }
  }

  SUBCASE("line bundle model carries the twist transition") {
    FamilyZ z = buildZ(8);
    LineBundleModel l = lineBundleOnZ(z, 3);
    CHECK(l.twist == 3);
    CHECK(l.transition == P(z.ringU, "z^3"));
  }
}
