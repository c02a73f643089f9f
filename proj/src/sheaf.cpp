#include "wps/sheaf.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "wps/qlinalg.hpp"

namespace wps {

std::string DimPair::str() const {
  std::ostringstream s;
  s << "(" << even << "|" << odd << ")";
  return s.str();
}

namespace {

RingPtr makeChartRing(const std::string& evenName, const std::string& oddName) {
  RingBuilder b;
  b.even(evenName, /*laurent=*/true);
  b.odd(oddName);
  b.endGeometric();
  return b.build();
}

}  // namespace

WPSpace::WPSpace(int m)
    : m_(m),
      U_(makeChartRing("z", "zeta")),
      V_(makeChartRing("w", "chi")),
      uToV_(U_, V_),
      vToU_(V_, U_) {
  uToV_.setImage("z", SuperPoly::evenVar(V_, 0, -1));
  uToV_.setImage("zeta", SuperPoly::evenVar(V_, 0, -m_) * SuperPoly::oddGen(V_, 0));
  vToU_.setImage("w", SuperPoly::evenVar(U_, 0, -1));
  vToU_.setImage("chi", SuperPoly::evenVar(U_, 0, -m_) * SuperPoly::oddGen(U_, 0));
  if (!compose(vToU_, uToV_).isIdentity() || !compose(uToV_, vToU_).isIdentity())
    throw std::logic_error("chart gluing is not involutive");
}

LineBundleModel lineBundle(const WPSpace& X, int d) {
  return LineBundleModel{d, SuperPoly::evenVar(X.ringU(), 0, d)};
}

LineBundleModel tensorBundle(const WPSpace& X, const LineBundleModel& a,
                             const LineBundleModel& b) {
  (void)X;
  return LineBundleModel{a.twist + b.twist, a.transition * b.transition};
}

CechWindow defaultWindow(const WPSpace& X, int d) {
  int r = std::abs(d) + std::abs(X.m()) + 14;
  return CechWindow{-r, r};
}

namespace {

// ----------------------------------------------------------------------
// Graded two-chart linear algebra.
//
// A "slot" is one coefficient position of the bundle in a chart (a line
// bundle has a single slot; the tangent sheaf has the d/dz and d/dzeta
// slots). A Key is one monomial z^zExp * zeta^eps in a slot. The gradings
// used below make every restriction map weight-homogeneous, so each
// (weight, parity) block is a finite, complete linear problem: the window
// only chooses which weights are scanned.
// ----------------------------------------------------------------------

struct Key {
  int slot = 0;
  int zExp = 0;
  int eps = 0;
  auto operator<=>(const Key&) const = default;
};

using Coords = std::map<Key, Rat>;

struct Gen {
  Key chart;      // chart-side monomial data (zExp is the chart exponent)
  Coords image;   // overlap coordinates of its restriction
};

struct Problem {
  int m = 0;
  int twistWeight = 0;               // weight carried by the transition
  std::vector<int> shift;            // weight shift per slot
  std::vector<int> slotPar;          // parity contribution per slot
  std::function<Coords(const Key&)> transportV;

  long weightOf(const Key& k) const {
    return 2L * k.zExp + static_cast<long>(m) * k.eps + shift[k.slot];
  }
  int parityOf(const Key& k) const { return (k.eps + slotPar[k.slot]) & 1; }
};

struct Block {
  long lambda = 0;
  int parity = 0;
  std::vector<Key> targets;
  std::vector<Gen> uGens, vGens;
  RatMat a;                              // rows: targets; cols: uGens | -vGens
  std::vector<std::vector<Rat>> kernel;  // coordinates over [uGens; vGens]
  std::vector<int> cokerReps;            // indices into targets
};

int targetIndex(const std::vector<Key>& targets, const Key& k) {
  auto it = std::lower_bound(targets.begin(), targets.end(), k);
  if (it == targets.end() || *it != k)
    throw std::logic_error("overlap monomial fell outside its graded block");
  return static_cast<int>(it - targets.begin());
}

// Preference order for cohomology representatives: negative-degree monomials
// first, then the higher slot (d/dzeta coefficients before d/dz), then the
// least negative exponent.
bool preferTarget(const Key& x, const Key& y) {
  bool xn = x.zExp < 0, yn = y.zExp < 0;
  if (xn != yn) return xn;
  if (x.slot != y.slot) return x.slot > y.slot;
  if (x.zExp != y.zExp) return xn ? x.zExp > y.zExp : x.zExp < y.zExp;
  return x.eps < y.eps;
}

Block solveBlock(const Problem& pr, long lambda, int parity) {
  Block b;
  b.lambda = lambda;
  b.parity = parity;
  const int nSlots = static_cast<int>(pr.shift.size());
  for (int s = 0; s < nSlots; ++s)
    for (int e = 0; e <= 1; ++e) {
      if (((e + pr.slotPar[s]) & 1) != parity) continue;
      long num = lambda - static_cast<long>(pr.m) * e - pr.shift[s];
      if (num % 2 != 0) continue;
      b.targets.push_back(Key{s, static_cast<int>(num / 2), e});
    }
  std::sort(b.targets.begin(), b.targets.end());
  if (b.targets.empty()) return b;

  for (const Key& t : b.targets)
    if (t.zExp >= 0) b.uGens.push_back(Gen{t, Coords{{t, Rat(1)}}});
  for (int s = 0; s < nSlots; ++s)
    for (int e = 0; e <= 1; ++e) {
      if (((e + pr.slotPar[s]) & 1) != parity) continue;
      long num = pr.twistWeight - lambda - static_cast<long>(pr.m) * e - pr.shift[s];
      if (num % 2 != 0 || num < 0) continue;
      Key chart{s, static_cast<int>(num / 2), e};
      Gen g{chart, pr.transportV(chart)};
      for (const auto& [k, c] : g.image) {
        (void)c;
        if (pr.weightOf(k) != lambda || pr.parityOf(k) != parity)
          throw std::logic_error("transported generator is not weight-homogeneous");
      }
      b.vGens.push_back(std::move(g));
    }

  const int rows = static_cast<int>(b.targets.size());
  const int nu = static_cast<int>(b.uGens.size());
  const int nv = static_cast<int>(b.vGens.size());
  b.a = RatMat(rows, nu + nv);
  for (int j = 0; j < nu; ++j)
    for (const auto& [k, c] : b.uGens[j].image) b.a.at(targetIndex(b.targets, k), j) = c;
  for (int j = 0; j < nv; ++j)
    for (const auto& [k, c] : b.vGens[j].image) b.a.at(targetIndex(b.targets, k), nu + j) = -c;

  b.kernel = nullspaceBasis(b.a);

  // Greedy cokernel representatives in preference order: a target monomial is
  // accepted when it is independent of the column space and the reps so far.
  const int rank = rankOf(b.a);
  const int cokerDim = rows - rank;
  if (cokerDim > 0) {
    std::vector<int> order(rows);
    for (int i = 0; i < rows; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
      return preferTarget(b.targets[i], b.targets[j]);
    });
    for (int idx : order) {
      if (static_cast<int>(b.cokerReps.size()) == cokerDim) break;
      RatMat ext(rows, b.a.cols + static_cast<int>(b.cokerReps.size()) + 1);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < b.a.cols; ++j) ext.at(i, j) = b.a.at(i, j);
      for (size_t r = 0; r < b.cokerReps.size(); ++r)
        ext.at(b.cokerReps[r], b.a.cols + static_cast<int>(r)) = 1;
      ext.at(idx, ext.cols - 1) = 1;
      if (rankOf(ext) == rank + static_cast<int>(b.cokerReps.size()) + 1)
        b.cokerReps.push_back(idx);
    }
    if (static_cast<int>(b.cokerReps.size()) != cokerDim)
      throw std::logic_error("failed to complete cokernel representatives");
  }
  return b;
}

// Monomial builders on a two-generator chart ring.
SuperPoly keyPoly(const RingPtr& r, int zExp, int eps) {
  SuperPoly p = SuperPoly::evenVar(r, 0, zExp);
  if (eps) p = p * SuperPoly::oddGen(r, 0);
  return p;
}

Coords polyCoords(const SuperPoly& p, int slot) {
  Coords out;
  for (const auto& [mono, c] : p.terms())
    out[Key{slot, mono.exponentOf(0), static_cast<int>(mono.oddMask & 1)}] = c;
  return out;
}

Coords fieldCoords(const VectorField& x) {
  Coords out;
  for (const auto& [k, c] : polyCoords(x.evenComp(0), 0)) out[k] = c;
  for (const auto& [k, c] : polyCoords(x.oddComp(0), 1)) out[k] = c;
  return out;
}

SuperPoly coordsToPoly(const RingPtr& r, const Coords& cs) {
  SuperPoly p = SuperPoly::zero(r);
  for (const auto& [k, c] : cs) p += keyPoly(r, k.zExp, k.eps).scaled(c);
  return p;
}

VectorField keyField(const RingPtr& r, const Key& k) {
  VectorField f(r);
  f.setComp(k.slot == 0 ? r->even[0].name : r->odd[0], keyPoly(r, k.zExp, k.eps));
  return f;
}

Problem lineProblem(const WPSpace& X, int d) {
  Problem pr;
  pr.m = X.m();
  pr.twistWeight = 2 * d;
  pr.shift = {0};
  pr.slotPar = {0};
  SuperPoly transition = lineBundle(X, d).transition;
  const ChartMap* vToU = &X.vToU();
  RingPtr v = X.ringV();
  pr.transportV = [transition, vToU, v](const Key& k) {
    return polyCoords(transition * vToU->apply(keyPoly(v, k.zExp, k.eps)), 0);
  };
  return pr;
}

Problem tangentProblem(const WPSpace& X) {
  Problem pr;
  pr.m = X.m();
  pr.twistWeight = 0;
  pr.shift = {-2, -X.m()};
  pr.slotPar = {0, 1};
  const ChartMap* uToV = &X.uToV();
  const ChartMap* vToU = &X.vToU();
  RingPtr v = X.ringV();
  pr.transportV = [uToV, vToU, v](const Key& k) {
    return fieldCoords(pushforwardField(keyField(v, k), *uToV, *vToU));
  };
  return pr;
}

std::pair<long, long> lambdaRange(const Problem& pr, const CechWindow& win) {
  long lo = 0, hi = 0;
  bool first = true;
  for (size_t s = 0; s < pr.shift.size(); ++s)
    for (int e = 0; e <= 1; ++e) {
      long aux = static_cast<long>(pr.m) * e + pr.shift[s];
      if (first || aux < lo) lo = aux;
      if (first || aux > hi) hi = aux;
      first = false;
    }
  return {2L * win.loDeg + lo, 2L * win.hiDeg + hi};
}

struct ScanResult {
  DimPair h0dim, h1dim;
  // Each global object: chart-side coefficients on U and V monomials.
  std::vector<std::pair<std::vector<std::pair<Key, Rat>>,
                        std::vector<std::pair<Key, Rat>>>> h0pairs;
  std::vector<Key> h1reps;
};

ScanResult scanBlocks(const Problem& pr, const CechWindow& win) {
  ScanResult out;
  auto [lamLo, lamHi] = lambdaRange(pr, win);
  for (int parity : {0, 1})
    for (long lam = lamLo; lam <= lamHi; ++lam) {
      Block b = solveBlock(pr, lam, parity);
      if (b.targets.empty()) continue;
      const int nu = static_cast<int>(b.uGens.size());
      for (const auto& vec : b.kernel) {
        std::vector<std::pair<Key, Rat>> uPart, vPart;
        for (int j = 0; j < nu; ++j)
          if (vec[j] != 0) uPart.push_back({b.uGens[j].chart, vec[j]});
        for (size_t j = nu; j < vec.size(); ++j)
          if (vec[j] != 0) vPart.push_back({b.vGens[j - nu].chart, vec[j]});
        out.h0pairs.push_back({std::move(uPart), std::move(vPart)});
        (parity == 0 ? out.h0dim.even : out.h0dim.odd) += 1;
      }
      for (int idx : b.cokerReps) {
        out.h1reps.push_back(b.targets[idx]);
        (parity == 0 ? out.h1dim.even : out.h1dim.odd) += 1;
      }
    }
  return out;
}

}  // namespace

LineBundleCohomology lineBundleCohomology(const WPSpace& X, int d,
                                          std::optional<CechWindow> win) {
  CechWindow w = win.value_or(defaultWindow(X, d));
  Problem pr = lineProblem(X, d);
  ScanResult sc = scanBlocks(pr, w);
  LineBundleCohomology out;
  out.twist = d;
  out.h0dim = sc.h0dim;
  out.h1dim = sc.h1dim;
  SuperPoly transition = lineBundle(X, d).transition;
  for (const auto& [uPart, vPart] : sc.h0pairs) {
    GlobalSection s{SuperPoly::zero(X.ringU()), SuperPoly::zero(X.ringV())};
    for (const auto& [k, c] : uPart) s.onU += keyPoly(X.ringU(), k.zExp, k.eps).scaled(c);
    for (const auto& [k, c] : vPart) s.onV += keyPoly(X.ringV(), k.zExp, k.eps).scaled(c);
    if (s.onU != transition * X.vToU().apply(s.onV))
      throw std::logic_error("global section fails the transition identity");
    out.h0basis.push_back(std::move(s));
  }
  for (const Key& k : sc.h1reps) out.h1basis.push_back(keyPoly(X.ringU(), k.zExp, k.eps));
  return out;
}

DimPair h0LineBundle(const WPSpace& X, int d) { return lineBundleCohomology(X, d).h0dim; }
DimPair h1LineBundle(const WPSpace& X, int d) { return lineBundleCohomology(X, d).h1dim; }

TangentCohomology tangentCohomology(const WPSpace& X, std::optional<CechWindow> win) {
  CechWindow w = win.value_or(defaultWindow(X, 0));
  Problem pr = tangentProblem(X);
  ScanResult sc = scanBlocks(pr, w);
  TangentCohomology out;
  out.h0dim = sc.h0dim;
  out.h1dim = sc.h1dim;
  for (const auto& [uPart, vPart] : sc.h0pairs) {
    GlobalField f{VectorField(X.ringU()), VectorField(X.ringV())};
    for (const auto& [k, c] : uPart) f.onU = f.onU + keyField(X.ringU(), k).scaled(c);
    for (const auto& [k, c] : vPart) f.onV = f.onV + keyField(X.ringV(), k).scaled(c);
    if (!(pushforwardField(f.onV, X.uToV(), X.vToU()) == f.onU))
      throw std::logic_error("global field fails the transport identity");
    out.h0basis.push_back(std::move(f));
  }
  for (const Key& k : sc.h1reps) out.h1basis.push_back(keyField(X.ringU(), k));
  return out;
}

namespace {

// Shared implementation of the cocycle reductions. The cocycle's own
// monomials select the (weight, parity) blocks; each block is solved exactly
// against [uGens | -vGens | cokernel representatives], which by construction
// span the block.
struct GenericReduction {
  std::vector<Rat> coords;
  Coords fromU, fromV;
  std::vector<std::pair<Key, Rat>> onU, onV;
};

GenericReduction reduceGeneric(const Problem& pr, const Coords& value,
                               const std::vector<Key>& basisKeys,
                               const char* windowError) {
  GenericReduction out;
  out.coords.assign(basisKeys.size(), Rat(0));
  std::map<std::pair<long, int>, Coords> groups;
  for (const auto& [k, c] : value)
    if (c != 0) groups[{pr.weightOf(k), pr.parityOf(k)}][k] = c;
  for (const auto& [lp, cs] : groups) {
    Block b = solveBlock(pr, lp.first, lp.second);
    const int rows = static_cast<int>(b.targets.size());
    const int nu = static_cast<int>(b.uGens.size());
    const int nv = static_cast<int>(b.vGens.size());
    const int nr = static_cast<int>(b.cokerReps.size());
    RatMat m(rows, nu + nv + nr);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < nu + nv; ++j) m.at(i, j) = b.a.at(i, j);
    for (int r = 0; r < nr; ++r) m.at(b.cokerReps[r], nu + nv + r) = 1;
    std::vector<Rat> rhs(rows, Rat(0));
    for (const auto& [k, c] : cs) rhs[targetIndex(b.targets, k)] = c;
    auto sol = solveLinear(m, rhs);
    if (!sol) throw std::logic_error("graded block failed to span its overlap space");
    for (int j = 0; j < nu; ++j)
      if ((*sol)[j] != 0) {
        out.onU.push_back({b.uGens[j].chart, (*sol)[j]});
        for (const auto& [k, c] : b.uGens[j].image) out.fromU[k] += c * (*sol)[j];
      }
    for (int j = 0; j < nv; ++j)
      if ((*sol)[nu + j] != 0) {
        out.onV.push_back({b.vGens[j].chart, (*sol)[nu + j]});
        for (const auto& [k, c] : b.vGens[j].image) out.fromV[k] += -c * (*sol)[nu + j];
      }
    for (int r = 0; r < nr; ++r) {
      Rat c = (*sol)[nu + nv + r];
      if (c == 0) continue;
      Key rep = b.targets[b.cokerReps[r]];
      auto it = std::find(basisKeys.begin(), basisKeys.end(), rep);
      if (it == basisKeys.end()) throw std::runtime_error(windowError);
      out.coords[it - basisKeys.begin()] = c;
    }
  }
  return out;
}

std::vector<Key> repKeysOf(const std::vector<SuperPoly>& reps) {
  std::vector<Key> keys;
  for (const SuperPoly& p : reps) {
    Coords cs = polyCoords(p, 0);
    if (cs.size() != 1) throw std::logic_error("representative is not a monomial");
    keys.push_back(cs.begin()->first);
  }
  return keys;
}

std::vector<Key> repKeysOf(const std::vector<VectorField>& reps) {
  std::vector<Key> keys;
  for (const VectorField& f : reps) {
    Coords cs = fieldCoords(f);
    if (cs.size() != 1) throw std::logic_error("representative is not a monomial");
    keys.push_back(cs.begin()->first);
  }
  return keys;
}

VectorField coordsToField(const RingPtr& r, const Coords& cs) {
  VectorField f(r);
  for (const auto& [k, c] : cs) f = f + keyField(r, k).scaled(c);
  return f;
}

}  // namespace

CocycleReduction reduceCocycle(const WPSpace& X, const VectorField& v) {
  requireSameRing(X.ringU(), v.ring());
  Problem pr = tangentProblem(X);
  TangentCohomology th = tangentCohomology(X);
  GenericReduction g =
      reduceGeneric(pr, fieldCoords(v), repKeysOf(th.h1basis),
                    "cocycle carries a class outside the computed basis window");
  CocycleReduction out;
  out.coords = std::move(g.coords);
  out.fromU = coordsToField(X.ringU(), g.fromU);
  out.fromV = coordsToField(X.ringU(), g.fromV);
  out.onU = VectorField(X.ringU());
  out.onV = VectorField(X.ringV());
  for (const auto& [k, c] : g.onU) out.onU = out.onU + keyField(X.ringU(), k).scaled(c);
  for (const auto& [k, c] : g.onV) out.onV = out.onV + keyField(X.ringV(), k).scaled(c);
  VectorField recon = out.fromU + out.fromV;
  for (size_t i = 0; i < out.coords.size(); ++i)
    recon = recon + th.h1basis[i].scaled(out.coords[i]);
  if (!(recon == v)) throw std::logic_error("cocycle reduction failed to reconstruct its input");
  return out;
}

SectionReduction reduceSectionCocycle(const WPSpace& X, int d, const SuperPoly& v) {
  requireSameRing(X.ringU(), v.ring());
  Problem pr = lineProblem(X, d);
  LineBundleCohomology lb = lineBundleCohomology(X, d);
  GenericReduction g =
      reduceGeneric(pr, polyCoords(v, 0), repKeysOf(lb.h1basis),
                    "section cocycle carries a class outside the computed basis window");
  SectionReduction out;
  out.coords = std::move(g.coords);
  out.fromU = coordsToPoly(X.ringU(), g.fromU);
  out.fromV = coordsToPoly(X.ringU(), g.fromV);
  out.onU = SuperPoly::zero(X.ringU());
  out.onV = SuperPoly::zero(X.ringV());
  for (const auto& [k, c] : g.onU) out.onU += keyPoly(X.ringU(), k.zExp, k.eps).scaled(c);
  for (const auto& [k, c] : g.onV) out.onV += keyPoly(X.ringV(), k.zExp, k.eps).scaled(c);
  SuperPoly recon = out.fromU + out.fromV;
  for (size_t i = 0; i < out.coords.size(); ++i)
    recon += lb.h1basis[i].scaled(out.coords[i]);
  if (!(recon == v)) throw std::logic_error("section reduction failed to reconstruct its input");
  return out;
}

std::optional<VectorField> globalExtensionOfU(const WPSpace& X, const VectorField& onU) {
  requireSameRing(X.ringU(), onU.ring());
  Problem pr = tangentProblem(X);
  Coords value = fieldCoords(onU);
  for (const auto& [k, c] : value) {
    (void)c;
    if (k.zExp < 0)
      throw std::invalid_argument("globalExtensionOfU expects a polynomial chart field");
  }
  std::map<std::pair<long, int>, Coords> groups;
  for (const auto& [k, c] : value)
    if (c != 0) groups[{pr.weightOf(k), pr.parityOf(k)}][k] = c;
  VectorField onV(X.ringV());
  for (const auto& [lp, cs] : groups) {
    Block b = solveBlock(pr, lp.first, lp.second);
    const int rows = static_cast<int>(b.targets.size());
    const int nv = static_cast<int>(b.vGens.size());
    RatMat m(rows, nv);
    for (int j = 0; j < nv; ++j)
      for (const auto& [k, c] : b.vGens[j].image) m.at(targetIndex(b.targets, k), j) = c;
    std::vector<Rat> rhs(rows, Rat(0));
    for (const auto& [k, c] : cs) rhs[targetIndex(b.targets, k)] = c;
    auto sol = solveLinear(m, rhs);
    if (!sol) return std::nullopt;
    for (int j = 0; j < nv; ++j)
      if ((*sol)[j] != 0) onV = onV + keyField(X.ringV(), b.vGens[j].chart).scaled((*sol)[j]);
  }
  if (!(pushforwardField(onV, X.uToV(), X.vToU()) == onU))
    throw std::logic_error("global extension failed its transport identity");
  return onV;
}

}  // namespace wps
