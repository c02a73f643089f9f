#pragma once

#include <cstdint>
#include <map>

#include "wps/derivation.hpp"
#include "wps/superpoly.hpp"

namespace wps {

/// Helpers for rings whose generators split into a geometric chart part
/// (shared, index-aligned, with another "plain" ring) and extra odd constant
/// generators (deformation or test parameters). A polynomial over the big
/// ring decomposes uniquely as p = sum_mu mu * p_mu where mu runs over
/// monomials in the constants, written to the LEFT of the geometric part,
/// and each p_mu lives in the plain ring. Keys are odd-generator bitmasks of
/// the big ring (geometric bits always zero).

/// Number of constant factors in a stratum key.
int constantDegree(std::uint64_t mask);

/// The monomial mu itself as a polynomial over the big ring.
SuperPoly constantMonomial(const RingPtr& big, std::uint64_t mask);

/// Full decomposition of p; zero strata are omitted.
std::map<std::uint64_t, SuperPoly> constantStrata(const SuperPoly& p,
                                                  const RingPtr& plain);

/// Index-aligned embedding of a plain polynomial into the big ring.
SuperPoly liftPoly(const SuperPoly& plain, const RingPtr& big);

/// Componentwise variants for chart vector fields.
std::map<std::uint64_t, VectorField> constantStrataField(const VectorField& x,
                                                         const RingPtr& plain);
VectorField liftField(const VectorField& plain, const RingPtr& big);

/// Embedding of an element of a constants-only ring (no geometric
/// generators) into a big ring carrying the same odd constants after its
/// geometric generators.
SuperPoly embedConstants(const SuperPoly& c, const RingPtr& big);

/// Inverse of embedConstants; the input must be free of geometric
/// generators.
SuperPoly restrictToConstants(const SuperPoly& p, const RingPtr& constants);

}  // namespace wps
