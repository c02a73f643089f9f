#pragma once

#include <string>

#include "wps/superpoly.hpp"

namespace wps {

/// Parses `expr` over an existing ring.  Grammar: terms joined by +/-; a
/// term is an optional rational coefficient and '*'-or-juxtaposition-joined
/// factors; a factor is an identifier or parenthesized expression with an
/// optional integer exponent, e.g. "3*z^-2*zeta - 1/2*(1 + eta1)".
/// Round-trips with SuperPoly::str().
SuperPoly parseExpr(const RingPtr& ring, const std::string& expr);

/// Self-describing fixture: an optional first line `odd: name1 name2 ...`
/// declares the odd generators (in order); all other identifiers in the
/// remaining expression become Laurent even variables in order of first use.
SuperPoly parseFixture(const std::string& text);

} // namespace wps
