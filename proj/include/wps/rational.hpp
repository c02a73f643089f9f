#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace wps {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string ratToString(const Rat& r) { return r.str(); }

} // namespace wps
