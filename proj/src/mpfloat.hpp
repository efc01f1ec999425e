#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace aoi {

// Partial-fraction coefficients of hypoexponential distributions cancel
// catastrophically when rates cluster: denominators carry factors
// (rate_l - rate_i)^(n_l + m_l), so a K=10 network near idle loses ~40
// significant digits before the terms recombine to an O(1) density. All
// coefficient tables and bound summations therefore run in 100-digit
// floats and only the final results are rounded to double.
using BigFloat = boost::multiprecision::cpp_bin_float_100;

}  // namespace aoi
