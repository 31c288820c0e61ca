#pragma once

// Text notation for slopes, intercepts and contraction factors:
//
//   theta:   quad:(p+sqrt(d))/q   cf:[a1,a2|b1,b2]   dec:<decimal>±<error>
//   rho:     rat:p/q              mult:j             dec:<decimal>±<error>
//   lambda:  p/q                  quad:(p+sqrt(d))/q
//
// In the cf form the part after '|' repeats forever; without '|' the whole
// list repeats. "+-" is accepted in place of "±".

#include <string>

#include "sturmian/confrac.hpp"

namespace sturm {

Theta parse_theta(const std::string& text, const PrecisionBudget& budget = {});
ThetaOffset parse_rho(const std::string& text, const Theta& theta);
/// The rho notation without the [0,1) restriction, for arguments of phi.
ThetaOffset parse_argument(const std::string& text, const Theta& theta);
QuadraticSurd parse_surd(const std::string& body);
Interval parse_decimal_interval(const std::string& body);
/// Rational or quadratic surd in (0,1).
QuadraticSurd parse_lambda(const std::string& text);

}  // namespace sturm
