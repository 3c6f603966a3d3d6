#pragma once

#include "pqsim/unified_search.hpp"

namespace pqsim {

// Search-parameter recipes per hint model and distribution class. Each fixes
// the interval and the winning-probability floor the guarantee needs:
//
//   setting          lo        hi          gamma  failure  factor
//   regular-range    1         H           1/H    delta    1-5eps
//   mhr-range        1         H           1/e    delta    1-5eps
//   regular-sample   delta*s/8 4s/(d*eps)  eps    delta/2  1-6eps (overall 1-delta)
//   mhr-sample       delta*s/8 4s/(d*eps)  1/e    delta/2  1-5eps (overall 1-delta)
//
// The one-sample recipes split the failure budget: half to the event that
// the sample-localized interval captures a near-optimal price, half to the
// search itself.

SearchParams regular_value_range(double H, double eps, double delta, double C = 20);
SearchParams mhr_value_range(double H, double eps, double delta, double C = 20);
SearchParams regular_one_sample(double sample, double eps, double delta, double C = 20);
SearchParams mhr_one_sample(double sample, double eps, double delta, double C = 20);

// The multiplicative guarantee factor each instantiation promises.
double success_factor_regular_range(double eps);
double success_factor_mhr_range(double eps);
double success_factor_regular_sample(double eps);
double success_factor_mhr_sample(double eps);
double success_factor_general_range(double eps);

}  // namespace pqsim
