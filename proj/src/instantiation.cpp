#include "pqsim/instantiation.hpp"

#include <cmath>
#include <stdexcept>

namespace pqsim {

namespace {

void check_common(double eps, double delta) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("instantiation: eps must be in (0,1)");
    if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("instantiation: delta in (0,1]");
}

}  // namespace

SearchParams regular_value_range(double H, double eps, double delta, double C) {
    check_common(eps, delta);
    if (!(H >= 1)) throw std::invalid_argument("instantiation: H must be >= 1");
    return {1.0, H, eps, delta, 1.0 / H, C};
}

SearchParams mhr_value_range(double H, double eps, double delta, double C) {
    check_common(eps, delta);
    if (!(H >= 1)) throw std::invalid_argument("instantiation: H must be >= 1");
    return {1.0, H, eps, delta, 1.0 / std::exp(1.0), C};
}

SearchParams regular_one_sample(double sample, double eps, double delta, double C) {
    check_common(eps, delta);
    if (!(sample > 0)) throw std::invalid_argument("instantiation: sample must be positive");
    return {delta * sample / 8.0, 4.0 * sample / (delta * eps), eps, delta / 2.0, eps, C};
}

SearchParams mhr_one_sample(double sample, double eps, double delta, double C) {
    check_common(eps, delta);
    if (!(sample > 0)) throw std::invalid_argument("instantiation: sample must be positive");
    return {delta * sample / 8.0, 4.0 * sample / (delta * eps), eps, delta / 2.0,
            1.0 / std::exp(1.0), C};
}

double success_factor_regular_range(double eps) { return 1.0 - 5.0 * eps; }
double success_factor_mhr_range(double eps) { return 1.0 - 5.0 * eps; }
double success_factor_regular_sample(double eps) { return 1.0 - 6.0 * eps; }
double success_factor_mhr_sample(double eps) { return 1.0 - 5.0 * eps; }
double success_factor_general_range(double eps) { return 1.0 - 3.0 * eps; }

}  // namespace pqsim
