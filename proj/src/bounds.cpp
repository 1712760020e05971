#include "vadp/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vadp {

namespace {

constexpr long double kOverflowLimit = 9.0e18L;

void check_range(double eps, double gamma, int action_count, int min_actions) {
    if (!(eps > 0.0)) throw std::invalid_argument("bound: eps must be > 0");
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("bound: gamma must be in [0,1)");
    if (action_count < min_actions)
        throw std::invalid_argument("bound: action count out of range");
}

int bits_per_action(int action_count) {
    int d = 0;
    while ((1LL << d) < action_count) ++d;
    return d < 1 ? 1 : d;
}

}  // namespace

std::string BoundValue::to_string() const {
    return overflow ? "inf" : std::to_string(value);
}

long long floor_guard(long double x) {
    const long double nearest = std::round(x);
    if (std::fabs(x - nearest) <= 1e-9L * std::fmax(1.0L, std::fabs(x)))
        return static_cast<long long>(nearest);
    return static_cast<long long>(std::floor(x));
}

long long ceil_guard(long double x) {
    const long double nearest = std::round(x);
    if (std::fabs(x - nearest) <= 1e-9L * std::fmax(1.0L, std::fabs(x)))
        return static_cast<long long>(nearest);
    return static_cast<long long>(std::ceil(x));
}

BoundValue esa_bound(double eps, double gamma, int action_count) {
    check_range(eps, gamma, action_count, 1);
    const long double one_minus = 1.0L - static_cast<long double>(gamma);
    const long double base = 2.0L / (static_cast<long double>(eps) * one_minus * one_minus);
    const long double raw = std::pow(base, static_cast<long double>(action_count));
    if (!(raw < kOverflowLimit)) return {true, 0};
    return {false, static_cast<unsigned long long>(floor_guard(raw))};
}

BoundValue vadp_bound(double eps, double gamma, int action_count) {
    check_range(eps, gamma, action_count, 1);
    const long double one_minus = 1.0L - static_cast<long double>(gamma);
    const long double bins =
        (1.0L + 3.0L * static_cast<long double>(gamma)) /
        (static_cast<long double>(eps) * one_minus * one_minus);
    const long double raw = static_cast<long double>(floor_guard(bins)) *
                            static_cast<long double>(action_count) *
                            std::pow(2.0L, static_cast<long double>(action_count - 1));
    if (!(raw < kOverflowLimit)) return {true, 0};
    return {false, static_cast<unsigned long long>(raw)};
}

BoundValue bin_bound_full(double eps, double gamma, int action_count) {
    check_range(eps, gamma, action_count, 2);
    if (gamma == 0.0) throw std::invalid_argument("bin_bound_full: gamma must be > 0");
    const int d = bits_per_action(action_count);
    const long double one_minus = 1.0L - static_cast<long double>(gamma);
    const long double top = d + one_minus;
    const long double raw = 16.0L * top * top * top /
                            (static_cast<long double>(gamma) *
                             static_cast<long double>(eps) * one_minus * one_minus);
    if (!(raw < kOverflowLimit)) return {true, 0};
    return {false, static_cast<unsigned long long>(floor_guard(raw))};
}

std::optional<BoundValue> bin_bound_simplified(double eps, double gamma,
                                               int action_count,
                                               int large_d_threshold) {
    check_range(eps, gamma, action_count, 2);
    const int d = bits_per_action(action_count);
    const bool applies = gamma >= 0.99 || (gamma >= 0.95 && d >= large_d_threshold);
    if (!applies) return std::nullopt;
    const long double one_minus = 1.0L - static_cast<long double>(gamma);
    const long double raw = 17.0L * static_cast<long double>(d) * d * d /
                            (static_cast<long double>(eps) * one_minus * one_minus);
    if (!(raw < kOverflowLimit)) return BoundValue{true, 0};
    return BoundValue{false, static_cast<unsigned long long>(floor_guard(raw))};
}

}  // namespace vadp
