#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace vadp {

// Closed-form state-count bound value; overflow is reported explicitly
// because the ESA bound exceeds 64 bits quickly.
struct BoundValue {
    bool overflow = false;
    unsigned long long value = 0;

    std::string to_string() const;
};

// Floor with a relative guard against floating-point values that sit a few
// ulps below an exact integer (e.g. 2.5/0.025 evaluating to 99.9999...).
long long floor_guard(long double x);
long long ceil_guard(long double x);

// S <= (2/(eps(1-gamma)^2))^A
BoundValue esa_bound(double eps, double gamma, int action_count);

// S <= floor((1+3gamma)/(eps(1-gamma)^2)) * A * 2^(A-1)
BoundValue vadp_bound(double eps, double gamma, int action_count);

// S <= 16(ceil(log2 A) + 1 - gamma)^3 / (gamma eps (1-gamma)^2); gamma = 0
// rejected, A >= 2.
BoundValue bin_bound_full(double eps, double gamma, int action_count);

// S <= 17 ceil(log2 A)^3 / (eps (1-gamma)^2); applies for gamma >= 0.99, or
// gamma >= 0.95 with d >= large_d_threshold. nullopt when inapplicable.
std::optional<BoundValue> bin_bound_simplified(double eps, double gamma,
                                               int action_count,
                                               int large_d_threshold = 7);

}  // namespace vadp
