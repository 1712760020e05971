#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vadp/oracle.hpp"

namespace vadp {

enum class AbstractionKind { kVadp, kVdp, kEsaQGrid, kMdpLastPercept };

std::string to_string(AbstractionKind kind);
AbstractionKind abstraction_kind_from_string(const std::string& name);

struct AbstractionParams {
    double eps = 0.1;    // normalized optimality-gap target, > 0
    double gamma = 0.5;  // in [0,1)
    AbstractionKind kind = AbstractionKind::kVadp;

    // Value-spread parameter eps0 = eps(1-gamma)/(1+3gamma); the bin width of
    // the VADP/VDP value grid. The near-optimal buffer threshold is eps itself.
    double eps0() const { return eps * (1.0 - gamma) / (1.0 + 3.0 * gamma); }
};

// A state of an abstraction. Two histories share a state iff all label
// components of the respective kind are equal.
struct StateLabel {
    AbstractionKind kind = AbstractionKind::kVadp;
    long long value_bin = 0;            // VADP / VDP
    int opt_action = -1;                // VADP / VDP
    ActionSet near_opt = 0;             // VADP only
    std::vector<long long> q_bins;      // ESA_QGRID only
    int last_percept = -1;              // MDP_LAST_PERCEPT only

    auto operator<=>(const StateLabel&) const = default;

    // Stable text form, e.g. "(100|0|{0})" for VADP labels.
    std::string to_string() const;
};

// A map from histories to labels. classify is pure; safe for concurrent use.
struct Abstraction {
    AbstractionParams params;
    std::function<StateLabel(const History&)> classify;
};

Abstraction build_vadp(const LatentOracle& oracle, AbstractionParams params);
Abstraction build_vdp(const LatentOracle& oracle, AbstractionParams params);
Abstraction build_esa_qgrid(const LatentOracle& oracle, AbstractionParams params);
Abstraction build_mdp_abstraction(const Environment& env);

// Labels of all histories up to the depth, deduplicated and canonically
// ordered.
std::vector<StateLabel> enumerate_states(const Abstraction& abstraction,
                                         const Environment& env, int depth);

}  // namespace vadp
