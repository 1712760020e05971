#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vadp/history.hpp"

namespace vadp {

// Thrown when an enumeration would exceed the configured cap.
class ResourceLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Finite latent sufficient statistic of an environment. Folding a history
// through init_map/update yields a latent index that determines the kernel
// and the expected reward exactly.
struct LatentModel {
    int state_count = 0;                                // Z
    std::vector<int> init_map;                          // percept -> latent
    std::vector<std::vector<std::vector<int>>> update;  // [z][a][e'] -> z'
    std::vector<std::vector<std::vector<double>>> kernel;  // [z][a][e'] -> prob
    std::vector<std::vector<double>> reward;            // [z][a] in [0,1]

    int fold(const History& h) const {
        int z = init_map.at(h.percepts.front());
        for (std::size_t i = 0; i < h.actions.size(); ++i)
            z = update[z][h.actions[i]][h.percepts[i + 1]];
        return z;
    }
};

// A history-based environment with finite percept and action alphabets.
// Immutable after construction; safe for concurrent reads.
struct Environment {
    std::string name;
    int action_count = 0;   // A
    int percept_count = 0;  // E
    std::vector<double> initial_dist;  // pmf over percepts
    std::function<std::vector<double>(const History&, int)> kernel;  // mu(.|h,a)
    std::function<double(const History&, int)> reward;               // r_mu(h,a)
    std::optional<LatentModel> latent;
};

// Deterministic history policy.
struct Policy {
    std::function<int(const History&)> act;
};

// mu(.|h,a) with argument validation.
std::vector<double> step_distribution(const Environment& env, const History& h, int action);

// All positive-probability histories of length <= max_len, canonically
// ordered. Throws ResourceLimitError above the cap.
std::vector<History> enumerate_histories(const Environment& env, int max_len,
                                         std::size_t cap = 1'000'000);

}  // namespace vadp
