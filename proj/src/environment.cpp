#include "vadp/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vadp {

std::vector<double> step_distribution(const Environment& env, const History& h, int action) {
    if (!h.valid()) throw std::invalid_argument("step_distribution: malformed history");
    if (action < 0 || action >= env.action_count)
        throw std::invalid_argument("step_distribution: action index out of range");
    std::vector<double> dist = env.kernel(h, action);
    double total = 0.0;
    for (double p : dist) total += p;
    if (std::abs(total - 1.0) > 1e-12)
        throw std::logic_error("step_distribution: kernel pmf does not sum to 1");
    return dist;
}

std::vector<History> enumerate_histories(const Environment& env, int max_len,
                                         std::size_t cap) {
    if (max_len < 1) throw std::invalid_argument("enumerate_histories: max_len must be >= 1");

    std::vector<History> all;
    std::vector<History> frontier;
    for (int e = 0; e < env.percept_count; ++e)
        if (env.initial_dist[e] > 0.0) frontier.emplace_back(e);

    for (int len = 1; len <= max_len; ++len) {
        all.insert(all.end(), frontier.begin(), frontier.end());
        if (all.size() > cap)
            throw ResourceLimitError("enumerate_histories: cap exceeded");
        if (len == max_len) break;
        std::vector<History> next;
        for (const History& h : frontier) {
            for (int a = 0; a < env.action_count; ++a) {
                const std::vector<double> dist = env.kernel(h, a);
                for (int e = 0; e < env.percept_count; ++e)
                    if (dist[e] > 0.0) next.push_back(h.extended(a, e));
                if (all.size() + next.size() > cap)
                    throw ResourceLimitError("enumerate_histories: cap exceeded");
            }
        }
        frontier = std::move(next);
    }
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace vadp
