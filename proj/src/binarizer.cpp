#include "vadp/binarizer.hpp"

#include <cmath>
#include <stdexcept>

#include "vadp/bounds.hpp"
#include "vadp/oracle.hpp"

namespace vadp {

namespace {

int bits_needed(int action_count) {
    int d = 0;
    while ((1 << d) < action_count) ++d;
    return d < 1 ? 1 : d;
}

}  // namespace

int BinarizedEnvironment::encode(int z, int e, int buf_len, int buf) const {
    const int buf_states = (1 << bits_per_action) - 1;
    const int code = (1 << buf_len) - 1 + buf;
    return (z * env.percept_count + e) * buf_states + code;
}

BinarizedEnvironment binarize(const Environment& env, double gamma) {
    if (env.action_count < 2)
        throw std::invalid_argument("binarize: need at least 2 actions");
    if (!env.latent) throw std::invalid_argument("binarize: environment has no latent model");
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("binarize: gamma must be in [0,1)");

    const LatentModel& inner = *env.latent;
    const int A = env.action_count;
    const int E = env.percept_count;
    const int Z = inner.state_count;
    const int d = bits_needed(A);

    BinarizedEnvironment bin;
    bin.bits_per_action = d;
    bin.lambda = std::pow(gamma, 1.0 / d);
    bin.inner_action_count = A;
    bin.inner_latent_count = Z;
    bin.env.name = env.name + ":binarized";
    bin.env.action_count = 2;
    bin.env.percept_count = E;
    bin.env.initial_dist = env.initial_dist;

    const int buf_states = (1 << d) - 1;
    LatentModel lm;
    lm.state_count = Z * E * buf_states;
    lm.init_map.resize(E);
    for (int e = 0; e < E; ++e) lm.init_map[e] = bin.encode(inner.init_map[e], e, 0, 0);
    lm.update.assign(lm.state_count, std::vector<std::vector<int>>(2, std::vector<int>(E, 0)));
    lm.kernel.assign(lm.state_count,
                     std::vector<std::vector<double>>(2, std::vector<double>(E, 0.0)));
    lm.reward.assign(lm.state_count, std::vector<double>(2, 0.0));

    for (int z = 0; z < Z; ++z)
        for (int e = 0; e < E; ++e)
            for (int len = 0; len < d; ++len)
                for (int buf = 0; buf < (1 << len); ++buf) {
                    const int idx = bin.encode(z, e, len, buf);
                    for (int b = 0; b < 2; ++b) {
                        if (len < d - 1) {
                            // intermediate bit: re-emit the buffered percept
                            lm.kernel[idx][b][e] = 1.0;
                            const int next = bin.encode(z, e, len + 1, buf * 2 + b);
                            for (int e2 = 0; e2 < E; ++e2) lm.update[idx][b][e2] = next;
                        } else {
                            // final bit: decode and execute the macro-action
                            const int a = (buf * 2 + b) % A;
                            lm.reward[idx][b] = inner.reward[z][a];
                            for (int e2 = 0; e2 < E; ++e2) {
                                lm.kernel[idx][b][e2] = inner.kernel[z][a][e2];
                                lm.update[idx][b][e2] =
                                    bin.encode(inner.update[z][a][e2], e2, 0, 0);
                            }
                        }
                    }
                }

    bin.env.kernel = [lm](const History& h, int a) { return lm.kernel[lm.fold(h)][a]; };
    bin.env.reward = [lm](const History& h, int a) { return lm.reward[lm.fold(h)][a]; };
    bin.env.latent = std::move(lm);
    return bin;
}

History expand_history(const BinarizedEnvironment& bin, const History& inner) {
    const int d = bin.bits_per_action;
    History h(inner.percepts.front());
    for (std::size_t i = 0; i < inner.actions.size(); ++i) {
        const int a = inner.actions[i];
        for (int j = d - 1; j >= 0; --j) {
            const int bit = (a >> j) & 1;
            const int percept = j == 0 ? inner.percepts[i + 1] : h.last_percept();
            h = h.extended(bit, percept);
        }
    }
    return h;
}

PipelineReport run_binarized_pipeline(const Environment& env, double gamma, double eps,
                                      int depth,
                                      const std::vector<DispersionKind>& b_kinds,
                                      std::uint64_t seed) {
    if (!(gamma > 0.0)) throw std::invalid_argument("binarized pipeline: gamma must be > 0");
    const BinarizedEnvironment bin = binarize(env, gamma);
    const int d = bin.bits_per_action;
    const double lambda = bin.lambda;

    PipelineReport report;
    report.env_name = env.name;
    report.gamma = gamma;
    report.eps = eps;
    report.depth = depth;
    report.bits_per_action = d;
    report.lambda = lambda;
    report.gap_bound = eps / (1.0 - gamma);

    const LatentOracle inner_oracle = solve_latent(env, gamma);
    const LatentOracle bin_oracle = solve_latent(bin.env, lambda);

    // Internal VADP target so the uplifted binarized policy meets the
    // lambda^(d-1)(1-lambda^d)^-1 eps optimality needed in the wrapper.
    const double eps_wrapper =
        std::pow(lambda, d - 1) * (1.0 - lambda) * (1.0 - lambda) * eps /
        ((1.0 - std::pow(lambda, d)) * (1.0 + 3.0 * lambda));
    const double eps_builder = eps_wrapper * (1.0 + 3.0 * lambda) / (1.0 - lambda);

    AbstractionParams params;
    params.eps = eps_builder;
    params.gamma = lambda;
    params.kind = AbstractionKind::kVadp;
    const Abstraction abstraction = build_vadp(bin_oracle, params);

    const int depth_bits = d * (depth - 1) + 1;
    const StateSpace space = realize_states(abstraction, bin.env, bin_oracle, depth_bits);
    report.realized_states = static_cast<long>(space.state_count());
    const BoundValue bound = bin_bound_full(eps, gamma, env.action_count);
    report.state_bound =
        bound.overflow ? -1 : static_cast<long long>(bound.value);

    double worst_gap = 0.0;
    int surrogate_actions = 0;
    for (std::size_t k = 0; k < b_kinds.size(); ++k) {
        const Dispersion b =
            make_dispersion(space, bin.env, b_kinds[k], seed + k);
        const SurrogateMdp mdp = build_surrogate(abstraction, bin.env, space, b);
        surrogate_actions = static_cast<int>(mdp.reward[0].size());
        const SurrogateSolution sol = solve_surrogate(mdp, lambda);
        const Policy bin_policy = uplift(mdp, sol, abstraction);

        // decode the d-bit choices of the binarized policy into macro-actions
        Policy inner_policy;
        inner_policy.act = [bin, bin_policy, d, A = env.action_count](const History& h) {
            History hb = expand_history(bin, h);
            int bits = 0;
            for (int j = 0; j < d; ++j) {
                const int bit = bin_policy.act(hb);
                bits = bits * 2 + bit;
                if (j < d - 1) hb = hb.extended(bit, hb.last_percept());
            }
            return bits % A;
        };
        const PolicyEvaluation eval =
            evaluate_policy(env, inner_policy, gamma, inner_oracle, depth);
        worst_gap = std::max(worst_gap, eval.sup_gap);
    }
    report.worst_sup_gap = worst_gap;
    report.surrogate_action_count = surrogate_actions;
    report.passed = surrogate_actions == 2 &&
                    worst_gap <= report.gap_bound + 1e-8 &&
                    (bound.overflow ||
                     report.realized_states <= static_cast<long>(bound.value));
    return report;
}

}  // namespace vadp
