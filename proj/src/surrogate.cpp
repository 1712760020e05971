#include "vadp/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace vadp {

namespace {

double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_index(std::mt19937_64& rng, const std::vector<double>& pmf) {
    double u = next_unit(rng);
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        u -= pmf[i];
        if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(pmf.size()) - 1;
}

}  // namespace

int StateSpace::index_of(const StateLabel& label) const {
    const auto it = std::lower_bound(states.begin(), states.end(), label);
    if (it == states.end() || !(*it == label)) return -1;
    return static_cast<int>(it - states.begin());
}

StateSpace realize_states(const Abstraction& abstraction, const Environment& env,
                          const LatentOracle& oracle, int depth) {
    std::map<StateLabel, std::vector<History>> groups;
    for (const History& h : enumerate_histories(env, depth))
        groups[abstraction.classify(h)].push_back(h);

    StateSpace space;
    space.depth = depth;
    for (auto& [label, members] : groups) {
        space.states.push_back(label);
        space.members.push_back(std::move(members));
    }
    space.member_q.resize(space.states.size());
    space.member_v.resize(space.states.size());
    for (std::size_t s = 0; s < space.states.size(); ++s) {
        for (const History& h : space.members[s]) {
            std::vector<double> qs(env.action_count);
            for (int a = 0; a < env.action_count; ++a) qs[a] = oracle.q(h, a);
            space.member_v[s].push_back(*std::max_element(qs.begin(), qs.end()));
            space.member_q[s].push_back(std::move(qs));
        }
    }
    return space;
}

std::string to_string(DispersionKind kind) {
    switch (kind) {
        case DispersionKind::kUniform: return "uniform";
        case DispersionKind::kDiracShortest: return "dirac_shortest";
        case DispersionKind::kRolloutFrequency: return "rollout_frequency";
        case DispersionKind::kRandomSimplex: return "random_simplex";
    }
    return "?";
}

DispersionKind dispersion_kind_from_string(const std::string& name) {
    if (name == "uniform") return DispersionKind::kUniform;
    if (name == "dirac_shortest") return DispersionKind::kDiracShortest;
    if (name == "rollout_frequency") return DispersionKind::kRolloutFrequency;
    if (name == "random_simplex") return DispersionKind::kRandomSimplex;
    throw std::invalid_argument("unknown dispersion kind '" + name + "'");
}

Dispersion make_dispersion(const StateSpace& space, const Environment& env,
                           DispersionKind kind, std::uint64_t seed, int rollout_count) {
    const int A = env.action_count;
    Dispersion b;
    b.weights.resize(space.state_count());
    for (std::size_t s = 0; s < space.state_count(); ++s) {
        const std::size_t n = space.members[s].size();
        if (n == 0) throw std::invalid_argument("make_dispersion: state with no members");
        b.weights[s].assign(A, std::vector<double>(n, 0.0));
    }

    switch (kind) {
        case DispersionKind::kUniform: {
            for (auto& per_action : b.weights)
                for (auto& w : per_action)
                    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
            break;
        }
        case DispersionKind::kDiracShortest: {
            for (std::size_t s = 0; s < space.state_count(); ++s) {
                std::size_t pick = 0;
                for (std::size_t i = 1; i < space.members[s].size(); ++i)
                    if (space.members[s][i].length() < space.members[s][pick].length())
                        pick = i;
                for (int a = 0; a < A; ++a) b.weights[s][a][pick] = 1.0;
            }
            break;
        }
        case DispersionKind::kRolloutFrequency: {
            std::mt19937_64 rng(seed * 0x2545F4914F6CDD1DULL + 1);
            std::map<History, long> visits;
            for (int ep = 0; ep < rollout_count; ++ep) {
                History h(sample_index(rng, env.initial_dist));
                ++visits[h];
                for (int t = 1; t < space.depth; ++t) {
                    const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(A));
                    const int e = sample_index(rng, env.kernel(h, a));
                    h = h.extended(a, e);
                    ++visits[h];
                }
            }
            for (std::size_t s = 0; s < space.state_count(); ++s) {
                std::vector<double> counts(space.members[s].size(), 0.0);
                double total = 0.0;
                for (std::size_t i = 0; i < space.members[s].size(); ++i) {
                    const auto it = visits.find(space.members[s][i]);
                    if (it != visits.end()) total += (counts[i] = static_cast<double>(it->second));
                }
                if (total == 0.0)  // unvisited state: fall back to uniform
                    counts.assign(counts.size(), 1.0), total = static_cast<double>(counts.size());
                for (double& c : counts) c /= total;
                for (int a = 0; a < A; ++a) b.weights[s][a] = counts;
            }
            break;
        }
        case DispersionKind::kRandomSimplex: {
            std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 7);
            for (std::size_t s = 0; s < space.state_count(); ++s)
                for (int a = 0; a < A; ++a) {
                    auto& w = b.weights[s][a];
                    double total = 0.0;
                    for (double& x : w) total += (x = -std::log(1.0 - next_unit(rng)));
                    for (double& x : w) x /= total;
                }
            break;
        }
    }
    return b;
}

Dispersion make_dirac(const StateSpace& space, int action_count,
                      const std::vector<std::vector<int>>& pick) {
    Dispersion b;
    b.weights.resize(space.state_count());
    for (std::size_t s = 0; s < space.state_count(); ++s) {
        b.weights[s].assign(action_count,
                            std::vector<double>(space.members[s].size(), 0.0));
        for (int a = 0; a < action_count; ++a) b.weights[s][a][pick[s][a]] = 1.0;
    }
    return b;
}

SurrogateMdp build_surrogate(const Abstraction& abstraction, const Environment& env,
                             const StateSpace& space, const Dispersion& b) {
    const int A = env.action_count;
    SurrogateMdp mdp;
    mdp.states = space.states;
    std::map<StateLabel, int> index;
    for (std::size_t s = 0; s < space.state_count(); ++s)
        index[space.states[s]] = static_cast<int>(s);

    const std::size_t base_count = space.state_count();
    std::vector<std::vector<std::map<int, double>>> rows(
        base_count, std::vector<std::map<int, double>>(A));
    mdp.reward.assign(base_count, std::vector<double>(A, 0.0));

    for (std::size_t s = 0; s < base_count; ++s) {
        for (int a = 0; a < A; ++a) {
            // fixed summation order: canonical member order, then percepts
            for (std::size_t i = 0; i < space.members[s].size(); ++i) {
                const double w = b.weights[s][a][i];
                if (w == 0.0) continue;
                const History& h = space.members[s][i];
                mdp.reward[s][a] += w * env.reward(h, a);
                const std::vector<double> dist = env.kernel(h, a);
                for (int e = 0; e < env.percept_count; ++e) {
                    if (dist[e] <= 0.0) continue;
                    const StateLabel succ = abstraction.classify(h.extended(a, e));
                    auto it = index.find(succ);
                    if (it == index.end()) {
                        // successor label unseen at this depth; absorbing stub
                        it = index.emplace(succ, static_cast<int>(mdp.states.size())).first;
                        mdp.states.push_back(succ);
                        ++mdp.boundary_states;
                    }
                    rows[s][a][it->second] += w * dist[e];
                }
            }
        }
    }
    const std::size_t total = mdp.states.size();
    mdp.transition.assign(total, std::vector<std::vector<double>>(
                                     A, std::vector<double>(total, 0.0)));
    for (std::size_t s = 0; s < base_count; ++s)
        for (int a = 0; a < A; ++a)
            for (const auto& [succ, p] : rows[s][a]) mdp.transition[s][a][succ] = p;
    for (std::size_t s = base_count; s < total; ++s) {
        mdp.reward.emplace_back(A, 0.0);
        for (int a = 0; a < A; ++a) mdp.transition[s][a][s] = 1.0;  // absorbing
    }
    return mdp;
}

SurrogatePrecomp::SurrogatePrecomp(const Abstraction& abstraction,
                                   const Environment& env, const StateSpace& space)
    : space_(space), action_count_(env.action_count), all_states_(space.states) {
    std::map<StateLabel, int> index;
    for (std::size_t s = 0; s < all_states_.size(); ++s) index[all_states_[s]] = static_cast<int>(s);

    const std::size_t base = space.state_count();
    member_reward_.resize(base);
    member_succ_.resize(base);
    for (std::size_t s = 0; s < base; ++s) {
        const std::size_t n = space.members[s].size();
        member_reward_[s].assign(n, std::vector<double>(action_count_, 0.0));
        member_succ_[s].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const History& h = space.members[s][i];
            member_succ_[s][i].resize(action_count_);
            for (int a = 0; a < action_count_; ++a) {
                member_reward_[s][i][a] = env.reward(h, a);
                const std::vector<double> dist = env.kernel(h, a);
                for (int e = 0; e < env.percept_count; ++e) {
                    if (dist[e] <= 0.0) continue;
                    const StateLabel succ = abstraction.classify(h.extended(a, e));
                    auto it = index.find(succ);
                    if (it == index.end()) {
                        it = index.emplace(succ, static_cast<int>(all_states_.size())).first;
                        all_states_.push_back(succ);
                        ++boundary_states_;
                    }
                    member_succ_[s][i][a].emplace_back(it->second, dist[e]);
                }
            }
        }
    }
}

SurrogateMdp SurrogatePrecomp::build(const Dispersion& b) const {
    SurrogateMdp mdp;
    mdp.states = all_states_;
    mdp.boundary_states = boundary_states_;
    const std::size_t base = space_.state_count();
    const std::size_t total = all_states_.size();
    mdp.transition.assign(total, std::vector<std::vector<double>>(
                                     action_count_, std::vector<double>(total, 0.0)));
    mdp.reward.assign(total, std::vector<double>(action_count_, 0.0));
    for (std::size_t s = 0; s < base; ++s)
        for (int a = 0; a < action_count_; ++a)
            for (std::size_t i = 0; i < space_.members[s].size(); ++i) {
                const double w = b.weights[s][a][i];
                if (w == 0.0) continue;
                mdp.reward[s][a] += w * member_reward_[s][i][a];
                for (const auto& [succ, p] : member_succ_[s][i][a])
                    mdp.transition[s][a][succ] += w * p;
            }
    for (std::size_t s = base; s < total; ++s)
        for (int a = 0; a < action_count_; ++a) mdp.transition[s][a][s] = 1.0;
    return mdp;
}

std::vector<std::vector<double>> b_averaged_q(const StateSpace& space,
                                              const Dispersion& b) {
    std::vector<std::vector<double>> qbar(space.state_count());
    for (std::size_t s = 0; s < space.state_count(); ++s) {
        const int A = static_cast<int>(b.weights[s].size());
        qbar[s].assign(A, 0.0);
        for (int a = 0; a < A; ++a)
            for (std::size_t i = 0; i < space.members[s].size(); ++i)
                qbar[s][a] += b.weights[s][a][i] * space.member_q[s][i][a];
    }
    return qbar;
}

SurrogateSolution solve_surrogate(const SurrogateMdp& mdp, double gamma, double tie_tol) {
    const std::size_t S = mdp.states.size();
    if (S == 0) throw std::invalid_argument("solve_surrogate: empty state set");
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("solve_surrogate: gamma must be in [0,1)");
    const int A = static_cast<int>(mdp.reward[0].size());

    SurrogateSolution sol;
    sol.tie_tol = tie_tol;
    sol.v.assign(S, 0.0);
    sol.q.assign(S, std::vector<double>(A, 0.0));
    double residual;
    do {
        residual = 0.0;
        for (std::size_t s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
                double acc = mdp.reward[s][a];
                for (std::size_t t = 0; t < S; ++t)
                    if (mdp.transition[s][a][t] > 0.0)
                        acc += gamma * mdp.transition[s][a][t] * sol.v[t];
                sol.q[s][a] = acc;
            }
        for (std::size_t s = 0; s < S; ++s) {
            const double next = *std::max_element(sol.q[s].begin(), sol.q[s].end());
            residual = std::max(residual, std::abs(next - sol.v[s]));
            sol.v[s] = next;
        }
    } while (residual > 1e-12);

    sol.optimal_actions.assign(S, 0);
    for (std::size_t s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            if (sol.v[s] - sol.q[s][a] <= tie_tol)
                sol.optimal_actions[s] |= (ActionSet{1} << a);
    return sol;
}

Policy uplift(const SurrogateMdp& mdp, const SurrogateSolution& solution,
              const Abstraction& abstraction, std::shared_ptr<long> fallback_count) {
    std::map<StateLabel, int> index;
    for (std::size_t s = 0; s < mdp.states.size(); ++s)
        index[mdp.states[s]] = static_cast<int>(s);
    auto classify = abstraction.classify;
    auto optimal = solution.optimal_actions;
    Policy policy;
    policy.act = [index = std::move(index), classify = std::move(classify),
                  optimal = std::move(optimal), fallback_count](const History& h) {
        const auto it = index.find(classify(h));
        if (it == index.end()) {
            if (fallback_count) ++*fallback_count;
            return 0;  // documented fallback for unseen labels
        }
        const ActionSet set = optimal[it->second];
        for (int a = 0; a < 32; ++a)
            if (set & (ActionSet{1} << a)) return a;
        return 0;
    };
    return policy;
}

PolicyEvaluation evaluate_policy(const Environment& env, const Policy& policy,
                                 double gamma, const LatentOracle& oracle, int depth) {
    if (!env.latent)
        throw std::invalid_argument("evaluate_policy: environment has no latent model");
    const LatentModel& lm = *env.latent;

    // BFS closure over (latent, last percept) with representative histories.
    std::map<std::pair<int, int>, History> reps;
    std::vector<std::pair<int, int>> frontier;
    for (int e = 0; e < env.percept_count; ++e)
        if (env.initial_dist[e] > 0.0) {
            const auto key = std::make_pair(lm.init_map[e], e);
            if (reps.emplace(key, History(e)).second) frontier.push_back(key);
        }
    while (!frontier.empty()) {
        std::vector<std::pair<int, int>> next;
        for (const auto& [z, e] : frontier) {
            const History& rep = reps.at({z, e});
            for (int a = 0; a < env.action_count; ++a)
                for (int e2 = 0; e2 < env.percept_count; ++e2)
                    if (lm.kernel[z][a][e2] > 0.0) {
                        const auto key = std::make_pair(lm.update[z][a][e2], e2);
                        if (reps.emplace(key, rep.extended(a, e2)).second)
                            next.push_back(key);
                    }
        }
        frontier = std::move(next);
    }

    std::map<std::pair<int, int>, int> action;
    for (const auto& [key, rep] : reps) action[key] = policy.act(rep);

    // Measurability check on the enumerated histories.
    for (const History& h : enumerate_histories(env, depth)) {
        const auto key = std::make_pair(lm.fold(h), h.last_percept());
        if (policy.act(h) != action.at(key))
            throw std::invalid_argument(
                "evaluate_policy: policy is not (latent, percept)-measurable");
    }

    // Linear fixed-point iteration for V^pi on the closure.
    std::map<std::pair<int, int>, double> v;
    for (const auto& [key, rep] : reps) v[key] = 0.0;
    double residual;
    do {
        residual = 0.0;
        for (auto& [key, value] : v) {
            const auto [z, e] = key;
            const int a = action.at(key);
            double acc = lm.reward[z][a];
            for (int e2 = 0; e2 < env.percept_count; ++e2)
                if (lm.kernel[z][a][e2] > 0.0)
                    acc += gamma * lm.kernel[z][a][e2] * v.at({lm.update[z][a][e2], e2});
            residual = std::max(residual, std::abs(acc - value));
            value = acc;
        }
    } while (residual > 1e-12);

    PolicyEvaluation eval;
    eval.v_pi = v;
    for (const auto& [key, value] : v) {
        const double gap = oracle.v_latent(key.first) - value;
        eval.sup_gap = std::max(eval.sup_gap, gap);
    }
    return eval;
}

}  // namespace vadp
