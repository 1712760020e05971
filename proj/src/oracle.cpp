#include "vadp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vadp {

double ValueOracle::v(const History& h) const {
    double best = q(h, 0);
    for (int a = 1; a < action_count_; ++a) best = std::max(best, q(h, a));
    return best;
}

int ValueOracle::opt_action(const History& h) const {
    int best = 0;
    double best_q = q(h, 0);
    for (int a = 1; a < action_count_; ++a) {
        const double qa = q(h, a);
        if (qa > best_q) {
            best_q = qa;
            best = a;
        }
    }
    return best;
}

ActionSet ValueOracle::near_optimal_set(const History& h, double eps_prime) const {
    if (eps_prime < 0.0) throw std::invalid_argument("near_optimal_set: eps_prime must be >= 0");
    const double value = v(h);
    ActionSet set = 0;
    for (int a = 0; a < action_count_; ++a)
        if (value - q(h, a) <= eps_prime) set |= (ActionSet{1} << a);
    return set;
}

LatentOracle::LatentOracle(const Environment& env, double gamma)
    : ValueOracle(env.action_count),
      env_(std::make_shared<Environment>(env)),
      gamma_(gamma) {
    if (!env.latent) throw std::invalid_argument("solve_latent: environment has no latent model");
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("solve_latent: gamma must be in [0,1)");

    const LatentModel& lm = *env_->latent;
    const int Z = lm.state_count;
    const int A = env.action_count;
    const int E = env.percept_count;

    std::vector<double> value(Z, 0.0);
    q_.assign(Z, std::vector<double>(A, 0.0));
    double residual;
    do {
        residual = 0.0;
        for (int z = 0; z < Z; ++z) {
            for (int a = 0; a < A; ++a) {
                double acc = lm.reward[z][a];
                for (int e = 0; e < E; ++e)
                    if (lm.kernel[z][a][e] > 0.0)
                        acc += gamma_ * lm.kernel[z][a][e] * value[lm.update[z][a][e]];
                q_[z][a] = acc;
            }
        }
        for (int z = 0; z < Z; ++z) {
            const double next = *std::max_element(q_[z].begin(), q_[z].end());
            residual = std::max(residual, std::abs(next - value[z]));
            value[z] = next;
        }
    } while (residual > 1e-12);
}

double LatentOracle::q(const History& h, int action) const {
    if (action < 0 || action >= action_count_)
        throw std::invalid_argument("LatentOracle::q: action index out of range");
    return q_[fold(h)][action];
}

double LatentOracle::v_latent(int z) const {
    return *std::max_element(q_[z].begin(), q_[z].end());
}

int LatentOracle::opt_action_latent(int z) const {
    return static_cast<int>(std::max_element(q_[z].begin(), q_[z].end()) - q_[z].begin());
}

TreeOracle::TreeOracle(const Environment& env, double gamma, int horizon, std::size_t cap)
    : ValueOracle(env.action_count),
      env_(std::make_shared<Environment>(env)),
      gamma_(gamma),
      horizon_(horizon),
      cap_(cap) {
    if (horizon < 1) throw std::invalid_argument("solve_tree: horizon must be >= 1");
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("solve_tree: gamma must be in [0,1)");
}

double TreeOracle::value(const History& h, int steps_left) const {
    if (steps_left == 0) return 0.0;
    if (env_->latent) {
        const auto key = std::make_pair(env_->latent->fold(h), steps_left);
        if (auto it = latent_memo_.find(key); it != latent_memo_.end()) return it->second;
    } else {
        const auto key = std::make_pair(h, steps_left);
        if (auto it = history_memo_.find(key); it != history_memo_.end()) return it->second;
        if (history_memo_.size() >= cap_)
            throw ResourceLimitError("solve_tree: history memo cap exceeded");
    }
    double best = -1.0;
    for (int a = 0; a < action_count_; ++a) {
        double acc = env_->reward(h, a);
        if (gamma_ > 0.0) {
            const std::vector<double> dist = env_->kernel(h, a);
            for (int e = 0; e < env_->percept_count; ++e)
                if (dist[e] > 0.0)
                    acc += gamma_ * dist[e] * value(h.extended(a, e), steps_left - 1);
        }
        best = std::max(best, acc);
    }
    if (env_->latent)
        latent_memo_[{env_->latent->fold(h), steps_left}] = best;
    else
        history_memo_[{h, steps_left}] = best;
    return best;
}

double TreeOracle::q(const History& h, int action) const {
    if (action < 0 || action >= action_count_)
        throw std::invalid_argument("TreeOracle::q: action index out of range");
    double acc = env_->reward(h, action);
    if (gamma_ > 0.0) {
        const std::vector<double> dist = env_->kernel(h, action);
        for (int e = 0; e < env_->percept_count; ++e)
            if (dist[e] > 0.0)
                acc += gamma_ * dist[e] * value(h.extended(action, e), horizon_ - 1);
    }
    return acc;
}

LatentOracle solve_latent(const Environment& env, double gamma) {
    return LatentOracle(env, gamma);
}

TreeOracle solve_tree(const Environment& env, double gamma, int horizon) {
    return TreeOracle(env, gamma, horizon);
}

}  // namespace vadp
