#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "vadp/environment.hpp"

namespace vadp {

// Bitmask over actions; bit a set means action a is a member.
using ActionSet = std::uint32_t;

// Exact optimal value functions of an environment. Immutable after solve.
class ValueOracle {
  public:
    virtual ~ValueOracle() = default;

    virtual double q(const History& h, int action) const = 0;
    virtual double gamma() const = 0;

    double v(const History& h) const;
    // Lowest action index among the argmax set.
    int opt_action(const History& h) const;
    // Exactly {a : v(h) - q(h,a) <= eps_prime}, no tolerance.
    ActionSet near_optimal_set(const History& h, double eps_prime) const;

  protected:
    explicit ValueOracle(int action_count) : action_count_(action_count) {}
    int action_count_;
};

// Infinite-horizon oracle via value iteration on the latent state space.
class LatentOracle : public ValueOracle {
  public:
    LatentOracle(const Environment& env, double gamma);

    double q(const History& h, int action) const override;
    double gamma() const override { return gamma_; }

    double q_latent(int z, int action) const { return q_[z][action]; }
    double v_latent(int z) const;
    int opt_action_latent(int z) const;
    int fold(const History& h) const { return env_->latent->fold(h); }

    const Environment& env() const { return *env_; }

  private:
    std::shared_ptr<const Environment> env_;
    double gamma_;
    std::vector<std::vector<double>> q_;  // [z][a]
};

// Finite-horizon truncation: backward induction with zero terminal value,
// so |q_H - q*| <= gamma^H/(1-gamma) pointwise. Values are memoized on the
// latent fold when a latent model is present, and on histories otherwise
// (subject to the cap).
class TreeOracle : public ValueOracle {
  public:
    TreeOracle(const Environment& env, double gamma, int horizon,
               std::size_t cap = 1'000'000);

    double q(const History& h, int action) const override;
    double gamma() const override { return gamma_; }
    int horizon() const { return horizon_; }

  private:
    double value(const History& h, int steps_left) const;

    std::shared_ptr<const Environment> env_;
    double gamma_;
    int horizon_;
    std::size_t cap_;
    // memo key: (latent fold, steps_left) when latent is present
    mutable std::map<std::pair<int, int>, double> latent_memo_;
    mutable std::map<std::pair<History, int>, double> history_memo_;
};

LatentOracle solve_latent(const Environment& env, double gamma);
TreeOracle solve_tree(const Environment& env, double gamma, int horizon);

}  // namespace vadp
