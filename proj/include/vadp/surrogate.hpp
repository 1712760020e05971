#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vadp/abstraction.hpp"

namespace vadp {

// Realized states of an abstraction at a given enumeration depth, together
// with the enumerated member histories of each state and their cached
// oracle values.
struct StateSpace {
    std::vector<StateLabel> states;                 // canonically ordered
    std::vector<std::vector<History>> members;      // [s] -> canonical order
    std::vector<std::vector<std::vector<double>>> member_q;  // [s][i][a]
    std::vector<std::vector<double>> member_v;      // [s][i]
    int depth = 0;

    int index_of(const StateLabel& label) const;    // -1 if absent
    std::size_t state_count() const { return states.size(); }
};

StateSpace realize_states(const Abstraction& abstraction, const Environment& env,
                          const LatentOracle& oracle, int depth);

enum class DispersionKind { kUniform, kDiracShortest, kRolloutFrequency, kRandomSimplex };

std::string to_string(DispersionKind kind);
DispersionKind dispersion_kind_from_string(const std::string& name);

// Per (state, action) pmf over that state's member histories; the w-weighted
// mixed-length B of the surrogate construction. Weights align with
// StateSpace::members.
struct Dispersion {
    std::vector<std::vector<std::vector<double>>> weights;  // [s][a][i]
};

Dispersion make_dispersion(const StateSpace& space, const Environment& env,
                           DispersionKind kind, std::uint64_t seed = 0,
                           int rollout_count = 2000);

// Dirac product: all mass of (s,a) on member pick[s][a].
Dispersion make_dirac(const StateSpace& space, int action_count,
                      const std::vector<std::vector<int>>& pick);

// The stationary MDP the agent pretends the abstraction is.
struct SurrogateMdp {
    std::vector<StateLabel> states;
    std::vector<std::vector<std::vector<double>>> transition;  // [s][a][s']
    std::vector<std::vector<double>> reward;                   // [s][a]
    // Successor labels unseen at the build depth are appended as absorbing
    // zero-reward states; counts how often that happened (0 for adequate
    // depth on latent-model instances).
    int boundary_states = 0;
};

SurrogateMdp build_surrogate(const Abstraction& abstraction, const Environment& env,
                             const StateSpace& space, const Dispersion& b);

// Caches per-member rewards and classified successor rows so that surrogates
// for many dispersions over the same state space are cheap weighted sums.
class SurrogatePrecomp {
  public:
    SurrogatePrecomp(const Abstraction& abstraction, const Environment& env,
                     const StateSpace& space);

    SurrogateMdp build(const Dispersion& b) const;

  private:
    const StateSpace& space_;
    int action_count_;
    std::vector<StateLabel> all_states_;  // realized states + boundary stubs
    int boundary_states_ = 0;
    std::vector<std::vector<std::vector<double>>> member_reward_;  // [s][i][a]
    // [s][i][a] -> sparse successor row over all_states_ indices
    std::vector<std::vector<std::vector<std::vector<std::pair<int, double>>>>> member_succ_;
};

// B-averaged optimal history-action values per (s,a).
std::vector<std::vector<double>> b_averaged_q(const StateSpace& space,
                                              const Dispersion& b);

struct SurrogateSolution {
    std::vector<double> v;                     // [s]
    std::vector<std::vector<double>> q;        // [s][a]
    std::vector<ActionSet> optimal_actions;    // within tie_tol of v(s)
    double tie_tol = 1e-9;
};

SurrogateSolution solve_surrogate(const SurrogateMdp& mdp, double gamma,
                                  double tie_tol = 1e-9);

// Uplift pi(h) = lowest-index optimal surrogate action of psi(h). Labels
// absent from the surrogate fall back to action 0 and bump *fallback_count.
Policy uplift(const SurrogateMdp& mdp, const SurrogateSolution& solution,
              const Abstraction& abstraction,
              std::shared_ptr<long> fallback_count = nullptr);

struct PolicyEvaluation {
    // Exact V^pi on the (latent, last percept) closure.
    std::map<std::pair<int, int>, double> v_pi;
    double sup_gap = 0.0;  // max over enumerated histories of V* - V^pi
};

// Exact evaluation of a (latent, last-percept)-measurable policy by linear
// fixed-point iteration; sup_gap is taken over histories up to `depth`.
// Throws std::invalid_argument if the policy is not measurable w.r.t.
// (latent, last percept) on the enumerated histories.
PolicyEvaluation evaluate_policy(const Environment& env, const Policy& policy,
                                 double gamma, const LatentOracle& oracle,
                                 int depth);

}  // namespace vadp
