#include "vadp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace vadp {

namespace {

struct BOutcome {
    double delta = 0.0;        // max |q* - Qbar|
    double lemma2_dev = 0.0;   // max |max_a Qbar - V*(member)|
    bool lemma4_ok = true;
    std::string lemma4_witness;
    double sup_gap = 0.0;
};

struct Pipeline {
    const Environment& env;
    double gamma;
    double eps;
    LatentOracle oracle;
    Abstraction abstraction;
    StateSpace space;
    SurrogatePrecomp precomp;

    static Abstraction make_abstraction(const Environment& e, const LatentOracle& oracle,
                                        double g, double ep, AbstractionKind kind) {
        switch (kind) {
            case AbstractionKind::kVadp: return build_vadp(oracle, {ep, g, kind});
            case AbstractionKind::kVdp: return build_vdp(oracle, {ep, g, kind});
            case AbstractionKind::kEsaQGrid: return build_esa_qgrid(oracle, {ep, g, kind});
            case AbstractionKind::kMdpLastPercept: return build_mdp_abstraction(e);
        }
        throw std::invalid_argument("unknown abstraction kind");
    }

    Pipeline(const Environment& e, double g, double ep, AbstractionKind kind, int depth)
        : env(e), gamma(g), eps(ep), oracle(solve_latent(e, g)),
          abstraction(make_abstraction(e, oracle, g, ep, kind)),
          space(realize_states(abstraction, e, oracle, depth)),
          precomp(abstraction, e, space) {}

    BOutcome evaluate(const Dispersion& b) const {
        BOutcome out;
        const SurrogateMdp mdp = precomp.build(b);
        const SurrogateSolution sol = solve_surrogate(mdp, gamma);
        const auto qbar = b_averaged_q(space, b);

        for (std::size_t s = 0; s < space.state_count(); ++s) {
            const double max_qbar = *std::max_element(qbar[s].begin(), qbar[s].end());
            for (double member_value : space.member_v[s])
                out.lemma2_dev = std::max(out.lemma2_dev, std::abs(max_qbar - member_value));
            for (std::size_t a = 0; a < qbar[s].size(); ++a)
                out.delta = std::max(out.delta, std::abs(sol.q[s][a] - qbar[s][a]));
            if (space.states[s].kind == AbstractionKind::kVadp) {
                const ActionSet extra =
                    sol.optimal_actions[s] & ~space.states[s].near_opt;
                if (extra != 0 && out.lemma4_ok) {
                    out.lemma4_ok = false;
                    out.lemma4_witness = space.states[s].to_string();
                }
            }
        }
        const Policy policy = uplift(mdp, sol, abstraction);
        out.sup_gap =
            evaluate_policy(env, policy, gamma, oracle, space.depth).sup_gap;
        return out;
    }
};

double product_of_supports(const StateSpace& space, int action_count,
                           double cap) {
    double product = 1.0;
    for (const auto& members : space.members)
        for (int a = 0; a < action_count; ++a) {
            product *= static_cast<double>(members.size());
            if (product > cap) return product;
        }
    return product;
}

std::string describe(const Environment& env, double gamma, double eps,
                     const std::string& b_desc) {
    std::ostringstream out;
    out << env.name << " gamma=" << gamma << " eps=" << eps << " B=" << b_desc;
    return out.str();
}

}  // namespace

std::vector<CheckReport> certify(const Environment& env, double gamma, double eps,
                                 const CertifyOptions& options) {
    if (options.kind != AbstractionKind::kVadp && options.kind != AbstractionKind::kVdp)
        throw std::invalid_argument("certify: only vadp and vdp abstractions supported");
    Pipeline pipe(env, gamma, eps, options.kind, options.depth);
    const double eps0 = pipe.abstraction.params.eps0();
    const int A = env.action_count;

    // Assemble the tested dispersion set.
    std::vector<std::pair<std::string, Dispersion>> b_set;
    b_set.emplace_back("uniform",
                       make_dispersion(pipe.space, env, DispersionKind::kUniform));
    if (options.include_rollout)
        b_set.emplace_back("rollout", make_dispersion(pipe.space, env,
                                                      DispersionKind::kRolloutFrequency,
                                                      options.seed));
    for (int i = 0; i < options.simplex_seeds; ++i)
        b_set.emplace_back("simplex#" + std::to_string(i),
                           make_dispersion(pipe.space, env, DispersionKind::kRandomSimplex,
                                           options.seed + i));

    const double product = product_of_supports(
        pipe.space, A, static_cast<double>(options.dirac_exhaustive_cap));
    if (product <= static_cast<double>(options.dirac_exhaustive_cap)) {
        // exhaustive enumeration of the Dirac extreme points
        std::vector<std::vector<int>> pick(pipe.space.state_count(),
                                           std::vector<int>(A, 0));
        bool done = false;
        long counter = 0;
        while (!done) {
            b_set.emplace_back("dirac#" + std::to_string(counter++),
                               make_dirac(pipe.space, A, pick));
            done = true;
            for (std::size_t s = 0; s < pick.size() && done; ++s)
                for (int a = 0; a < A && done; ++a) {
                    if (++pick[s][a] < static_cast<int>(pipe.space.members[s].size())) {
                        done = false;
                        break;
                    }
                    pick[s][a] = 0;
                }
            if (done) break;
        }
    } else {
        std::mt19937_64 rng(options.seed * 0x6C62272E07BB0142ULL + 3);
        for (int k = 0; k < options.dirac_samples; ++k) {
            std::vector<std::vector<int>> pick(pipe.space.state_count(),
                                               std::vector<int>(A, 0));
            for (std::size_t s = 0; s < pick.size(); ++s)
                for (int a = 0; a < A; ++a)
                    pick[s][a] = static_cast<int>(
                        rng() % pipe.space.members[s].size());
            b_set.emplace_back("dirac_sample#" + std::to_string(k),
                               make_dirac(pipe.space, A, pick));
        }
    }

    // Lemma 1 is B-independent: max-min equality on every realized state.
    double lemma1_dev = 0.0;
    std::string lemma1_witness;
    for (std::size_t s = 0; s < pipe.space.state_count(); ++s) {
        double minmax = 1e300;
        std::vector<double> min_q(A, 1e300);
        for (std::size_t i = 0; i < pipe.space.members[s].size(); ++i) {
            minmax = std::min(minmax, pipe.space.member_v[s][i]);
            for (int a = 0; a < A; ++a)
                min_q[a] = std::min(min_q[a], pipe.space.member_q[s][i][a]);
        }
        const double maxmin = *std::max_element(min_q.begin(), min_q.end());
        if (std::abs(maxmin - minmax) > lemma1_dev) {
            lemma1_dev = std::abs(maxmin - minmax);
            lemma1_witness = pipe.space.states[s].to_string();
        }
    }

    // Sweep the dispersion set.
    double worst_delta = 0.0, worst_lemma2 = 0.0, worst_gap = 0.0;
    std::string delta_witness, lemma2_witness, gap_witness, lemma4_witness;
    bool lemma4_ok = true;
    for (const auto& [desc, b] : b_set) {
        const BOutcome out = pipe.evaluate(b);
        if (out.delta > worst_delta) { worst_delta = out.delta; delta_witness = desc; }
        if (out.lemma2_dev > worst_lemma2) { worst_lemma2 = out.lemma2_dev; lemma2_witness = desc; }
        if (out.sup_gap > worst_gap) { worst_gap = out.sup_gap; gap_witness = desc; }
        if (!out.lemma4_ok && lemma4_ok) {
            lemma4_ok = false;
            lemma4_witness = desc + " state " + out.lemma4_witness;
        }
    }

    // Adversarial coordinate ascent refines the worst case when budgeted.
    if (options.adversarial_budget > 0) {
        for (const auto objective :
             {AdversarialObjective::kDelta, AdversarialObjective::kUpliftGap,
              AdversarialObjective::kLemma2Deviation}) {
            const AdversarialResult res =
                adversarial_b_search(env, gamma, eps, options.depth, objective,
                                     options.adversarial_budget, options.seed,
                                     options.kind);
            const BOutcome out = pipe.evaluate(res.b);
            if (out.delta > worst_delta) { worst_delta = out.delta; delta_witness = "adversarial"; }
            if (out.lemma2_dev > worst_lemma2) { worst_lemma2 = out.lemma2_dev; lemma2_witness = "adversarial"; }
            if (out.sup_gap > worst_gap) { worst_gap = out.sup_gap; gap_witness = "adversarial"; }
            if (!out.lemma4_ok && lemma4_ok) {
                lemma4_ok = false;
                lemma4_witness = "adversarial state " + out.lemma4_witness;
            }
        }
    }

    const std::string prefix =
        options.kind == AbstractionKind::kVdp ? "vdp_" : "";
    const double slack = options.slack;
    std::vector<CheckReport> reports;
    auto emit = [&reports, &env, gamma, eps, slack](const std::string& name,
                                                    double margin,
                                                    const std::string& b_desc) {
        CheckReport r;
        r.check_name = name;
        r.instances = 1;
        r.worst_margin = margin;
        r.witness = describe(env, gamma, eps, b_desc);
        r.passed = margin >= -slack;
        reports.push_back(r);
    };

    emit(prefix + "lemma1_maxmin", 1e-9 - lemma1_dev - slack, lemma1_witness);
    emit(prefix + "lemma2_max_relationship", eps0 - worst_lemma2, lemma2_witness);
    emit(prefix + "lemma3_q_qbar",
         2.0 * gamma * eps0 / (1.0 - gamma) - worst_delta, delta_witness);
    if (options.kind == AbstractionKind::kVadp)
        emit(prefix + "lemma4_support", lemma4_ok ? 0.0 : -1.0, lemma4_witness);
    emit(prefix + "theorem3_uplift_gap", eps / (1.0 - gamma) - worst_gap, gap_witness);

    const BoundValue bound = vadp_bound(eps, gamma, A);
    const double bound_margin =
        bound.overflow ? 1e18
                       : static_cast<double>(bound.value) -
                             static_cast<double>(pipe.space.state_count());
    emit(prefix + "theorem4_state_bound", bound_margin,
         "states=" + std::to_string(pipe.space.state_count()));
    return reports;
}

RunOutcome run_pipeline(const Environment& env, double gamma, double eps, int depth,
                        AbstractionKind kind, DispersionKind b_kind,
                        std::uint64_t seed) {
    Pipeline pipe(env, gamma, eps, kind, depth);
    const Dispersion b = make_dispersion(pipe.space, env, b_kind, seed);
    const BOutcome out = pipe.evaluate(b);

    RunOutcome run;
    run.realized_states = static_cast<long>(pipe.space.state_count());
    switch (kind) {
        case AbstractionKind::kEsaQGrid:
            run.state_bound = esa_bound(eps, gamma, env.action_count);
            break;
        case AbstractionKind::kMdpLastPercept:
            run.state_bound = {false, static_cast<unsigned long long>(env.percept_count)};
            break;
        default:
            run.state_bound = vadp_bound(eps, gamma, env.action_count);
    }
    run.eps0 = pipe.abstraction.params.eps0();
    run.lemma2_dev = out.lemma2_dev;
    run.delta = out.delta;
    run.lemma4_ok = out.lemma4_ok;
    run.sup_gap = out.sup_gap;

    const int A = env.action_count;
    for (std::size_t s = 0; s < pipe.space.state_count(); ++s) {
        double minmax = 1e300;
        std::vector<double> min_q(A, 1e300);
        double lo = 1e300, hi = -1e300;
        for (std::size_t i = 0; i < pipe.space.members[s].size(); ++i) {
            const double value = pipe.space.member_v[s][i];
            minmax = std::min(minmax, value);
            lo = std::min(lo, value);
            hi = std::max(hi, value);
            for (int a = 0; a < A; ++a)
                min_q[a] = std::min(min_q[a], pipe.space.member_q[s][i][a]);
        }
        run.lemma1_dev = std::max(
            run.lemma1_dev,
            std::abs(*std::max_element(min_q.begin(), min_q.end()) - minmax));
        run.states.push_back(pipe.space.states[s]);
        run.member_counts.push_back(static_cast<long>(pipe.space.members[s].size()));
        run.v_min.push_back(lo);
        run.v_max.push_back(hi);
    }
    return run;
}

AdversarialResult adversarial_b_search(const Environment& env, double gamma,
                                       double eps, int depth,
                                       AdversarialObjective objective, int budget,
                                       std::uint64_t seed, AbstractionKind kind) {
    Pipeline pipe(env, gamma, eps, kind, depth);
    const int A = env.action_count;

    auto score = [&pipe, objective, A](const std::vector<std::vector<int>>& pick) {
        const BOutcome out = pipe.evaluate(make_dirac(pipe.space, A, pick));
        switch (objective) {
            case AdversarialObjective::kDelta: return out.delta;
            case AdversarialObjective::kUpliftGap: return out.sup_gap;
            case AdversarialObjective::kLemma2Deviation: return out.lemma2_dev;
        }
        return 0.0;
    };

    if (budget <= 0) {
        const Dispersion uniform =
            make_dispersion(pipe.space, env, DispersionKind::kUniform);
        const BOutcome out = pipe.evaluate(uniform);
        double value = objective == AdversarialObjective::kDelta ? out.delta
                       : objective == AdversarialObjective::kUpliftGap
                           ? out.sup_gap
                           : out.lemma2_dev;
        return {uniform, value};
    }

    std::mt19937_64 rng(seed * 0xA24BAED4963EE407ULL + 11);
    std::vector<std::vector<int>> best_pick;
    double best_value = -1.0;
    int evals = 0;
    while (evals < budget) {
        // seeded random restart
        std::vector<std::vector<int>> pick(pipe.space.state_count(),
                                           std::vector<int>(A, 0));
        for (std::size_t s = 0; s < pick.size(); ++s)
            for (int a = 0; a < A; ++a)
                pick[s][a] = static_cast<int>(rng() % pipe.space.members[s].size());
        double current = score(pick);
        ++evals;
        bool improved = true;
        while (improved && evals < budget) {
            improved = false;
            for (std::size_t s = 0; s < pick.size() && evals < budget; ++s)
                for (int a = 0; a < A && evals < budget; ++a) {
                    int best_i = pick[s][a];
                    double best_trial = current;
                    for (int i = 0;
                         i < static_cast<int>(pipe.space.members[s].size()) &&
                         evals < budget;
                         ++i) {
                        if (i == pick[s][a]) continue;
                        auto trial_pick = pick;
                        trial_pick[s][a] = i;
                        const double trial = score(trial_pick);
                        ++evals;
                        if (trial > best_trial) {
                            best_trial = trial;
                            best_i = i;
                        }
                    }
                    if (best_trial > current) {
                        current = best_trial;
                        pick[s][a] = best_i;
                        improved = true;
                    }
                }
        }
        if (current > best_value) {
            best_value = current;
            best_pick = pick;
        }
    }
    return {make_dirac(pipe.space, A, best_pick), best_value};
}

}  // namespace vadp
