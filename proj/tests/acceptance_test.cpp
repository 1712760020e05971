// End-to-end acceptance gate. Prints one pass/fail line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vadp/binarizer.hpp"
#include "vadp/bounds.hpp"
#include "vadp/certify.hpp"
#include "vadp/cli.hpp"
#include "vadp/instances.hpp"

using namespace vadp;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok,
            const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << "\n";
    if (!ok) ++failures;
}

int suite_depth(const std::string& env_name) {
    if (env_name.rfind("randomLatent", 0) == 0) return 4;
    if (env_name == "parity") return 5;
    return 6;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

int main() {
    std::vector<std::string> suite = {"chain2", "chain3", "bandit(2)", "parity",
                                      "tmaze(3)"};
    for (int s = 1; s <= 5; ++s)
        suite.push_back("randomLatent(3,2,3," + std::to_string(s) + ")");
    const std::vector<double> gammas = {0.0, 0.5, 0.9};
    const std::vector<double> epsilons = {0.05, 0.1, 0.2};

    // Criteria 1-4 and 8 share one certification sweep over the default suite.
    std::map<std::string, std::pair<bool, double>> sweep;  // name -> (all passed, worst margin)
    std::string worst_witness;
    bool chain2_exact_count = false;
    for (const std::string& name : suite) {
        const Environment env = make_instance(name);
        CertifyOptions opt;
        opt.depth = suite_depth(name);
        for (double gamma : gammas)
            for (double eps : epsilons)
                for (const CheckReport& r : certify(env, gamma, eps, opt)) {
                    auto [it, fresh] = sweep.emplace(
                        r.check_name, std::make_pair(r.passed, r.worst_margin));
                    if (!fresh) {
                        it->second.first = it->second.first && r.passed;
                        if (r.worst_margin < it->second.second) {
                            it->second.second = r.worst_margin;
                            if (!r.passed) worst_witness = r.witness;
                        }
                    }
                    if (name == "chain2" && gamma == 0.5 && eps == 0.1 &&
                        r.check_name == "theorem4_state_bound")
                        chain2_exact_count = r.worst_margin == 398.0;  // 400 - 2
                }
    }
    auto sweep_ok = [&sweep](const std::string& name) {
        const auto it = sweep.find(name);
        return it != sweep.end() && it->second.first;
    };
    auto sweep_margin = [&sweep](const std::string& name) {
        std::ostringstream out;
        out << "worst margin " << sweep[name].second;
        return out.str();
    };

    report(1, "B-averaged value deviation bound over the default suite",
           sweep_ok("lemma3_q_qbar"), sweep_margin("lemma3_q_qbar"));
    report(2, "surrogate optimal actions stay inside the near-optimal labels",
           sweep_ok("lemma4_support"), sweep_margin("lemma4_support"));
    report(3, "uplifted-policy optimality gap bound",
           sweep_ok("theorem3_uplift_gap"), sweep_margin("theorem3_uplift_gap"));
    report(4, "realized state counts within the closed-form bound",
           sweep_ok("theorem4_state_bound") && chain2_exact_count,
           sweep_margin("theorem4_state_bound"));

    // Criterion 5: binarized end-to-end pipeline.
    bool bin_ok = true;
    std::string bin_detail;
    for (const char* name : {"chain3", "randomLatent(3,3,2,1)", "randomLatent(3,3,2,2)"})
        for (double gamma : {0.5, 0.9})
            for (double eps : {0.1, 0.2}) {
                const PipelineReport rep =
                    run_binarized_pipeline(make_instance(name), gamma, eps, 5);
                if (!rep.passed && bin_ok) {
                    bin_ok = false;
                    std::ostringstream out;
                    out << name << " gamma=" << gamma << " eps=" << eps
                        << " gap=" << rep.worst_sup_gap;
                    bin_detail = out.str();
                }
            }
    report(5, "binarized pipeline gap, action count, and state bound", bin_ok,
           bin_detail);

    // Criterion 6: finite-horizon oracle against the fixed-point oracle.
    bool oracle_ok = true;
    for (const std::string& name : suite)
        for (double gamma : {0.5, 0.9}) {
            const Environment env = make_instance(name);
            const LatentOracle exact = solve_latent(env, gamma);
            const TreeOracle tree = solve_tree(env, gamma, 20);
            const double tol = std::pow(gamma, 20) / (1.0 - gamma) + 1e-9;
            for (const History& h : enumerate_histories(env, 3))
                for (int a = 0; a < env.action_count; ++a)
                    oracle_ok = oracle_ok &&
                                std::abs(tree.q(h, a) - exact.q(h, a)) <= tol;
        }
    report(6, "horizon-20 truncation within the discount tail of the exact oracle",
           oracle_ok);

    // Criterion 7: value scaling across the bit wrapper on chain3 (d = 2).
    bool scaling_ok = true;
    const Environment chain3 = make_instance("chain3");
    for (double gamma : {0.25, 0.81}) {
        const BinarizedEnvironment bin = binarize(chain3, gamma);
        const LatentOracle inner = solve_latent(chain3, gamma);
        const LatentOracle wrapped = solve_latent(bin.env, bin.lambda);
        const double scale = std::pow(bin.lambda, bin.bits_per_action - 1);
        for (const History& h : enumerate_histories(chain3, 3))
            scaling_ok = scaling_ok &&
                         std::abs(wrapped.v(expand_history(bin, h)) -
                                  scale * inner.v(h)) <= 1e-8;
    }
    report(7, "binarized values scale by lambda^(d-1) at macro boundaries",
           scaling_ok);

    // Criterion 8: max-min equality and the averaged-max value relationship.
    report(8, "state-wise max-min equality and averaged-value deviation bound",
           sweep_ok("lemma1_maxmin") && sweep_ok("lemma2_max_relationship"),
           sweep_margin("lemma2_max_relationship"));

    // Criterion 9: closed-form bound regressions.
    const auto simplified = bin_bound_simplified(0.01, 0.99, 16);
    const bool bounds_ok = esa_bound(0.1, 0.5, 2).value == 6400ULL &&
                           vadp_bound(0.1, 0.5, 2).value == 400ULL &&
                           vadp_bound(0.1, 0.5, 4).value == 3200ULL &&
                           bin_bound_full(0.1, 0.5, 4).value == 20000ULL &&
                           simplified.has_value() &&
                           simplified->value == 1'088'000'000ULL;
    report(9, "bound calculator reference values", bounds_ok);

    // Criterion 10: repeated runs produce byte-identical CSV bodies.
    const fs::path dir = fs::temp_directory_path() / "vadp_acceptance";
    fs::remove_all(dir);
    cli::ExperimentConfig config;
    config.env = "randomLatent(3,2,3,1)";
    config.gamma = 0.5;
    config.eps = 0.1;
    config.depth = 4;
    config.b_kinds = {"uniform", "rollout_frequency", "random_simplex"};
    config.seeds = {1, 2};
    std::ostringstream log;
    config.output_dir = (dir / "a").string();
    const int rc1 = cli::cmd_run(config, log);
    config.output_dir = (dir / "b").string();
    const int rc2 = cli::cmd_run(config, log);
    const bool deterministic =
        rc1 == cli::kExitOk && rc2 == cli::kExitOk &&
        slurp(dir / "a" / "runs.csv") == slurp(dir / "b" / "runs.csv") &&
        slurp(dir / "a" / "states.csv") == slurp(dir / "b" / "states.csv") &&
        !slurp(dir / "a" / "runs.csv").empty();
    report(10, "repeated runs are byte-identical", deterministic);

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << "\n";
    if (failures != 0 && !worst_witness.empty())
        std::cout << "worst witness: " << worst_witness << "\n";
    return failures == 0 ? 0 : 1;
}
