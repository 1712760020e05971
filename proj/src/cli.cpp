#include "vadp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vadp/binarizer.hpp"
#include "vadp/bounds.hpp"
#include "vadp/certify.hpp"
#include "vadp/instances.hpp"

namespace vadp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt12(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return j;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown config key '" + key + "'");
}

void validate_common(double gamma, double eps, int depth) {
    if (gamma < 0.0 || gamma >= 1.0) throw ConfigError("gamma must be in [0,1)");
    if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
    if (depth < 1) throw ConfigError("depth must be >= 1");
}

void validate_names(const std::string& abstraction,
                    const std::vector<std::string>& b_kinds) {
    try {
        abstraction_kind_from_string(abstraction);
        for (const auto& k : b_kinds) dispersion_kind_from_string(k);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);  // '\n' endings on all platforms
    if (!out) throw ConfigError("cannot open output file '" + path.string() + "'");
    return out;
}

struct RunRow {
    std::string b_kind;
    std::uint64_t seed = 0;
    long states = 0;
    std::string bound;
    std::string delta, lemma1, lemma2_margin, lemma3_margin, lemma4_ok;
    std::string sup_gap, gap_margin;
    bool violation = false;
};

constexpr const char* kRunsHeader =
    "env,gamma,eps,depth,abstraction,b_kind,seed,states,bound,delta,"
    "lemma1_dev,lemma2_margin,lemma3_margin,lemma4_ok,sup_gap,gap_margin\n";

}  // namespace

ExperimentConfig parse_run_config(const std::string& path) {
    const json j = load_json(path);
    reject_unknown_keys(j, {"env", "gamma", "eps", "depth", "abstraction", "b_kinds",
                            "seeds", "binarized", "output_dir"});
    ExperimentConfig c;
    try {
        c.env = j.at("env").get<std::string>();
        c.gamma = j.at("gamma").get<double>();
        c.eps = j.at("eps").get<double>();
        if (j.contains("depth")) c.depth = j.at("depth").get<int>();
        if (j.contains("abstraction")) c.abstraction = j.at("abstraction").get<std::string>();
        if (j.contains("b_kinds")) c.b_kinds = j.at("b_kinds").get<std::vector<std::string>>();
        if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("binarized")) c.binarized = j.at("binarized").get<bool>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    validate_common(c.gamma, c.eps, c.depth);
    validate_names(c.abstraction, c.b_kinds);
    if (c.seeds.empty()) throw ConfigError("seeds must be nonempty");
    if (c.b_kinds.empty()) throw ConfigError("b_kinds must be nonempty");
    return c;
}

SweepConfig parse_sweep_config(const std::string& path) {
    const json j = load_json(path);
    reject_unknown_keys(j, {"envs", "gammas", "epsilons", "depth", "abstraction",
                            "b_kinds", "seeds", "output_dir"});
    SweepConfig c;
    try {
        c.envs = j.at("envs").get<std::vector<std::string>>();
        c.gammas = j.at("gammas").get<std::vector<double>>();
        c.epsilons = j.at("epsilons").get<std::vector<double>>();
        if (j.contains("depth")) c.depth = j.at("depth").get<int>();
        if (j.contains("abstraction")) c.abstraction = j.at("abstraction").get<std::string>();
        if (j.contains("b_kinds")) c.b_kinds = j.at("b_kinds").get<std::vector<std::string>>();
        if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    for (double g : c.gammas)
        for (double e : c.epsilons) validate_common(g, e, c.depth);
    validate_names(c.abstraction, c.b_kinds);
    if (c.seeds.empty()) throw ConfigError("seeds must be nonempty");
    return c;
}

int cmd_bounds(double eps, double gamma, int action_count,
               const std::string& output_dir, std::ostream& log) {
    std::string esa, vadp, bin_full = "n/a", bin_simplified = "n/a";
    try {
        esa = esa_bound(eps, gamma, action_count).to_string();
        vadp = vadp_bound(eps, gamma, action_count).to_string();
        if (action_count >= 2 && gamma > 0.0) {
            bin_full = bin_bound_full(eps, gamma, action_count).to_string();
            if (const auto simple = bin_bound_simplified(eps, gamma, action_count))
                bin_simplified = simple->to_string();
        }
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const std::string row = fmt12(eps) + "," + fmt12(gamma) + "," +
                            std::to_string(action_count) + "," + esa + "," + vadp +
                            "," + bin_full + "," + bin_simplified;
    log << "eps,gamma,actions,esa,vadp,bin_full,bin_simplified\n" << row << "\n";
    if (!output_dir.empty()) {
        fs::create_directories(output_dir);
        auto out = open_csv(fs::path(output_dir) / "bounds.csv");
        out << "eps,gamma,actions,esa,vadp,bin_full,bin_simplified\n" << row << "\n";
    }
    return kExitOk;
}

int cmd_run(const ExperimentConfig& config, std::ostream& log) {
    Environment env;
    AbstractionKind kind;
    try {
        env = make_instance(config.env);
        kind = abstraction_kind_from_string(config.abstraction);
        if (config.binarized && !(config.gamma > 0.0))
            throw std::invalid_argument("binarized runs require gamma > 0");
        if (config.binarized && env.action_count < 2)
            throw std::invalid_argument("binarized runs require at least 2 actions");
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::vector<RunRow> rows;
    std::ostringstream states_body;
    std::ostringstream meta;
    bool any_violation = false;

    const double eps0 = config.eps * (1.0 - config.gamma) / (1.0 + 3.0 * config.gamma);
    const double slack = 1e-8;

    if (config.binarized) {
        for (const std::uint64_t seed : config.seeds) {
            const auto start = std::chrono::steady_clock::now();
            const PipelineReport rep = run_binarized_pipeline(
                env, config.gamma, config.eps, config.depth, {DispersionKind::kUniform,
                DispersionKind::kDiracShortest, DispersionKind::kRandomSimplex}, seed);
            const auto elapsed = std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - start);
            RunRow row;
            row.b_kind = "binarized_set";
            row.seed = seed;
            row.states = rep.realized_states;
            row.bound = std::to_string(rep.state_bound);
            row.delta = row.lemma1 = row.lemma2_margin = row.lemma3_margin = "n/a";
            row.lemma4_ok = rep.surrogate_action_count == 2 ? "1" : "0";
            row.sup_gap = fmt12(rep.worst_sup_gap);
            row.gap_margin = fmt12(rep.gap_bound + slack - rep.worst_sup_gap);
            row.violation = !rep.passed;
            any_violation |= row.violation;
            rows.push_back(row);
            meta << "seed " << seed << " wall_ms " << elapsed.count() << "\n";
        }
    } else {
        bool wrote_states = false;
        for (const std::string& b_name : config.b_kinds) {
            const DispersionKind b_kind = dispersion_kind_from_string(b_name);
            for (const std::uint64_t seed : config.seeds) {
                const auto start = std::chrono::steady_clock::now();
                const RunOutcome out = run_pipeline(env, config.gamma, config.eps,
                                                    config.depth, kind, b_kind, seed);
                const auto elapsed = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start);
                RunRow row;
                row.b_kind = b_name;
                row.seed = seed;
                row.states = out.realized_states;
                row.bound = out.state_bound.to_string();
                row.delta = fmt12(out.delta);
                row.lemma1 = fmt12(out.lemma1_dev);
                row.lemma2_margin = fmt12(eps0 - out.lemma2_dev);
                row.lemma3_margin = fmt12(2.0 * config.gamma * eps0 /
                                              (1.0 - config.gamma) - out.delta);
                row.lemma4_ok = out.lemma4_ok ? "1" : "0";
                row.sup_gap = fmt12(out.sup_gap);
                row.gap_margin =
                    fmt12(config.eps / (1.0 - config.gamma) - out.sup_gap);
                const bool over_bound =
                    !out.state_bound.overflow &&
                    static_cast<unsigned long long>(out.realized_states) >
                        out.state_bound.value;
                switch (kind) {
                    case AbstractionKind::kVadp:
                        row.violation = out.lemma1_dev > 1e-9 ||
                                        eps0 - out.lemma2_dev < -slack ||
                                        2.0 * config.gamma * eps0 / (1.0 - config.gamma) -
                                                out.delta < -slack ||
                                        !out.lemma4_ok ||
                                        config.eps / (1.0 - config.gamma) - out.sup_gap <
                                            -slack ||
                                        over_bound;
                        break;
                    case AbstractionKind::kVdp:
                        row.violation = out.lemma1_dev > 1e-9 ||
                                        eps0 - out.lemma2_dev < -slack ||
                                        2.0 * config.gamma * eps0 / (1.0 - config.gamma) -
                                                out.delta < -slack ||
                                        over_bound;
                        break;
                    case AbstractionKind::kEsaQGrid:
                        row.violation = over_bound;
                        break;
                    case AbstractionKind::kMdpLastPercept:
                        row.violation = false;
                        break;
                }
                any_violation |= row.violation;
                rows.push_back(row);
                meta << b_name << " seed " << seed << " wall_ms " << elapsed.count()
                     << "\n";
                if (!wrote_states) {
                    for (std::size_t s = 0; s < out.states.size(); ++s)
                        states_body << '"' << out.states[s].to_string() << "\","
                                    << out.member_counts[s] << ','
                                    << fmt12(out.v_min[s]) << ',' << fmt12(out.v_max[s])
                                    << '\n';
                    wrote_states = true;
                }
            }
        }
    }

    fs::create_directories(config.output_dir);
    auto runs = open_csv(fs::path(config.output_dir) / "runs.csv");
    runs << kRunsHeader;
    for (const RunRow& row : rows)
        runs << config.env << ',' << fmt12(config.gamma) << ',' << fmt12(config.eps)
             << ',' << config.depth << ','
             << (config.binarized ? config.abstraction + "_binarized"
                                  : config.abstraction)
             << ',' << row.b_kind << ',' << row.seed << ',' << row.states << ','
             << row.bound << ',' << row.delta << ',' << row.lemma1 << ','
             << row.lemma2_margin << ',' << row.lemma3_margin << ',' << row.lemma4_ok
             << ',' << row.sup_gap << ',' << row.gap_margin << '\n';
    auto states = open_csv(fs::path(config.output_dir) / "states.csv");
    states << "label,member_count,v_min,v_max\n" << states_body.str();
    std::ofstream(fs::path(config.output_dir) / "meta.txt") << meta.str();

    log << "wrote " << rows.size() << " run row(s) to " << config.output_dir << "\n";
    return any_violation ? kExitViolation : kExitOk;
}

int cmd_sweep(const SweepConfig& config, std::ostream& log) {
    AbstractionKind kind;
    try {
        kind = abstraction_kind_from_string(config.abstraction);
        for (const auto& name : config.envs) make_instance(name);
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    auto envs = config.envs;
    auto gammas = config.gammas;
    auto epsilons = config.epsilons;
    auto seeds = config.seeds;
    std::sort(envs.begin(), envs.end());
    std::sort(gammas.begin(), gammas.end());
    std::sort(epsilons.begin(), epsilons.end());
    std::sort(seeds.begin(), seeds.end());

    fs::create_directories(config.output_dir);
    auto out = open_csv(fs::path(config.output_dir) / "sweep.csv");
    out << "env,gamma,eps,b_kind,seed,states,bound,ratio,delta,sup_gap,status\n";

    bool any_failed = false;
    for (const auto& env_name : envs) {
        const Environment env = make_instance(env_name);
        for (double gamma : gammas)
            for (double eps : epsilons)
                for (const auto& b_name : config.b_kinds)
                    for (std::uint64_t seed : seeds) {
                        out << env_name << ',' << fmt12(gamma) << ',' << fmt12(eps)
                            << ',' << b_name << ',' << seed << ',';
                        try {
                            const RunOutcome run = run_pipeline(
                                env, gamma, eps, config.depth, kind,
                                dispersion_kind_from_string(b_name), seed);
                            const std::string ratio =
                                run.state_bound.overflow
                                    ? "0"
                                    : fmt12(static_cast<double>(run.realized_states) /
                                            static_cast<double>(run.state_bound.value));
                            out << run.realized_states << ','
                                << run.state_bound.to_string() << ',' << ratio << ','
                                << fmt12(run.delta) << ',' << fmt12(run.sup_gap)
                                << ",ok\n";
                        } catch (const std::exception&) {
                            any_failed = true;
                            out << "n/a,n/a,n/a,n/a,n/a,failed\n";
                        }
                    }
    }
    log << "sweep written to " << config.output_dir << "\n";
    return any_failed ? kExitViolation : kExitOk;
}

int cmd_list_envs(std::ostream& log) {
    for (const auto& name : instance_catalog()) log << name << "\n";
    return kExitOk;
}

namespace {

int default_depth(const std::string& env_name) {
    if (env_name.rfind("randomLatent", 0) == 0) return 4;
    if (env_name == "parity") return 5;
    return 6;
}

struct VerifyRow {
    CheckReport report;
    std::string env;
    double gamma = 0.0;
    double eps = 0.0;
};

}  // namespace

int cmd_verify(const std::string& suite, const std::string& output_dir, int budget,
               std::uint64_t seed, std::ostream& log) {
    std::vector<std::string> envs;
    std::vector<double> gammas, epsilons;
    CertifyOptions base;
    base.seed = seed;
    bool binarized_rows = false;
    bool vdp_falsification = false;

    if (suite == "quick") {
        envs = {"chain2", "bandit(2)", "parity"};
        gammas = {0.0, 0.5};
        epsilons = {0.1};
        base.simplex_seeds = 2;
        base.dirac_exhaustive_cap = 2000;
        base.dirac_samples = 50;
    } else if (suite == "default" || suite == "adversarial") {
        envs = {"chain2", "chain3", "bandit(2)", "parity", "tmaze(3)"};
        for (int s = 1; s <= 5; ++s) envs.push_back("randomLatent(3,2,3," + std::to_string(s) + ")");
        gammas = {0.0, 0.5, 0.9};
        epsilons = {0.05, 0.1, 0.2};
        binarized_rows = true;
        if (suite == "adversarial") {
            base.adversarial_budget = budget;
            vdp_falsification = true;
        }
    } else {
        log << "error: unknown suite '" << suite << "'\n";
        return kExitConfig;
    }

    std::vector<VerifyRow> rows;
    for (const auto& env_name : envs) {
        const Environment env = make_instance(env_name);
        CertifyOptions opt = base;
        opt.depth = default_depth(env_name);
        for (double gamma : gammas)
            for (double eps : epsilons)
                for (CheckReport& r : certify(env, gamma, eps, opt))
                    rows.push_back({std::move(r), env_name, gamma, eps});
    }

    if (binarized_rows) {
        std::vector<std::string> bin_envs = {"chain3", "randomLatent(3,3,2,1)",
                                             "randomLatent(3,3,2,2)"};
        for (const auto& env_name : bin_envs) {
            const Environment env = make_instance(env_name);
            for (double gamma : {0.5, 0.9})
                for (double eps : {0.1, 0.2}) {
                    const PipelineReport rep =
                        run_binarized_pipeline(env, gamma, eps, 5);
                    auto emit = [&rows, &rep, &env_name, gamma, eps](
                                    const std::string& name, double margin) {
                        CheckReport r;
                        r.check_name = name;
                        r.instances = 1;
                        r.worst_margin = margin;
                        r.witness = env_name + " binarized d=" +
                                    std::to_string(rep.bits_per_action);
                        r.passed = margin >= -1e-8;
                        rows.push_back({std::move(r), env_name, gamma, eps});
                    };
                    emit("theorem6_gap", rep.gap_bound - rep.worst_sup_gap);
                    emit("theorem6_two_actions",
                         rep.surrogate_action_count == 2 ? 0.0 : -1.0);
                    emit("theorem6_state_bound",
                         rep.state_bound < 0
                             ? 1e18
                             : static_cast<double>(rep.state_bound) -
                                   static_cast<double>(rep.realized_states));
                }
        }
    }

    if (vdp_falsification) {
        // Logged experiment only: VDP lacks the buffer zone, so these rows
        // never gate the exit code.
        for (int s = 1; s <= 3; ++s) {
            const std::string env_name = "randomLatent(3,2,3," + std::to_string(s) + ")";
            const Environment env = make_instance(env_name);
            CertifyOptions opt = base;
            opt.depth = default_depth(env_name);
            opt.kind = AbstractionKind::kVdp;
            for (double gamma : {0.5, 0.9})
                for (CheckReport& r : certify(env, gamma, 0.1, opt))
                    rows.push_back({std::move(r), env_name, gamma, 0.1});
        }
    }

    fs::create_directories(output_dir);
    auto out = open_csv(fs::path(output_dir) / "verify.csv");
    out << "check,env,gamma,eps,witness,worst_margin,passed\n";
    std::map<std::string, double> worst_by_check;
    bool any_failed = false;
    for (const VerifyRow& row : rows) {
        out << row.report.check_name << ',' << row.env << ',' << fmt12(row.gamma)
            << ',' << fmt12(row.eps) << ",\"" << row.report.witness << "\","
            << fmt12(row.report.worst_margin) << ','
            << (row.report.passed ? 1 : 0) << '\n';
        auto [it, inserted] =
            worst_by_check.emplace(row.report.check_name, row.report.worst_margin);
        if (!inserted) it->second = std::min(it->second, row.report.worst_margin);
        if (!row.report.passed && row.report.check_name.rfind("vdp_", 0) != 0)
            any_failed = true;
    }
    for (const auto& [name, margin] : worst_by_check)
        log << name << " worst margin " << fmt12(margin) << "\n";
    log << rows.size() << " report(s) written to " << output_dir << "\n";
    return any_failed ? kExitViolation : kExitOk;
}

}  // namespace vadp::cli
