#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace vadp::cli {

// Exit-code contract: 0 all checks passed, 1 certification violation,
// 2 configuration/usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string env;
    double gamma = 0.5;
    double eps = 0.1;
    int depth = 6;
    std::string abstraction = "vadp";
    std::vector<std::string> b_kinds = {"uniform"};
    std::vector<std::uint64_t> seeds = {1};
    bool binarized = false;
    std::string output_dir = "out";
};

struct SweepConfig {
    std::vector<std::string> envs;
    std::vector<double> gammas;
    std::vector<double> epsilons;
    int depth = 6;
    std::string abstraction = "vadp";
    std::vector<std::string> b_kinds = {"uniform"};
    std::vector<std::uint64_t> seeds = {1};
    std::string output_dir = "out";
};

// JSON configuration ingestion; unknown keys and out-of-range values raise
// ConfigError.
ExperimentConfig parse_run_config(const std::string& path);
SweepConfig parse_sweep_config(const std::string& path);

// Fixed 12-significant-digit float formatting; keeps CSV output
// byte-deterministic.
std::string fmt12(double value);

int cmd_bounds(double eps, double gamma, int action_count,
               const std::string& output_dir, std::ostream& log);
int cmd_run(const ExperimentConfig& config, std::ostream& log);
int cmd_sweep(const SweepConfig& config, std::ostream& log);
int cmd_verify(const std::string& suite, const std::string& output_dir, int budget,
               std::uint64_t seed, std::ostream& log);
int cmd_list_envs(std::ostream& log);

}  // namespace vadp::cli
