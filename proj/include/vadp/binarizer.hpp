#pragma once

#include <string>
#include <vector>

#include "vadp/environment.hpp"
#include "vadp/surrogate.hpp"

namespace vadp {

// Binary-mock wrapper: each macro-action is entered as d = ceil(log2 A) bits
// under the rescaled discount lambda = gamma^(1/d). Intermediate bit-steps
// re-emit the most recent inner percept with reward 0; the final bit decodes
// the macro-action (big-endian, value mod A) and executes it.
struct BinarizedEnvironment {
    Environment env;          // 2-action wrapper with extended latent model
    int bits_per_action = 1;  // d
    double lambda = 0.0;      // gamma^(1/d)
    int inner_action_count = 0;
    int inner_latent_count = 0;

    // Extended latent index of (inner z, last percept e, buffered bits).
    int encode(int z, int e, int buf_len, int buf) const;
};

BinarizedEnvironment binarize(const Environment& env, double gamma);

// Canonical bit-expansion of an inner history (fixed-width encoding of each
// past action, intermediate percepts repeat the current percept).
History expand_history(const BinarizedEnvironment& bin, const History& inner);

struct PipelineReport {
    std::string env_name;
    double gamma = 0.0;
    double eps = 0.0;
    int depth = 0;
    int bits_per_action = 1;
    double lambda = 0.0;
    int surrogate_action_count = 0;
    long realized_states = 0;
    long long state_bound = 0;  // Theorem-level closed form for binarized runs
    double worst_sup_gap = 0.0;  // over all tested B
    double gap_bound = 0.0;      // eps/(1-gamma)
    bool passed = false;
};

// Full binarized pipeline: binarize, solve the binarized oracle, build the
// VADP abstraction at the rescaled internal target, build/solve surrogates
// over the given dispersion kinds, uplift through bit-group decoding, and
// evaluate the resulting inner policy against the inner optimum.
PipelineReport run_binarized_pipeline(const Environment& env, double gamma,
                                      double eps, int depth,
                                      const std::vector<DispersionKind>& b_kinds = {
                                          DispersionKind::kUniform,
                                          DispersionKind::kDiracShortest,
                                          DispersionKind::kRandomSimplex},
                                      std::uint64_t seed = 1);

}  // namespace vadp
