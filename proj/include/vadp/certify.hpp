#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vadp/binarizer.hpp"
#include "vadp/bounds.hpp"
#include "vadp/surrogate.hpp"

namespace vadp {

// Result of one certified claim on one parameterization. worst_margin is
// bound minus observed; negative means violation.
struct CheckReport {
    std::string check_name;
    int instances = 0;
    double worst_margin = 0.0;
    std::string witness;
    bool passed = false;
};

struct CertifyOptions {
    int depth = 6;
    AbstractionKind kind = AbstractionKind::kVadp;
    bool include_rollout = true;
    int simplex_seeds = 5;
    std::uint64_t seed = 1;
    // All-Dirac extreme points are enumerated exhaustively when the product
    // of per-(s,a) support sizes stays under this cap; otherwise this many
    // seeded Dirac samples are used instead.
    std::uint64_t dirac_exhaustive_cap = 100'000;
    int dirac_samples = 200;
    int adversarial_budget = 0;
    double slack = 1e-8;  // absorbs the stacked 1e-12 solver residuals
};

// Runs the full pipeline on one (env, gamma, eps) and emits one report per
// claim: Lemma 1 equality, Lemma 2 bound, Lemma 3 bound, Lemma 4 support
// inclusion, Theorem 3 uplift gap, Theorem 4 realized-count-vs-bound.
std::vector<CheckReport> certify(const Environment& env, double gamma, double eps,
                                 const CertifyOptions& options = {});

// Single-dispersion pipeline result, the unit of the run-report CSV.
struct RunOutcome {
    long realized_states = 0;
    BoundValue state_bound;
    double eps0 = 0.0;
    double lemma1_dev = 0.0;
    double lemma2_dev = 0.0;
    double delta = 0.0;  // max |q* - Qbar|
    bool lemma4_ok = true;
    double sup_gap = 0.0;
    // per-state summaries for states.csv
    std::vector<StateLabel> states;
    std::vector<long> member_counts;
    std::vector<double> v_min, v_max;
};

RunOutcome run_pipeline(const Environment& env, double gamma, double eps, int depth,
                        AbstractionKind kind, DispersionKind b_kind,
                        std::uint64_t seed);

enum class AdversarialObjective { kDelta, kUpliftGap, kLemma2Deviation };

struct AdversarialResult {
    Dispersion b;
    double achieved = 0.0;
};

// Coordinate ascent over per-(s,a) Dirac choices from seeded random
// restarts; budget counts objective evaluations. budget == 0 degenerates to
// the uniform dispersion.
AdversarialResult adversarial_b_search(const Environment& env, double gamma,
                                       double eps, int depth,
                                       AdversarialObjective objective,
                                       int budget, std::uint64_t seed = 1,
                                       AbstractionKind kind = AbstractionKind::kVadp);

}  // namespace vadp
