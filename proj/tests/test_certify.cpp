#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "vadp/certify.hpp"
#include "vadp/instances.hpp"

using namespace vadp;

namespace {

const CheckReport& find_report(const std::vector<CheckReport>& reports,
                               const std::string& name) {
    const auto it = std::find_if(reports.begin(), reports.end(),
                                 [&name](const CheckReport& r) { return r.check_name == name; });
    REQUIRE(it != reports.end());
    return *it;
}

}  // namespace

TEST_CASE("chain2 certification passes every claim with hand-checked margins") {
    const Environment env = make_instance("chain2");
    const auto reports = certify(env, 0.5, 0.1);
    REQUIRE(reports.size() == 6);
    for (const CheckReport& r : reports) CHECK(r.passed);

    // all member histories of a state share a latent state, so the B-average
    // is exact and delta = 0 against the bound 2*0.5*0.02/0.5 = 0.04
    const CheckReport& lemma3 = find_report(reports, "lemma3_q_qbar");
    CHECK(lemma3.worst_margin == doctest::Approx(0.04).epsilon(1e-6));
    const CheckReport& gap = find_report(reports, "theorem3_uplift_gap");
    CHECK(gap.worst_margin == doctest::Approx(0.2).epsilon(1e-6));
    const CheckReport& bound = find_report(reports, "theorem4_state_bound");
    CHECK(bound.worst_margin == doctest::Approx(398.0));
}

TEST_CASE("undiscounted certification is exact") {
    for (const char* spec : {"chain2", "parity", "randomLatent(3,2,3,3)"}) {
        const Environment env = make_instance(spec);
        CertifyOptions opt;
        opt.depth = 4;
        const auto reports = certify(env, 0.0, 0.1, opt);
        for (const CheckReport& r : reports) CHECK(r.passed);
        // the lemma 3 bound degenerates to 0 = 0 at gamma 0
        CHECK(find_report(reports, "lemma3_q_qbar").worst_margin >= -1e-10);
    }
}

TEST_CASE("exhaustive Dirac sweep passes on a stochastic instance") {
    const Environment env = make_instance("randomLatent(3,2,3,1)");
    CertifyOptions opt;
    opt.depth = 3;
    opt.simplex_seeds = 2;
    const auto reports = certify(env, 0.9, 0.05, opt);
    for (const CheckReport& r : reports) CHECK(r.passed);
}

TEST_CASE("value-decision certification skips the support claim and is prefixed") {
    const Environment env = make_instance("chain2");
    CertifyOptions opt;
    opt.kind = AbstractionKind::kVdp;
    const auto reports = certify(env, 0.5, 0.1, opt);
    REQUIRE(reports.size() == 5);
    for (const CheckReport& r : reports)
        CHECK(r.check_name.rfind("vdp_", 0) == 0);
    CHECK(std::none_of(reports.begin(), reports.end(), [](const CheckReport& r) {
        return r.check_name.find("lemma4") != std::string::npos;
    }));
}

TEST_CASE("certification rejects non value-preserving abstractions") {
    const Environment env = make_instance("chain2");
    CertifyOptions opt;
    opt.kind = AbstractionKind::kEsaQGrid;
    CHECK_THROWS_AS(certify(env, 0.5, 0.1, opt), std::invalid_argument);
}

TEST_CASE("single-dispersion pipeline matches the worked example") {
    const Environment env = make_instance("chain2");
    const RunOutcome out = run_pipeline(env, 0.5, 0.1, 6, AbstractionKind::kVadp,
                                        DispersionKind::kUniform, 1);
    CHECK(out.realized_states == 2);
    CHECK(out.state_bound.value == 400ULL);
    CHECK(out.eps0 == doctest::Approx(0.02));
    CHECK(out.delta <= 1e-9);
    CHECK(out.lemma1_dev <= 1e-9);
    CHECK(out.lemma2_dev <= 1e-9);
    CHECK(out.lemma4_ok);
    CHECK(out.sup_gap <= 1e-9);
    REQUIRE(out.states.size() == 2);
    CHECK(out.member_counts[0] + out.member_counts[1] == 63);  // depth-6 histories
    CHECK(out.v_min[0] == doctest::Approx(out.v_max[0]).epsilon(1e-9));
}

TEST_CASE("pipeline runs for every abstraction kind") {
    const Environment env = make_instance("parity");
    for (auto kind : {AbstractionKind::kVadp, AbstractionKind::kVdp,
                      AbstractionKind::kEsaQGrid, AbstractionKind::kMdpLastPercept}) {
        const RunOutcome out =
            run_pipeline(env, 0.5, 0.1, 4, kind, DispersionKind::kUniform, 1);
        CHECK(out.realized_states >= 1);
        if (!out.state_bound.overflow)
            CHECK(static_cast<unsigned long long>(out.realized_states) <=
                  out.state_bound.value);
    }
}

TEST_CASE("zero-budget adversarial search returns the uniform dispersion value") {
    const Environment env = make_instance("chain2");
    const AdversarialResult res = adversarial_b_search(
        env, 0.5, 0.1, 4, AdversarialObjective::kDelta, 0);
    CHECK(res.achieved <= 1e-9);  // chain2 is B-independent
    for (const auto& per_action : res.b.weights)
        for (const auto& pmf : per_action) {
            double total = 0.0;
            for (double w : pmf) total += w;
            CHECK(total == doctest::Approx(1.0));
        }
}

TEST_CASE("budgeted adversarial search never beats the certified bound") {
    const Environment env = make_instance("randomLatent(3,2,3,1)");
    const double gamma = 0.5, eps = 0.1;
    const double eps0 = eps * (1.0 - gamma) / (1.0 + 3.0 * gamma);
    const AdversarialResult res = adversarial_b_search(
        env, gamma, eps, 4, AdversarialObjective::kDelta, 60);
    CHECK(res.achieved <= 2.0 * gamma * eps0 / (1.0 - gamma) + 1e-8);
    const AdversarialResult gap = adversarial_b_search(
        env, gamma, eps, 4, AdversarialObjective::kUpliftGap, 60);
    CHECK(gap.achieved <= eps / (1.0 - gamma) + 1e-8);
}

TEST_CASE("adversarial search is seed-deterministic") {
    const Environment env = make_instance("randomLatent(3,2,3,2)");
    const AdversarialResult a = adversarial_b_search(
        env, 0.5, 0.1, 3, AdversarialObjective::kDelta, 25, 7);
    const AdversarialResult b = adversarial_b_search(
        env, 0.5, 0.1, 3, AdversarialObjective::kDelta, 25, 7);
    CHECK(a.achieved == b.achieved);
    CHECK(a.b.weights == b.b.weights);
}
