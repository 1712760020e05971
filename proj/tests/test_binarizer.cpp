#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vadp/binarizer.hpp"
#include "vadp/bounds.hpp"
#include "vadp/instances.hpp"
#include "vadp/oracle.hpp"

using namespace vadp;

TEST_CASE("two-action wrapper is step-for-step identical to the inner chain") {
    const Environment inner = make_instance("chain2");
    const BinarizedEnvironment bin = binarize(inner, 0.5);
    CHECK(bin.bits_per_action == 1);
    CHECK(bin.lambda == doctest::Approx(0.5));
    CHECK(bin.env.action_count == 2);
    for (const History& h : enumerate_histories(inner, 3))
        for (int a = 0; a < 2; ++a) {
            CHECK(bin.env.reward(h, a) == doctest::Approx(inner.reward(h, a)));
            const auto p = step_distribution(bin.env, h, a);
            const auto q = step_distribution(inner, h, a);
            for (int e = 0; e < inner.percept_count; ++e)
                CHECK(p[e] == doctest::Approx(q[e]));
        }
}

TEST_CASE("three-action decode follows the fixed-width big-endian mod rule") {
    const Environment inner = make_instance("chain3");
    const BinarizedEnvironment bin = binarize(inner, 0.25);
    CHECK(bin.bits_per_action == 2);
    CHECK(bin.lambda == doctest::Approx(0.5));

    // first bit buffers: reward 0 and the current percept re-emitted
    const History start(0);
    for (int b = 0; b < 2; ++b) {
        CHECK(bin.env.reward(start, b) == doctest::Approx(0.0));
        CHECK(step_distribution(bin.env, start, b)[0] == doctest::Approx(1.0));
    }
    // decode pairs against the inner kernel: 00->a0, 01->a1, 10->a2, 11->a0
    const LatentOracle inner_oracle = solve_latent(inner, 0.0625);
    const struct { int b0, b1, macro; } cases[] = {
        {0, 0, 0}, {0, 1, 1}, {1, 0, 2}, {1, 1, 0}};
    for (const auto& c : cases) {
        const History buffered = start.extended(c.b0, 0);
        CHECK(bin.env.reward(buffered, c.b1) ==
              doctest::Approx(inner.reward(start, c.macro)));
        const auto p = step_distribution(bin.env, buffered, c.b1);
        const auto q = step_distribution(inner, start, c.macro);
        for (int e = 0; e < inner.percept_count; ++e)
            CHECK(p[e] == doctest::Approx(q[e]));
    }
}

TEST_CASE("history expansion interleaves buffered bits") {
    const Environment inner = make_instance("chain3");
    const BinarizedEnvironment bin = binarize(inner, 0.25);
    const History h = History(0).extended(2, 1);
    const History expanded = expand_history(bin, h);
    // a2 = bits 10; the intermediate percept repeats the current percept
    CHECK(expanded.actions == std::vector<int>{1, 0});
    CHECK(expanded.percepts == std::vector<int>{0, 0, 1});
    CHECK(expand_history(bin, History(1)) == History(1));
}

TEST_CASE("binarized optimal values scale by lambda^(d-1) at macro boundaries") {
    const Environment inner = make_instance("chain3");
    for (double gamma : {0.25, 0.81}) {
        const BinarizedEnvironment bin = binarize(inner, gamma);
        const double lambda = bin.lambda;
        CHECK(lambda == doctest::Approx(std::sqrt(gamma)));
        const LatentOracle inner_oracle = solve_latent(inner, gamma);
        const LatentOracle bin_oracle = solve_latent(bin.env, lambda);
        const double scale = std::pow(lambda, bin.bits_per_action - 1);
        for (const History& h : enumerate_histories(inner, 3)) {
            const History hb = expand_history(bin, h);
            CHECK(bin_oracle.v(hb) == doctest::Approx(scale * inner_oracle.v(h)).epsilon(1e-8));
        }
    }
}

TEST_CASE("single-bit pipeline reduces to the plain pipeline") {
    const Environment inner = make_instance("chain2");
    const PipelineReport rep = run_binarized_pipeline(inner, 0.5, 0.1, 5);
    CHECK(rep.bits_per_action == 1);
    CHECK(rep.surrogate_action_count == 2);
    CHECK(rep.realized_states == 2);
    CHECK(rep.worst_sup_gap <= 1e-8);
    CHECK(rep.passed);
}

TEST_CASE("chain3 pipeline satisfies the end-to-end guarantee") {
    const Environment inner = make_instance("chain3");
    const PipelineReport rep = run_binarized_pipeline(inner, 0.5, 0.2, 5);
    CHECK(rep.surrogate_action_count == 2);
    CHECK(rep.worst_sup_gap <= 0.2 / 0.5 + 1e-8);
    CHECK(rep.realized_states <=
          static_cast<long>(bin_bound_full(0.2, 0.5, 3).value));
    CHECK(rep.passed);
}

TEST_CASE("binarized pipeline rejects undiscounted and single-action inputs") {
    const Environment inner = make_instance("chain3");
    CHECK_THROWS_AS(run_binarized_pipeline(inner, 0.0, 0.1, 4), std::invalid_argument);
    CHECK_THROWS_AS(binarize(make_instance("bandit(1)"), 0.5), std::invalid_argument);
}
