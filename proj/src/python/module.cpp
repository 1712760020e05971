#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vadp/binarizer.hpp"
#include "vadp/bounds.hpp"
#include "vadp/certify.hpp"
#include "vadp/instances.hpp"

namespace py = pybind11;
using namespace vadp;

PYBIND11_MODULE(vadp, m) {
    m.doc() = "abstraction laboratory for history-based environments";

    py::register_exception<ResourceLimitError>(m, "ResourceLimitError");

    py::class_<History>(m, "History")
        .def(py::init<>())
        .def(py::init<int>(), py::arg("first_percept"))
        .def_readwrite("percepts", &History::percepts)
        .def_readwrite("actions", &History::actions)
        .def("length", &History::length)
        .def("last_percept", &History::last_percept)
        .def("extended", &History::extended, py::arg("action"), py::arg("percept"))
        .def("__eq__", [](const History& a, const History& b) { return a == b; })
        .def("__lt__", [](const History& a, const History& b) { return a < b; })
        .def("__repr__", [](const History& h) { return to_string(h); });

    py::class_<Environment>(m, "Environment")
        .def_readonly("name", &Environment::name)
        .def_readonly("action_count", &Environment::action_count)
        .def_readonly("percept_count", &Environment::percept_count)
        .def_readonly("initial_dist", &Environment::initial_dist)
        .def("kernel",
             [](const Environment& env, const History& h, int a) {
                 return step_distribution(env, h, a);
             })
        .def("reward",
             [](const Environment& env, const History& h, int a) {
                 return env.reward(h, a);
             });

    m.def("make_instance", &make_instance, py::arg("spec"));
    m.def("instance_catalog", &instance_catalog);
    m.def("enumerate_histories", &enumerate_histories, py::arg("env"),
          py::arg("max_len"), py::arg("cap") = 1'000'000);

    py::class_<LatentOracle>(m, "LatentOracle")
        .def("q", &LatentOracle::q, py::arg("h"), py::arg("action"))
        .def("v", &LatentOracle::v, py::arg("h"))
        .def("opt_action", &LatentOracle::opt_action, py::arg("h"))
        .def("near_optimal_set", &LatentOracle::near_optimal_set, py::arg("h"),
             py::arg("eps_prime"))
        .def("q_latent", &LatentOracle::q_latent, py::arg("z"), py::arg("action"))
        .def("v_latent", &LatentOracle::v_latent, py::arg("z"))
        .def("fold", &LatentOracle::fold, py::arg("h"))
        .def_property_readonly("gamma", &LatentOracle::gamma);

    py::class_<TreeOracle>(m, "TreeOracle")
        .def("q", &TreeOracle::q, py::arg("h"), py::arg("action"))
        .def("v", &TreeOracle::v, py::arg("h"))
        .def("opt_action", &TreeOracle::opt_action, py::arg("h"))
        .def_property_readonly("gamma", &TreeOracle::gamma)
        .def_property_readonly("horizon", &TreeOracle::horizon);

    m.def("solve_latent", &solve_latent, py::arg("env"), py::arg("gamma"));
    m.def("solve_tree", &solve_tree, py::arg("env"), py::arg("gamma"),
          py::arg("horizon"));

    py::enum_<AbstractionKind>(m, "AbstractionKind")
        .value("VADP", AbstractionKind::kVadp)
        .value("VDP", AbstractionKind::kVdp)
        .value("ESA_QGRID", AbstractionKind::kEsaQGrid)
        .value("MDP_LAST_PERCEPT", AbstractionKind::kMdpLastPercept);

    py::class_<AbstractionParams>(m, "AbstractionParams")
        .def(py::init<>())
        .def_readwrite("eps", &AbstractionParams::eps)
        .def_readwrite("gamma", &AbstractionParams::gamma)
        .def_readwrite("kind", &AbstractionParams::kind)
        .def("eps0", &AbstractionParams::eps0);

    py::class_<StateLabel>(m, "StateLabel")
        .def_readonly("kind", &StateLabel::kind)
        .def_readonly("value_bin", &StateLabel::value_bin)
        .def_readonly("opt_action", &StateLabel::opt_action)
        .def_readonly("near_opt", &StateLabel::near_opt)
        .def_readonly("q_bins", &StateLabel::q_bins)
        .def_readonly("last_percept", &StateLabel::last_percept)
        .def("__eq__", [](const StateLabel& a, const StateLabel& b) { return a == b; })
        .def("__lt__", [](const StateLabel& a, const StateLabel& b) { return a < b; })
        .def("__repr__", [](const StateLabel& s) { return s.to_string(); });

    py::class_<Abstraction>(m, "Abstraction")
        .def_readonly("params", &Abstraction::params)
        .def("classify", [](const Abstraction& a, const History& h) {
            return a.classify(h);
        });

    m.def("build_vadp", &build_vadp, py::arg("oracle"), py::arg("params"));
    m.def("build_vdp", &build_vdp, py::arg("oracle"), py::arg("params"));
    m.def("build_esa_qgrid", &build_esa_qgrid, py::arg("oracle"), py::arg("params"));
    m.def("build_mdp_abstraction", &build_mdp_abstraction, py::arg("env"));
    m.def("enumerate_states", &enumerate_states, py::arg("abstraction"),
          py::arg("env"), py::arg("depth"));

    py::class_<StateSpace>(m, "StateSpace")
        .def_readonly("states", &StateSpace::states)
        .def_readonly("members", &StateSpace::members)
        .def_readonly("member_q", &StateSpace::member_q)
        .def_readonly("member_v", &StateSpace::member_v)
        .def_readonly("depth", &StateSpace::depth)
        .def("index_of", &StateSpace::index_of)
        .def("state_count", &StateSpace::state_count);

    m.def("realize_states", &realize_states, py::arg("abstraction"), py::arg("env"),
          py::arg("oracle"), py::arg("depth"));

    py::enum_<DispersionKind>(m, "DispersionKind")
        .value("UNIFORM", DispersionKind::kUniform)
        .value("DIRAC_SHORTEST", DispersionKind::kDiracShortest)
        .value("ROLLOUT_FREQUENCY", DispersionKind::kRolloutFrequency)
        .value("RANDOM_SIMPLEX", DispersionKind::kRandomSimplex);

    py::class_<Dispersion>(m, "Dispersion")
        .def_readonly("weights", &Dispersion::weights);

    m.def("make_dispersion", &make_dispersion, py::arg("space"), py::arg("env"),
          py::arg("kind"), py::arg("seed") = 0, py::arg("rollout_count") = 2000);
    m.def("make_dirac", &make_dirac, py::arg("space"), py::arg("action_count"),
          py::arg("pick"));

    py::class_<SurrogateMdp>(m, "SurrogateMdp")
        .def_readonly("states", &SurrogateMdp::states)
        .def_readonly("transition", &SurrogateMdp::transition)
        .def_readonly("reward", &SurrogateMdp::reward)
        .def_readonly("boundary_states", &SurrogateMdp::boundary_states);

    m.def("build_surrogate", &build_surrogate, py::arg("abstraction"), py::arg("env"),
          py::arg("space"), py::arg("b"));
    m.def("b_averaged_q", &b_averaged_q, py::arg("space"), py::arg("b"));

    py::class_<SurrogateSolution>(m, "SurrogateSolution")
        .def_readonly("v", &SurrogateSolution::v)
        .def_readonly("q", &SurrogateSolution::q)
        .def_readonly("optimal_actions", &SurrogateSolution::optimal_actions);

    m.def("solve_surrogate", &solve_surrogate, py::arg("mdp"), py::arg("gamma"),
          py::arg("tie_tol") = 1e-9);

    py::class_<Policy>(m, "Policy")
        .def("act", [](const Policy& p, const History& h) { return p.act(h); });

    m.def("uplift",
          [](const SurrogateMdp& mdp, const SurrogateSolution& sol,
             const Abstraction& abstraction) { return uplift(mdp, sol, abstraction); },
          py::arg("mdp"), py::arg("solution"), py::arg("abstraction"));

    py::class_<PolicyEvaluation>(m, "PolicyEvaluation")
        .def_readonly("v_pi", &PolicyEvaluation::v_pi)
        .def_readonly("sup_gap", &PolicyEvaluation::sup_gap);

    m.def("evaluate_policy", &evaluate_policy, py::arg("env"), py::arg("policy"),
          py::arg("gamma"), py::arg("oracle"), py::arg("depth"));

    py::class_<BoundValue>(m, "BoundValue")
        .def_readonly("overflow", &BoundValue::overflow)
        .def_readonly("value", &BoundValue::value)
        .def("__repr__", [](const BoundValue& b) { return b.to_string(); });

    m.def("esa_bound", &esa_bound, py::arg("eps"), py::arg("gamma"),
          py::arg("action_count"));
    m.def("vadp_bound", &vadp_bound, py::arg("eps"), py::arg("gamma"),
          py::arg("action_count"));
    m.def("bin_bound_full", &bin_bound_full, py::arg("eps"), py::arg("gamma"),
          py::arg("action_count"));
    m.def("bin_bound_simplified", &bin_bound_simplified, py::arg("eps"),
          py::arg("gamma"), py::arg("action_count"), py::arg("large_d_threshold") = 7);

    py::class_<BinarizedEnvironment>(m, "BinarizedEnvironment")
        .def_readonly("env", &BinarizedEnvironment::env)
        .def_readonly("bits_per_action", &BinarizedEnvironment::bits_per_action)
        .def_readonly("lambda_", &BinarizedEnvironment::lambda)
        .def_readonly("inner_action_count", &BinarizedEnvironment::inner_action_count);

    m.def("binarize", &binarize, py::arg("env"), py::arg("gamma"));
    m.def("expand_history", &expand_history, py::arg("bin"), py::arg("inner"));

    py::class_<PipelineReport>(m, "PipelineReport")
        .def_readonly("env_name", &PipelineReport::env_name)
        .def_readonly("gamma", &PipelineReport::gamma)
        .def_readonly("eps", &PipelineReport::eps)
        .def_readonly("bits_per_action", &PipelineReport::bits_per_action)
        .def_readonly("surrogate_action_count", &PipelineReport::surrogate_action_count)
        .def_readonly("realized_states", &PipelineReport::realized_states)
        .def_readonly("state_bound", &PipelineReport::state_bound)
        .def_readonly("worst_sup_gap", &PipelineReport::worst_sup_gap)
        .def_readonly("gap_bound", &PipelineReport::gap_bound)
        .def_readonly("passed", &PipelineReport::passed);

    m.def("run_binarized_pipeline",
          [](const Environment& env, double gamma, double eps, int depth,
             std::uint64_t seed) {
              return run_binarized_pipeline(env, gamma, eps, depth,
                                            {DispersionKind::kUniform,
                                             DispersionKind::kDiracShortest,
                                             DispersionKind::kRandomSimplex},
                                            seed);
          },
          py::arg("env"), py::arg("gamma"), py::arg("eps"), py::arg("depth"),
          py::arg("seed") = 1);

    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("check_name", &CheckReport::check_name)
        .def_readonly("instances", &CheckReport::instances)
        .def_readonly("worst_margin", &CheckReport::worst_margin)
        .def_readonly("witness", &CheckReport::witness)
        .def_readonly("passed", &CheckReport::passed);

    py::class_<CertifyOptions>(m, "CertifyOptions")
        .def(py::init<>())
        .def_readwrite("depth", &CertifyOptions::depth)
        .def_readwrite("kind", &CertifyOptions::kind)
        .def_readwrite("include_rollout", &CertifyOptions::include_rollout)
        .def_readwrite("simplex_seeds", &CertifyOptions::simplex_seeds)
        .def_readwrite("seed", &CertifyOptions::seed)
        .def_readwrite("dirac_exhaustive_cap", &CertifyOptions::dirac_exhaustive_cap)
        .def_readwrite("dirac_samples", &CertifyOptions::dirac_samples)
        .def_readwrite("adversarial_budget", &CertifyOptions::adversarial_budget);

    m.def("certify", &certify, py::arg("env"), py::arg("gamma"), py::arg("eps"),
          py::arg("options") = CertifyOptions{});

    py::class_<RunOutcome>(m, "RunOutcome")
        .def_readonly("realized_states", &RunOutcome::realized_states)
        .def_readonly("state_bound", &RunOutcome::state_bound)
        .def_readonly("eps0", &RunOutcome::eps0)
        .def_readonly("lemma1_dev", &RunOutcome::lemma1_dev)
        .def_readonly("lemma2_dev", &RunOutcome::lemma2_dev)
        .def_readonly("delta", &RunOutcome::delta)
        .def_readonly("lemma4_ok", &RunOutcome::lemma4_ok)
        .def_readonly("sup_gap", &RunOutcome::sup_gap)
        .def_readonly("states", &RunOutcome::states)
        .def_readonly("member_counts", &RunOutcome::member_counts)
        .def_readonly("v_min", &RunOutcome::v_min)
        .def_readonly("v_max", &RunOutcome::v_max);

    m.def("run_pipeline", &run_pipeline, py::arg("env"), py::arg("gamma"),
          py::arg("eps"), py::arg("depth"), py::arg("kind"), py::arg("b_kind"),
          py::arg("seed"));
}
