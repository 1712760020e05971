#include "vadp/abstraction.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "vadp/bounds.hpp"

namespace vadp {

std::string to_string(AbstractionKind kind) {
    switch (kind) {
        case AbstractionKind::kVadp: return "vadp";
        case AbstractionKind::kVdp: return "vdp";
        case AbstractionKind::kEsaQGrid: return "esa_qgrid";
        case AbstractionKind::kMdpLastPercept: return "mdp_last_percept";
    }
    return "?";
}

AbstractionKind abstraction_kind_from_string(const std::string& name) {
    if (name == "vadp") return AbstractionKind::kVadp;
    if (name == "vdp") return AbstractionKind::kVdp;
    if (name == "esa_qgrid") return AbstractionKind::kEsaQGrid;
    if (name == "mdp_last_percept") return AbstractionKind::kMdpLastPercept;
    throw std::invalid_argument("unknown abstraction kind '" + name + "'");
}

std::string StateLabel::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case AbstractionKind::kVadp: {
            out << '(' << value_bin << "|a" << opt_action << "|{";
            bool first = true;
            for (int a = 0; a < 32; ++a)
                if (near_opt & (ActionSet{1} << a)) {
                    if (!first) out << ' ';
                    out << 'a' << a;
                    first = false;
                }
            out << "})";
            break;
        }
        case AbstractionKind::kVdp:
            out << '(' << value_bin << "|a" << opt_action << ')';
            break;
        case AbstractionKind::kEsaQGrid: {
            out << '(';
            for (std::size_t i = 0; i < q_bins.size(); ++i) {
                if (i > 0) out << '|';
                out << q_bins[i];
            }
            out << ')';
            break;
        }
        case AbstractionKind::kMdpLastPercept:
            out << "(e" << last_percept << ')';
            break;
    }
    return out.str();
}

namespace {

void check_params(const AbstractionParams& params, AbstractionKind expected) {
    if (params.kind != expected)
        throw std::invalid_argument("abstraction params kind mismatch");
    if (!(params.eps > 0.0)) throw std::invalid_argument("abstraction: eps must be > 0");
    if (params.gamma < 0.0 || params.gamma >= 1.0)
        throw std::invalid_argument("abstraction: gamma must be in [0,1)");
}

}  // namespace

Abstraction build_vadp(const LatentOracle& oracle, AbstractionParams params) {
    check_params(params, AbstractionKind::kVadp);
    const double bin_width = params.eps0();
    const double eps_prime = params.eps;
    Abstraction abs;
    abs.params = params;
    abs.classify = [oracle, bin_width, eps_prime](const History& h) {
        StateLabel label;
        label.kind = AbstractionKind::kVadp;
        label.value_bin = ceil_guard(static_cast<long double>(oracle.v(h)) / bin_width);
        label.opt_action = oracle.opt_action(h);
        label.near_opt = oracle.near_optimal_set(h, eps_prime);
        return label;
    };
    return abs;
}

Abstraction build_vdp(const LatentOracle& oracle, AbstractionParams params) {
    check_params(params, AbstractionKind::kVdp);
    const double bin_width = params.eps0();
    Abstraction abs;
    abs.params = params;
    abs.classify = [oracle, bin_width](const History& h) {
        StateLabel label;
        label.kind = AbstractionKind::kVdp;
        label.value_bin = ceil_guard(static_cast<long double>(oracle.v(h)) / bin_width);
        label.opt_action = oracle.opt_action(h);
        return label;
    };
    return abs;
}

Abstraction build_esa_qgrid(const LatentOracle& oracle, AbstractionParams params) {
    check_params(params, AbstractionKind::kEsaQGrid);
    // grid width that makes the realized-state count respect the ESA bound
    const double width = params.eps * (1.0 - params.gamma) / 2.0;
    const int action_count = oracle.env().action_count;
    Abstraction abs;
    abs.params = params;
    abs.classify = [oracle, width, action_count](const History& h) {
        StateLabel label;
        label.kind = AbstractionKind::kEsaQGrid;
        label.q_bins.resize(action_count);
        for (int a = 0; a < action_count; ++a)
            label.q_bins[a] = ceil_guard(static_cast<long double>(oracle.q(h, a)) / width);
        return label;
    };
    return abs;
}

Abstraction build_mdp_abstraction(const Environment& env) {
    Abstraction abs;
    abs.params.kind = AbstractionKind::kMdpLastPercept;
    abs.params.eps = 1.0;
    abs.classify = [](const History& h) {
        StateLabel label;
        label.kind = AbstractionKind::kMdpLastPercept;
        label.last_percept = h.last_percept();
        return label;
    };
    (void)env;
    return abs;
}

std::vector<StateLabel> enumerate_states(const Abstraction& abstraction,
                                         const Environment& env, int depth) {
    std::vector<StateLabel> labels;
    for (const History& h : enumerate_histories(env, depth))
        labels.push_back(abstraction.classify(h));
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

}  // namespace vadp
